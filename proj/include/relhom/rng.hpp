#pragma once

#include <cstdint>

#include "relhom/module.hpp"

namespace relhom {

// Deterministic generator (splitmix64) so that fixed seeds give identical
// reports across platforms and standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    int64_t below(int64_t n) { return n <= 1 ? 0 : static_cast<int64_t>(next() % static_cast<uint64_t>(n)); }

    bool chance(int percent) { return below(100) < percent; }

    Elem elem(const Ring& ring, int64_t int_bound = 10);
    ExactMatrix matrix(const Ring& ring, int rows, int cols, int64_t int_bound = 10);
    // A random finitely presented module; always finite (relations are padded
    // with a diagonal block over infinite rings).
    FPModule module(const Ring& ring, int max_gens = 3, int max_rels = 3);
    // A random well-defined morphism, drawn through the hom module.
    ModMorphism morphism(const FPModule& m, const FPModule& n);
    ModMorphism morphism(const HomModule& hom);

private:
    uint64_t state_;
};

} // namespace relhom

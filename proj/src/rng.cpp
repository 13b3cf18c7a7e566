#include "relhom/rng.hpp"

namespace relhom {

Elem Rng::elem(const Ring& ring, int64_t int_bound) {
    switch (ring.kind()) {
        case RingKind::Integers:
            return ring.from_int(below(2 * int_bound + 1) - int_bound);
        case RingKind::IntegersMod:
        case RingKind::PrimeField:
            return ring.from_int(below(ring.modulus()));
        case RingKind::PolyOverPrime: {
            Elem e;
            int d = static_cast<int>(below(3));
            e.c.assign(d + 1, 0);
            for (int i = 0; i <= d; ++i) e.c[i] = below(ring.characteristic_prime());
            return ring.canon(std::move(e));
        }
        case RingKind::QuotientPoly: {
            Elem e;
            int d = fppoly::deg(ring.poly_modulus());
            e.c.assign(d, 0);
            for (int i = 0; i < d; ++i) e.c[i] = below(ring.characteristic_prime());
            return ring.canon(std::move(e));
        }
        case RingKind::Product: {
            Elem e;
            for (const auto& f : ring.factors()) e.parts.push_back(elem(f, int_bound));
            return e;
        }
    }
    return ring.zero();
}

ExactMatrix Rng::matrix(const Ring& ring, int rows, int cols, int64_t int_bound) {
    ExactMatrix m(ring, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i, j, elem(ring, int_bound));
    return m;
}

FPModule Rng::module(const Ring& ring, int max_gens, int max_rels) {
    int g = static_cast<int>(below(max_gens + 1));
    int k = static_cast<int>(below(max_rels + 1));
    ExactMatrix rels = matrix(ring, g, k, 6);
    if (!ring.is_finite()) {
        // Pad with a diagonal block so the module stays finite.
        ExactMatrix diag(ring, g, g);
        for (int i = 0; i < g; ++i) diag.set(i, i, ring.from_int(2 + below(6)));
        rels = hstack(rels, diag);
    }
    return FPModule(ring, g, rels);
}

ModMorphism Rng::morphism(const FPModule& m, const FPModule& n) {
    return morphism(HomModule(m, n));
}

ModMorphism Rng::morphism(const HomModule& hom) {
    const auto& h = hom.module();
    ExactMatrix coords(h.ring(), h.generators(), 1);
    for (int i = 0; i < h.generators(); ++i) coords.set(i, 0, elem(h.ring(), 4));
    return hom.decode(h.reduce(coords));
}

} // namespace relhom

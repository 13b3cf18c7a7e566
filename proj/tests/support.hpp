#pragma once

// Shared generators for the property suites: random complexes are sums of
// discs and concentrated modules conjugated by degreewise shear
// automorphisms, so differentials are genuinely mixed while d d = 0 holds by
// construction.  Random chain maps are built from null homotopies (d s + s d
// is always a chain map) and structural maps.

#include "relhom/complex.hpp"
#include "relhom/rng.hpp"

namespace relhom::testsupport {

inline ChainComplex random_complex(Rng& rng, const Ring& ring, int lo, int hi,
                                   int max_pieces = 3) {
    std::vector<ChainComplex> pieces;
    int count = 1 + static_cast<int>(rng.below(max_pieces));
    for (int p = 0; p < count; ++p) {
        int k = lo + 1 + static_cast<int>(rng.below(hi - lo));
        auto m = rng.module(ring, 2, 2);
        if (m.generators() == 0) m = FPModule::cyclic(ring, ring.from_int(2));
        if (rng.chance(50))
            pieces.push_back(disc(k, m));
        else
            pieces.push_back(concentrated(m, k));
    }
    ChainComplex x = biproduct_complexes(ring, pieces).total;
    // Shear by random degreewise automorphisms: d' = phi d phi^{-1}.
    for (int round = 0; round < 2; ++round) {
        std::map<int, ModMorphism> phi, phi_inv;
        for (int i = x.lo(); i <= x.hi(); ++i) {
            auto m = x.module_at(i);
            auto u = rng.morphism(m, m);
            // id + u may not invert; retry with scaled attempts, fall back to id.
            ModMorphism cand = ModMorphism::identity(m).add(u);
            auto inv = inverse_of(cand);
            if (!inv) {
                cand = ModMorphism::identity(m);
                inv = cand;
            }
            phi.emplace(i, cand);
            phi_inv.emplace(i, *inv);
        }
        ChainComplex y(ring, x.lo(), x.hi());
        for (int i = x.lo(); i <= x.hi(); ++i) y.set_module(i, x.module_at(i));
        for (int i = x.lo() + 1; i <= x.hi(); ++i)
            y.set_differential(
                i, compose(phi.at(i - 1), compose(x.differential(i), phi_inv.at(i))));
        if (x.bounded_above_at()) y.set_bounded_above(*x.bounded_above_at());
        x = std::move(y);
    }
    x.check_valid();
    return x;
}

// Null-homotopic chain map d s + s d for random degreewise s.
inline ChainMap random_chain_map(Rng& rng, const ChainComplex& x, const ChainComplex& y) {
    ChainMap f(x, y);
    std::map<int, ModMorphism> s;
    int lo = std::min(x.lo(), y.lo()) - 1;
    int hi = std::max(x.hi(), y.hi());
    for (int i = lo; i <= hi; ++i) s.emplace(i, rng.morphism(x.module_at(i), y.module_at(i + 1)));
    for (int i = lo + 1; i <= hi; ++i)
        f.set_component(i, compose(y.differential(i + 1), s.at(i))
                               .add(compose(s.at(i - 1), x.differential(i))));
    f.check_valid();
    return f;
}

// A self-map homotopic to the identity (identity + null homotopy).
inline ChainMap random_homotopy_equivalence(Rng& rng, const ChainComplex& x) {
    auto f = random_chain_map(rng, x, x);
    return ChainMap::identity(x).add(f);
}

} // namespace relhom::testsupport

#include "relhom/localalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace relhom {

namespace {

ExactMatrix gens_as_matrix(const Ring& ring, const std::vector<Elem>& gens) {
    ExactMatrix m(ring, 1, static_cast<int>(gens.size()));
    for (size_t j = 0; j < gens.size(); ++j) m.set(0, static_cast<int>(j), gens[j]);
    return m;
}

// Stable set of ideal elements, used for dedup and subset tests.
std::set<std::string> element_fingerprint(const Ideal& ideal) {
    std::set<std::string> out;
    RelationLattice lat(ideal.ring, gens_as_matrix(ideal.ring, ideal.gens));
    for (const auto& r : ideal.ring.all_elements()) {
        ExactMatrix x(ideal.ring, 1, 1);
        x.set(0, 0, r);
        if (lat.contains(x)) out.insert(ideal.ring.show(r));
    }
    return out;
}

} // namespace

FPModule Ideal::quotient() const {
    return FPModule(ring, 1, gens_as_matrix(ring, gens));
}

bool Ideal::contains(const Elem& x) const {
    ExactMatrix target(ring, 1, 1);
    target.set(0, 0, x);
    return RelationLattice(ring, gens_as_matrix(ring, gens)).contains(target);
}

bool Ideal::subset_of(const Ideal& other) const {
    for (const auto& g : gens)
        if (!other.contains(g)) return false;
    return true;
}

bool Ideal::is_proper() const { return !contains(ring.one()); }

std::string Ideal::show() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < gens.size(); ++i) os << (i ? "," : "") << ring.show(gens[i]);
    os << ")";
    return os.str();
}

std::vector<Ideal> all_ideals(const Ring& ring) {
    if (!ring.is_finite()) throw Error("ideal enumeration needs a finite ring");
    std::map<std::string, Ideal> seen;
    auto key = [](const std::set<std::string>& fp) {
        std::string k;
        for (const auto& s : fp) k += s + ";";
        return k;
    };
    std::vector<Ideal> frontier;
    for (const auto& x : ring.all_elements()) {
        Ideal id{ring, {x}};
        auto k = key(element_fingerprint(id));
        if (seen.emplace(k, id).second) frontier.push_back(id);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Ideal> current;
        for (const auto& [k, id] : seen) current.push_back(id);
        for (size_t a = 0; a < current.size(); ++a)
            for (size_t b = a + 1; b < current.size(); ++b) {
                Ideal sum{ring, current[a].gens};
                sum.gens.insert(sum.gens.end(), current[b].gens.begin(), current[b].gens.end());
                auto k = key(element_fingerprint(sum));
                if (seen.emplace(k, sum).second) grew = true;
            }
    }
    std::vector<Ideal> out;
    for (const auto& [k, id] : seen) out.push_back(id);
    return out;
}

std::optional<PrimeIdeal> certify_prime(const Ideal& ideal) {
    FPModule q = ideal.quotient();
    if (q.is_zero_module()) return std::nullopt;
    auto elements = q.elements();
    // Finite quotient ring: a prime ideal makes it a domain, hence a field.
    for (const auto& a : elements) {
        if (a.is_zero()) continue;
        for (const auto& b : elements) {
            if (b.is_zero()) continue;
            Elem prod = ideal.ring.mul(a.at(0, 0), b.at(0, 0));
            ExactMatrix p(ideal.ring, 1, 1);
            p.set(0, 0, prod);
            if (q.reduce(p).is_zero()) return std::nullopt;
        }
    }
    return PrimeIdeal{ideal, static_cast<int64_t>(elements.size())};
}

std::vector<PrimeIdeal> prime_spectrum(const Ring& ring) {
    std::vector<PrimeIdeal> out;
    for (const auto& ideal : all_ideals(ring))
        if (auto p = certify_prime(ideal)) out.push_back(*p);
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
        return a.ideal.show() < b.ideal.show();
    });
    return out;
}

namespace {

// Submodule generated by the given columns, with its inclusion.
SubmoduleResult span_submodule(const FPModule& m, const ExactMatrix& columns) {
    ExactMatrix gens = columns;
    // Reuse the kernel presentation: relations among the columns mod m.
    ExactMatrix rel_sols = nullspace(hstack(gens, m.relations()));
    FPModule sub(m.ring(), gens.cols(), rel_sols.rows_range(0, gens.cols()));
    return {sub, ModMorphism(sub, m, gens, false)};
}

} // namespace

SubmoduleResult gamma_torsion(const FPModule& m, const Ideal& p) {
    const Ring& ring = m.ring();
    if (!ring.is_finite()) throw Error("gamma_torsion needs a finite ring");
    if (p.gens.empty()) return {m, ModMorphism::identity(m)};
    // Ascending chain S_{t+1} = {x : g_i x in S_t for all i}, stabilized.
    ExactMatrix span(ring, m.generators(), 0); // generators of S_t inside M
    int64_t last_card = -1;
    while (true) {
        // Quotient by S_t.
        FPModule quo(ring, m.generators(), hstack(span, m.relations()));
        // Kernel of M -> quo^{#gens}, x -> (g_i x).
        ExactMatrix stacked(ring, m.generators() * static_cast<int>(p.gens.size()),
                            m.generators());
        for (size_t i = 0; i < p.gens.size(); ++i)
            for (int r = 0; r < m.generators(); ++r)
                stacked.set(static_cast<int>(i) * m.generators() + r, r, p.gens[i]);
        std::vector<FPModule> copies(p.gens.size(), quo);
        FPModule target = biproduct(ring, copies).module;
        ModMorphism step(m, target, stacked, false);
        auto ker = kernel(step);
        int64_t card = ker.module.cardinality();
        if (card == last_card) return {ker.module, ker.inclusion};
        last_card = card;
        span = ker.inclusion.matrix();
    }
}

QuotientResult localize_at_element(const FPModule& m, const Elem& x) {
    const Ring& ring = m.ring();
    if (!ring.is_finite()) throw Error("localization needs a finite ring");
    // Stable kernel of multiplication by x.
    Elem power = ring.canon(x);
    ExactMatrix killers(ring, m.generators(), 0);
    int64_t last = -1;
    for (int t = 1; t <= 64; ++t) {
        ModMorphism mult(m, m, ExactMatrix::scalar(ring, m.generators(), power), false);
        auto ker = kernel(mult);
        int64_t card = ker.module.cardinality();
        killers = ker.inclusion.matrix();
        if (card == last) break;
        last = card;
        power = ring.mul(power, x);
    }
    FPModule quo(ring, m.generators(), hstack(killers, m.relations()));
    ModMorphism proj(m, quo, ExactMatrix::identity(ring, m.generators()), false);
    return {quo, proj};
}

QuotientResult localize_at_prime(const FPModule& m, const PrimeIdeal& p) {
    const Ring& ring = m.ring();
    ExactMatrix killed(ring, m.generators(), 0);
    for (const auto& s : ring.all_elements()) {
        if (p.ideal.contains(s)) continue;
        ModMorphism mult(m, m, ExactMatrix::scalar(ring, m.generators(), s), false);
        killed = hstack(killed, kernel(mult).inclusion.matrix());
    }
    FPModule quo(ring, m.generators(), hstack(killed, m.relations()));
    ModMorphism proj(m, quo, ExactMatrix::identity(ring, m.generators()), false);
    return {quo, proj};
}

FPModule cech_local_cohomology(const FPModule& m, const std::vector<Elem>& xs, int degree) {
    const int r = static_cast<int>(xs.size());
    if (degree < 0 || degree > r) return FPModule::zero(m.ring());
    const Ring& ring = m.ring();
    // Terms indexed by subsets; localization at the product of the subset.
    std::vector<std::vector<int>> subsets_by_size(r + 1);
    std::vector<FPModule> loc(1 << r, FPModule::zero(ring));
    for (int mask = 0; mask < (1 << r); ++mask) {
        subsets_by_size[__builtin_popcount(mask)].push_back(mask);
        Elem prod = ring.one();
        for (int i = 0; i < r; ++i)
            if (mask & (1 << i)) prod = ring.mul(prod, xs[i]);
        loc[mask] = localize_at_element(m, prod).module;
    }
    auto term = [&](int k) {
        std::vector<FPModule> parts;
        for (int mask : subsets_by_size[k]) parts.push_back(loc[mask]);
        return biproduct(ring, parts);
    };
    auto sign_of = [&](int mask, int i) {
        int below = 0;
        for (int j = 0; j < i; ++j)
            if (mask & (1 << j)) ++below;
        return below % 2 == 0 ? 1 : -1;
    };
    auto differential = [&](int k) {
        // C^k -> C^{k+1}; all localization maps are the identity on
        // generators (every term is a quotient of M with M's generators).
        auto src = term(k);
        auto dst = term(k + 1);
        ExactMatrix d(ring, dst.module.generators(), src.module.generators());
        for (size_t a = 0; a < subsets_by_size[k].size(); ++a) {
            int mask = subsets_by_size[k][a];
            for (int i = 0; i < r; ++i) {
                if (mask & (1 << i)) continue;
                int bigger = mask | (1 << i);
                size_t b = std::find(subsets_by_size[k + 1].begin(), subsets_by_size[k + 1].end(),
                                     bigger) -
                           subsets_by_size[k + 1].begin();
                Elem s = ring.from_int(sign_of(mask, i));
                ExactMatrix block = ExactMatrix::scalar(ring, m.generators(), s);
                ModMorphism piece(src.module, dst.module,
                                  compose(dst.injections[b],
                                          ModMorphism(loc[mask], loc[bigger], block, false))
                                      .matrix()
                                      .mul(src.projections[a].matrix()),
                                  false);
                d = d.add(piece.matrix());
            }
        }
        return ModMorphism(src.module, dst.module, d, false);
    };
    KernelResult ker;
    if (degree == r) {
        auto top = term(r);
        ker = {top.module, ModMorphism::identity(top.module)};
    } else {
        ker = kernel(differential(degree));
    }
    if (degree == 0) {
        // H^0 = ker(C^0 -> C^1) with no incoming boundary.
        return ker.module;
    }
    ModMorphism in = differential(degree - 1);
    auto lifted = lift_through_inclusion(ker, in);
    return cokernel(lifted).module;
}

bool is_injective_module(const FPModule& w) {
    const Ring& ring = w.ring();
    FPModule free1 = FPModule::free(ring, 1);
    for (const auto& ideal : all_ideals(ring)) {
        // J as a submodule of R with its inclusion.
        ExactMatrix cols = gens_as_matrix(ring, ideal.gens);
        auto sub = span_submodule(free1, cols);
        HomModule hom_r(free1, w);
        HomModule hom_j(sub.module, w);
        auto restriction = hom_precompose(hom_r, hom_j, sub.inclusion);
        if (!is_epi(restriction)) return false;
    }
    return true;
}

bool is_essential_embedding(const ModMorphism& e) {
    const FPModule& big = e.dst();
    const Ring& ring = e.ring();
    // Image fingerprint.
    std::set<std::string> image;
    for (const auto& x : e.src().elements()) image.insert(e.apply(x).show());
    for (const auto& w : big.elements()) {
        if (big.reduce(w).is_zero()) continue;
        bool meets = false;
        for (const auto& r : ring.all_elements()) {
            auto rw = big.reduce(w.scale(r));
            if (rw.is_zero()) continue;
            if (image.count(rw.show())) {
                meets = true;
                break;
            }
        }
        if (!meets) return false;
    }
    return true;
}

namespace {

std::vector<Elem> primitive_idempotents(const Ring& ring) {
    std::vector<Elem> idem;
    for (const auto& e : ring.all_elements())
        if (!ring.is_zero(e) && ring.mul(e, e) == e) idem.push_back(e);
    std::vector<Elem> prim;
    for (const auto& e : idem) {
        bool primitive = true;
        for (const auto& f : idem) {
            if (f == e) continue;
            if (ring.mul(e, f) == f) {
                primitive = false; // f is a smaller idempotent inside eR
                break;
            }
        }
        if (primitive) prim.push_back(e);
    }
    return prim;
}

FPModule principal_module(const Ring& ring, const Elem& e) {
    // Re as a cyclic module: annihilator relations of e.
    ExactMatrix mat(ring, 1, 1);
    mat.set(0, 0, e);
    return FPModule(ring, 1, nullspace(mat));
}

} // namespace

HullResult injective_hull(const Ring& ring, const PrimeIdeal& p) {
    if (!ring.is_finite()) throw Error("injective hulls computed over finite rings only");
    FPModule residue = p.ideal.quotient();
    // Exactly one primitive idempotent avoids a prime ideal.
    for (const auto& e : primitive_idempotents(ring)) {
        if (p.ideal.contains(e)) continue;
        FPModule cand = principal_module(ring, e);
        // Locate a copy of R/p inside: an element with annihilator exactly p.
        std::set<std::string> pfp;
        for (const auto& r : ring.all_elements())
            if (p.ideal.contains(r)) pfp.insert(ring.show(r));
        for (const auto& w : cand.elements()) {
            std::set<std::string> ann;
            for (const auto& r : annihilator_of_element(cand, w)) ann.insert(ring.show(r));
            if (ann != pfp) continue;
            ModMorphism emb(residue, cand, w, false);
            if (!is_mono(emb)) continue;
            if (!is_essential_embedding(emb)) continue;
            if (!is_injective_module(cand))
                throw ResourceError("hull candidate failed Baer certification");
            return {cand, emb};
        }
    }
    throw ResourceError("injective hull search exhausted for " + p.ideal.show());
}

HullResult injective_hull_of_quotient(const Ring& ring, const Ideal& ideal) {
    FPModule m = ideal.quotient();
    if (m.is_zero_module())
        return {m, ModMorphism::identity(m)};
    // Embed into the product of prime hulls with hom-generator multiplicity,
    // then greedily drop summands while the map stays injective.
    std::vector<FPModule> summands;
    std::vector<ModMorphism> legs;
    for (const auto& p : prime_spectrum(ring)) {
        auto hull = injective_hull(ring, p);
        HomModule hom(m, hull.hull);
        for (int k = 0; k < hom.module().generators(); ++k) {
            summands.push_back(hull.hull);
            legs.push_back(hom.generator_morphism(k));
        }
    }
    std::vector<bool> keep(summands.size(), true);
    auto assemble = [&]() {
        std::vector<FPModule> mods;
        std::vector<ModMorphism> ls;
        for (size_t i = 0; i < summands.size(); ++i)
            if (keep[i]) {
                mods.push_back(summands[i]);
                ls.push_back(legs[i]);
            }
        auto bp = biproduct(ring, mods);
        ExactMatrix mat(ring, bp.module.generators(), m.generators());
        for (size_t i = 0; i < ls.size(); ++i)
            mat = mat.add(bp.injections[i].matrix().mul(ls[i].matrix()));
        return std::make_pair(bp.module, ModMorphism(m, bp.module, mat, false));
    };
    auto current = assemble();
    if (!is_mono(current.second))
        throw ResourceError("hull embedding for " + ideal.show() + " not injective");
    for (size_t i = summands.size(); i-- > 0;) {
        keep[i] = false;
        auto trial = assemble();
        if (is_mono(trial.second))
            current = trial;
        else
            keep[i] = true;
    }
    if (!is_essential_embedding(current.second))
        throw ResourceError("hull of " + ideal.show() + " failed essentiality check");
    return {current.first, current.second};
}

} // namespace relhom

#pragma once

#include <map>
#include <optional>

#include "relhom/injective.hpp"

namespace relhom {

// A homologically graded chain complex over a degree window [lo, hi].
// exact_below/exact_above record whether the complex is genuinely zero
// outside the stored window or merely a window view of a larger complex;
// predicates never extrapolate past a non-exact edge.
class ChainComplex {
public:
    ChainComplex() = default;
    ChainComplex(Ring ring, int lo, int hi);

    const Ring& ring() const { return ring_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool exact_below() const { return exact_below_; }
    bool exact_above() const { return exact_above_; }
    void set_exact_below(bool v) { exact_below_ = v; }
    void set_exact_above(bool v) { exact_above_ = v; }
    std::optional<int> bounded_above_at() const { return bounded_above_; }
    void set_bounded_above(int n);

    // Module in degree i; zero outside the window when the matching exact
    // flag holds, WindowError otherwise.
    FPModule module_at(int i) const;
    // d_i : X_i -> X_{i-1}; zero map outside the stored range when resolvable.
    ModMorphism differential(int i) const;
    void set_module(int i, FPModule m);
    void set_differential(int i, ModMorphism d);

    bool degree_known(int i) const;
    bool is_zero() const;
    // d o d = 0 and boundedness marks; throws on violation.
    void check_valid() const;

    std::string describe() const;

private:
    Ring ring_;
    int lo_ = 0, hi_ = -1;
    bool exact_below_ = true, exact_above_ = true;
    std::optional<int> bounded_above_;
    std::map<int, FPModule> modules_;
    std::map<int, ModMorphism> diffs_; // d_i keyed by i
};

class ChainMap {
public:
    ChainMap() = default;
    ChainMap(ChainComplex src, ChainComplex dst);
    static ChainMap identity(const ChainComplex& x);
    static ChainMap zero_map(ChainComplex src, ChainComplex dst);

    const ChainComplex& src() const { return src_; }
    const ChainComplex& dst() const { return dst_; }
    ModMorphism component(int i) const;
    void set_component(int i, ModMorphism f);

    ChainMap add(const ChainMap& o) const;
    ChainMap sub(const ChainMap& o) const;
    bool is_zero_on(int lo, int hi) const;
    // Commutation with differentials wherever both sides are known.
    void check_valid() const;

private:
    ChainComplex src_, dst_;
    std::map<int, ModMorphism> comps_;
};

ChainMap compose(const ChainMap& g, const ChainMap& f);
bool equal_on(const ChainMap& a, const ChainMap& b, int lo, int hi);

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

// M concentrated in degree k.
ChainComplex concentrated(const FPModule& m, int k);
// The disc D_k(M): M in degrees k and k-1 with identity differential.
ChainComplex disc(int k, const FPModule& m);
// Degree shift by one with negated differentials.
ChainComplex suspension(const ChainComplex& x);
// Degreewise biproduct.
struct ComplexBiproduct {
    ChainComplex total;
    std::vector<ChainMap> injections, projections;
};
ComplexBiproduct biproduct_complexes(const Ring& ring, const std::vector<ChainComplex>& parts);

struct ConeResult {
    ChainComplex cone;
    ChainMap inclusion; // X -> CX
};
// The cone CX of a bounded-above complex, acyclic with split inclusion in
// degrees below the top.
ConeResult cone_of_complex(const ChainComplex& x);
// Mapping cone of a chain map: Cone(f)_i = X_{i-1} + Y_i.
ChainComplex cone_of_map(const ChainMap& f);

struct CylinderResult {
    ChainComplex cylinder;
    ChainMap j;  // N -> Cyl(f), a trivial I-cofibration for every class
    ChainMap q;  // Cyl(f) -> M, degreewise split epi
    ChainMap r;  // Cyl(f) -> N, chain retraction of j
};
CylinderResult cylinder(const ChainMap& f); // f : N -> M

struct PathObjectResult {
    ChainComplex path;
    ChainMap into;  // X -> P(X), the constant path
    ChainMap ends;  // P(X) -> X + X
};
PathObjectResult path_object(const ChainComplex& x);

struct TruncationResult {
    ChainComplex truncated; // in Ch<=n
    ChainMap map;           // t_n : X -> tau_n X
};
TruncationResult truncate(const ChainComplex& x, int n);

// Degreewise pushout with induced differentials.
struct ComplexPushout {
    ChainComplex total;
    ChainMap from_b, from_c;
    std::map<int, PushoutResult> parts;
};
ComplexPushout pushout_complexes(const ChainMap& f, const ChainMap& g); // f: A->B, g: A->C
// Mediator out of a complex pushout for a commuting cone (u: B->T, v: C->T).
ChainMap pushout_mediator_complex(const ComplexPushout& po, const ChainMap& u, const ChainMap& v);
struct ComplexPullback {
    ChainComplex total;
    ChainMap to_b, to_c;
};
ComplexPullback pullback_complexes(const ChainMap& f, const ChainMap& g); // f: B->A, g: C->A

// ---------------------------------------------------------------------------
// Invariants and predicates
// ---------------------------------------------------------------------------

// Degrees where homology is computable from the stored window.
bool homology_defined(const ChainComplex& x, int i);
FPModule homology(const ChainComplex& x, int i);
// Induced map on homology in degree i.
ModMorphism homology_map(const ChainMap& f, int i);

// The complex of abelian groups A(X, W): degree n holds Hom(X_{-n}, W).
struct HomCochain {
    ChainComplex complex;
    std::map<int, HomModule> dicts; // n -> Hom(X_{-n}, W)
};
HomCochain hom_cochain(const ChainComplex& x, const FPModule& w);
// Contravariant induced map A(Y,W) -> A(X,W) for f : X -> Y.
ChainMap hom_cochain_map(const HomCochain& of_dst, const HomCochain& of_src, const ChainMap& f);

// The verdict of a window-limited predicate: pass/fail over the degrees the
// window allowed us to check, with the verified floor recorded.
struct WindowedVerdict {
    bool pass = true;
    int verified_lo = 0;    // lowest chain degree actually checked
    bool complete = true;   // no requested degree was out of reach
    std::string note;
    explicit operator bool() const { return pass; }
};

// X is k-I-connected: A(X,W) has trivial cohomology in degrees >= -k,
// equivalently coker(d_{i+1}) -> X_{i-1} is an I-monomorphism for i <= k.
WindowedVerdict is_k_I_connected(const ChainComplex& x, int k, const InjectiveClass& cls);

// f is a k-I-weak equivalence (cone route, cross-checked against the
// hom-cochain route for generator-backed classes).
WindowedVerdict is_k_I_we(const ChainMap& f, int k, const InjectiveClass& cls);
// I-weak equivalence over every degree the window supports.
WindowedVerdict is_I_we(const ChainMap& f, const InjectiveClass& cls);

// I-trivial complex; both strategies, cross-checked.
WindowedVerdict is_I_trivial(const ChainComplex& x, const InjectiveClass& cls);

// Homotopy witness s with f - g = d s + s d, found by one joint linear
// solve across the window (degreewise from the top).
std::optional<std::map<int, ModMorphism>> homotopic(const ChainMap& f, const ChainMap& g);

// Annihilator criterion for E(Lambda)-weak equivalences over a saturated
// ideal list: no annihilator of a (co)kernel element of H_n(f) may fall
// inside a listed ideal.
WindowedVerdict we_criterion_annihilator(const ChainMap& f, const std::vector<Ideal>& ideals);

} // namespace relhom

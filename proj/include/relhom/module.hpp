#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relhom/matrix.hpp"

namespace relhom {

// Global resource limits; overridable from the CLI / environment.
struct Caps {
    int max_generators = 64;
    int64_t max_enumeration = 300000;
};
Caps& caps();

// A finitely presented module R^g / <columns of relations>.
class FPModule {
public:
    FPModule() = default;
    FPModule(Ring ring, int generators, ExactMatrix relations);
    static FPModule zero(const Ring& ring);
    static FPModule free(const Ring& ring, int n);
    static FPModule cyclic(const Ring& ring, const Elem& d); // R/(d)

    const Ring& ring() const { return ring_; }
    int generators() const { return gens_; }
    const ExactMatrix& relations() const { return rels_; }
    const RelationLattice& lattice() const { return lattice_; }

    bool is_zero_module() const;
    bool finite() const { return lattice_.finite_cosets(); }
    int64_t cardinality() const { return lattice_.coset_count(); }
    std::vector<ExactMatrix> elements() const; // canonical column vectors
    ExactMatrix reduce(const ExactMatrix& x) const { return lattice_.reduce(x); }

    RelationLattice::Invariants invariants() const { return lattice_.invariants(); }
    std::string describe() const; // e.g. "Z/2 + Z/4", "0", "Z^2 + Z/3"

private:
    Ring ring_;
    int gens_ = 0;
    ExactMatrix rels_;
    RelationLattice lattice_;
};

bool isomorphic(const FPModule& a, const FPModule& b);

// A morphism of finitely presented modules, given by its action on
// generators.  The matrix is kept column-reduced against the target
// relations, so equality of morphisms is matrix equality.
class ModMorphism {
public:
    ModMorphism() = default;
    ModMorphism(FPModule src, FPModule dst, const ExactMatrix& mat, bool check = true);
    static ModMorphism identity(const FPModule& m);
    static ModMorphism zero_map(FPModule src, FPModule dst);

    const FPModule& src() const { return src_; }
    const FPModule& dst() const { return dst_; }
    const ExactMatrix& matrix() const { return mat_; }
    const Ring& ring() const { return src_.ring(); }

    bool is_zero() const { return mat_.is_zero(); }
    ExactMatrix apply(const ExactMatrix& element) const;
    ModMorphism add(const ModMorphism& o) const;
    ModMorphism sub(const ModMorphism& o) const;
    ModMorphism neg() const;
    ModMorphism scale(const Elem& s) const;
    bool operator==(const ModMorphism& o) const;

private:
    FPModule src_, dst_;
    ExactMatrix mat_;
};

// g after f (usual composition g o f).
ModMorphism compose(const ModMorphism& g, const ModMorphism& f);

struct KernelResult {
    FPModule module;
    ModMorphism inclusion; // module -> src(f)
};
KernelResult kernel(const ModMorphism& f);

struct CokernelResult {
    FPModule module;
    ModMorphism projection; // dst(f) -> module
};
CokernelResult cokernel(const ModMorphism& f);

struct ImageResult {
    FPModule module;
    ModMorphism inclusion;   // module -> dst(f)
    ModMorphism projection;  // src(f) -> module  (coimage presentation)
};
ImageResult image(const ModMorphism& f);

struct BiproductResult {
    FPModule module;
    std::vector<ModMorphism> injections;
    std::vector<ModMorphism> projections;
};
BiproductResult biproduct(const Ring& ring, const std::vector<FPModule>& summands);

// Hom_R(M, N) realized as a finitely presented module together with the
// dictionary between its elements and actual morphisms.
class HomModule {
public:
    HomModule() = default;
    HomModule(const FPModule& m, const FPModule& n);

    const FPModule& module() const { return hom_; }
    const FPModule& source() const { return m_; }
    const FPModule& target() const { return n_; }

    ModMorphism decode(const ExactMatrix& coords) const;
    ExactMatrix encode(const ModMorphism& f) const;
    // decode of the k-th generator of the hom module.
    ModMorphism generator_morphism(int k) const;

private:
    FPModule m_, n_, power_, hom_;
    ExactMatrix basis_; // (gN*gM) x gens(hom): vec'd matrices
    friend ModMorphism hom_precompose(const HomModule& from, const HomModule& to,
                                      const ModMorphism& f);
    friend ModMorphism hom_postcompose(const HomModule& from, const HomModule& to,
                                       const ModMorphism& g);
};

// Hom(M,N) -> Hom(M',N), phi |-> phi o f   for f : M' -> M.
ModMorphism hom_precompose(const HomModule& from, const HomModule& to, const ModMorphism& f);
// Hom(M,N) -> Hom(M,N'), phi |-> g o phi   for g : N -> N'.
ModMorphism hom_postcompose(const HomModule& from, const HomModule& to, const ModMorphism& g);

struct PushoutResult {
    FPModule module;
    ModMorphism from_b, from_c; // B -> P, C -> P
};
PushoutResult pushout(const ModMorphism& f, const ModMorphism& g); // f: A->B, g: A->C
ModMorphism pushout_mediator(const PushoutResult& po, const ModMorphism& u,
                             const ModMorphism& v); // u: B->T, v: C->T with u f = v g

struct PullbackResult {
    FPModule module;
    ModMorphism to_b, to_c; // P -> B, P -> C
};
PullbackResult pullback(const ModMorphism& f, const ModMorphism& g); // f: B->A, g: C->A
ModMorphism pullback_mediator(const PullbackResult& pb, const ModMorphism& u,
                              const ModMorphism& v); // u: T->B, v: T->C with f u = g v

bool is_mono(const ModMorphism& f);
bool is_epi(const ModMorphism& f);
// Section s with f o s = id on dst(f); nullopt when f is not a split epi.
std::optional<ModMorphism> section_of(const ModMorphism& f);
// Retraction r with r o f = id on src(f); nullopt when f is not a split mono.
std::optional<ModMorphism> retraction_of(const ModMorphism& f);
// Two-sided inverse; nullopt when f is not an isomorphism.
std::optional<ModMorphism> inverse_of(const ModMorphism& f);

// Factors g through the kernel inclusion: given g: T -> M with f o g = 0,
// returns h: T -> K with incl o h = g.
ModMorphism lift_through_inclusion(const KernelResult& ker, const ModMorphism& g);
// Factors g through the cokernel projection: given g: N -> T with g o f = 0,
// returns h: coker -> T with h o proj = g.
ModMorphism drop_through_projection(const CokernelResult& coker, const ModMorphism& g);

// All ring multiples r with r*x = 0 in M (finite rings).
std::vector<Elem> annihilator_of_element(const FPModule& m, const ExactMatrix& x);

} // namespace relhom

#pragma once

#include "relhom/complex.hpp"

namespace relhom {

// The top degree a map lives under (its Ch<=n bound), from the complexes'
// marks or window tops.
int chain_bound(const ChainComplex& x);
int chain_bound(const ChainMap& f);

// I-monomorphism in every degree strictly below the Ch<=n top.  (The top
// degree carries no condition; see Lemma "cone" and the lifting proofs —
// requiring it would make the (cofibration, trivial fibration) factorization
// of M -> 0 unsolvable.)
bool is_cofibration(const ChainMap& f, const InjectiveClass& cls);

struct FibrationWitness {
    bool pass = false;
    int failed_degree = 0;
    std::string reason;
    std::map<int, ModMorphism> sections;       // degreewise sections of f
    std::map<int, KernelResult> kernels;       // degreewise kernels
    explicit operator bool() const { return pass; }
};
// Degreewise split epi with kernels in the class, witnesses cached.
FibrationWitness is_fibration(const ChainMap& f, const InjectiveClass& cls);

bool is_fibrant(const ChainComplex& x, const InjectiveClass& cls);

// Kernel of a chain map, degreewise, with induced differentials.
struct ComplexKernel {
    ChainComplex total;
    ChainMap inclusion;
};
ComplexKernel kernel_complex(const ChainMap& f);
struct ComplexCokernel {
    ChainComplex total;
    ChainMap projection;
};
ComplexCokernel cokernel_complex(const ChainMap& f);

// Degreewise envelope of a complex (Lemma "reschains"): a chain map m: X -> I
// with every I_i a class member, m_i an I-monomorphism, and I_i = 0 where
// X_i = 0.
struct ReschainsResult {
    ChainComplex envelope;
    ChainMap map;
};
ReschainsResult reschains_envelope(const ChainComplex& x, const InjectiveClass& cls);

// Fibrant replacement via the column-by-column double complex and its
// truncated totalization.  The result is exact in degrees >= verified_lo
// (a window view below that, unless the resolution terminated early).
struct FibrantReplacement {
    ChainComplex rx;
    ChainMap j;           // X -> RX, a trivial I-cofibration in the window
    int columns = 0;      // depth used
    int verified_lo = 0;  // degrees where RX equals the true totalization
    bool terminated = false;
};
FibrantReplacement fibrant_replacement(const ChainComplex& x, const InjectiveClass& cls,
                                       int depth);

struct FactorizationResult {
    ChainComplex mid;
    ChainMap first, second;
    std::string mode; // "cof-trivfib" or "trivcof-fib"
    // Certification: predicate outcomes at construction time.
    bool first_ok = false, second_ok = false;
    WindowedVerdict first_we, second_we; // whichever side carries the we
    FibrationWitness second_fibration;
};
// f = (cofibration) then (acyclic fibration).
FactorizationResult factor_cof_trivfib(const ChainMap& f, const InjectiveClass& cls, int depth);
// f = (acyclic cofibration) then (fibration).
FactorizationResult factor_trivcof_fib(const ChainMap& f, const InjectiveClass& cls, int depth);

struct LiftingProblem {
    ChainMap i;      // A -> B
    ChainMap p;      // E -> C
    ChainMap top;    // A -> E
    ChainMap bottom; // B -> C
};
enum class LiftMode { CofVsTrivFib, TrivCofVsFib };
// A solution h: B -> E with h o i = top and p o h = bottom; the mode states
// which side carries the weak equivalence.  Preconditions are re-certified
// and violations reported with the failing degree.
ChainMap solve_lifting(const LiftingProblem& prob, LiftMode mode, const InjectiveClass& cls);

struct DiscDecomposition {
    std::vector<std::pair<int, FPModule>> summands; // (degree, member W)
    ChainMap iso;     // X -> sum of discs
    ChainMap iso_inv; // verified two-sided inverse
};
// Writes a fibrant I-trivial complex as a sum of discs D_i(W_i) with an
// explicit checked isomorphism.
DiscDecomposition decompose_trivial_fibrant(const ChainComplex& x, const InjectiveClass& cls);

// Splitting of an acyclic fibration (Lemma "caractrivfib"): a chain
// retraction E -> K of the kernel inclusion, giving E = B + K.
struct TrivFibSplitting {
    ComplexKernel kernel;
    DiscDecomposition discs;
    ChainMap retraction;  // E -> K
    ChainMap iso;         // E -> B + K
    ChainMap iso_inv;
    ComplexBiproduct sum; // B + K
};
TrivFibSplitting split_acyclic_fibration(const ChainMap& p, const InjectiveClass& cls);

} // namespace relhom

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relhom/localalg.hpp"

namespace relhom {

// A surjective ring map S -> R presented as a quotient by an ideal of S,
// with an explicit set-level section used to lift presentations.  Covers
// identities, Z/n -> Z/m, F_p[t]/(f) -> F_p[t]/(g) and projections of
// product rings onto sub-products.
class RingMap {
public:
    static RingMap identity(const Ring& r);
    // S -> S/J presented by the kernel ideal generators and the target ring.
    static RingMap quotient(const Ring& src, const Ring& dst, std::vector<Elem> kernel_gens);
    // Projection of a product ring onto one factor.
    static RingMap projection(const Ring& product, int factor);

    const Ring& src() const { return src_; }
    const Ring& dst() const { return dst_; }
    const std::vector<Elem>& kernel_gens() const { return kernel_; }

    Elem push(const Elem& x) const; // ring homomorphism S -> R
    Elem lift(const Elem& y) const; // set-level section R -> S

    // Restriction of scalars along the map (an R-module as an S-module).
    FPModule restrict_module(const FPModule& m) const;
    ModMorphism restrict_morphism(const ModMorphism& f) const;
    // Extension of scalars R tensor_S - (right exact; M/JM).
    FPModule extend_module(const FPModule& m) const;
    ModMorphism extend_morphism(const ModMorphism& f) const;
    // Unit M -> restrict(extend(M)); identity on generators.
    ModMorphism unit(const FPModule& m) const;

private:
    enum class Kind { Identity, QuotientInt, QuotientPolyMap, Projection };
    Kind kind_ = Kind::Identity;
    Ring src_, dst_;
    std::vector<Elem> kernel_;
    int factor_ = 0;
};

// An injective class: a finite generator set with "retracts of products"
// semantics, the all-objects class, or a class induced from the all-objects
// class along a ring map (where the split-after-extension criterion is the
// workable test).
class InjectiveClass {
public:
    enum class Kind { Generators, AllObjects, InducedAllObjects };

    static InjectiveClass from_generators(Ring ring, std::vector<FPModule> generators,
                                          std::string label);
    static InjectiveClass all_objects(Ring ring);
    static InjectiveClass from_primes(const Ring& ring, const std::vector<PrimeIdeal>& primes,
                                      std::string label = "");
    static InjectiveClass from_ideals(const Ring& ring, const std::vector<Ideal>& ideals,
                                      std::string label = "");
    static InjectiveClass induced_along(const RingMap& map, const InjectiveClass& cls);

    Kind kind() const { return kind_; }
    const Ring& ring() const { return ring_; }
    const std::vector<FPModule>& generators() const { return generators_; }
    const std::string& label() const { return label_; }
    bool degenerate() const { return kind_ == Kind::Generators && generators_.empty(); }
    const std::string& warning() const { return warning_; }
    const RingMap& map() const { return map_; }

private:
    Kind kind_ = Kind::Generators;
    Ring ring_;
    std::vector<FPModule> generators_;
    std::string label_;
    std::string warning_;
    RingMap map_;
};

// Hom(target, W) -> Hom(source, W) surjective for every generator W.
bool is_I_mono(const ModMorphism& f, const InjectiveClass& cls);

struct EnvelopeResult {
    FPModule target;
    ModMorphism map; // M -> target, an I-monomorphism by construction
};
EnvelopeResult evaluation_envelope(const FPModule& m, const InjectiveClass& cls);

// Membership = the evaluation envelope splits.
bool is_member(const FPModule& m, const InjectiveClass& cls);

// Extension along an I-monomorphism: h_ext with h_ext o mono = h, for
// h: A -> W with W a class member.  Nullopt signals a violated precondition.
std::optional<ModMorphism> extend_along_imono(const ModMorphism& mono, const ModMorphism& h);

} // namespace relhom

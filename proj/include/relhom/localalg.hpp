#pragma once

#include <optional>
#include <vector>

#include "relhom/module.hpp"

namespace relhom {

// An ideal of the coefficient ring, given by generators.
struct Ideal {
    Ring ring;
    std::vector<Elem> gens;

    FPModule quotient() const;                  // R/I as a module
    bool contains(const Elem& x) const;
    bool subset_of(const Ideal& other) const;
    bool is_proper() const;
    std::string show() const;
};

// A prime ideal with its primality certificate (the quotient is a finite
// field; over the supported finite rings primes are maximal).
struct PrimeIdeal {
    Ideal ideal;
    int64_t residue_field_order = 0;
};

// All ideals of a finite ring: cyclic ideals closed under sums.
std::vector<Ideal> all_ideals(const Ring& ring);
// Certified prime spectrum of a finite ring, deterministically ordered.
std::vector<PrimeIdeal> prime_spectrum(const Ring& ring);
std::optional<PrimeIdeal> certify_prime(const Ideal& ideal);

struct SubmoduleResult {
    FPModule module;
    ModMorphism inclusion;
};
struct QuotientResult {
    FPModule module;
    ModMorphism projection;
};

// p-torsion submodule {m : p^t m = 0 for some t}  (Gamma_p).
SubmoduleResult gamma_torsion(const FPModule& m, const Ideal& p);

// Localization of a finite module at one element: quotient by the stable
// x-power annihilator; x acts invertibly on the result.
QuotientResult localize_at_element(const FPModule& m, const Elem& x);

// Localization at a prime: quotient by {m : s m = 0 for some s outside p}.
QuotientResult localize_at_prime(const FPModule& m, const PrimeIdeal& p);

// H^j of the Cech complex of (x_1..x_r) tensored with M; zero for j > r.
FPModule cech_local_cohomology(const FPModule& m, const std::vector<Elem>& xs, int degree);

struct HullResult {
    FPModule hull;
    ModMorphism embedding;   // R/p -> hull, essential
};
// Injective hull E(R/p) over a finite ring, located among the direct
// summands Re of the ring and certified by Baer's criterion plus an
// essentiality enumeration.
HullResult injective_hull(const Ring& ring, const PrimeIdeal& p);

// Injective hull of an arbitrary cyclic quotient R/I: embed into a product
// of indecomposable hulls and greedily drop removable summands.
HullResult injective_hull_of_quotient(const Ring& ring, const Ideal& ideal);

// Baer's criterion over the enumerated ideal lattice.
bool is_injective_module(const FPModule& w);
// Every nonzero element of dst has a multiple landing nonzero in the image.
bool is_essential_embedding(const ModMorphism& e);

} // namespace relhom

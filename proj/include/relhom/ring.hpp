#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relhom/error.hpp"

namespace relhom {

enum class RingKind {
    Integers,     // Z
    IntegersMod,  // Z/n, n >= 2
    PrimeField,   // F_p = Z/p with p certified prime
    PolyOverPrime,// F_p[t]  (Euclidean cover for quotient-poly rings)
    QuotientPoly, // F_p[t]/(f), f monic of degree >= 1
    Product,      // finite product of rings
};

// A ring element.  The active representation depends on the ring kind:
// integer kinds use `n`, polynomial kinds use `c` (coefficients, low degree
// first, reduced mod p and trimmed), product rings use `parts`.  Rings keep
// every element canonical, so representation equality is ring equality.
struct Elem {
    int64_t n = 0;
    std::vector<int64_t> c;
    std::vector<Elem> parts;

    bool operator==(const Elem&) const = default;
    bool operator<(const Elem& o) const;
};

// Immutable description of a computable coefficient ring.  Value type with a
// shared payload; cheap to copy and safe to use concurrently.
class Ring {
public:
    Ring() = default;

    static Ring integers();
    static Ring integers_mod(int64_t n);
    static Ring prime_field(int64_t p);
    static Ring poly_over_prime(int64_t p);
    static Ring quotient_poly(int64_t p, std::vector<int64_t> f);
    static Ring product(std::vector<Ring> factors);

    bool valid() const { return d_ != nullptr; }
    RingKind kind() const;
    int64_t modulus() const;                      // n (IntegersMod) or p (PrimeField)
    int64_t characteristic_prime() const;         // p for the polynomial kinds
    const std::vector<int64_t>& poly_modulus() const;
    const std::vector<Ring>& factors() const;

    bool is_finite() const;
    int64_t order() const;                        // throws on infinite rings
    bool same_as(const Ring& other) const;
    std::string name() const;

    Elem zero() const { return from_int(0); }
    Elem one() const { return from_int(1); }
    Elem from_int(int64_t v) const;
    Elem canon(Elem e) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    bool is_zero(const Elem& a) const;
    bool is_one(const Elem& a) const;
    bool is_unit(const Elem& a) const;
    std::optional<Elem> inverse(const Elem& a) const;
    Elem pow(const Elem& a, int64_t k) const;

    // All elements of a finite ring, in a fixed deterministic order.
    std::vector<Elem> all_elements() const;

    std::string show(const Elem& a) const;
    // Parses "7", "-2", "t^2+2t+1", "2t+1", or for products "(a|b|...)".
    Elem parse(const std::string& text) const;

    // Euclidean cover used by the matrix kernel.  Integer-based rings lift to
    // Z with the modulus adjoined as extra relations; polynomial quotients
    // lift to F_p[t].  Not defined for products (handled componentwise).
    struct CoverInfo {
        bool poly = false;          // false: Z cover, true: F_p[t] cover
        int64_t p = 0;              // characteristic for poly covers
        std::optional<Elem> modulus;// n, p or f; empty for Z and F_p[t]
    };
    CoverInfo cover() const;

private:
    struct Data;
    std::shared_ptr<const Data> d_;
    explicit Ring(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
};

bool is_prime_int(int64_t p);

// Dense polynomial helpers over F_p; coefficients low degree first, trimmed.
namespace fppoly {
std::vector<int64_t> trim(std::vector<int64_t> a);
std::vector<int64_t> canon(std::vector<int64_t> a, int64_t p);
int deg(const std::vector<int64_t>& a); // deg(0) = -1
std::vector<int64_t> add(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p);
std::vector<int64_t> sub(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p);
std::vector<int64_t> mul(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p);
// Division with remainder; divisor must be nonzero.
void divmod(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p,
            std::vector<int64_t>& q, std::vector<int64_t>& r);
std::string show(const std::vector<int64_t>& a);
bool is_irreducible(const std::vector<int64_t>& f, int64_t p);
} // namespace fppoly

} // namespace relhom

#include "relhom/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace relhom {

bool is_prime_int(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace fppoly {

std::vector<int64_t> trim(std::vector<int64_t> a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

std::vector<int64_t> canon(std::vector<int64_t> a, int64_t p) {
    for (auto& x : a) {
        x %= p;
        if (x < 0) x += p;
    }
    return trim(std::move(a));
}

int deg(const std::vector<int64_t>& a) { return static_cast<int>(a.size()) - 1; }

std::vector<int64_t> add(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p) {
    std::vector<int64_t> r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return canon(std::move(r), p);
}

std::vector<int64_t> sub(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p) {
    std::vector<int64_t> r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return canon(std::move(r), p);
}

std::vector<int64_t> mul(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int64_t> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return canon(std::move(r), p);
}

static int64_t inv_mod(int64_t a, int64_t p) {
    int64_t t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    while (nr != 0) {
        int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    return ((t % p) + p) % p;
}

void divmod(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p,
            std::vector<int64_t>& q, std::vector<int64_t>& r) {
    if (b.empty()) throw Error("polynomial division by zero");
    r = a;
    q.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
    const int64_t lead_inv = inv_mod(b.back(), p);
    while (deg(r) >= deg(b)) {
        int shift = deg(r) - deg(b);
        int64_t coef = (r.back() * lead_inv) % p;
        q[shift] = (q[shift] + coef) % p;
        for (size_t i = 0; i < b.size(); ++i) {
            size_t k = i + shift;
            r[k] = ((r[k] - coef * b[i]) % p + p) % p;
        }
        r = trim(std::move(r));
    }
    q = trim(std::move(q));
}

std::string show(const std::vector<int64_t>& a) {
    if (a.empty()) return "0";
    std::string s;
    for (int i = deg(a); i >= 0; --i) {
        if (a[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || a[i] != 1) s += std::to_string(a[i]);
        if (i >= 1) s += "t";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

bool is_irreducible(const std::vector<int64_t>& f, int64_t p) {
    int d = deg(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    // Trial division by all monic polynomials of degree <= d/2; the moduli
    // here are tiny (p^k <= a few hundred), brute force is fine.
    for (int e = 1; 2 * e <= d; ++e) {
        int64_t count = 1;
        for (int i = 0; i < e; ++i) count *= p;
        for (int64_t code = 0; code < count; ++code) {
            std::vector<int64_t> g(e + 1, 0);
            int64_t c = code;
            for (int i = 0; i < e; ++i) { g[i] = c % p; c /= p; }
            g[e] = 1;
            std::vector<int64_t> q, r;
            divmod(f, g, p, q, r);
            if (r.empty()) return false;
        }
    }
    return true;
}

} // namespace fppoly

bool Elem::operator<(const Elem& o) const {
    if (n != o.n) return n < o.n;
    if (c != o.c) return c < o.c;
    return parts < o.parts;
}

struct Ring::Data {
    RingKind kind;
    int64_t n = 0;                  // modulus for IntegersMod / PrimeField
    int64_t p = 0;                  // characteristic for polynomial kinds
    std::vector<int64_t> f;         // quotient polynomial
    std::vector<Ring> factors;
};

Ring Ring::integers() {
    auto d = std::make_shared<Data>();
    d->kind = RingKind::Integers;
    return Ring(std::move(d));
}

Ring Ring::integers_mod(int64_t n) {
    if (n < 2) throw Error("Z/n requires n >= 2");
    auto d = std::make_shared<Data>();
    d->kind = RingKind::IntegersMod;
    d->n = n;
    return Ring(std::move(d));
}

Ring Ring::prime_field(int64_t p) {
    if (!is_prime_int(p)) throw Error("F_p requires p prime");
    auto d = std::make_shared<Data>();
    d->kind = RingKind::PrimeField;
    d->n = p;
    return Ring(std::move(d));
}

Ring Ring::poly_over_prime(int64_t p) {
    if (!is_prime_int(p)) throw Error("F_p[t] requires p prime");
    auto d = std::make_shared<Data>();
    d->kind = RingKind::PolyOverPrime;
    d->p = p;
    return Ring(std::move(d));
}

Ring Ring::quotient_poly(int64_t p, std::vector<int64_t> f) {
    if (!is_prime_int(p)) throw Error("F_p[t]/(f) requires p prime");
    f = fppoly::canon(std::move(f), p);
    if (fppoly::deg(f) < 1) throw Error("quotient polynomial must be nonconstant");
    if (f.back() != 1) throw Error("quotient polynomial must be monic");
    auto d = std::make_shared<Data>();
    d->kind = RingKind::QuotientPoly;
    d->p = p;
    d->f = std::move(f);
    return Ring(std::move(d));
}

Ring Ring::product(std::vector<Ring> factors) {
    if (factors.empty()) throw Error("product ring requires a nonempty factor list");
    for (const auto& r : factors)
        if (r.kind() == RingKind::Product) throw Error("nested product rings are not supported");
    auto d = std::make_shared<Data>();
    d->kind = RingKind::Product;
    d->factors = std::move(factors);
    return Ring(std::move(d));
}

RingKind Ring::kind() const { return d_->kind; }
int64_t Ring::modulus() const { return d_->n; }
int64_t Ring::characteristic_prime() const { return d_->p; }
const std::vector<int64_t>& Ring::poly_modulus() const { return d_->f; }
const std::vector<Ring>& Ring::factors() const { return d_->factors; }

bool Ring::is_finite() const {
    switch (kind()) {
        case RingKind::Integers:
        case RingKind::PolyOverPrime: return false;
        case RingKind::IntegersMod:
        case RingKind::PrimeField:
        case RingKind::QuotientPoly: return true;
        case RingKind::Product:
            return std::all_of(factors().begin(), factors().end(),
                               [](const Ring& r) { return r.is_finite(); });
    }
    return false;
}

int64_t Ring::order() const {
    switch (kind()) {
        case RingKind::IntegersMod:
        case RingKind::PrimeField: return d_->n;
        case RingKind::QuotientPoly: {
            int64_t o = 1;
            for (int i = 0; i < fppoly::deg(d_->f); ++i) o *= d_->p;
            return o;
        }
        case RingKind::Product: {
            int64_t o = 1;
            for (const auto& r : factors()) o *= r.order();
            return o;
        }
        default: throw Error("order of an infinite ring");
    }
}

bool Ring::same_as(const Ring& other) const {
    if (d_ == other.d_) return true;
    if (kind() != other.kind()) return false;
    switch (kind()) {
        case RingKind::Integers: return true;
        case RingKind::IntegersMod:
        case RingKind::PrimeField: return d_->n == other.d_->n;
        case RingKind::PolyOverPrime: return d_->p == other.d_->p;
        case RingKind::QuotientPoly: return d_->p == other.d_->p && d_->f == other.d_->f;
        case RingKind::Product: {
            if (factors().size() != other.factors().size()) return false;
            for (size_t i = 0; i < factors().size(); ++i)
                if (!factors()[i].same_as(other.factors()[i])) return false;
            return true;
        }
    }
    return false;
}

std::string Ring::name() const {
    switch (kind()) {
        case RingKind::Integers: return "Z";
        case RingKind::IntegersMod: return "Z/" + std::to_string(d_->n);
        case RingKind::PrimeField: return "F" + std::to_string(d_->n);
        case RingKind::PolyOverPrime: return "F" + std::to_string(d_->p) + "[t]";
        case RingKind::QuotientPoly:
            return "F" + std::to_string(d_->p) + "[t]/(" + fppoly::show(d_->f) + ")";
        case RingKind::Product: {
            std::string s;
            for (const auto& r : factors()) {
                if (!s.empty()) s += " x ";
                s += r.name();
            }
            return s;
        }
    }
    return "?";
}

Elem Ring::from_int(int64_t v) const {
    Elem e;
    switch (kind()) {
        case RingKind::Integers: e.n = v; break;
        case RingKind::IntegersMod:
        case RingKind::PrimeField: e.n = ((v % d_->n) + d_->n) % d_->n; break;
        case RingKind::PolyOverPrime:
        case RingKind::QuotientPoly: e.c = fppoly::canon({v}, d_->p); break;
        case RingKind::Product:
            for (const auto& r : factors()) e.parts.push_back(r.from_int(v));
            break;
    }
    return e;
}

Elem Ring::canon(Elem e) const {
    switch (kind()) {
        case RingKind::Integers: e.c.clear(); e.parts.clear(); return e;
        case RingKind::IntegersMod:
        case RingKind::PrimeField:
            e.n = ((e.n % d_->n) + d_->n) % d_->n;
            e.c.clear(); e.parts.clear();
            return e;
        case RingKind::PolyOverPrime:
            e.n = 0; e.parts.clear();
            e.c = fppoly::canon(std::move(e.c), d_->p);
            return e;
        case RingKind::QuotientPoly: {
            e.n = 0; e.parts.clear();
            e.c = fppoly::canon(std::move(e.c), d_->p);
            if (fppoly::deg(e.c) >= fppoly::deg(d_->f)) {
                std::vector<int64_t> q, r;
                fppoly::divmod(e.c, d_->f, d_->p, q, r);
                e.c = std::move(r);
            }
            return e;
        }
        case RingKind::Product: {
            e.n = 0; e.c.clear();
            if (e.parts.size() != factors().size())
                throw Error("product element has wrong arity");
            for (size_t i = 0; i < e.parts.size(); ++i)
                e.parts[i] = factors()[i].canon(std::move(e.parts[i]));
            return e;
        }
    }
    return e;
}

Elem Ring::add(const Elem& a, const Elem& b) const {
    Elem e;
    switch (kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
        case RingKind::PrimeField: e.n = a.n + b.n; return canon(std::move(e));
        case RingKind::PolyOverPrime:
        case RingKind::QuotientPoly: e.c = fppoly::add(a.c, b.c, d_->p); return canon(std::move(e));
        case RingKind::Product:
            for (size_t i = 0; i < factors().size(); ++i)
                e.parts.push_back(factors()[i].add(a.parts[i], b.parts[i]));
            return e;
    }
    return e;
}

Elem Ring::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem Ring::neg(const Elem& a) const {
    Elem e;
    switch (kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
        case RingKind::PrimeField: e.n = -a.n; return canon(std::move(e));
        case RingKind::PolyOverPrime:
        case RingKind::QuotientPoly: {
            e.c = a.c;
            for (auto& x : e.c) x = -x;
            return canon(std::move(e));
        }
        case RingKind::Product:
            for (size_t i = 0; i < factors().size(); ++i)
                e.parts.push_back(factors()[i].neg(a.parts[i]));
            return e;
    }
    return e;
}

Elem Ring::mul(const Elem& a, const Elem& b) const {
    Elem e;
    switch (kind()) {
        case RingKind::Integers: {
            if (a.n != 0 && b.n != 0) {
                int64_t r;
                if (__builtin_mul_overflow(a.n, b.n, &r)) throw OverflowSignal{};
                e.n = r;
            }
            return e;
        }
        case RingKind::IntegersMod:
        case RingKind::PrimeField: e.n = a.n * b.n; return canon(std::move(e));
        case RingKind::PolyOverPrime:
        case RingKind::QuotientPoly: e.c = fppoly::mul(a.c, b.c, d_->p); return canon(std::move(e));
        case RingKind::Product:
            for (size_t i = 0; i < factors().size(); ++i)
                e.parts.push_back(factors()[i].mul(a.parts[i], b.parts[i]));
            return e;
    }
    return e;
}

bool Ring::is_zero(const Elem& a) const {
    if (kind() == RingKind::Product) {
        for (size_t i = 0; i < factors().size(); ++i)
            if (!factors()[i].is_zero(a.parts[i])) return false;
        return true;
    }
    return a.n == 0 && a.c.empty();
}

bool Ring::is_one(const Elem& a) const { return a == one(); }

bool Ring::is_unit(const Elem& a) const { return inverse(a).has_value(); }

std::optional<Elem> Ring::inverse(const Elem& a) const {
    switch (kind()) {
        case RingKind::Integers:
            if (a.n == 1 || a.n == -1) return a;
            return std::nullopt;
        case RingKind::IntegersMod:
        case RingKind::PrimeField: {
            int64_t g0 = d_->n, g1 = a.n % d_->n, x0 = 0, x1 = 1;
            while (g1 != 0) {
                int64_t q = g0 / g1;
                std::swap(g0 -= q * g1, g1);
                std::swap(x0 -= q * x1, x1);
            }
            if (g0 != 1 && g0 != -1) return std::nullopt;
            return from_int(g0 == 1 ? x0 : -x0);
        }
        case RingKind::PolyOverPrime: {
            if (fppoly::deg(a.c) != 0) return std::nullopt;
            Elem e;
            e.c = {fppoly::canon({1}, d_->p)[0]};
            int64_t t = 0, nt = 1, r = d_->p, nr = a.c[0];
            while (nr != 0) {
                int64_t q = r / nr;
                std::swap(t -= q * nt, nt);
                std::swap(r -= q * nr, nr);
            }
            if (r != 1) return std::nullopt;
            e.c = fppoly::canon({t}, d_->p);
            return e;
        }
        case RingKind::QuotientPoly: {
            // Extended Euclid in F_p[t] against the modulus.
            std::vector<int64_t> r0 = d_->f, r1 = a.c, s0 = {}, s1 = {1};
            while (!r1.empty()) {
                std::vector<int64_t> q, rem;
                fppoly::divmod(r0, r1, d_->p, q, rem);
                auto s2 = fppoly::sub(s0, fppoly::mul(q, s1, d_->p), d_->p);
                r0 = std::move(r1); r1 = std::move(rem);
                s0 = std::move(s1); s1 = std::move(s2);
            }
            if (fppoly::deg(r0) != 0) return std::nullopt;
            int64_t lead_inv = 1;
            {
                int64_t t = 0, nt = 1, r = d_->p, nr = r0[0];
                while (nr != 0) {
                    int64_t q = r / nr;
                    std::swap(t -= q * nt, nt);
                    std::swap(r -= q * nr, nr);
                }
                lead_inv = ((t % d_->p) + d_->p) % d_->p;
            }
            Elem e;
            e.c = fppoly::mul(s0, {lead_inv}, d_->p);
            return canon(std::move(e));
        }
        case RingKind::Product: {
            Elem e;
            for (size_t i = 0; i < factors().size(); ++i) {
                auto inv = factors()[i].inverse(a.parts[i]);
                if (!inv) return std::nullopt;
                e.parts.push_back(std::move(*inv));
            }
            return e;
        }
    }
    return std::nullopt;
}

Elem Ring::pow(const Elem& a, int64_t k) const {
    Elem r = one(), b = a;
    while (k > 0) {
        if (k & 1) r = mul(r, b);
        b = mul(b, b);
        k >>= 1;
    }
    return r;
}

std::vector<Elem> Ring::all_elements() const {
    if (!is_finite()) throw Error("cannot enumerate an infinite ring");
    std::vector<Elem> out;
    switch (kind()) {
        case RingKind::IntegersMod:
        case RingKind::PrimeField:
            for (int64_t v = 0; v < d_->n; ++v) out.push_back(from_int(v));
            break;
        case RingKind::QuotientPoly: {
            int d = fppoly::deg(d_->f);
            int64_t count = order();
            for (int64_t code = 0; code < count; ++code) {
                Elem e;
                int64_t c = code;
                e.c.assign(d, 0);
                for (int i = 0; i < d; ++i) { e.c[i] = c % d_->p; c /= d_->p; }
                e.c = fppoly::trim(std::move(e.c));
                out.push_back(std::move(e));
            }
            break;
        }
        case RingKind::Product: {
            std::vector<std::vector<Elem>> comp;
            for (const auto& r : factors()) comp.push_back(r.all_elements());
            std::vector<Elem> acc = {Elem{}};
            for (auto& list : comp) {
                std::vector<Elem> next;
                for (const auto& prefix : acc)
                    for (const auto& x : list) {
                        Elem e = prefix;
                        e.parts.push_back(x);
                        next.push_back(std::move(e));
                    }
                acc = std::move(next);
            }
            return acc;
        }
        default: break;
    }
    return out;
}

std::string Ring::show(const Elem& a) const {
    switch (kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
        case RingKind::PrimeField: return std::to_string(a.n);
        case RingKind::PolyOverPrime:
        case RingKind::QuotientPoly: return fppoly::show(a.c);
        case RingKind::Product: {
            std::string s = "(";
            for (size_t i = 0; i < a.parts.size(); ++i) {
                if (i) s += "|";
                s += factors()[i].show(a.parts[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

namespace {

// Parses a polynomial expression over F_p: sums of terms c, t, c*t^k, ct^k.
std::vector<int64_t> parse_poly(const std::string& text, int64_t p) {
    std::vector<int64_t> poly;
    size_t i = 0;
    auto bump = [&](int degree, int64_t coef) {
        if (degree >= static_cast<int>(poly.size())) poly.resize(degree + 1, 0);
        poly[degree] += coef;
    };
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) { ++i; continue; }
        int64_t sign = 1;
        while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') sign = -sign;
            ++i;
        }
        int64_t coef = 1;
        bool saw_digits = false;
        int64_t value = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            value = value * 10 + (text[i] - '0');
            saw_digits = true;
            ++i;
        }
        if (saw_digits) coef = value;
        if (i < text.size() && text[i] == '*') ++i;
        int degree = 0;
        if (i < text.size() && text[i] == 't') {
            ++i;
            degree = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                int64_t e = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    e = e * 10 + (text[i] - '0');
                    ++i;
                }
                degree = static_cast<int>(e);
            }
        } else if (!saw_digits) {
            throw Error("cannot parse polynomial: " + text);
        }
        bump(degree, sign * coef);
    }
    return fppoly::canon(std::move(poly), p);
}

} // namespace

Elem Ring::parse(const std::string& text) const {
    switch (kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod:
        case RingKind::PrimeField: {
            size_t pos = 0;
            int64_t v = std::stoll(text, &pos);
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos != text.size()) throw Error("cannot parse ring element: " + text);
            return from_int(v);
        }
        case RingKind::PolyOverPrime:
        case RingKind::QuotientPoly: {
            Elem e;
            e.c = parse_poly(text, d_->p);
            return canon(std::move(e));
        }
        case RingKind::Product: {
            std::string s = text;
            if (s.size() < 2 || s.front() != '(' || s.back() != ')')
                throw Error("product element must look like (a|b): " + text);
            s = s.substr(1, s.size() - 2);
            std::vector<std::string> pieces;
            std::string cur;
            for (char ch : s) {
                if (ch == '|') { pieces.push_back(cur); cur.clear(); }
                else cur += ch;
            }
            pieces.push_back(cur);
            if (pieces.size() != factors().size())
                throw Error("product element has wrong arity: " + text);
            Elem e;
            for (size_t i = 0; i < pieces.size(); ++i)
                e.parts.push_back(factors()[i].parse(pieces[i]));
            return e;
        }
    }
    throw Error("cannot parse ring element: " + text);
}

Ring::CoverInfo Ring::cover() const {
    CoverInfo info;
    switch (kind()) {
        case RingKind::Integers: return info;
        case RingKind::IntegersMod:
        case RingKind::PrimeField: {
            Elem m;
            m.n = d_->n;
            info.modulus = m;
            return info;
        }
        case RingKind::PolyOverPrime:
            info.poly = true;
            info.p = d_->p;
            return info;
        case RingKind::QuotientPoly: {
            info.poly = true;
            info.p = d_->p;
            Elem m;
            m.c = d_->f;
            info.modulus = m;
            return info;
        }
        case RingKind::Product: throw Error("product rings have no single Euclidean cover");
    }
    return info;
}

} // namespace relhom

#include "relhom/matrix.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <sstream>

namespace relhom {

ExactMatrix::ExactMatrix(Ring ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols),
      a_(static_cast<size_t>(rows) * cols, ring_.zero()) {}

ExactMatrix ExactMatrix::identity(const Ring& ring, int n) {
    ExactMatrix m(ring, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, ring.one());
    return m;
}

ExactMatrix ExactMatrix::from_rows(const Ring& ring,
                                   const std::vector<std::vector<int64_t>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    ExactMatrix m(ring, r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw ShapeError("ragged rows");
        for (int j = 0; j < c; ++j) m.set(i, j, ring.from_int(rows[i][j]));
    }
    return m;
}

ExactMatrix ExactMatrix::scalar(const Ring& ring, int n, const Elem& value) {
    ExactMatrix m(ring, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, ring.canon(value));
    return m;
}

void ExactMatrix::set(int r, int c, Elem v) {
    a_[static_cast<size_t>(r) * cols_ + c] = ring_.canon(std::move(v));
}

ExactMatrix ExactMatrix::mul(const ExactMatrix& o) const {
    if (!ring_.same_as(o.ring_)) throw RingMismatchError("matrix product");
    if (cols_ != o.rows_) throw ShapeError("matrix product");
    ExactMatrix out(ring_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Elem& x = at(i, k);
            if (ring_.is_zero(x)) continue;
            for (int j = 0; j < o.cols_; ++j) {
                if (ring_.is_zero(o.at(k, j))) continue;
                out.a_[static_cast<size_t>(i) * out.cols_ + j] =
                    ring_.add(out.at(i, j), ring_.mul(x, o.at(k, j)));
            }
        }
    for (auto& e : out.a_) e = ring_.canon(std::move(e));
    return out;
}

ExactMatrix ExactMatrix::add(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix sum");
    ExactMatrix out(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_.add(a_[i], o.a_[i]);
    return out;
}

ExactMatrix ExactMatrix::sub(const ExactMatrix& o) const { return add(o.neg()); }

ExactMatrix ExactMatrix::neg() const {
    ExactMatrix out(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_.neg(a_[i]);
    return out;
}

ExactMatrix ExactMatrix::scale(const Elem& s) const {
    ExactMatrix out(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_.mul(a_[i], s);
    return out;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix out(ring_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
    return out;
}

ExactMatrix ExactMatrix::col(int j) const { return cols_range(j, 1); }

ExactMatrix ExactMatrix::cols_range(int j0, int n) const {
    ExactMatrix out(ring_, rows_, n);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < n; ++j) out.set(i, j, at(i, j0 + j));
    return out;
}

ExactMatrix ExactMatrix::rows_range(int i0, int n) const {
    ExactMatrix out(ring_, n, cols_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < cols_; ++j) out.set(i, j, at(i0 + i, j));
    return out;
}

bool ExactMatrix::is_zero() const {
    for (const auto& e : a_)
        if (!ring_.is_zero(e)) return false;
    return true;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && ring_.same_as(o.ring_) && a_ == o.a_;
}

ExactMatrix ExactMatrix::component(int which) const {
    if (ring_.kind() != RingKind::Product) throw Error("component of a non-product matrix");
    ExactMatrix out(ring_.factors()[which], rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.set(i, j, at(i, j).parts[which]);
    return out;
}

std::string ExactMatrix::show() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << ring_.show(at(i, j));
    }
    os << "]";
    return os.str();
}

ExactMatrix hstack(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows() != b.rows()) throw ShapeError("hstack");
    ExactMatrix out(a.ring(), a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out.set(i, j, a.at(i, j));
        for (int j = 0; j < b.cols(); ++j) out.set(i, a.cols() + j, b.at(i, j));
    }
    return out;
}

ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols() != b.cols()) throw ShapeError("vstack");
    ExactMatrix out(a.ring(), a.rows() + b.rows(), a.cols());
    for (int j = 0; j < a.cols(); ++j) {
        for (int i = 0; i < a.rows(); ++i) out.set(i, j, a.at(i, j));
        for (int i = 0; i < b.rows(); ++i) out.set(a.rows() + i, j, b.at(i, j));
    }
    return out;
}

ExactMatrix assemble_components(const Ring& product_ring, const std::vector<ExactMatrix>& comps) {
    const auto& factors = product_ring.factors();
    if (comps.size() != factors.size()) throw ShapeError("assemble_components");
    ExactMatrix out(product_ring, comps[0].rows(), comps[0].cols());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) {
            Elem e;
            for (size_t c = 0; c < comps.size(); ++c) e.parts.push_back(comps[c].at(i, j));
            out.set(i, j, std::move(e));
        }
    return out;
}

// ---------------------------------------------------------------------------
// Euclidean core, generic over the scalar.  Two integer policies (checked
// int64 and cpp_int fallback) plus one for F_p[t].
// ---------------------------------------------------------------------------

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct I64Ops {
    using T = int64_t;
    T zero() const { return 0; }
    T one() const { return 1; }
    bool is_zero(const T& a) const { return a == 0; }
    T add(const T& a, const T& b) const {
        T r;
        if (__builtin_add_overflow(a, b, &r)) throw OverflowSignal{};
        return r;
    }
    T sub(const T& a, const T& b) const {
        T r;
        if (__builtin_sub_overflow(a, b, &r)) throw OverflowSignal{};
        return r;
    }
    T neg(const T& a) const { return sub(0, a); }
    T mul(const T& a, const T& b) const {
        T r;
        if (__builtin_mul_overflow(a, b, &r)) throw OverflowSignal{};
        return r;
    }
    void divmod(const T& a, const T& b, T& q, T& r) const {
        if (b == 0) throw Error("division by zero");
        if (a == std::numeric_limits<int64_t>::min() && b == -1) throw OverflowSignal{};
        q = a / b;
        r = a % b;
        if (r < 0) {
            if (b > 0) { r += b; q -= 1; }
            else { r -= b; q += 1; }
        }
    }
    bool smaller(const T& a, const T& b) const {
        uint64_t ua = a < 0 ? ~static_cast<uint64_t>(a) + 1 : static_cast<uint64_t>(a);
        uint64_t ub = b < 0 ? ~static_cast<uint64_t>(b) + 1 : static_cast<uint64_t>(b);
        return ua < ub;
    }
    bool is_unit(const T& a) const { return a == 1 || a == -1; }
    // Multiplier u with u*a in normal form (positive).
    T normalizer(const T& a) const { return a < 0 ? -1 : 1; }
    T unit_inverse(const T& u) const { return u; }
};

struct BigOps {
    using T = BigInt;
    T zero() const { return 0; }
    T one() const { return 1; }
    bool is_zero(const T& a) const { return a == 0; }
    T add(const T& a, const T& b) const { return a + b; }
    T sub(const T& a, const T& b) const { return a - b; }
    T neg(const T& a) const { return -a; }
    T mul(const T& a, const T& b) const { return a * b; }
    void divmod(const T& a, const T& b, T& q, T& r) const {
        if (b == 0) throw Error("division by zero");
        boost::multiprecision::divide_qr(a, b, q, r);
        if (r < 0) {
            if (b > 0) { r += b; q -= 1; }
            else { r -= b; q += 1; }
        }
    }
    bool smaller(const T& a, const T& b) const {
        return boost::multiprecision::abs(a) < boost::multiprecision::abs(b);
    }
    bool is_unit(const T& a) const { return a == 1 || a == -1; }
    T normalizer(const T& a) const { return a < 0 ? T(-1) : T(1); }
    T unit_inverse(const T& u) const { return u; }
};

struct PolyOps {
    using T = std::vector<int64_t>;
    int64_t p;
    T zero() const { return {}; }
    T one() const { return {1}; }
    bool is_zero(const T& a) const { return a.empty(); }
    T add(const T& a, const T& b) const { return fppoly::add(a, b, p); }
    T sub(const T& a, const T& b) const { return fppoly::sub(a, b, p); }
    T neg(const T& a) const { return fppoly::sub({}, a, p); }
    T mul(const T& a, const T& b) const { return fppoly::mul(a, b, p); }
    void divmod(const T& a, const T& b, T& q, T& r) const { fppoly::divmod(a, b, p, q, r); }
    bool smaller(const T& a, const T& b) const { return fppoly::deg(a) < fppoly::deg(b); }
    bool is_unit(const T& a) const { return fppoly::deg(a) == 0; }
    T normalizer(const T& a) const {
        // Multiplier making the polynomial monic.
        int64_t lead = a.back(), t = 0, nt = 1, r = p, nr = lead;
        while (nr != 0) {
            int64_t q = r / nr;
            std::swap(t -= q * nt, nt);
            std::swap(r -= q * nr, nr);
        }
        return fppoly::canon({t}, p);
    }
    T unit_inverse(const T& u) const { return normalizer(u); }
};

template <class T>
struct Mat {
    int r = 0, c = 0;
    std::vector<T> a;
    Mat() = default;
    Mat(int r_, int c_, const T& z) : r(r_), c(c_), a(static_cast<size_t>(r_) * c_, z) {}
    T& at(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
    const T& at(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }
};

template <class Ops>
Mat<typename Ops::T> ident(int n, const Ops& ops) {
    Mat<typename Ops::T> m(n, n, ops.zero());
    for (int i = 0; i < n; ++i) m.at(i, i) = ops.one();
    return m;
}

template <class T>
void swap_rows(Mat<T>& m, int i, int j) {
    for (int k = 0; k < m.c; ++k) std::swap(m.at(i, k), m.at(j, k));
}

template <class T>
void swap_cols(Mat<T>& m, int i, int j) {
    for (int k = 0; k < m.r; ++k) std::swap(m.at(k, i), m.at(k, j));
}

// State for an SNF run with invertible transform tracking.
template <class Ops>
struct SnfState {
    using T = typename Ops::T;
    const Ops& ops;
    Mat<T> a, u, uinv, v, vinv;

    explicit SnfState(Mat<T> m, const Ops& o)
        : ops(o), a(std::move(m)),
          u(ident(a.r, o)), uinv(ident(a.r, o)), v(ident(a.c, o)), vinv(ident(a.c, o)) {}

    void row_swap(int i, int j) {
        swap_rows(a, i, j);
        swap_rows(u, i, j);
        swap_cols(uinv, i, j);
    }
    void col_swap(int i, int j) {
        swap_cols(a, i, j);
        swap_cols(v, i, j);
        swap_rows(vinv, i, j);
    }
    // row_i -= q * row_t
    void row_axpy(int i, int t, const T& q) {
        for (int k = 0; k < a.c; ++k) a.at(i, k) = ops.sub(a.at(i, k), ops.mul(q, a.at(t, k)));
        for (int k = 0; k < u.c; ++k) u.at(i, k) = ops.sub(u.at(i, k), ops.mul(q, u.at(t, k)));
        for (int k = 0; k < uinv.r; ++k)
            uinv.at(k, t) = ops.add(uinv.at(k, t), ops.mul(q, uinv.at(k, i)));
    }
    // col_j -= q * col_t
    void col_axpy(int j, int t, const T& q) {
        for (int k = 0; k < a.r; ++k) a.at(k, j) = ops.sub(a.at(k, j), ops.mul(q, a.at(k, t)));
        for (int k = 0; k < v.r; ++k) v.at(k, j) = ops.sub(v.at(k, j), ops.mul(q, v.at(k, t)));
        for (int k = 0; k < vinv.c; ++k)
            vinv.at(t, k) = ops.add(vinv.at(t, k), ops.mul(q, vinv.at(j, k)));
    }
    // col_i += col_j
    void col_add(int i, int j) {
        for (int k = 0; k < a.r; ++k) a.at(k, i) = ops.add(a.at(k, i), a.at(k, j));
        for (int k = 0; k < v.r; ++k) v.at(k, i) = ops.add(v.at(k, i), v.at(k, j));
        for (int k = 0; k < vinv.c; ++k)
            vinv.at(j, k) = ops.sub(vinv.at(j, k), vinv.at(i, k));
    }
    void row_scale_unit(int i, const T& unit) {
        const T inv = ops.unit_inverse(unit);
        for (int k = 0; k < a.c; ++k) a.at(i, k) = ops.mul(unit, a.at(i, k));
        for (int k = 0; k < u.c; ++k) u.at(i, k) = ops.mul(unit, u.at(i, k));
        for (int k = 0; k < uinv.r; ++k) uinv.at(k, i) = ops.mul(uinv.at(k, i), inv);
    }

    // Diagonalizes the submatrix at positions >= start; returns the rank.
    int diagonalize(int start) {
        int n = std::min(a.r, a.c);
        int t = start;
        while (t < n) {
            int pi = -1, pj = -1;
            for (int i = t; i < a.r; ++i)
                for (int j = t; j < a.c; ++j)
                    if (!ops.is_zero(a.at(i, j)) &&
                        (pi < 0 || ops.smaller(a.at(i, j), a.at(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) break;
            if (pi != t) row_swap(t, pi);
            if (pj != t) col_swap(t, pj);
            bool clean = false;
            while (!clean) {
                clean = true;
                for (int i = t + 1; i < a.r; ++i) {
                    if (ops.is_zero(a.at(i, t))) continue;
                    T q, r;
                    ops.divmod(a.at(i, t), a.at(t, t), q, r);
                    row_axpy(i, t, q);
                    if (!ops.is_zero(a.at(i, t))) {
                        row_swap(t, i);
                        clean = false;
                    }
                }
                for (int j = t + 1; j < a.c; ++j) {
                    if (ops.is_zero(a.at(t, j))) continue;
                    T q, r;
                    ops.divmod(a.at(t, j), a.at(t, t), q, r);
                    col_axpy(j, t, q);
                    if (!ops.is_zero(a.at(t, j))) {
                        col_swap(t, j);
                        clean = false;
                    }
                }
            }
            ++t;
        }
        return t;
    }

    int run() {
        int rank = diagonalize(0);
        // Enforce the divisor chain d_i | d_j for i < j.
        bool stable = false;
        while (!stable) {
            stable = true;
            for (int i = 0; i + 1 < rank && stable; ++i)
                for (int j = i + 1; j < rank && stable; ++j) {
                    T q, r;
                    ops.divmod(a.at(j, j), a.at(i, i), q, r);
                    if (!ops.is_zero(r)) {
                        col_add(i, j);
                        rank = diagonalize(i);
                        stable = false;
                    }
                }
        }
        for (int i = 0; i < rank; ++i) {
            T norm = ops.normalizer(a.at(i, i));
            if (!ops.is_zero(ops.sub(norm, ops.one()))) row_scale_unit(i, norm);
        }
        return rank;
    }
};

// Column echelon form of the column lattice; no transforms.  Pivot list is
// (row, col) with strictly increasing rows, zeros above every pivot.
template <class Ops>
std::vector<std::pair<int, int>> hnf_core(Mat<typename Ops::T>& a, const Ops& ops) {
    using T = typename Ops::T;
    std::vector<std::pair<int, int>> pivots;
    int c = 0;
    for (int r = 0; r < a.r && c < a.c; ++r) {
        int best = -1;
        for (int j = c; j < a.c; ++j)
            if (!ops.is_zero(a.at(r, j)) && (best < 0 || ops.smaller(a.at(r, j), a.at(r, best))))
                best = j;
        if (best < 0) continue;
        if (best != c) swap_cols(a, c, best);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int j = c + 1; j < a.c; ++j) {
                if (ops.is_zero(a.at(r, j))) continue;
                T q, rem;
                ops.divmod(a.at(r, j), a.at(r, c), q, rem);
                for (int k = 0; k < a.r; ++k)
                    a.at(k, j) = ops.sub(a.at(k, j), ops.mul(q, a.at(k, c)));
                if (!ops.is_zero(a.at(r, j))) {
                    swap_cols(a, c, j);
                    clean = false;
                }
            }
        }
        T norm = ops.normalizer(a.at(r, c));
        if (!ops.is_zero(ops.sub(norm, ops.one())))
            for (int k = 0; k < a.r; ++k) a.at(k, c) = ops.mul(norm, a.at(k, c));
        pivots.emplace_back(r, c);
        ++c;
    }
    return pivots;
}

// ---------------------------------------------------------------------------
// Lifting between ring elements and cover scalars.
// ---------------------------------------------------------------------------

template <class T>
struct LiftTraits;

template <>
struct LiftTraits<int64_t> {
    static int64_t lift(const Elem& e) { return e.n; }
    static Elem lower(const int64_t& v) {
        Elem e;
        e.n = v;
        return e;
    }
};

template <>
struct LiftTraits<BigInt> {
    static BigInt lift(const Elem& e) { return BigInt(e.n); }
    static Elem lower(const BigInt& v) {
        if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min())
            throw ResourceError("exact integer result exceeds 64-bit range");
        Elem e;
        e.n = static_cast<int64_t>(v);
        return e;
    }
};

template <>
struct LiftTraits<std::vector<int64_t>> {
    static std::vector<int64_t> lift(const Elem& e) { return e.c; }
    static Elem lower(const std::vector<int64_t>& v) {
        Elem e;
        e.c = v;
        return e;
    }
};

// Builds [A | mu*I] over the cover when a modulus is present.
template <class Ops>
Mat<typename Ops::T> lift_augmented(const ExactMatrix& a, const Ops& ops, bool augment,
                                    const std::optional<Elem>& modulus) {
    using T = typename Ops::T;
    int extra = augment ? a.rows() : 0;
    Mat<T> m(a.rows(), a.cols() + extra, ops.zero());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m.at(i, j) = LiftTraits<T>::lift(a.at(i, j));
    if (augment) {
        T mu = LiftTraits<T>::lift(*modulus);
        for (int i = 0; i < a.rows(); ++i) m.at(i, a.cols() + i) = mu;
    }
    return m;
}

template <class Ops>
std::optional<ExactMatrix> solve_cover(const ExactMatrix& a, const ExactMatrix& b,
                                       const Ops& ops) {
    using T = typename Ops::T;
    const Ring& ring = a.ring();
    auto cover = ring.cover();
    bool augment = cover.modulus.has_value();
    SnfState<Ops> st(lift_augmented(a, ops, augment, cover.modulus), ops);
    int rank = st.run();
    Mat<T> ub(st.a.c, b.cols(), ops.zero()); // solution in z coordinates
    for (int col = 0; col < b.cols(); ++col) {
        // z = D^{-1} (U b); divisibility decides solvability.
        for (int i = 0; i < st.a.r; ++i) {
            T acc = ops.zero();
            for (int k = 0; k < st.a.r; ++k)
                acc = ops.add(acc, ops.mul(st.u.at(i, k), LiftTraits<T>::lift(b.at(k, col))));
            if (i < rank) {
                T q, r;
                ops.divmod(acc, st.a.at(i, i), q, r);
                if (!ops.is_zero(r)) return std::nullopt;
                ub.at(i, col) = q;
            } else if (!ops.is_zero(acc)) {
                return std::nullopt;
            }
        }
    }
    ExactMatrix x(ring, a.cols(), b.cols());
    for (int col = 0; col < b.cols(); ++col)
        for (int i = 0; i < a.cols(); ++i) {
            T acc = ops.zero();
            for (int k = 0; k < rank; ++k)
                acc = ops.add(acc, ops.mul(st.v.at(i, k), ub.at(k, col)));
            x.set(i, col, ring.canon(LiftTraits<T>::lower(acc)));
        }
    return x;
}

template <class Ops>
ExactMatrix nullspace_cover(const ExactMatrix& a, const Ops& ops) {
    using T = typename Ops::T;
    const Ring& ring = a.ring();
    auto cover = ring.cover();
    bool augment = cover.modulus.has_value();
    SnfState<Ops> st(lift_augmented(a, ops, augment, cover.modulus), ops);
    int rank = st.run();
    std::vector<std::vector<Elem>> cols;
    for (int j = rank; j < st.a.c; ++j) {
        std::vector<Elem> col(a.cols());
        bool nonzero = false;
        for (int i = 0; i < a.cols(); ++i) {
            col[i] = ring.canon(LiftTraits<T>::lower(st.v.at(i, j)));
            nonzero = nonzero || !ring.is_zero(col[i]);
        }
        if (nonzero) cols.push_back(std::move(col));
    }
    ExactMatrix out(ring, a.cols(), static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < a.cols(); ++i) out.set(i, static_cast<int>(j), cols[j][i]);
    return out;
}

} // namespace

SnfResult smith_normal_form(const ExactMatrix& a) {
    const Ring& ring = a.ring();
    if (ring.kind() != RingKind::Integers && ring.kind() != RingKind::PolyOverPrime)
        throw PreconditionError("Smith normal form needs a Euclidean coefficient ring");
    auto pack = [&](auto& st) {
        auto to_matrix = [&](const auto& m) {
            ExactMatrix out(ring, m.r, m.c);
            using T = std::decay_t<decltype(m.at(0, 0))>;
            for (int i = 0; i < m.r; ++i)
                for (int j = 0; j < m.c; ++j) out.set(i, j, LiftTraits<T>::lower(m.at(i, j)));
            return out;
        };
        return SnfResult{to_matrix(st.u), to_matrix(st.a), to_matrix(st.v),
                         to_matrix(st.uinv), to_matrix(st.vinv)};
    };
    if (ring.kind() == RingKind::PolyOverPrime) {
        PolyOps ops{ring.characteristic_prime()};
        SnfState<PolyOps> st(lift_augmented(a, ops, false, {}), ops);
        st.run();
        return pack(st);
    }
    try {
        I64Ops ops;
        SnfState<I64Ops> st(lift_augmented(a, ops, false, {}), ops);
        st.run();
        return pack(st);
    } catch (const OverflowSignal&) {
        BigOps ops;
        SnfState<BigOps> st(lift_augmented(a, ops, false, {}), ops);
        st.run();
        return pack(st);
    }
}

std::optional<ExactMatrix> solve_matrix_equation(const ExactMatrix& a, const ExactMatrix& b) {
    if (!a.ring().same_as(b.ring())) throw RingMismatchError("solve");
    if (a.rows() != b.rows()) throw ShapeError("solve");
    const Ring& ring = a.ring();
    if (ring.kind() == RingKind::Product) {
        std::vector<ExactMatrix> parts;
        for (size_t c = 0; c < ring.factors().size(); ++c) {
            auto xc = solve_matrix_equation(a.component(static_cast<int>(c)),
                                            b.component(static_cast<int>(c)));
            if (!xc) return std::nullopt;
            parts.push_back(std::move(*xc));
        }
        return assemble_components(ring, parts);
    }
    if (ring.cover().poly) {
        PolyOps ops{ring.characteristic_prime()};
        return solve_cover(a, b, ops);
    }
    try {
        return solve_cover(a, b, I64Ops{});
    } catch (const OverflowSignal&) {
        return solve_cover(a, b, BigOps{});
    }
}

ExactMatrix nullspace(const ExactMatrix& a) {
    const Ring& ring = a.ring();
    if (ring.kind() == RingKind::Product) {
        std::vector<ExactMatrix> sections;
        int total = 0;
        for (size_t c = 0; c < ring.factors().size(); ++c) {
            sections.push_back(nullspace(a.component(static_cast<int>(c))));
            total += sections.back().cols();
        }
        ExactMatrix out(ring, a.cols(), total);
        int at = 0;
        for (size_t c = 0; c < sections.size(); ++c) {
            for (int j = 0; j < sections[c].cols(); ++j, ++at)
                for (int i = 0; i < a.cols(); ++i) {
                    Elem e = ring.zero();
                    e.parts[c] = sections[c].at(i, j);
                    out.set(i, at, std::move(e));
                }
        }
        return out;
    }
    if (ring.cover().poly) {
        PolyOps ops{ring.characteristic_prime()};
        return nullspace_cover(a, ops);
    }
    try {
        return nullspace_cover(a, I64Ops{});
    } catch (const OverflowSignal&) {
        return nullspace_cover(a, BigOps{});
    }
}

std::optional<ExactMatrix> invert(const ExactMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("invert");
    auto x = solve_matrix_equation(a, ExactMatrix::identity(a.ring(), a.rows()));
    if (!x) return std::nullopt;
    if (!(x->mul(a) == ExactMatrix::identity(a.ring(), a.rows()))) return std::nullopt;
    return x;
}

// ---------------------------------------------------------------------------
// RelationLattice
// ---------------------------------------------------------------------------

struct RelationLattice::CoverData {
    bool poly = false;
    int64_t p = 0;
    std::vector<std::pair<int, int>> pivots;
    // Echelon basis stored over cover scalars as int64/poly; values small by
    // construction (bounded by the modulus for finite rings).
    int rows = 0, cols = 0;
    std::vector<Elem> basis; // cover-scalar payloads inside Elem
};

namespace {

template <class Ops>
void fill_cover_data(RelationLattice::CoverData& data, const ExactMatrix& rels,
                     const Ops& ops, const std::optional<Elem>& modulus) {
    using T = typename Ops::T;
    Mat<T> m = lift_augmented(rels, ops, modulus.has_value(), modulus);
    data.pivots = hnf_core(m, ops);
    int keep = static_cast<int>(data.pivots.size());
    data.rows = m.r;
    data.cols = keep;
    data.basis.assign(static_cast<size_t>(m.r) * keep, Elem{});
    for (int i = 0; i < m.r; ++i)
        for (int j = 0; j < keep; ++j)
            data.basis[static_cast<size_t>(i) * keep + j] = LiftTraits<T>::lower(m.at(i, j));
}

template <class Ops>
void reduce_column(std::vector<typename Ops::T>& x, const RelationLattice::CoverData& data,
                   const Ops& ops) {
    using T = typename Ops::T;
    for (const auto& [pr, pc] : data.pivots) {
        const T pivot = LiftTraits<T>::lift(data.basis[static_cast<size_t>(pr) * data.cols + pc]);
        T q, r;
        ops.divmod(x[pr], pivot, q, r);
        if (ops.is_zero(q)) continue;
        for (int i = 0; i < data.rows; ++i) {
            const T& b = LiftTraits<T>::lift(data.basis[static_cast<size_t>(i) * data.cols + pc]);
            x[i] = ops.sub(x[i], ops.mul(q, b));
        }
    }
}

} // namespace

RelationLattice::RelationLattice(Ring ring, const ExactMatrix& relations)
    : ring_(std::move(ring)), dim_(relations.rows()) {
    if (ring_.kind() == RingKind::Product) {
        for (size_t c = 0; c < ring_.factors().size(); ++c)
            comps_.emplace_back(ring_.factors()[c], relations.component(static_cast<int>(c)));
        return;
    }
    auto cover = ring_.cover();
    auto data = std::make_shared<CoverData>();
    data->poly = cover.poly;
    data->p = cover.p;
    if (cover.poly) {
        PolyOps ops{cover.p};
        fill_cover_data(*data, relations, ops, cover.modulus);
    } else {
        try {
            fill_cover_data(*data, relations, I64Ops{}, cover.modulus);
        } catch (const OverflowSignal&) {
            BigOps ops;
            fill_cover_data(*data, relations, ops, cover.modulus);
        }
    }
    cover_ = std::move(data);
}

ExactMatrix RelationLattice::reduce(const ExactMatrix& x) const {
    if (x.rows() != dim_) throw ShapeError("lattice reduce");
    if (ring_.kind() == RingKind::Product) {
        std::vector<ExactMatrix> parts;
        for (size_t c = 0; c < comps_.size(); ++c)
            parts.push_back(comps_[c].reduce(x.component(static_cast<int>(c))));
        return assemble_components(ring_, parts);
    }
    ExactMatrix out(ring_, x.rows(), x.cols());
    for (int col = 0; col < x.cols(); ++col) {
        if (cover_->poly) {
            PolyOps ops{cover_->p};
            std::vector<std::vector<int64_t>> v(dim_);
            for (int i = 0; i < dim_; ++i) v[i] = x.at(i, col).c;
            reduce_column(v, *cover_, ops);
            for (int i = 0; i < dim_; ++i) {
                Elem e;
                e.c = v[i];
                out.set(i, col, std::move(e));
            }
        } else {
            auto run = [&](auto ops) {
                using T = typename decltype(ops)::T;
                std::vector<T> v(dim_);
                for (int i = 0; i < dim_; ++i) v[i] = LiftTraits<T>::lift(x.at(i, col));
                reduce_column(v, *cover_, ops);
                for (int i = 0; i < dim_; ++i) out.set(i, col, LiftTraits<T>::lower(v[i]));
            };
            try {
                run(I64Ops{});
            } catch (const OverflowSignal&) {
                run(BigOps{});
            }
        }
    }
    return out;
}

bool RelationLattice::contains(const ExactMatrix& x) const { return reduce(x).is_zero(); }

bool RelationLattice::finite_cosets() const {
    if (ring_.kind() == RingKind::Product) {
        for (const auto& c : comps_)
            if (!c.finite_cosets()) return false;
        return true;
    }
    return static_cast<int>(cover_->pivots.size()) == dim_;
}

int64_t RelationLattice::coset_count() const {
    if (ring_.kind() == RingKind::Product) {
        int64_t total = 1;
        for (const auto& c : comps_) total *= c.coset_count();
        return total;
    }
    if (!finite_cosets()) throw Error("infinite coset space");
    int64_t total = 1;
    for (const auto& [pr, pc] : cover_->pivots) {
        const Elem& pivot = cover_->basis[static_cast<size_t>(pr) * cover_->cols + pc];
        if (cover_->poly) {
            int64_t q = 1;
            for (int i = 0; i < fppoly::deg(pivot.c); ++i) q *= cover_->p;
            total *= q;
        } else {
            total *= pivot.n;
        }
        if (total < 0 || total > (int64_t(1) << 40)) throw ResourceError("coset space too large");
    }
    return total;
}

std::vector<ExactMatrix> RelationLattice::enumerate(int64_t cap) const {
    int64_t count = coset_count();
    if (count > cap) throw ResourceError("enumeration of " + std::to_string(count) + " cosets");
    if (ring_.kind() == RingKind::Product) {
        std::vector<std::vector<ExactMatrix>> per;
        for (const auto& c : comps_) per.push_back(c.enumerate(cap));
        std::vector<std::vector<Elem>> cols = {std::vector<Elem>(dim_, Elem{})};
        std::vector<std::vector<Elem>> next;
        for (size_t c = 0; c < per.size(); ++c) {
            next.clear();
            for (const auto& prefix : cols)
                for (const auto& m : per[c]) {
                    auto col = prefix;
                    for (int i = 0; i < dim_; ++i) col[i].parts.push_back(m.at(i, 0));
                    next.push_back(std::move(col));
                }
            cols = std::move(next);
        }
        std::vector<ExactMatrix> out;
        for (const auto& col : cols) {
            ExactMatrix m(ring_, dim_, 1);
            for (int i = 0; i < dim_; ++i) m.set(i, 0, col[i]);
            out.push_back(std::move(m));
        }
        return out;
    }
    // Mixed-radix walk over the residues of the pivot entries.
    std::vector<std::vector<Elem>> residues;
    for (const auto& [pr, pc] : cover_->pivots) {
        const Elem& pivot = cover_->basis[static_cast<size_t>(pr) * cover_->cols + pc];
        std::vector<Elem> r;
        if (cover_->poly) {
            int d = fppoly::deg(pivot.c);
            int64_t n = 1;
            for (int i = 0; i < d; ++i) n *= cover_->p;
            for (int64_t code = 0; code < n; ++code) {
                Elem e;
                int64_t cval = code;
                e.c.assign(d, 0);
                for (int i = 0; i < d; ++i) { e.c[i] = cval % cover_->p; cval /= cover_->p; }
                e.c = fppoly::trim(std::move(e.c));
                r.push_back(std::move(e));
            }
        } else {
            for (int64_t v = 0; v < pivot.n; ++v) {
                Elem e;
                e.n = v;
                r.push_back(std::move(e));
            }
        }
        residues.push_back(std::move(r));
    }
    std::vector<ExactMatrix> out;
    std::vector<size_t> idx(residues.size(), 0);
    while (true) {
        ExactMatrix m(ring_, dim_, 1);
        for (size_t k = 0; k < residues.size(); ++k)
            m.set(cover_->pivots[k].first, 0, residues[k][idx[k]]);
        out.push_back(std::move(m));
        size_t k = 0;
        for (; k < idx.size(); ++k) {
            if (++idx[k] < residues[k].size()) break;
            idx[k] = 0;
        }
        if (k == idx.size()) break;
        if (idx.empty()) break;
    }
    return out;
}

RelationLattice::Invariants RelationLattice::invariants() const {
    Invariants inv;
    if (ring_.kind() == RingKind::Product) {
        for (size_t c = 0; c < comps_.size(); ++c) {
            auto sub = comps_[c].invariants();
            for (auto& s : sub.torsion)
                inv.torsion.push_back("c" + std::to_string(c) + ":" + s);
            if (sub.free_rank > 0)
                inv.torsion.push_back("c" + std::to_string(c) + ":free^" +
                                      std::to_string(sub.free_rank));
        }
        std::sort(inv.torsion.begin(), inv.torsion.end());
        return inv;
    }
    // Invariant factors via SNF of the echelon basis (cheaper than the raw
    // relations and spans the same lattice).
    ExactMatrix basis(cover_->poly ? Ring::poly_over_prime(cover_->p) : Ring::integers(),
                      dim_, cover_->cols);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < cover_->cols; ++j)
            basis.set(i, j, cover_->basis[static_cast<size_t>(i) * cover_->cols + j]);
    auto snf = smith_normal_form(basis);
    int diag = std::min(snf.d.rows(), snf.d.cols());
    int rank = 0;
    const Ring& cring = basis.ring();
    for (int i = 0; i < diag; ++i) {
        const Elem& d = snf.d.at(i, i);
        if (cring.is_zero(d)) break;
        ++rank;
        if (cring.is_unit(d)) continue;
        if (cover_->poly)
            inv.torsion.push_back("F" + std::to_string(cover_->p) + "[t]/(" + fppoly::show(d.c) + ")");
        else
            inv.torsion.push_back("Z/" + std::to_string(d.n));
    }
    inv.free_rank = dim_ - rank;
    std::sort(inv.torsion.begin(), inv.torsion.end());
    return inv;
}

// ---------------------------------------------------------------------------
// LinearSystem
// ---------------------------------------------------------------------------

int LinearSystem::add_unknown(int rows, int cols) {
    shapes_.emplace_back(rows, cols);
    return static_cast<int>(shapes_.size()) - 1;
}

void LinearSystem::add_constraint(std::vector<Term> terms, const ExactMatrix& rhs,
                                  const ExactMatrix* mod_relations) {
    Constraint c;
    for (auto& t : terms) {
        const auto& [xr, xc] = shapes_[t.unknown];
        if (t.left.cols() != xr || t.right.rows() != xc || t.left.rows() != rhs.rows() ||
            t.right.cols() != rhs.cols())
            throw ShapeError("linear system term");
        c.terms.push_back(std::move(t));
    }
    c.rhs = rhs;
    if (mod_relations) c.mod = *mod_relations;
    constraints_.push_back(std::move(c));
}

std::optional<std::vector<ExactMatrix>> LinearSystem::solve() const {
    std::vector<int> offset(shapes_.size());
    int total = 0;
    for (size_t h = 0; h < shapes_.size(); ++h) {
        offset[h] = total;
        total += shapes_[h].first * shapes_[h].second;
    }
    int slack_base = total;
    for (const auto& c : constraints_)
        if (c.mod) total += c.mod->cols() * c.rhs.cols();

    int rows = 0;
    for (const auto& c : constraints_) rows += c.rhs.rows() * c.rhs.cols();

    ExactMatrix big(ring_, rows, total);
    ExactMatrix b(ring_, rows, 1);
    int row_base = 0;
    int slack_at = slack_base;
    for (const auto& c : constraints_) {
        int m = c.rhs.rows(), n = c.rhs.cols();
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i) b.set(row_base + j * m + i, 0, c.rhs.at(i, j));
        for (const auto& t : c.terms) {
            const auto& [xr, xc] = shapes_[t.unknown];
            for (int i_out = 0; i_out < m; ++i_out)
                for (int j_out = 0; j_out < n; ++j_out) {
                    int row = row_base + j_out * m + i_out;
                    for (int i_in = 0; i_in < xr; ++i_in) {
                        if (ring_.is_zero(t.left.at(i_out, i_in))) continue;
                        for (int j_in = 0; j_in < xc; ++j_in) {
                            if (ring_.is_zero(t.right.at(j_in, j_out))) continue;
                            int colidx = offset[t.unknown] + j_in * xr + i_in;
                            big.set(row, colidx,
                                    ring_.add(big.at(row, colidx),
                                              ring_.mul(t.left.at(i_out, i_in),
                                                        t.right.at(j_in, j_out))));
                        }
                    }
                }
        }
        if (c.mod) {
            // The constraint holds modulo the column span of c.mod: subtract
            // an unknown combination per right-hand column.
            for (int j_out = 0; j_out < n; ++j_out)
                for (int i_out = 0; i_out < m; ++i_out) {
                    int row = row_base + j_out * m + i_out;
                    for (int k = 0; k < c.mod->cols(); ++k)
                        big.set(row, slack_at + j_out * c.mod->cols() + k,
                                c.mod->at(i_out, k));
                }
            slack_at += c.mod->cols() * n;
        }
        row_base += m * n;
    }

    auto x = solve_matrix_equation(big, b);
    if (!x) return std::nullopt;
    std::vector<ExactMatrix> out;
    for (size_t h = 0; h < shapes_.size(); ++h) {
        const auto& [xr, xc] = shapes_[h];
        ExactMatrix m(ring_, xr, xc);
        for (int j = 0; j < xc; ++j)
            for (int i = 0; i < xr; ++i) m.set(i, j, x->at(offset[h] + j * xr + i, 0));
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace relhom

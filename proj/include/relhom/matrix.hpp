#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relhom/ring.hpp"

namespace relhom {

// Dense matrix with entries kept in canonical form.  Immutable by
// convention: operations return fresh values.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(Ring ring, int rows, int cols);
    static ExactMatrix identity(const Ring& ring, int n);
    static ExactMatrix from_rows(const Ring& ring,
                                 const std::vector<std::vector<int64_t>>& rows);
    static ExactMatrix scalar(const Ring& ring, int n, const Elem& value);

    const Ring& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Elem& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, Elem v);

    ExactMatrix mul(const ExactMatrix& o) const;
    ExactMatrix add(const ExactMatrix& o) const;
    ExactMatrix sub(const ExactMatrix& o) const;
    ExactMatrix neg() const;
    ExactMatrix scale(const Elem& s) const;
    ExactMatrix transpose() const;
    ExactMatrix col(int j) const;
    ExactMatrix cols_range(int j0, int n) const;
    ExactMatrix rows_range(int i0, int n) const;
    bool is_zero() const;
    bool operator==(const ExactMatrix& o) const;

    // Componentwise view over a product ring.
    ExactMatrix component(int which) const;

    std::string show() const;

private:
    Ring ring_;
    int rows_ = 0, cols_ = 0;
    std::vector<Elem> a_;
};

ExactMatrix hstack(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b);
// Assembles a product-ring matrix from per-component matrices of equal shape.
ExactMatrix assemble_components(const Ring& product_ring, const std::vector<ExactMatrix>& comps);

struct SnfResult {
    ExactMatrix u, d, v;        // u * a * v = d, d diagonal with d_i | d_{i+1}
    ExactMatrix u_inv, v_inv;   // exact inverses of the transforms
};

// Smith normal form over a Euclidean domain (ring Integers or F_p[t]).
SnfResult smith_normal_form(const ExactMatrix& a);

// Some X with A*X = B over the coefficient ring, or nullopt when the system
// has no solution.  Quotient rings are decided exactly by lifting to the
// Euclidean cover with the modulus adjoined as extra relation columns;
// product rings componentwise.
std::optional<ExactMatrix> solve_matrix_equation(const ExactMatrix& a, const ExactMatrix& b);

// Columns generating {x : A x = 0} over the coefficient ring.
ExactMatrix nullspace(const ExactMatrix& a);

// Inverse of a square matrix; nullopt when not invertible.
std::optional<ExactMatrix> invert(const ExactMatrix& a);

// Canonical reduction against the column span of a relation matrix (with the
// ring modulus implicitly adjoined).  Every coset of the span has exactly one
// reduced representative, so equality-mod-relations is representation
// equality after reduce().
class RelationLattice {
public:
    RelationLattice() = default;
    RelationLattice(Ring ring, const ExactMatrix& relations);

    const Ring& ring() const { return ring_; }
    int dim() const { return dim_; }
    ExactMatrix reduce(const ExactMatrix& x) const; // columnwise
    bool contains(const ExactMatrix& x) const;

    bool finite_cosets() const;
    int64_t coset_count() const;                    // throws when infinite
    std::vector<ExactMatrix> enumerate(int64_t cap) const;

    // Diagonal invariants of the quotient: normalized nonunit diagonal
    // entries of the SNF over the cover plus the free rank.  A complete
    // isomorphism invariant for modules over the supported rings.
    struct Invariants {
        std::vector<std::string> torsion; // per cyclic summand, e.g. "Z/4"
        int free_rank = 0;
        bool operator==(const Invariants&) const = default;
    };
    Invariants invariants() const;

    struct CoverData;

private:
    Ring ring_;
    int dim_ = 0;
    // Non-product: echelon basis over the cover, stored per component below
    // for products.
    std::shared_ptr<const CoverData> cover_;
    std::vector<RelationLattice> comps_;
};

// Joint linear solver for systems  sum_k  L_k * X_{h_k} * R_k = C  (mod a
// relation lattice per constraint).  Used wherever several morphism unknowns
// must be found simultaneously.
class LinearSystem {
public:
    explicit LinearSystem(Ring ring) : ring_(std::move(ring)) {}

    int add_unknown(int rows, int cols);

    struct Term {
        int unknown;
        ExactMatrix left;   // rows_out x rows(X)
        ExactMatrix right;  // cols(X) x cols_out
    };
    void add_constraint(std::vector<Term> terms, const ExactMatrix& rhs,
                        const ExactMatrix* mod_relations = nullptr);

    std::optional<std::vector<ExactMatrix>> solve() const;

private:
    Ring ring_;
    std::vector<std::pair<int, int>> shapes_;
    struct Constraint {
        std::vector<Term> terms;
        ExactMatrix rhs;
        std::optional<ExactMatrix> mod;
    };
    std::vector<Constraint> constraints_;
};

} // namespace relhom

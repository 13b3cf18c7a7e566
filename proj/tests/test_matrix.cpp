#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relhom/matrix.hpp"
#include "relhom/rng.hpp"

using namespace relhom;

namespace {

bool brute_force_solvable(const ExactMatrix& a, const ExactMatrix& b) {
    // Exhaustive search over all candidate X for small systems over finite
    // rings; the independent oracle for solve_matrix_equation.
    const Ring& ring = a.ring();
    auto elems = ring.all_elements();
    int n = a.cols() * b.cols();
    std::vector<size_t> idx(n, 0);
    while (true) {
        ExactMatrix x(ring, a.cols(), b.cols());
        int t = 0;
        for (int j = 0; j < b.cols(); ++j)
            for (int i = 0; i < a.cols(); ++i) x.set(i, j, elems[idx[t++]]);
        if (a.mul(x) == b) return true;
        int k = 0;
        for (; k < n; ++k) {
            if (++idx[k] < elems.size()) break;
            idx[k] = 0;
        }
        if (k == n || n == 0) break;
    }
    return false;
}

} // namespace

TEST_CASE("smith normal form on the spec examples") {
    auto z = Ring::integers();

    SUBCASE("diag(2,3) over Z becomes diag(1,6)") {
        auto a = ExactMatrix::from_rows(z, {{2, 0}, {0, 3}});
        auto s = smith_normal_form(a);
        CHECK(s.u.mul(a).mul(s.v) == s.d);
        CHECK(s.d.at(0, 0) == z.from_int(1));
        CHECK(s.d.at(1, 1) == z.from_int(6));
        CHECK(s.u.mul(s.u_inv) == ExactMatrix::identity(z, 2));
        CHECK(s.v.mul(s.v_inv) == ExactMatrix::identity(z, 2));
    }

    SUBCASE("zero matrix") {
        ExactMatrix a(z, 2, 3);
        auto s = smith_normal_form(a);
        CHECK(s.d.is_zero());
        CHECK(s.u == ExactMatrix::identity(z, 2));
        CHECK(s.v == ExactMatrix::identity(z, 3));
    }

    SUBCASE("identity") {
        auto a = ExactMatrix::identity(z, 3);
        auto s = smith_normal_form(a);
        CHECK(s.d == a);
    }
}

TEST_CASE("smith normal form over F_2[t]") {
    auto r = Ring::poly_over_prime(2);
    ExactMatrix a(r, 2, 2);
    a.set(0, 0, r.parse("t"));
    a.set(1, 1, r.parse("t+1"));
    auto s = smith_normal_form(a);
    CHECK(s.u.mul(a).mul(s.v) == s.d);
    CHECK(s.d.at(0, 0) == r.one());
    CHECK(s.d.at(1, 1) == r.parse("t^2+t"));
}

TEST_CASE("UAV = D with exact transform inverses on random matrices") {
    Rng rng(7);
    for (int iter = 0; iter < 60; ++iter) {
        Ring ring = iter % 2 == 0 ? Ring::integers() : Ring::poly_over_prime(3);
        int rr = 1 + static_cast<int>(rng.below(4));
        int cc = 1 + static_cast<int>(rng.below(4));
        auto a = rng.matrix(ring, rr, cc, 5);
        auto s = smith_normal_form(a);
        CHECK(s.u.mul(a).mul(s.v) == s.d);
        CHECK(s.u.mul(s.u_inv) == ExactMatrix::identity(ring, rr));
        CHECK(s.u_inv.mul(s.u) == ExactMatrix::identity(ring, rr));
        CHECK(s.v.mul(s.v_inv) == ExactMatrix::identity(ring, cc));
        // divisor chain
        int n = std::min(rr, cc);
        for (int i = 0; i + 1 < n; ++i) {
            if (ring.is_zero(s.d.at(i, i)) || ring.is_zero(s.d.at(i + 1, i + 1))) continue;
            auto q = solve_matrix_equation(
                ExactMatrix::scalar(ring, 1, s.d.at(i, i)),
                ExactMatrix::scalar(ring, 1, s.d.at(i + 1, i + 1)));
            CHECK(q.has_value());
        }
    }
}

TEST_CASE("solve_matrix_equation over Z/4") {
    auto r = Ring::integers_mod(4);

    SUBCASE("2x = 2 has a solution") {
        auto a = ExactMatrix::from_rows(r, {{2}});
        auto b = ExactMatrix::from_rows(r, {{2}});
        auto x = solve_matrix_equation(a, b);
        REQUIRE(x.has_value());
        CHECK(a.mul(*x) == b);
    }

    SUBCASE("2x = 1 is unsolvable") {
        auto a = ExactMatrix::from_rows(r, {{2}});
        auto b = ExactMatrix::from_rows(r, {{1}});
        CHECK(!solve_matrix_equation(a, b).has_value());
        CHECK(!brute_force_solvable(a, b));
    }

    SUBCASE("identity system") {
        auto a = ExactMatrix::identity(r, 2);
        auto b = ExactMatrix::from_rows(r, {{1, 2}, {3, 0}});
        auto x = solve_matrix_equation(a, b);
        REQUIRE(x.has_value());
        CHECK(*x == b);
    }
}

TEST_CASE("solver agrees with exhaustive enumeration over small finite rings") {
    Rng rng(11);
    std::vector<Ring> rings = {Ring::integers_mod(4), Ring::integers_mod(6),
                               Ring::integers_mod(9), Ring::prime_field(5),
                               Ring::quotient_poly(2, {0, 0, 1}),
                               Ring::quotient_poly(3, {1, 0, 1})};
    for (int iter = 0; iter < 120; ++iter) {
        const Ring& ring = rings[iter % rings.size()];
        int rr = 1 + static_cast<int>(rng.below(2));
        int cc = 1 + static_cast<int>(rng.below(2));
        auto a = rng.matrix(ring, rr, cc);
        auto b = rng.matrix(ring, rr, 1);
        auto x = solve_matrix_equation(a, b);
        if (x) {
            CHECK(a.mul(*x) == b);
        } else {
            CHECK(!brute_force_solvable(a, b));
        }
    }
}

TEST_CASE("nullspace generates the full kernel") {
    Rng rng(23);
    std::vector<Ring> rings = {Ring::integers_mod(4), Ring::integers_mod(6),
                               Ring::quotient_poly(2, {0, 0, 1})};
    for (int iter = 0; iter < 40; ++iter) {
        const Ring& ring = rings[iter % rings.size()];
        int rr = 1 + static_cast<int>(rng.below(3));
        int cc = 1 + static_cast<int>(rng.below(3));
        auto a = rng.matrix(ring, rr, cc);
        auto ns = nullspace(a);
        CHECK(a.mul(ns).is_zero());
        // Every kernel vector must be expressible over the generators.
        auto elems = ring.all_elements();
        std::vector<size_t> idx(cc, 0);
        while (true) {
            ExactMatrix x(ring, cc, 1);
            for (int i = 0; i < cc; ++i) x.set(i, 0, elems[idx[i]]);
            if (a.mul(x).is_zero()) {
                CHECK(solve_matrix_equation(ns, x).has_value());
            }
            int k = 0;
            for (; k < cc; ++k) {
                if (++idx[k] < elems.size()) break;
                idx[k] = 0;
            }
            if (k == cc || cc == 0) break;
        }
    }
}

TEST_CASE("relation lattice reduction and enumeration") {
    auto r = Ring::integers_mod(4);
    ExactMatrix rel(r, 1, 1);
    rel.set(0, 0, r.from_int(2)); // Z/4 modulo <2> = Z/2
    RelationLattice lat(r, rel);
    CHECK(lat.coset_count() == 2);
    auto all = lat.enumerate(100);
    CHECK(all.size() == 2);
    ExactMatrix three(r, 1, 1);
    three.set(0, 0, r.from_int(3));
    auto red = lat.reduce(three);
    CHECK(lat.contains(three.sub(red)));

    // Z/4 as a module over itself: 4 cosets.
    RelationLattice full(r, ExactMatrix(r, 1, 0));
    CHECK(full.coset_count() == 4);
}

TEST_CASE("product ring arithmetic runs componentwise") {
    auto r = Ring::product({Ring::integers_mod(4), Ring::quotient_poly(3, {1, 0, 1})});
    CHECK(r.order() == 36);
    CHECK(r.is_finite());
    Rng rng(5);
    auto a = rng.matrix(r, 2, 2);
    auto b = rng.matrix(r, 2, 1);
    auto x = solve_matrix_equation(a, b);
    if (x) CHECK(a.mul(*x) == b);
    auto ns = nullspace(a);
    CHECK(a.mul(ns).is_zero());
}

TEST_CASE("linear system solves joint morphism equations") {
    auto r = Ring::integers_mod(6);
    Rng rng(3);
    // Find x, y with a*x + y*b = c (mod nothing) as a smoke test.
    auto a = rng.matrix(r, 2, 2);
    auto b = rng.matrix(r, 2, 2);
    LinearSystem sys(r);
    int hx = sys.add_unknown(2, 2);
    int hy = sys.add_unknown(2, 2);
    auto xs = rng.matrix(r, 2, 2);
    auto ys = rng.matrix(r, 2, 2);
    auto c = a.mul(xs).add(ys.mul(b));
    sys.add_constraint({{hx, a, ExactMatrix::identity(r, 2)},
                        {hy, ExactMatrix::identity(r, 2), b}},
                       c);
    auto sol = sys.solve();
    REQUIRE(sol.has_value());
    CHECK(a.mul((*sol)[0]).add((*sol)[1].mul(b)) == c);
}

#include <algorithm>
#include <random>

#include "doctest.h"
#include "flatbound/errors.hpp"
#include "flatbound/polyhedron.hpp"
#include "test_support.hpp"

using namespace flatbound;
using namespace flatbound::testing;

namespace {

LpOptimal expect_optimal(const LpResult& r) {
    REQUIRE(std::holds_alternative<LpOptimal>(r));
    return std::get<LpOptimal>(r);
}

// Cramer's rule over every triple of constraints (as equalities), keeping
// feasible solutions. Independent of the library's elimination code.
std::vector<Vec> cramer_vertices(const Polyhedron& p) {
    std::vector<Constraint> all = p.inequalities();
    all.insert(all.end(), p.equalities().begin(), p.equalities().end());
    std::vector<Vec> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            for (std::size_t k = j + 1; k < all.size(); ++k) {
                const Vec &a = all[i].normal, &b = all[j].normal, &c = all[k].normal;
                const Rational d = det3(a, b, c);
                if (d.is_zero()) continue;
                Vec rhs{all[i].offset, all[j].offset, all[k].offset};
                Vec x(3);
                for (std::size_t col = 0; col < 3; ++col) {
                    Vec a2 = a, b2 = b, c2 = c;
                    a2[col] = rhs[0];
                    b2[col] = rhs[1];
                    c2[col] = rhs[2];
                    x[col] = det3(a2, b2, c2) / d;
                }
                if (p.contains(x) && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
            }
        }
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

Polyhedron random_polytope(std::mt19937_64& rng, std::size_t dim) {
    Polyhedron p(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        p.add_inequality(unit(dim, i), 1);
        p.add_inequality(Rational(-1) * unit(dim, i), 1);
    }
    std::uniform_int_distribution<int> cuts(1, 3);
    const int n = cuts(rng);
    for (int c = 0; c < n; ++c) {
        Vec a(dim);
        for (auto& x : a) x = random_rational(rng, -3, 3, 1);
        if (is_zero(a)) a[0] = 1;
        p.add_inequality(a, random_rational(rng, 0, 2, 3) + q(1, 3));
    }
    return p;
}

Polyhedron hull_of(const std::vector<Vec>& pts, std::size_t dim) {
    // { x : x = sum l_i v_i, l >= 0, sum l = 1 } in (x, l) coordinates, projected onto x.
    const std::size_t m = pts.size();
    Polyhedron lifted(dim + m);
    for (std::size_t i = 0; i < m; ++i) lifted.add_inequality(Rational(-1) * unit(dim + m, dim + i), 0);
    Vec s = zeros(dim + m);
    for (std::size_t i = 0; i < m; ++i) s[dim + i] = 1;
    lifted.add_equality(s, 1);
    for (std::size_t j = 0; j < dim; ++j) {
        Vec row = zeros(dim + m);
        row[j] = 1;
        for (std::size_t i = 0; i < m; ++i) row[dim + i] = -pts[i][j];
        lifted.add_equality(row, 0);
    }
    std::vector<std::size_t> keep(dim);
    for (std::size_t j = 0; j < dim; ++j) keep[j] = j;
    return project(lifted, keep);
}

}  // namespace

TEST_CASE("rational parsing is exact and rejects decimals") {
    CHECK(Rational::parse("6/8") == q(3, 4));
    CHECK(Rational::parse("-2") == q(-2));
    CHECK(Rational::parse(" 1/3 ").denominator() == 3);
    CHECK_THROWS_AS(Rational::parse("0.5"), InputError);
    CHECK_THROWS_AS(Rational::parse("1/0"), InputError);
    CHECK_THROWS_AS(Rational::parse("1/-2"), InputError);
    CHECK(parse_csv("1/4,1/4,1/2") == vec({q(1, 4), q(1, 4), q(1, 2)}));
}

TEST_CASE("lp over the simplex") {
    const auto s = Polyhedron::simplex(3);
    const auto a = expect_optimal(lp_solve(vec({1, 0, 0}), s, Sense::Maximize));
    CHECK(a.value == 1);
    CHECK(a.point == vec({1, 0, 0}));
    const auto b = expect_optimal(lp_solve(ones(3), s, Sense::Maximize));
    CHECK(b.value == 1);
    CHECK(s.contains(b.point));
    CHECK_THROWS_AS(lp_solve(ones(2), s, Sense::Maximize), InputError);
}

TEST_CASE("lp on the abstain cell matches vertex oracle") {
    const auto cell = abstain_cell();
    const auto r = expect_optimal(lp_solve(vec({0, 0, 1}), cell, Sense::Maximize));
    Rational best = -1;
    for (const auto& v : cramer_vertices(cell)) best = std::max(best, v[2]);
    CHECK(r.value == best);
    CHECK(r.value == q(1, 2));
    CHECK(cell.contains(r.point));
    CHECK(r.point[2] == q(1, 2));
}

TEST_CASE("lp unbounded and infeasible") {
    Polyhedron half(2);
    half.add_inequality(vec({-1, 0}), 0);
    CHECK(std::holds_alternative<LpUnbounded>(lp_solve(vec({1, 0}), half, Sense::Maximize)));
    Polyhedron empty(1);
    empty.add_inequality(vec({1}), 0);
    empty.add_inequality(vec({-1}), -1);
    CHECK(std::holds_alternative<LpInfeasible>(lp_solve(vec({1}), empty, Sense::Minimize)));
    CHECK(empty.is_empty());
}

TEST_CASE("kernel examples") {
    CHECK(kernel({}, 3).dim() == 3);
    const auto k1 = kernel({vec({1, 1, 1})}, 3);
    CHECK(k1.dim() == 2);
    for (const auto& b : k1.basis()) CHECK(dot(b, ones(3)) == 0);
    const auto k2 = kernel({vec({1, 0, -1}), vec({0, 1, -1})}, 3);
    REQUIRE(k2.dim() == 1);
    // By hand: x1 = x3, x2 = x3.
    CHECK(k2.contains(ones(3)));
}

TEST_CASE("feasible direction subspace examples") {
    const auto s = Polyhedron::simplex(3);
    const Vec uniform{q(1, 3), q(1, 3), q(1, 3)};
    const Vec star{q(1, 4), q(1, 4), q(1, 2)};
    CHECK(feasible_direction_subspace(s, uniform).dim() == 2);
    CHECK(feasible_direction_subspace(abstain_cell(), uniform).dim() == 2);
    CHECK(feasible_direction_subspace(abstain_cell(), star).dim() == 1);
    CHECK(feasible_direction_subspace(abstain_cell_3(), star).dim() == 1);
    CHECK_THROWS_AS(feasible_direction_subspace(abstain_cell(), vec({1, 0, 0})), PreconditionError);
}

TEST_CASE("vertices examples agree with Cramer oracle") {
    CHECK(vertices(Polyhedron::simplex(3)) == std::vector<Vec>{vec({0, 0, 1}), vec({0, 1, 0}), vec({1, 0, 0})});
    const std::vector<Vec> bot{vec({0, q(1, 2), q(1, 2)}), vec({q(1, 2), 0, q(1, 2)}), vec({q(1, 2), q(1, 2), 0})};
    CHECK(vertices(abstain_cell()) == bot);
    CHECK(cramer_vertices(abstain_cell()) == bot);
    const std::vector<Vec> three{vec({0, 0, 1}), vec({0, q(1, 2), q(1, 2)}), vec({q(1, 2), 0, q(1, 2)})};
    CHECK(vertices(abstain_cell_3()) == three);
    CHECK(cramer_vertices(abstain_cell_3()) == three);
    Polyhedron ray(1);
    ray.add_inequality(vec({-1}), 0);
    CHECK_THROWS_AS(vertices(ray), PreconditionError);
}

TEST_CASE("containment examples") {
    const auto cell = abstain_cell();
    CHECK(contains_all(cell, cell));
    const auto r = polyhedron_contains(cell, Polyhedron::simplex(3));
    REQUIRE(std::holds_alternative<Violation>(r));
    CHECK_FALSE(cell.contains(std::get<Violation>(r).point));
    // segment from (0,1/2,1/2) to (1/2,0,1/2)
    Polyhedron seg = Polyhedron::simplex(3);
    seg.add_equality(vec({0, 0, 1}), q(1, 2));
    CHECK(contains_all(cell, seg));
    CHECK(contains_all(abstain_cell_3(), seg));
}

TEST_CASE("relint examples") {
    const auto s = Polyhedron::simplex(3);
    CHECK(relint_contains(s, vec({q(1, 3), q(1, 3), q(1, 3)})));
    CHECK_FALSE(relint_contains(s, vec({1, 0, 0})));
    CHECK_FALSE(relint_contains(abstain_cell(), vec({q(1, 4), q(1, 4), q(1, 2)})));
    CHECK_THROWS_AS(relint_contains(abstain_cell(), vec({1, 0, 0})), PreconditionError);
    CHECK(affine_dimension(abstain_cell()) == 2);
    CHECK(affine_dimension(minimal_face(abstain_cell(), vec({q(1, 4), q(1, 4), q(1, 2)}))) == 1);
}

TEST_CASE("property: lp optimum equals the best vertex") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t dim = 1 + static_cast<std::size_t>(trial % 4);
        const auto poly = random_polytope(rng, dim);
        const auto vs = vertices(poly);
        REQUIRE_FALSE(vs.empty());
        if (vs.size() > 12) continue;
        Vec c(dim);
        for (auto& x : c) x = random_rational(rng, -4, 4, 2);
        for (Sense s : {Sense::Minimize, Sense::Maximize}) {
            const auto r = expect_optimal(lp_solve(c, poly, s));
            Rational best = dot(c, vs[0]);
            for (const auto& v : vs) best = s == Sense::Maximize ? std::max(best, dot(c, v)) : std::min(best, dot(c, v));
            CHECK(r.value == best);
        }
    }
}

TEST_CASE("property: feasible direction subspace is exactly the two-sided directions") {
    std::mt19937_64 rng(11);
    const std::vector<Polyhedron> regions{abstain_cell(), abstain_cell_3(), Polyhedron::simplex(3)};
    for (const auto& region : regions) {
        auto pts = vertices(region);
        // add a few boundary and interior points
        const auto vs = pts;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            for (std::size_t j = i + 1; j < vs.size(); ++j) pts.push_back(q(1, 2) * (vs[i] + vs[j]));
        }
        Vec c = zeros(3);
        for (const auto& v : vs) c = c + v;
        pts.push_back(Rational(1, static_cast<long>(vs.size())) * c);
        for (const auto& p : pts) {
            const auto sub = feasible_direction_subspace(region, p);
            for (const auto& v : sub.basis()) {
                bool ok = false;
                for (long k = 1; k <= 1 << 12 && !ok; k *= 2) {
                    ok = region.contains(p + Rational(1, k) * v) && region.contains(p - Rational(1, k) * v);
                }
                CHECK(ok);
            }
            for (const auto& w : sub.complement_basis()) {
                // random direction with a component outside the subspace
                Vec v = w;
                for (const auto& b : sub.basis()) v = v + random_rational(rng, -2, 2, 1) * b;
                for (long k = 2; k <= 64; k *= 2) {
                    const bool both = region.contains(p + Rational(1, k) * v) && region.contains(p - Rational(1, k) * v);
                    CHECK_FALSE(both);
                }
            }
        }
    }
}

TEST_CASE("property: vertex hull round trip") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 16; ++trial) {
        const std::size_t dim = 1 + static_cast<std::size_t>(trial % 3);
        const auto poly = random_polytope(rng, dim);
        const auto hull = hull_of(vertices(poly), dim);
        CHECK(contains_all(poly, hull));
        CHECK(contains_all(hull, poly));
    }
    const auto hull = hull_of(vertices(abstain_cell()), 3);
    CHECK(same_set(hull, abstain_cell()));
}

TEST_CASE("fourier motzkin projection of a triangle onto an axis") {
    const auto seg = project(abstain_cell(), {0});
    CHECK(seg.contains(vec({0})));
    CHECK(seg.contains(vec({q(1, 2)})));
    CHECK_FALSE(seg.contains(vec({q(3, 4)})));
    CHECK_FALSE(seg.contains(vec({q(-1, 8)})));
}

TEST_CASE("arrangement faces of two lines in the plane") {
    const std::vector<Hyperplane> hs{{vec({1, 0}), 0}, {vec({0, 1}), 0}};
    const auto all = arrangement_faces(hs, 2);
    CHECK(all.size() == 9);  // 4 quadrants, 4 rays, the origin
    for (const auto& f : all) {
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const int s = (dot(hs[i].normal, f.point) - hs[i].offset).sign();
            CHECK(s == f.signs[i]);
        }
    }
    const auto central = arrangement_faces(hs, 2, true);
    CHECK(central.size() == 4);  // 8 nonzero faces up to sign
    Polyhedron::simplex(2);
    const std::vector<Hyperplane> parallel{{vec({1}), 0}, {vec({1}), 1}};
    CHECK(arrangement_faces(parallel, 1).size() == 5);
}

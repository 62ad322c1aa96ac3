#pragma once

#include <cstdint>
#include <random>

#include "flatbound/polyhedron.hpp"
#include "flatbound/rational.hpp"

namespace flatbound::testing {

inline Rational q(long n, long d = 1) { return Rational(n, d); }

inline Vec vec(std::initializer_list<Rational> xs) { return Vec(xs); }

// gamma_bot = { p in simplex(3) : p_y <= 1/2 }
inline Polyhedron abstain_cell() {
    Polyhedron p = Polyhedron::simplex(3);
    for (std::size_t y = 0; y < 3; ++y) p.add_inequality(unit(3, y), q(1, 2));
    return p;
}

// gamma_3 = { p in simplex(3) : p_3 >= p_1, p_3 >= p_2, p_3 >= 1/2 }
inline Polyhedron abstain_cell_3() {
    Polyhedron p = Polyhedron::simplex(3);
    p.add_inequality(vec({1, 0, -1}), 0);
    p.add_inequality(vec({0, 1, -1}), 0);
    p.add_inequality(vec({0, 0, -1}), q(-1, 2));
    return p;
}

inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long den) {
    std::uniform_int_distribution<long> d(lo * den, hi * den);
    return Rational(d(rng), den);
}

// 3x3 determinant, used as an independent oracle for point solving.
inline Rational det3(const Vec& a, const Vec& b, const Vec& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace flatbound::testing

#include "flatbound/loss.hpp"
#include "flatbound/surrogate.hpp"

namespace flatbound::testing {

inline DiscreteLoss abstain_loss() {
    // l(r, y) = 1{r not in {y, abstain}} + 1/2 1{r = abstain}
    return DiscreteLoss({"1", "2", "3", "abstain"}, {"1", "2", "3"},
                        {vec({0, 1, 1}), vec({1, 0, 1}), vec({1, 1, 0}), vec({q(1, 2), q(1, 2), q(1, 2)})});
}

inline DiscreteLoss zero_one_loss(std::size_t n) {
    std::vector<std::string> labels;
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i + 1));
        Vec row = ones(n);
        row[i] = 0;
        rows.push_back(row);
    }
    return DiscreteLoss(labels, labels, rows);
}

// (r - y)^2 on outcomes {0, 1, 2} with reports on the grid {0, 1/4, ..., 2}.
inline DiscreteLoss squared_grid_loss() {
    std::vector<std::string> reports;
    std::vector<Vec> rows;
    for (long k = 0; k <= 8; ++k) {
        const Rational r(k, 4);
        reports.push_back(r.str());
        Vec row;
        for (long y = 0; y <= 2; ++y) row.push_back((r - y) * (r - y));
        rows.push_back(row);
    }
    return DiscreteLoss(reports, {"0", "1", "2"}, rows);
}

inline DiscreteLoss random_loss(std::mt19937_64& rng, std::size_t reports, std::size_t outcomes) {
    std::vector<std::string> rl, ol;
    for (std::size_t r = 0; r < reports; ++r) rl.push_back("r" + std::to_string(r));
    for (std::size_t y = 0; y < outcomes; ++y) ol.push_back("y" + std::to_string(y));
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < reports; ++r) {
        Vec row(outcomes);
        for (auto& x : row) x = random_rational(rng, 0, 3, 2);
        rows.push_back(row);
    }
    return DiscreteLoss(rl, ol, rows);
}

// Outcomes (rainy, sunny, snowy). Sunny iff p_sunny >= 3/4, else the likelier of rain and snow.
inline PropertyCells weather_cells() {
    Polyhedron sunny(3), rainy(3), snowy(3);
    sunny.add_inequality(vec({0, -1, 0}), q(-3, 4));
    rainy.add_inequality(vec({0, 1, 0}), q(3, 4));
    rainy.add_inequality(vec({-1, 0, 1}), 0);
    snowy.add_inequality(vec({0, 1, 0}), q(3, 4));
    snowy.add_inequality(vec({1, 0, -1}), 0);
    return PropertyCells({"rainy", "sunny", "snowy"},
                         {{"rainy", rainy}, {"sunny", sunny}, {"snowy", snowy}});
}

// Random surrogate whose outcomes are all bounded below: in d = 1 both slope
// signs appear, in d = 2 the third gradient is a negative combination of two
// independent ones so the origin is interior to their hull.
inline PolyhedralSurrogate random_surrogate(std::mt19937_64& rng, std::size_t d, std::size_t n) {
    std::vector<std::string> outcomes;
    for (std::size_t y = 0; y < n; ++y) outcomes.push_back("y" + std::to_string(y));
    std::vector<std::vector<AffinePiece>> pieces(n);
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t y = 0; y < n; ++y) {
        if (d == 1) {
            pieces[y].push_back({vec({random_rational(rng, 1, 3, 2)}), random_rational(rng, -2, 2, 2)});
            pieces[y].push_back({vec({-random_rational(rng, 1, 3, 2)}), random_rational(rng, -2, 2, 2)});
            if (coin(rng)) pieces[y].push_back({vec({random_rational(rng, -2, 2, 2)}), random_rational(rng, -3, 0, 2)});
        } else {
            Vec g1, g2;
            do {
                g1 = vec({random_rational(rng, -2, 2, 1), random_rational(rng, -2, 2, 1)});
                g2 = vec({random_rational(rng, -2, 2, 1), random_rational(rng, -2, 2, 1)});
            } while ((g1[0] * g2[1] - g1[1] * g2[0]).is_zero());
            const Rational a = random_rational(rng, 1, 2, 2), b = random_rational(rng, 1, 2, 2);
            const Vec g3 = Rational(-1) * (a * g1 + b * g2);
            pieces[y].push_back({g1, random_rational(rng, -2, 2, 2)});
            pieces[y].push_back({g2, random_rational(rng, -2, 2, 2)});
            pieces[y].push_back({g3, random_rational(rng, -2, 2, 2)});
        }
    }
    return PolyhedralSurrogate(d, outcomes, pieces);
}

}  // namespace flatbound::testing

#include <cstddef>
#include <vector>

#include "flatbound/errors.hpp"
#include "flatbound/polyhedron.hpp"

namespace flatbound {

namespace {

// Dense simplex tableau in canonical form. Column layout: two columns per free
// variable (positive and negative part), one slack per inequality row, then
// artificials. The last column holds the right-hand side.
class Tableau {
public:
    Tableau(const Polyhedron& region) : n_(region.ambient_dim()) {
        const auto& ineq = region.inequalities();
        const auto& eq = region.equalities();
        const std::size_t m = ineq.size() + eq.size();
        slack0_ = 2 * n_;
        art0_ = slack0_ + ineq.size();

        // Decide which rows need an artificial column.
        std::vector<bool> needs_art(m, false);
        std::size_t n_art = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const bool is_ineq = i < ineq.size();
            const Rational& b = is_ineq ? ineq[i].offset : eq[i - ineq.size()].offset;
            if (!is_ineq || b.sign() < 0) {
                needs_art[i] = true;
                ++n_art;
            }
        }
        cols_ = art0_ + n_art;
        rows_.assign(m, std::vector<mpq_class>(cols_ + 1, mpq_class(0)));
        basis_.assign(m, 0);

        std::size_t art = art0_;
        for (std::size_t i = 0; i < m; ++i) {
            const bool is_ineq = i < ineq.size();
            const Constraint& c = is_ineq ? ineq[i] : eq[i - ineq.size()];
            if (c.normal.size() != n_) throw InputError("constraint dimension mismatch in LP");
            const int flip = c.offset.sign() < 0 ? -1 : 1;
            auto& row = rows_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                if (c.normal[j].is_zero()) continue;
                row[2 * j] = c.normal[j].raw() * flip;
                row[2 * j + 1] = -c.normal[j].raw() * flip;
            }
            if (is_ineq) row[slack0_ + i] = flip;
            row[cols_] = c.offset.raw() * flip;
            if (needs_art[i]) {
                row[art] = 1;
                basis_[i] = art++;
            } else {
                basis_[i] = slack0_ + i;
            }
        }
        allowed_.assign(cols_, true);
    }

    // Phase one: drive artificials to zero. Returns false when infeasible.
    bool phase_one() {
        if (cols_ == art0_) return true;
        std::vector<mpq_class> cost(cols_, mpq_class(0));
        for (std::size_t j = art0_; j < cols_; ++j) cost[j] = 1;
        set_objective(cost);
        if (!optimize()) throw InvariantError("phase one of the simplex method cannot be unbounded");
        if (sgn(objective_value_) != 0) return false;
        // Pivot remaining (zero-level) artificials out of the basis.
        for (std::size_t i = 0; i < rows_.size();) {
            if (basis_[i] < art0_) {
                ++i;
                continue;
            }
            std::size_t col = cols_;
            for (std::size_t j = 0; j < art0_; ++j) {
                if (sgn(rows_[i][j]) != 0) {
                    col = j;
                    break;
                }
            }
            if (col == cols_) {  // redundant row
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
                continue;
            }
            pivot(i, col);
            ++i;
        }
        for (std::size_t j = art0_; j < cols_; ++j) allowed_[j] = false;
        return true;
    }

    // Phase two with the given cost on the original variables. Returns false
    // when unbounded.
    bool phase_two(const Vec& objective, bool maximize) {
        std::vector<mpq_class> cost(cols_, mpq_class(0));
        for (std::size_t j = 0; j < n_; ++j) {
            mpq_class c = objective[j].raw();
            if (maximize) c = -c;
            cost[2 * j] = c;
            cost[2 * j + 1] = -c;
        }
        set_objective(cost);
        return optimize();
    }

    Vec point() const {
        std::vector<mpq_class> z(cols_, mpq_class(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) z[basis_[i]] = rows_[i][cols_];
        Vec x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = Rational(mpq_class(z[2 * j] - z[2 * j + 1]));
        return x;
    }

    const mpq_class& objective_value() const { return objective_value_; }

private:
    void set_objective(const std::vector<mpq_class>& cost) {
        reduced_ = cost;
        reduced_.push_back(mpq_class(0));
        objective_value_ = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const mpq_class& cb = cost[basis_[i]];
            if (sgn(cb) == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (sgn(rows_[i][j]) != 0) reduced_[j] -= cb * rows_[i][j];
            }
        }
        // reduced_[cols_] now holds -(c_B . rhs)
        objective_value_ = -reduced_[cols_];
    }

    // Bland's rule; returns false on unboundedness.
    bool optimize() {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (allowed_[j] && sgn(reduced_[j]) < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return true;
            std::size_t leave = rows_.size();
            mpq_class best;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (sgn(rows_[i][enter]) <= 0) continue;
                mpq_class ratio = rows_[i][cols_] / rows_[i][enter];
                if (leave == rows_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows_.size()) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        auto& prow = rows_[r];
        const mpq_class inv = 1 / prow[c];
        for (auto& x : prow) {
            if (sgn(x) != 0) x *= inv;
        }
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (sgn(prow[j]) != 0) nz.push_back(j);
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r || sgn(rows_[i][c]) == 0) continue;
            const mpq_class f = rows_[i][c];
            for (auto j : nz) rows_[i][j] -= f * prow[j];
        }
        if (sgn(reduced_[c]) != 0) {
            const mpq_class f = reduced_[c];
            for (auto j : nz) reduced_[j] -= f * prow[j];
        }
        objective_value_ = -reduced_[cols_];
        basis_[r] = c;
    }

    std::size_t n_;
    std::size_t slack0_ = 0;
    std::size_t art0_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::vector<mpq_class>> rows_;
    std::vector<std::size_t> basis_;
    std::vector<bool> allowed_;
    std::vector<mpq_class> reduced_;
    mpq_class objective_value_;
};

}  // namespace

LpResult lp_solve(const Vec& objective, const Polyhedron& region, Sense sense) {
    if (objective.size() != region.ambient_dim()) {
        throw InputError("LP objective dimension does not match the region");
    }
    Tableau t(region);
    if (!t.phase_one()) return LpInfeasible{};
    const bool maximize = sense == Sense::Maximize;
    if (!t.phase_two(objective, maximize)) return LpUnbounded{};
    Rational value(t.objective_value());
    if (maximize) value = -value;
    return LpOptimal{value, t.point()};
}

std::optional<Vec> feasible_point(const Polyhedron& region) {
    Tableau t(region);
    if (!t.phase_one()) return std::nullopt;
    return t.point();
}

}  // namespace flatbound

#include "flatbound/loss.hpp"

#include <algorithm>
#include <set>

#include "flatbound/errors.hpp"

namespace flatbound {

Distribution::Distribution(Vec probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InputError("distribution must have at least one entry");
    for (const auto& x : probs_) {
        if (x.sign() < 0) throw InputError("distribution " + to_string(probs_) + " has a negative entry");
    }
    if (sum(probs_) != 1) throw InputError("distribution " + to_string(probs_) + " does not sum to 1");
}

std::size_t Distribution::support_size() const {
    return static_cast<std::size_t>(std::count_if(probs_.begin(), probs_.end(), [](const Rational& x) { return !x.is_zero(); }));
}

DiscreteLoss::DiscreteLoss(std::vector<std::string> reports, std::vector<std::string> outcomes, std::vector<Vec> matrix)
    : reports_(std::move(reports)), outcomes_(std::move(outcomes)), matrix_(std::move(matrix)) {
    if (reports_.empty()) throw InputError("a loss needs at least one report");
    if (outcomes_.size() < 2) throw InputError("a loss needs at least two outcomes");
    if (matrix_.size() != reports_.size()) throw InputError("loss matrix has wrong number of rows");
    for (const auto& row : matrix_) {
        if (row.size() != outcomes_.size()) throw InputError("loss matrix row has wrong number of entries");
    }
    if (std::set<std::string>(reports_.begin(), reports_.end()).size() != reports_.size()) {
        throw InputError("report labels must be distinct");
    }
    if (std::set<std::string>(outcomes_.begin(), outcomes_.end()).size() != outcomes_.size()) {
        throw InputError("outcome labels must be distinct");
    }
}

std::size_t DiscreteLoss::report_index(const std::string& label) const {
    const auto it = std::find(reports_.begin(), reports_.end(), label);
    if (it == reports_.end()) throw InputError("unknown report '" + label + "'");
    return static_cast<std::size_t>(it - reports_.begin());
}

namespace {

Polyhedron restricted_simplex(std::size_t n, const std::optional<Polyhedron>& restriction) {
    Polyhedron dom = Polyhedron::simplex(n);
    if (restriction) {
        if (restriction->ambient_dim() != n) throw InputError("restriction has wrong dimension");
        dom.intersect_with(*restriction);
    }
    return dom;
}

long grid_denominator(std::size_t n) {
    // Largest N <= 24 keeping the grid at a few thousand points.
    long best = 1;
    for (long N = 1; N <= 24; ++N) {
        mpz_class count;
        mpz_bin_uiui(count.get_mpz_t(), static_cast<unsigned long>(N) + n - 1, n - 1);
        if (count > 5000) break;
        best = N;
    }
    return best;
}

void check_distribution_size(const DiscreteLoss& loss, const Distribution& p) {
    if (p.size() != loss.num_outcomes()) throw InputError("distribution length does not match the outcomes");
}

}  // namespace

PropertyCells::PropertyCells(std::vector<std::string> outcomes, std::vector<Cell> cells,
                             std::optional<Polyhedron> restriction)
    : outcomes_(std::move(outcomes)), restriction_(std::move(restriction)) {
    const std::size_t n = outcomes_.size();
    if (n < 2) throw InputError("a property needs at least two outcomes");
    if (cells.empty()) throw InputError("a property needs at least one cell");
    const Polyhedron dom = restricted_simplex(n, restriction_);
    if (dom.is_empty()) throw InputError("the restriction does not meet the simplex");
    std::set<std::string> labels;
    for (auto& c : cells) {
        if (!labels.insert(c.report).second) throw InputError("duplicate cell label '" + c.report + "'");
        if (c.region.ambient_dim() != n) throw InputError("cell '" + c.report + "' has wrong dimension");
        Polyhedron region = intersect(c.region, dom);
        if (region.is_empty()) throw InputError("cell '" + c.report + "' is empty");
        cells_.push_back(Cell{c.report, std::move(region)});
    }
    for (const auto& p : simplex_grid(n, grid_denominator(n))) {
        if (!dom.contains(p)) continue;
        const bool covered = std::any_of(cells_.begin(), cells_.end(), [&](const Cell& c) { return c.region.contains(p); });
        if (!covered) throw InputError("cells do not cover the grid point " + to_string(p));
    }
}

PropertyCells PropertyCells::certified(std::vector<std::string> outcomes, std::vector<Cell> cells,
                                       std::optional<Polyhedron> restriction) {
    PropertyCells pc;
    pc.outcomes_ = std::move(outcomes);
    pc.cells_ = std::move(cells);
    pc.restriction_ = std::move(restriction);
    pc.certified_ = true;
    return pc;
}

Polyhedron PropertyCells::domain() const { return restricted_simplex(outcomes_.size(), restriction_); }

const Polyhedron& PropertyCells::cell(const std::string& report) const {
    for (const auto& c : cells_) {
        if (c.report == report) return c.region;
    }
    throw InputError("unknown report '" + report + "'");
}

bool PropertyCells::has_report(const std::string& report) const {
    return std::any_of(cells_.begin(), cells_.end(), [&](const Cell& c) { return c.report == report; });
}

std::vector<std::string> PropertyCells::reports_at(const Vec& p) const {
    std::vector<std::string> out;
    for (const auto& c : cells_) {
        if (c.region.contains(p)) out.push_back(c.report);
    }
    return out;
}

std::vector<Vec> simplex_grid(std::size_t n, long denominator) {
    if (n == 0 || denominator <= 0) throw InputError("invalid grid");
    std::vector<Vec> out;
    std::vector<long> counts(n, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i + 1 == n) {
            counts[i] = left;
            Vec p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = Rational(counts[j], denominator);
            out.push_back(std::move(p));
            return;
        }
        for (long c = 0; c <= left; ++c) {
            counts[i] = c;
            self(self, i + 1, left - c);
        }
    };
    rec(rec, 0, denominator);
    return out;
}

Rational expected_loss(const DiscreteLoss& loss, const std::string& report, const Distribution& p) {
    check_distribution_size(loss, p);
    return dot(loss.row(report), p.probs());
}

Rational bayes_risk_at(const DiscreteLoss& loss, const Vec& p) {
    if (p.size() != loss.num_outcomes()) throw InputError("point length does not match the outcomes");
    Rational best = dot(loss.row(0), p);
    for (std::size_t r = 1; r < loss.num_reports(); ++r) best = std::min(best, dot(loss.row(r), p));
    return best;
}

Rational bayes_risk(const DiscreteLoss& loss, const Distribution& p) {
    check_distribution_size(loss, p);
    return bayes_risk_at(loss, p.probs());
}

Rational regret(const DiscreteLoss& loss, const std::string& report, const Distribution& p) {
    return expected_loss(loss, report, p) - bayes_risk(loss, p);
}

std::vector<std::string> argmin_reports(const DiscreteLoss& loss, const Distribution& p) {
    const Rational best = bayes_risk(loss, p);
    std::vector<std::string> out;
    for (std::size_t r = 0; r < loss.num_reports(); ++r) {
        if (dot(loss.row(r), p.probs()) == best) out.push_back(loss.reports()[r]);
    }
    return out;
}

PropertyCells elicited_property(const DiscreteLoss& loss, const std::optional<Polyhedron>& restriction) {
    const std::size_t n = loss.num_outcomes();
    const Polyhedron dom = restricted_simplex(n, restriction);
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < loss.num_reports(); ++r) {
        Polyhedron cell = dom;
        for (std::size_t s = 0; s < loss.num_reports(); ++s) {
            if (s != r) cell.add_inequality(loss.row(r) - loss.row(s), 0);
        }
        if (cell.is_empty()) continue;
        cells.push_back(Cell{loss.reports()[r], remove_redundant(cell)});
    }
    return PropertyCells::certified(loss.outcomes(), std::move(cells), restriction);
}

RiskConstancy bayes_risk_constant_on(const DiscreteLoss& loss, const Polyhedron& region) {
    const std::size_t n = loss.num_outcomes();
    if (region.ambient_dim() != n) throw InputError("region has wrong dimension");
    if (region.is_empty()) throw PreconditionError("Bayes risk constancy on an empty region");
    if (!contains_all(Polyhedron::simplex(n), region)) throw PreconditionError("region must lie inside the simplex");
    const auto vs = vertices(region);

    Vec low = vs.front();
    Rational low_value = bayes_risk_at(loss, low);
    for (const auto& v : vs) {
        const Rational value = bayes_risk_at(loss, v);
        if (value < low_value) {
            low = v;
            low_value = value;
        }
    }

    // max t subject to t <= l(r, .) . p for every r, p in region; variables (p, t).
    Polyhedron lifted(n + 1);
    for (const auto& c : region.inequalities()) {
        Vec a = c.normal;
        a.push_back(0);
        lifted.add_inequality(std::move(a), c.offset);
    }
    for (const auto& c : region.equalities()) {
        Vec a = c.normal;
        a.push_back(0);
        lifted.add_equality(std::move(a), c.offset);
    }
    for (std::size_t r = 0; r < loss.num_reports(); ++r) {
        Vec a = Rational(-1) * loss.row(r);
        a.push_back(1);
        lifted.add_inequality(std::move(a), 0);
    }
    Vec objective = zeros(n + 1);
    objective[n] = 1;
    const auto result = lp_solve(objective, lifted, Sense::Maximize);
    const auto* opt = std::get_if<LpOptimal>(&result);
    if (!opt) throw InvariantError("Bayes risk maximization over a bounded region did not reach an optimum");
    Vec high(opt->point.begin(), opt->point.begin() + static_cast<std::ptrdiff_t>(n));
    if (opt->value == low_value) return RiskConstant{low_value};
    return RiskWitnessPair{std::move(low), low_value, std::move(high), opt->value};
}

Vec separating_hyperplane(const DiscreteLoss& loss, const std::string& r, const std::string& r_prime) {
    if (r == r_prime) throw InputError("separating hyperplane needs two distinct reports");
    return loss.row(r) - loss.row(r_prime);
}

namespace {

struct RecoveryData {
    std::size_t n = 0;
    std::vector<std::vector<Vec>> verts;  // per cell
};

// Loss entries l(r, y) for r in `subset`; margin constraints from cell vertices.
std::optional<Vec> solve_loss_lp(const PropertyCells& cells, const RecoveryData& data,
                                 const std::vector<std::size_t>& subset) {
    const std::size_t n = data.n;
    const std::size_t k = subset.size();
    Polyhedron lp(k * n);
    for (std::size_t a = 0; a < k; ++a) {
        const std::size_t r = subset[a];
        for (const auto& v : data.verts[r]) {
            for (std::size_t b = 0; b < k; ++b) {
                if (a == b) continue;
                Vec row = zeros(k * n);
                for (std::size_t y = 0; y < n; ++y) {
                    row[a * n + y] = v[y];
                    row[b * n + y] = -v[y];
                }
                if (cells.cells()[subset[b]].region.contains(v)) {
                    lp.add_equality(std::move(row), 0);
                } else {
                    lp.add_inequality(std::move(row), -1);
                }
            }
        }
    }
    return feasible_point(lp);
}

}  // namespace

RecoveryResult recover_loss(const PropertyCells& cells) {
    const std::size_t n = cells.num_outcomes();
    if (cells.restriction() && !same_set(cells.domain(), Polyhedron::simplex(n))) {
        throw PreconditionError("loss recovery is only defined for properties on the full simplex");
    }
    RecoveryData data;
    data.n = n;
    for (const auto& c : cells.cells()) {
        if (!is_bounded(c.region)) throw InputError("cell '" + c.report + "' is unbounded");
        data.verts.push_back(vertices(c.region));
    }
    std::vector<std::size_t> all(cells.cells().size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

    const auto solution = solve_loss_lp(cells, data, all);
    if (!solution) {
        // Deletion filter down to a minimal infeasible report set.
        std::vector<std::size_t> core = all;
        for (std::size_t i = 0; i < core.size();) {
            std::vector<std::size_t> trial = core;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
            if (!solve_loss_lp(cells, data, trial)) {
                core = std::move(trial);
            } else {
                ++i;
            }
        }
        NotElicitable out;
        for (auto i : core) out.conflict.push_back(cells.cells()[i].report);
        out.reason = "no loss separates these cells at their shared vertices";
        return out;
    }

    std::vector<std::string> reports;
    std::vector<Vec> matrix;
    for (std::size_t r = 0; r < all.size(); ++r) {
        reports.push_back(cells.cells()[r].report);
        matrix.emplace_back(solution->begin() + static_cast<std::ptrdiff_t>(r * n),
                            solution->begin() + static_cast<std::ptrdiff_t>((r + 1) * n));
    }
    // Shift every outcome column to a zero minimum; argmins are unchanged.
    for (std::size_t y = 0; y < n; ++y) {
        Rational low = matrix[0][y];
        for (const auto& row : matrix) low = std::min(low, row[y]);
        for (auto& row : matrix) row[y] -= low;
    }
    DiscreteLoss loss(std::move(reports), cells.outcomes(), std::move(matrix));

    const PropertyCells round = elicited_property(loss);
    for (const auto& c : cells.cells()) {
        if (!round.has_report(c.report)) {
            return NotElicitable{{c.report}, "recovered loss never selects this report"};
        }
        if (!same_set(round.cell(c.report), c.region)) {
            // Name a second report whose cell overlaps the mismatch, for context.
            std::vector<std::string> pair{c.report};
            const auto v = polyhedron_contains(c.region, round.cell(c.report));
            if (const auto* viol = std::get_if<Violation>(&v)) {
                for (const auto& r : cells.reports_at(viol->point)) {
                    if (r != c.report) {
                        pair.push_back(r);
                        break;
                    }
                }
            }
            return NotElicitable{pair, "round trip through the recovered loss changes this cell"};
        }
    }
    return Found{std::move(loss)};
}

}  // namespace flatbound

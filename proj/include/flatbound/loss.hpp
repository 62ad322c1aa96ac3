#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "flatbound/polyhedron.hpp"
#include "flatbound/rational.hpp"

namespace flatbound {

/// Probability vector over an ordered outcome set.
class Distribution {
public:
    /// Throws InputError unless every entry is >= 0 and the entries sum to 1.
    explicit Distribution(Vec probs);

    const Vec& probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    const Rational& operator[](std::size_t i) const { return probs_[i]; }
    std::size_t support_size() const;

private:
    Vec probs_;
};

/// Loss matrix l(r, y) over labelled reports and outcomes.
class DiscreteLoss {
public:
    DiscreteLoss(std::vector<std::string> reports, std::vector<std::string> outcomes, std::vector<Vec> matrix);

    const std::vector<std::string>& reports() const noexcept { return reports_; }
    const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
    const std::vector<Vec>& matrix() const noexcept { return matrix_; }
    std::size_t num_reports() const noexcept { return reports_.size(); }
    std::size_t num_outcomes() const noexcept { return outcomes_.size(); }

    std::size_t report_index(const std::string& label) const;
    const Vec& row(std::size_t r) const { return matrix_.at(r); }
    const Vec& row(const std::string& label) const { return matrix_[report_index(label)]; }

private:
    std::vector<std::string> reports_;
    std::vector<std::string> outcomes_;
    std::vector<Vec> matrix_;
};

struct Cell {
    std::string report;
    Polyhedron region;
};

/// A (closed, possibly overlapping) level-set description of a property.
/// Every cell lies inside the simplex and inside the restriction when one is
/// given.
class PropertyCells {
public:
    /// Validates user-supplied cells: simplex constraints are added, every cell
    /// must be nonempty and the union must cover the restricted simplex on a
    /// rational grid. Throws InputError otherwise.
    PropertyCells(std::vector<std::string> outcomes, std::vector<Cell> cells,
                  std::optional<Polyhedron> restriction = std::nullopt);

    /// Cells produced from a loss; coverage holds by construction.
    static PropertyCells certified(std::vector<std::string> outcomes, std::vector<Cell> cells,
                                   std::optional<Polyhedron> restriction);

    const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    const std::optional<Polyhedron>& restriction() const noexcept { return restriction_; }
    std::size_t num_outcomes() const noexcept { return outcomes_.size(); }
    bool coverage_certified() const noexcept { return certified_; }

    /// The set P = simplex intersected with the restriction.
    Polyhedron domain() const;
    const Polyhedron& cell(const std::string& report) const;
    bool has_report(const std::string& report) const;
    /// Reports whose cell contains p, in cell order.
    std::vector<std::string> reports_at(const Vec& p) const;

private:
    PropertyCells() = default;

    std::vector<std::string> outcomes_;
    std::vector<Cell> cells_;
    std::optional<Polyhedron> restriction_;
    bool certified_ = false;
};

/// All points of the simplex over n outcomes whose entries are multiples of 1/denominator.
std::vector<Vec> simplex_grid(std::size_t n, long denominator);

Rational expected_loss(const DiscreteLoss& loss, const std::string& report, const Distribution& p);
Rational regret(const DiscreteLoss& loss, const std::string& report, const Distribution& p);
Rational bayes_risk(const DiscreteLoss& loss, const Distribution& p);
/// Bayes risk at an arbitrary point (not necessarily a distribution).
Rational bayes_risk_at(const DiscreteLoss& loss, const Vec& p);
/// Reports attaining the Bayes risk at p.
std::vector<std::string> argmin_reports(const DiscreteLoss& loss, const Distribution& p);

/// Level sets of argmin expected loss, optionally restricted to P. Empty
/// cells are dropped; lower-dimensional cells are kept.
PropertyCells elicited_property(const DiscreteLoss& loss, const std::optional<Polyhedron>& restriction = std::nullopt);

struct RiskConstant {
    Rational value;
};
struct RiskWitnessPair {
    Vec low_point;
    Rational low_value;
    Vec high_point;
    Rational high_value;
};
using RiskConstancy = std::variant<RiskConstant, RiskWitnessPair>;

/// Decides whether the Bayes risk is constant on a bounded region of the
/// simplex: the minimum is taken over vertices, the maximum by LP.
RiskConstancy bayes_risk_constant_on(const DiscreteLoss& loss, const Polyhedron& region);

/// l(r, .) - l(r', .).
Vec separating_hyperplane(const DiscreteLoss& loss, const std::string& r, const std::string& r_prime);

struct Found {
    DiscreteLoss loss;
};
struct NotElicitable {
    /// A minimal set of reports whose cells cannot be jointly elicited, or the
    /// pair whose round-tripped cells disagree.
    std::vector<std::string> conflict;
    std::string reason;
};
using RecoveryResult = std::variant<Found, NotElicitable>;

/// Searches for a loss eliciting exactly the given cells (P must be the full
/// simplex). Throws InputError for unbounded cells and PreconditionError for a
/// proper restriction.
RecoveryResult recover_loss(const PropertyCells& cells);

}  // namespace flatbound

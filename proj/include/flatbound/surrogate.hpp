#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flatbound/flats.hpp"
#include "flatbound/loss.hpp"
#include "flatbound/polyhedron.hpp"

namespace flatbound {

struct AffinePiece {
    Vec gradient;
    Rational intercept;
};

/// L(u, y) = max over the pieces of y of gradient . u + intercept, u in R^d.
class PolyhedralSurrogate {
public:
    /// Throws InputError on malformed pieces and InvariantError when some
    /// L(., y) is unbounded below (then some distribution has no minimizer).
    PolyhedralSurrogate(std::size_t dim, std::vector<std::string> outcomes, std::vector<std::vector<AffinePiece>> pieces);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
    std::size_t num_outcomes() const noexcept { return outcomes_.size(); }
    const std::vector<AffinePiece>& pieces(std::size_t y) const { return pieces_.at(y); }

    Rational value(const Vec& u, std::size_t y) const;
    Rational expected(const Vec& u, const Vec& p) const;
    /// Indices of the pieces of y attaining the max at u.
    std::vector<std::size_t> active(const Vec& u, std::size_t y) const;

private:
    std::size_t dim_;
    std::vector<std::string> outcomes_;
    std::vector<std::vector<AffinePiece>> pieces_;
};

struct LinkRegion {
    Polyhedron region;
    std::string report;
};

/// Region map from R^d to reports; the first region containing u wins, and
/// points in no region map to the default report.
class Link {
public:
    Link(std::size_t dim, std::vector<LinkRegion> regions, std::string default_report);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<LinkRegion>& regions() const noexcept { return regions_; }
    const std::string& default_report() const noexcept { return default_; }
    const std::string& operator()(const Vec& u) const;

private:
    std::size_t dim_;
    std::vector<LinkRegion> regions_;
    std::string default_;
};

/// The optimal value of the expected surrogate loss at p.
Rational surrogate_min_value(const PolyhedralSurrogate& L, const Distribution& p);

/// argmin_u E_p L(u, Y) as a polyhedron in R^d.
Polyhedron surrogate_minimizers(const PolyhedralSurrogate& L, const Distribution& p);

/// { p in the simplex : u minimizes E_p L }.
Polyhedron surrogate_level_set(const PolyhedralSurrogate& L, const Vec& u);

/// A flat through p inside the level set of u, from one subgradient selection
/// x_y with sum_y p_y x_y = 0. Throws PreconditionError when u is not a minimizer.
Flat extract_witness_flat(const PolyhedralSurrogate& L, const Vec& u, const Distribution& p);

struct IndirectViolation {
    Vec u;
    Vec p;
    std::vector<std::string> expected;  // reports of the target at p
    std::string got;                    // link value at u
};

enum class Exhaustiveness { CompleteOverPieceComplex, Sampled };

struct IndirectElicitationReport {
    std::vector<IndirectViolation> violations;  // sorted by (u, p)
    std::size_t probes = 0;
    std::vector<Vec> probe_points;
    std::vector<std::string> provenance;
    Exhaustiveness exhaustiveness = Exhaustiveness::Sampled;

    bool violation_found() const noexcept { return !violations.empty(); }
};

/// Checks that every surrogate level set lies inside the target cell of its
/// linked report. With d <= 2 every face of the joint arrangement of piece
/// boundaries and link boundaries is probed, which is complete; otherwise up
/// to `probe_budget` sampled points are used.
IndirectElicitationReport check_indirect_elicitation(const PolyhedralSurrogate& L, const Link& psi,
                                                     const PropertyCells& target, std::size_t probe_budget = 200);

/// Re-runs both checks behind a violation record.
bool verify_violation(const PolyhedralSurrogate& L, const Link& psi, const PropertyCells& target,
                      const IndirectViolation& v);

std::string to_string(Exhaustiveness e);

}  // namespace flatbound

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flatbound/loss.hpp"
#include "flatbound/polyhedron.hpp"

namespace flatbound {

/// F = { q in P : W_j . q = 0 for every column j }, where P is the simplex,
/// intersected with `domain` when one is given.
struct Flat {
    std::vector<std::string> outcomes;
    std::vector<Vec> columns;
    std::optional<Polyhedron> domain;

    std::size_t constraint_count() const noexcept { return columns.size(); }
};

Polyhedron flat_polyhedron(const Flat& flat);

struct Certified {};
struct NotOnFlat {};
using FlatCertificate = std::variant<Certified, NotOnFlat, Violation>;

/// p lies on the flat and the whole flat lies inside `cell`.
FlatCertificate certify_flat(const Flat& flat, const Vec& p, const Polyhedron& cell);
bool is_certified(const FlatCertificate& c);

enum class SearchStatus { CertifiedExhaustive, Heuristic };

struct FlatSearch {
    std::size_t k = 0;           // geometric dimension of the witness
    std::size_t face_dim = 0;    // dimension of the smallest face of P containing p
    std::size_t fsd_dim = 0;     // dimension of the feasible direction subspace inside that face
    bool face_column = false;    // witness carries one extra column pinning the face
    Flat witness;
    SearchStatus status = SearchStatus::CertifiedExhaustive;
};

/// Largest certified flat through p inside `cell`, searched within the
/// smallest face of P (simplex, optionally restricted by `domain`) that holds p.
/// Throws PreconditionError if p is outside the cell or outside P.
FlatSearch max_flat_dimension(const Vec& p, const Polyhedron& cell,
                              const std::optional<Polyhedron>& domain = std::nullopt,
                              std::vector<std::string> outcomes = {});

enum class Corollary { SingleValued, ElicitableInterior, Neither };

struct BoundReport {
    std::string target;
    Vec p;
    std::string r;
    Corollary corollary = Corollary::Neither;
    std::vector<std::string> checks;  // human-readable record of the routing decisions
    std::optional<std::size_t> flat_bound;
    std::optional<FlatSearch> search;
    std::size_t fsd_bound = 0;
};

/// Lower bound on the dimension of any convex surrogate indirectly eliciting
/// the target, from the largest flat through p in the cell of r. `elicitable`
/// short-circuits the elicitability check when the caller already knows (for
/// example because the target came from a loss); otherwise recover_loss decides.
BoundReport flat_lower_bound(const PropertyCells& target, const Distribution& p, const std::string& r,
                             std::optional<bool> elicitable = std::nullopt, std::string target_name = {});

/// Feasible-subspace bound: face dimension minus the feasible direction
/// dimension of the cell restricted to that face, clamped at 0.
std::size_t fsd_lower_bound(const PropertyCells& target, const Distribution& p, const std::string& r);

/// Origin lies in the interior of { (V_j . p)_j : p in restriction and simplex }.
bool condition_v_interior(const Flat& v, const std::optional<Polyhedron>& restriction);

struct NotApplicable {
    std::string reason;
};
using RiskBound = std::variant<std::size_t, NotApplicable>;

/// Lower bound d + 1 on the surrogate dimension for the Bayes risk of `loss`,
/// where `level_flat` has d columns, or the first hypothesis that fails.
RiskBound bayes_risk_bound(const DiscreteLoss& loss, const Flat& level_flat,
                           const std::optional<Polyhedron>& restriction = std::nullopt);

std::string to_string(SearchStatus s);
std::string to_string(Corollary c);

}  // namespace flatbound

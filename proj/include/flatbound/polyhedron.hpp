#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "flatbound/linalg.hpp"
#include "flatbound/rational.hpp"

namespace flatbound {

/// normal . x <= offset (inequality) or normal . x = offset (equality).
struct Constraint {
    Vec normal;
    Rational offset;

    Rational slack(const Vec& x) const { return offset - dot(normal, x); }
    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// H-representation of a convex polyhedron in R^n. Possibly empty; consumers
/// that need a nonempty set must check with `is_empty`.
class Polyhedron {
public:
    explicit Polyhedron(std::size_t ambient_dim) : dim_(ambient_dim) {}
    Polyhedron(std::size_t ambient_dim, std::vector<Constraint> inequalities,
               std::vector<Constraint> equalities = {});

    /// The probability simplex { x >= 0, sum x = 1 } in R^n.
    static Polyhedron simplex(std::size_t n);

    std::size_t ambient_dim() const noexcept { return dim_; }
    const std::vector<Constraint>& inequalities() const noexcept { return ineq_; }
    const std::vector<Constraint>& equalities() const noexcept { return eq_; }

    Polyhedron& add_inequality(Vec normal, Rational offset);
    Polyhedron& add_equality(Vec normal, Rational offset);
    /// Adds every constraint of `other` (same ambient dimension).
    Polyhedron& intersect_with(const Polyhedron& other);
    friend Polyhedron intersect(Polyhedron a, const Polyhedron& b) { return std::move(a.intersect_with(b)); }

    bool contains(const Vec& x) const;
    bool is_empty() const;

    friend bool operator==(const Polyhedron&, const Polyhedron&) = default;

private:
    std::size_t dim_;
    std::vector<Constraint> ineq_;
    std::vector<Constraint> eq_;
};

// ---------------------------------------------------------------------------
// Linear programming

enum class Sense { Minimize, Maximize };

struct LpOptimal {
    Rational value;
    Vec point;
};
struct LpUnbounded {};
struct LpInfeasible {};
using LpResult = std::variant<LpOptimal, LpUnbounded, LpInfeasible>;

/// Exact two-phase simplex with Bland's rule over the rationals. Variables
/// are free; all structure comes from `region`.
LpResult lp_solve(const Vec& objective, const Polyhedron& region, Sense sense);

/// Any point of the region, or nullopt when empty.
std::optional<Vec> feasible_point(const Polyhedron& region);

// ---------------------------------------------------------------------------
// Polyhedral primitives

/// { v : p + eps v in region for all small |eps| }, the kernel of the
/// equality normals and the inequality normals active at p.
Subspace feasible_direction_subspace(const Polyhedron& region, const Vec& p);

/// True when every coordinate is bounded above and below over the region.
bool is_bounded(const Polyhedron& region);

/// Exact vertex list of a bounded polyhedron, deduplicated and sorted
/// lexicographically. Empty for an empty region.
std::vector<Vec> vertices(const Polyhedron& region);

struct Contained {};
struct Violation {
    Vec point;  // point of `inner` outside `outer`
};
using ContainmentResult = std::variant<Contained, Violation>;

/// Decides inner subset-of outer by one LP per outer constraint.
ContainmentResult polyhedron_contains(const Polyhedron& outer, const Polyhedron& inner);
bool contains_all(const Polyhedron& outer, const Polyhedron& inner);
bool same_set(const Polyhedron& a, const Polyhedron& b);

/// p lies in the relative interior of the region. Throws when p is outside.
bool relint_contains(const Polyhedron& region, const Vec& p);

/// Smallest face of `region` that contains p: every inequality tight at p is
/// promoted to an equality.
Polyhedron minimal_face(const Polyhedron& region, const Vec& p);

/// Dimension of the affine hull of a nonempty region.
std::size_t affine_dimension(const Polyhedron& region);

/// Fourier-Motzkin projection onto the coordinates listed in `keep` (in that
/// order). Equalities are eliminated by substitution first; redundant
/// inequalities are pruned by LP after every elimination step.
Polyhedron project(const Polyhedron& region, const std::vector<std::size_t>& keep);

/// Drops inequalities that are implied by the rest (LP check) and duplicates.
Polyhedron remove_redundant(const Polyhedron& region);

// ---------------------------------------------------------------------------
// Hyperplane arrangements

/// Affine hyperplane normal . x = offset.
using Hyperplane = Constraint;

struct ArrangementFace {
    std::vector<int> signs;  // sign of normal . x - offset per hyperplane
    Vec point;               // a point in the relative interior of the face
};

/// Every nonempty face of the arrangement, found by depth-first sign-vector
/// search with one LP feasibility check per partial sign vector. With
/// `central_nonzero` the hyperplanes must pass through the origin; the zero
/// face is skipped and only one of each antipodal pair (first nonzero sign
/// positive) is returned.
std::vector<ArrangementFace> arrangement_faces(const std::vector<Hyperplane>& hyperplanes,
                                               std::size_t dim, bool central_nonzero = false);

}  // namespace flatbound

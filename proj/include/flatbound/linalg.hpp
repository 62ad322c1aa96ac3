#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "flatbound/rational.hpp"

namespace flatbound {

using Matrix = std::vector<Vec>;  // row-major, every row of equal length

/// Linear subspace of R^n given by a basis of linearly independent vectors.
class Subspace {
public:
    Subspace(std::size_t ambient_dim, std::vector<Vec> basis);

    static Subspace full(std::size_t ambient_dim);
    static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim, {}); }

    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<Vec>& basis() const noexcept { return basis_; }

    bool contains(const Vec& v) const;
    /// { v in this : a . v = 0 for every row a }.
    Subspace intersect_kernel(const Matrix& rows) const;
    Subspace intersect(const Subspace& other) const;
    /// Basis of the orthogonal complement.
    std::vector<Vec> complement_basis() const;

private:
    std::size_t ambient_dim_;
    std::vector<Vec> basis_;
};

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(Matrix& m, std::size_t cols);

std::size_t rank(const Matrix& rows, std::size_t cols);

/// Exact null space { x : rows * x = 0 } of a matrix with `cols` columns.
Subspace kernel(const Matrix& rows, std::size_t cols);

/// Unique solution of rows * x = rhs when the system has full column rank and
/// is consistent; nullopt otherwise.
std::optional<Vec> solve_unique(const Matrix& rows, const Vec& rhs, std::size_t cols);

/// Indices of a maximal linearly independent subset of `vectors`, greedy in
/// the given order.
std::vector<std::size_t> independent_subset(const std::vector<Vec>& vectors, std::size_t cols);

}  // namespace flatbound

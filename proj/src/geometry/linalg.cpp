#include "flatbound/linalg.hpp"

#include "flatbound/errors.hpp"

namespace flatbound {

namespace {

void check_rows(const Matrix& rows, std::size_t cols) {
    for (const auto& r : rows) {
        if (r.size() != cols) throw InputError("matrix rows must share a common dimension");
    }
}

}  // namespace

std::vector<std::size_t> row_reduce(Matrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col].is_zero()) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        const Rational inv = Rational(1) / m[row][col];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].is_zero()) continue;
            const Rational f = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c) {
                if (!m[row][c].is_zero()) m[r][c] -= f * m[row][c];
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(const Matrix& rows, std::size_t cols) {
    check_rows(rows, cols);
    Matrix m = rows;
    return row_reduce(m, cols).size();
}

Subspace kernel(const Matrix& rows, std::size_t cols) {
    check_rows(rows, cols);
    Matrix m = rows;
    const auto pivots = row_reduce(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec v = zeros(cols);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
        basis.push_back(std::move(v));
    }
    return Subspace(cols, std::move(basis));
}

std::optional<Vec> solve_unique(const Matrix& rows, const Vec& rhs, std::size_t cols) {
    check_rows(rows, cols);
    if (rhs.size() != rows.size()) throw InputError("right-hand side length mismatch");
    Matrix m;
    m.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Vec r = rows[i];
        r.push_back(rhs[i]);
        m.push_back(std::move(r));
    }
    const auto pivots = row_reduce(m, cols + 1);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;  // inconsistent
    if (pivots.size() != cols) return std::nullopt;
    Vec x(cols);
    for (std::size_t i = 0; i < cols; ++i) x[pivots[i]] = m[i][cols];
    return x;
}

std::vector<std::size_t> independent_subset(const std::vector<Vec>& vectors, std::size_t cols) {
    std::vector<std::size_t> chosen;
    Matrix acc;
    std::size_t current = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        acc.push_back(vectors[i]);
        const std::size_t r = rank(acc, cols);
        if (r > current) {
            current = r;
            chosen.push_back(i);
        } else {
            acc.pop_back();
        }
    }
    return chosen;
}

Subspace::Subspace(std::size_t ambient_dim, std::vector<Vec> basis) : ambient_dim_(ambient_dim) {
    for (const auto& b : basis) {
        if (b.size() != ambient_dim) throw InputError("subspace basis vector has wrong dimension");
    }
    for (auto i : independent_subset(basis, ambient_dim)) basis_.push_back(basis[i]);
}

Subspace Subspace::full(std::size_t ambient_dim) {
    std::vector<Vec> b;
    for (std::size_t i = 0; i < ambient_dim; ++i) b.push_back(unit(ambient_dim, i));
    return Subspace(ambient_dim, std::move(b));
}

bool Subspace::contains(const Vec& v) const {
    Matrix m = basis_;
    m.push_back(v);
    return rank(m, ambient_dim_) == basis_.size();
}

Subspace Subspace::intersect_kernel(const Matrix& rows) const {
    // v = B c with a . (B c) = 0 for each row a.
    Matrix reduced;
    for (const auto& a : rows) {
        Vec r(basis_.size());
        for (std::size_t j = 0; j < basis_.size(); ++j) r[j] = dot(a, basis_[j]);
        reduced.push_back(std::move(r));
    }
    const Subspace coeffs = kernel(reduced, basis_.size());
    std::vector<Vec> out;
    for (const auto& c : coeffs.basis()) {
        Vec v = zeros(ambient_dim_);
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            if (!c[j].is_zero()) v = v + c[j] * basis_[j];
        }
        out.push_back(std::move(v));
    }
    return Subspace(ambient_dim_, std::move(out));
}

Subspace Subspace::intersect(const Subspace& other) const {
    return intersect_kernel(other.complement_basis());
}

std::vector<Vec> Subspace::complement_basis() const {
    return kernel(basis_, ambient_dim_).basis();
}

}  // namespace flatbound

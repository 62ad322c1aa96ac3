#include "flatbound/polyhedron.hpp"

#include <algorithm>
#include <set>

#include "flatbound/errors.hpp"

namespace flatbound {

namespace {

void check_dim(const Constraint& c, std::size_t n) {
    if (c.normal.size() != n) throw InputError("constraint normal has wrong dimension");
}

const LpOptimal* optimal(const LpResult& r) { return std::get_if<LpOptimal>(&r); }

}  // namespace

Polyhedron::Polyhedron(std::size_t ambient_dim, std::vector<Constraint> inequalities,
                       std::vector<Constraint> equalities)
    : dim_(ambient_dim), ineq_(std::move(inequalities)), eq_(std::move(equalities)) {
    for (const auto& c : ineq_) check_dim(c, dim_);
    for (const auto& c : eq_) check_dim(c, dim_);
}

Polyhedron Polyhedron::simplex(std::size_t n) {
    Polyhedron p(n);
    for (std::size_t i = 0; i < n; ++i) p.add_inequality(Rational(-1) * unit(n, i), 0);
    p.add_equality(ones(n), 1);
    return p;
}

Polyhedron& Polyhedron::add_inequality(Vec normal, Rational offset) {
    Constraint c{std::move(normal), std::move(offset)};
    check_dim(c, dim_);
    ineq_.push_back(std::move(c));
    return *this;
}

Polyhedron& Polyhedron::add_equality(Vec normal, Rational offset) {
    Constraint c{std::move(normal), std::move(offset)};
    check_dim(c, dim_);
    eq_.push_back(std::move(c));
    return *this;
}

Polyhedron& Polyhedron::intersect_with(const Polyhedron& other) {
    if (other.dim_ != dim_) throw InputError("intersecting polyhedra of different dimensions");
    ineq_.insert(ineq_.end(), other.ineq_.begin(), other.ineq_.end());
    eq_.insert(eq_.end(), other.eq_.begin(), other.eq_.end());
    return *this;
}

bool Polyhedron::contains(const Vec& x) const {
    if (x.size() != dim_) throw InputError("point has wrong dimension");
    for (const auto& c : ineq_) {
        if (c.slack(x).sign() < 0) return false;
    }
    for (const auto& c : eq_) {
        if (!c.slack(x).is_zero()) return false;
    }
    return true;
}

bool Polyhedron::is_empty() const { return !feasible_point(*this).has_value(); }

Subspace feasible_direction_subspace(const Polyhedron& region, const Vec& p) {
    if (!region.contains(p)) throw PreconditionError("point " + to_string(p) + " is not in the region");
    Matrix rows;
    for (const auto& c : region.equalities()) rows.push_back(c.normal);
    for (const auto& c : region.inequalities()) {
        if (c.slack(p).is_zero()) rows.push_back(c.normal);
    }
    return kernel(rows, region.ambient_dim());
}

bool is_bounded(const Polyhedron& region) {
    const std::size_t n = region.ambient_dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (Sense s : {Sense::Minimize, Sense::Maximize}) {
            const auto r = lp_solve(unit(n, i), region, s);
            if (std::holds_alternative<LpInfeasible>(r)) return true;
            if (std::holds_alternative<LpUnbounded>(r)) return false;
        }
    }
    return true;
}

std::vector<Vec> vertices(const Polyhedron& region) {
    const std::size_t n = region.ambient_dim();
    if (region.is_empty()) return {};
    if (!is_bounded(region)) throw PreconditionError("vertex enumeration needs a bounded polyhedron");
    Matrix eq_rows;
    Vec eq_rhs;
    for (const auto& c : region.equalities()) {
        eq_rows.push_back(c.normal);
        eq_rhs.push_back(c.offset);
    }
    const std::size_t eq_rank = rank(eq_rows, n);
    const std::size_t need = n - eq_rank;
    const auto& ineq = region.inequalities();
    std::vector<Vec> out;
    std::set<Vec> seen;
    if (need > ineq.size()) return {};

    // Choose `need` inequalities to make tight; walk all subsets in lexicographic order.
    std::vector<std::size_t> idx(need);
    for (std::size_t i = 0; i < need; ++i) idx[i] = i;
    for (;;) {
        Matrix rows = eq_rows;
        Vec rhs = eq_rhs;
        for (auto i : idx) {
            rows.push_back(ineq[i].normal);
            rhs.push_back(ineq[i].offset);
        }
        if (auto x = solve_unique(rows, rhs, n); x && region.contains(*x) && seen.insert(*x).second) {
            out.push_back(std::move(*x));
        }
        // next combination
        std::size_t k = need;
        while (k > 0 && idx[k - 1] == ineq.size() - need + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < need; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

ContainmentResult polyhedron_contains(const Polyhedron& outer, const Polyhedron& inner) {
    if (outer.ambient_dim() != inner.ambient_dim()) throw InputError("containment between different dimensions");
    if (inner.is_empty()) return Contained{};
    auto escape = [&](const Vec& normal, const Rational& bound, bool upper) -> std::optional<Vec> {
        // A point of inner with normal . x > bound (upper) or < bound (lower).
        const auto r = lp_solve(normal, inner, upper ? Sense::Maximize : Sense::Minimize);
        if (const auto* o = optimal(r)) {
            const bool bad = upper ? o->value > bound : o->value < bound;
            if (bad) return o->point;
            return std::nullopt;
        }
        Polyhedron probe = inner;
        if (upper) {
            probe.add_inequality(Rational(-1) * normal, -(bound + 1));
        } else {
            probe.add_inequality(normal, bound - 1);
        }
        auto x = feasible_point(probe);
        if (!x) throw InvariantError("unbounded LP without an escaping point");
        return x;
    };
    for (const auto& c : outer.inequalities()) {
        if (auto x = escape(c.normal, c.offset, true)) return Violation{std::move(*x)};
    }
    for (const auto& c : outer.equalities()) {
        if (auto x = escape(c.normal, c.offset, true)) return Violation{std::move(*x)};
        if (auto x = escape(c.normal, c.offset, false)) return Violation{std::move(*x)};
    }
    return Contained{};
}

bool contains_all(const Polyhedron& outer, const Polyhedron& inner) {
    return std::holds_alternative<Contained>(polyhedron_contains(outer, inner));
}

bool same_set(const Polyhedron& a, const Polyhedron& b) { return contains_all(a, b) && contains_all(b, a); }

bool relint_contains(const Polyhedron& region, const Vec& p) {
    if (!region.contains(p)) throw PreconditionError("point " + to_string(p) + " is not in the region");
    for (const auto& c : region.inequalities()) {
        if (!c.slack(p).is_zero()) continue;
        const auto r = lp_solve(c.normal, region, Sense::Minimize);
        const auto* o = optimal(r);
        if (!o || o->value < c.offset) return false;
    }
    return true;
}

Polyhedron minimal_face(const Polyhedron& region, const Vec& p) {
    if (!region.contains(p)) throw PreconditionError("point " + to_string(p) + " is not in the region");
    Polyhedron face(region.ambient_dim(), {}, region.equalities());
    for (const auto& c : region.inequalities()) {
        if (c.slack(p).is_zero()) {
            face.add_equality(c.normal, c.offset);
        } else {
            face.add_inequality(c.normal, c.offset);
        }
    }
    return face;
}

std::size_t affine_dimension(const Polyhedron& region) {
    const std::size_t n = region.ambient_dim();
    if (region.is_empty()) throw PreconditionError("affine dimension of an empty region");
    Matrix rows;
    for (const auto& c : region.equalities()) rows.push_back(c.normal);
    for (const auto& c : region.inequalities()) {
        const auto r = lp_solve(c.normal, region, Sense::Minimize);
        if (const auto* o = optimal(r); o && o->value == c.offset) rows.push_back(c.normal);
    }
    return n - rank(rows, n);
}

namespace {

// Positive rescaling to coprime integers; keeps offset in step.
Constraint canonical(const Constraint& c) {
    Vec all = c.normal;
    all.push_back(c.offset);
    if (is_zero(all)) return c;
    Vec scaled = normalize_direction(all, true);
    Rational off = scaled.back();
    scaled.pop_back();
    return Constraint{std::move(scaled), std::move(off)};
}

Polyhedron infeasible_marker(std::size_t n) {
    Polyhedron p(n);
    p.add_inequality(zeros(n), -1);
    return p;
}

}  // namespace

Polyhedron remove_redundant(const Polyhedron& region) {
    const std::size_t n = region.ambient_dim();
    if (region.is_empty()) return infeasible_marker(n);
    std::vector<Constraint> ineq;
    std::set<std::pair<Vec, Rational>> seen;
    for (const auto& c : region.inequalities()) {
        if (is_zero(c.normal)) continue;  // 0 <= b with b >= 0 since region is nonempty
        Constraint k = canonical(c);
        if (seen.insert({k.normal, k.offset}).second) ineq.push_back(std::move(k));
    }
    std::vector<Constraint> eq;
    {
        Matrix acc;
        for (const auto& c : region.equalities()) {
            if (is_zero(c.normal)) continue;
            Vec row = c.normal;
            row.push_back(c.offset);
            acc.push_back(row);
            if (rank(acc, n + 1) < acc.size()) {
                acc.pop_back();
                continue;
            }
            eq.push_back(canonical(c));
        }
    }
    for (std::size_t i = 0; i < ineq.size();) {
        Polyhedron rest(n, {}, eq);
        for (std::size_t j = 0; j < ineq.size(); ++j) {
            if (j != i) rest.add_inequality(ineq[j].normal, ineq[j].offset);
        }
        const auto r = lp_solve(ineq[i].normal, rest, Sense::Maximize);
        const auto* o = optimal(r);
        if (o && o->value <= ineq[i].offset) {
            ineq.erase(ineq.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return Polyhedron(n, std::move(ineq), std::move(eq));
}

Polyhedron project(const Polyhedron& region, const std::vector<std::size_t>& keep) {
    const std::size_t n = region.ambient_dim();
    std::vector<bool> kept(n, false);
    for (auto k : keep) {
        if (k >= n || kept[k]) throw InputError("invalid projection coordinates");
        kept[k] = true;
    }
    if (region.is_empty()) return infeasible_marker(keep.size());

    std::vector<Constraint> ineq = region.inequalities();
    std::vector<Constraint> eq = region.equalities();

    // Substitute equalities for eliminated coordinates.
    for (std::size_t var = 0; var < n; ++var) {
        if (kept[var]) continue;
        auto it = std::find_if(eq.begin(), eq.end(), [&](const Constraint& c) { return !c.normal[var].is_zero(); });
        if (it == eq.end()) continue;
        Constraint piv = *it;
        eq.erase(it);
        const Rational a = piv.normal[var];
        auto substitute = [&](Constraint& c) {
            if (c.normal[var].is_zero()) return;
            const Rational f = c.normal[var] / a;
            c.normal = c.normal - f * piv.normal;
            c.offset -= f * piv.offset;
            c.normal[var] = 0;
        };
        for (auto& c : ineq) substitute(c);
        for (auto& c : eq) substitute(c);
    }

    for (std::size_t var = 0; var < n; ++var) {
        if (kept[var]) continue;
        std::vector<Constraint> pos, neg, next;
        for (auto& c : ineq) {
            const int s = c.normal[var].sign();
            if (s > 0) {
                pos.push_back(std::move(c));
            } else if (s < 0) {
                neg.push_back(std::move(c));
            } else {
                next.push_back(std::move(c));
            }
        }
        for (const auto& p : pos) {
            for (const auto& q : neg) {
                const Rational cp = p.normal[var];
                const Rational cq = -q.normal[var];
                Constraint c{cq * p.normal + cp * q.normal, cq * p.offset + cp * q.offset};
                c.normal[var] = 0;
                next.push_back(std::move(c));
            }
        }
        Polyhedron step = remove_redundant(Polyhedron(n, std::move(next), eq));
        ineq = step.inequalities();
        eq = step.equalities();
    }

    auto restrict = [&](const Constraint& c) {
        Vec v;
        v.reserve(keep.size());
        for (auto k : keep) v.push_back(c.normal[k]);
        return Constraint{std::move(v), c.offset};
    };
    Polyhedron out(keep.size());
    for (const auto& c : ineq) {
        auto r = restrict(c);
        out.add_inequality(std::move(r.normal), std::move(r.offset));
    }
    for (const auto& c : eq) {
        auto r = restrict(c);
        out.add_equality(std::move(r.normal), std::move(r.offset));
    }
    return remove_redundant(out);
}

std::vector<ArrangementFace> arrangement_faces(const std::vector<Hyperplane>& hyperplanes, std::size_t dim,
                                               bool central_nonzero) {
    for (const auto& h : hyperplanes) {
        check_dim(h, dim);
        if (central_nonzero && !h.offset.is_zero()) throw InputError("central arrangement needs linear hyperplanes");
    }
    std::vector<ArrangementFace> out;
    std::vector<int> signs;

    // Variables (x, s); maximize s subject to the partial sign pattern and s <= 1.
    auto probe = [&]() -> std::optional<Vec> {
        Polyhedron lp(dim + 1);
        Vec s_up = zeros(dim + 1);
        s_up[dim] = 1;
        lp.add_inequality(s_up, 1);
        bool strict = false;
        for (std::size_t i = 0; i < signs.size(); ++i) {
            Vec a = hyperplanes[i].normal;
            a.push_back(0);
            if (signs[i] == 0) {
                lp.add_equality(std::move(a), hyperplanes[i].offset);
                continue;
            }
            strict = true;
            if (signs[i] > 0) {
                a = Rational(-1) * a;
                a[dim] = 1;
                lp.add_inequality(std::move(a), -hyperplanes[i].offset);
            } else {
                a[dim] = 1;
                lp.add_inequality(std::move(a), hyperplanes[i].offset);
            }
        }
        const auto r = lp_solve(s_up, lp, Sense::Maximize);
        const auto* o = optimal(r);
        if (!o) return std::nullopt;
        if (strict && o->value.sign() <= 0) return std::nullopt;
        Vec x(o->point.begin(), o->point.begin() + static_cast<std::ptrdiff_t>(dim));
        return x;
    };

    auto dfs = [&](auto&& self, bool all_zero) -> void {
        if (signs.size() == hyperplanes.size()) {
            if (central_nonzero && all_zero) return;
            if (auto x = probe()) out.push_back(ArrangementFace{signs, std::move(*x)});
            return;
        }
        for (int s : {1, 0, -1}) {
            if (central_nonzero && all_zero && s < 0) continue;
            signs.push_back(s);
            if (probe()) self(self, all_zero && s == 0);
            signs.pop_back();
        }
    };
    dfs(dfs, true);
    return out;
}

}  // namespace flatbound

#include "flatbound/surrogate.hpp"

#include <algorithm>
#include <set>

#include "flatbound/errors.hpp"

namespace flatbound {

PolyhedralSurrogate::PolyhedralSurrogate(std::size_t dim, std::vector<std::string> outcomes,
                                         std::vector<std::vector<AffinePiece>> pieces)
    : dim_(dim), outcomes_(std::move(outcomes)), pieces_(std::move(pieces)) {
    if (dim_ == 0) throw InputError("surrogate dimension must be at least 1");
    if (outcomes_.empty()) throw InputError("surrogate needs at least one outcome");
    if (std::set<std::string>(outcomes_.begin(), outcomes_.end()).size() != outcomes_.size()) {
        throw InputError("duplicate outcome label in surrogate");
    }
    if (pieces_.size() != outcomes_.size()) throw InputError("one piece list per outcome is required");
    for (std::size_t y = 0; y < pieces_.size(); ++y) {
        if (pieces_[y].empty()) throw InputError("outcome '" + outcomes_[y] + "' has no pieces");
        for (const auto& piece : pieces_[y]) {
            if (piece.gradient.size() != dim_) {
                throw InputError("piece gradient for outcome '" + outcomes_[y] + "' has wrong length");
            }
        }
    }
    // Each L(., y) must be bounded below; then E_p L is minimizable for every p
    // in the simplex, vertices included.
    for (std::size_t y = 0; y < pieces_.size(); ++y) {
        Polyhedron epi(dim_ + 1);
        for (const auto& piece : pieces_[y]) {
            Vec row = piece.gradient;
            row.push_back(Rational(-1));
            epi.add_inequality(std::move(row), -piece.intercept);
        }
        if (std::holds_alternative<LpUnbounded>(lp_solve(unit(dim_ + 1, dim_), epi, Sense::Minimize))) {
            throw InvariantError("L(., " + outcomes_[y] + ") is unbounded below; the surrogate is not minimizable");
        }
    }
}

Rational PolyhedralSurrogate::value(const Vec& u, std::size_t y) const {
    if (u.size() != dim_) throw InputError("prediction has wrong dimension");
    const auto& ps = pieces_.at(y);
    Rational best = dot(ps[0].gradient, u) + ps[0].intercept;
    for (std::size_t i = 1; i < ps.size(); ++i) best = std::max(best, dot(ps[i].gradient, u) + ps[i].intercept);
    return best;
}

Rational PolyhedralSurrogate::expected(const Vec& u, const Vec& p) const {
    if (p.size() != outcomes_.size()) throw InputError("distribution length does not match the outcomes");
    Rational total;
    for (std::size_t y = 0; y < p.size(); ++y) {
        if (!p[y].is_zero()) total += p[y] * value(u, y);
    }
    return total;
}

std::vector<std::size_t> PolyhedralSurrogate::active(const Vec& u, std::size_t y) const {
    const Rational best = value(u, y);
    std::vector<std::size_t> out;
    const auto& ps = pieces_[y];
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (dot(ps[i].gradient, u) + ps[i].intercept == best) out.push_back(i);
    }
    return out;
}

Link::Link(std::size_t dim, std::vector<LinkRegion> regions, std::string default_report)
    : dim_(dim), regions_(std::move(regions)), default_(std::move(default_report)) {
    for (const auto& r : regions_) {
        if (r.region.ambient_dim() != dim_) throw InputError("link region for '" + r.report + "' has wrong dimension");
    }
}

const std::string& Link::operator()(const Vec& u) const {
    if (u.size() != dim_) throw InputError("prediction has wrong dimension");
    for (const auto& r : regions_) {
        if (r.region.contains(u)) return r.report;
    }
    return default_;
}

namespace {

void check_outcomes(const PolyhedralSurrogate& L, const Distribution& p) {
    if (p.size() != L.num_outcomes()) throw InputError("distribution length does not match the surrogate outcomes");
}

// Variables (u, t): t_y >= g . u + c for every piece of y.
Polyhedron epigraph(const PolyhedralSurrogate& L) {
    const std::size_t d = L.dim(), n = L.num_outcomes();
    Polyhedron epi(d + n);
    for (std::size_t y = 0; y < n; ++y) {
        for (const auto& piece : L.pieces(y)) {
            Vec row = piece.gradient;
            row.resize(d + n);
            row[d + y] = -1;
            epi.add_inequality(std::move(row), -piece.intercept);
        }
    }
    return epi;
}

Vec epigraph_objective(const PolyhedralSurrogate& L, const Distribution& p) {
    Vec obj = zeros(L.dim());
    obj.insert(obj.end(), p.probs().begin(), p.probs().end());
    return obj;
}

bool minimizes(const PolyhedralSurrogate& L, const Vec& u, const Distribution& p) {
    return L.expected(u, p.probs()) == surrogate_min_value(L, p);
}

Vec hyperplane_key(const Vec& normal, const Rational& offset) {
    Vec key = normal;
    key.push_back(offset);
    return normalize_direction(key, false);
}

std::vector<Vec> sample_points(const Polyhedron& region) {
    if (region.is_empty()) return {};
    if (is_bounded(region)) return vertices(region);
    return {*feasible_point(region)};
}

std::optional<IndirectViolation> probe(const PolyhedralSurrogate& L, const Link& psi, const PropertyCells& target,
                                       const Vec& u) {
    Polyhedron level = surrogate_level_set(L, u);
    level.intersect_with(target.domain());
    if (level.is_empty()) return std::nullopt;
    const std::string& got = psi(u);
    const bool known = target.has_report(got);
    // The level set is a polytope, so it escapes the cell iff one of its vertices does.
    for (const auto& q : vertices(level)) {
        if (known && target.cell(got).contains(q)) continue;
        return IndirectViolation{u, q, target.reports_at(q), got};
    }
    return std::nullopt;
}

}  // namespace

Rational surrogate_min_value(const PolyhedralSurrogate& L, const Distribution& p) {
    check_outcomes(L, p);
    const auto r = lp_solve(epigraph_objective(L, p), epigraph(L), Sense::Minimize);
    if (const auto* o = std::get_if<LpOptimal>(&r)) return o->value;
    throw InvariantError("expected surrogate loss is not minimizable at p = " + to_string(p.probs()));
}

Polyhedron surrogate_minimizers(const PolyhedralSurrogate& L, const Distribution& p) {
    const Rational best = surrogate_min_value(L, p);
    Polyhedron opt = epigraph(L);
    opt.add_equality(epigraph_objective(L, p), best);
    std::vector<std::size_t> keep(L.dim());
    for (std::size_t j = 0; j < keep.size(); ++j) keep[j] = j;
    return project(opt, keep);
}

Polyhedron surrogate_level_set(const PolyhedralSurrogate& L, const Vec& u) {
    const std::size_t d = L.dim(), n = L.num_outcomes();
    std::vector<std::vector<std::size_t>> act(n);
    std::size_t k = 0;
    for (std::size_t y = 0; y < n; ++y) {
        act[y] = L.active(u, y);
        k += act[y].size();
    }
    // Variables (p, lambda): p_y = sum_i lambda_{y,i}, sum lambda g = 0, p in the simplex.
    Polyhedron joint(n + k);
    for (std::size_t y = 0; y < n; ++y) joint.add_inequality(Rational(-1) * unit(n + k, y), 0);
    Vec total = zeros(n + k);
    for (std::size_t y = 0; y < n; ++y) total[y] = 1;
    joint.add_equality(std::move(total), 1);
    std::vector<Vec> grad_rows(d, zeros(n + k));
    std::size_t col = n;
    for (std::size_t y = 0; y < n; ++y) {
        Vec split = zeros(n + k);
        split[y] = -1;
        for (auto i : act[y]) {
            joint.add_inequality(Rational(-1) * unit(n + k, col), 0);
            split[col] = 1;
            const auto& g = L.pieces(y)[i].gradient;
            for (std::size_t j = 0; j < d; ++j) grad_rows[j][col] = g[j];
            ++col;
        }
        joint.add_equality(std::move(split), 0);
    }
    for (auto& row : grad_rows) joint.add_equality(std::move(row), 0);
    std::vector<std::size_t> keep(n);
    for (std::size_t y = 0; y < n; ++y) keep[y] = y;
    return project(joint, keep);
}

Flat extract_witness_flat(const PolyhedralSurrogate& L, const Vec& u, const Distribution& p) {
    check_outcomes(L, p);
    if (u.size() != L.dim()) throw InputError("prediction has wrong dimension");
    if (!minimizes(L, u, p)) {
        throw PreconditionError("u = " + to_string(u) + " does not minimize the expected surrogate loss at p");
    }
    const std::size_t d = L.dim(), n = L.num_outcomes();
    std::vector<std::vector<std::size_t>> act(n);
    std::size_t k = 0;
    for (std::size_t y = 0; y < n; ++y) {
        act[y] = L.active(u, y);
        k += act[y].size();
    }
    // Convex weights mu over the active gradients of each y with sum_y p_y x_y = 0.
    Polyhedron lp(k);
    std::vector<Vec> grad_rows(d, zeros(k));
    std::size_t col = 0;
    for (std::size_t y = 0; y < n; ++y) {
        Vec simplex_row = zeros(k);
        for (auto i : act[y]) {
            lp.add_inequality(Rational(-1) * unit(k, col), 0);
            simplex_row[col] = 1;
            const auto& g = L.pieces(y)[i].gradient;
            for (std::size_t j = 0; j < d; ++j) grad_rows[j][col] = p[y] * g[j];
            ++col;
        }
        lp.add_equality(std::move(simplex_row), 1);
    }
    for (auto& row : grad_rows) lp.add_equality(std::move(row), 0);
    const auto mu = feasible_point(lp);
    if (!mu) throw InvariantError("no subgradient selection vanishes at a minimizer");

    Flat flat{L.outcomes(), std::vector<Vec>(d, zeros(n)), std::nullopt};
    col = 0;
    for (std::size_t y = 0; y < n; ++y) {
        for (auto i : act[y]) {
            const auto& g = L.pieces(y)[i].gradient;
            for (std::size_t j = 0; j < d; ++j) flat.columns[j][y] += (*mu)[col] * g[j];
            ++col;
        }
    }
    return flat;
}

IndirectElicitationReport check_indirect_elicitation(const PolyhedralSurrogate& L, const Link& psi,
                                                     const PropertyCells& target, std::size_t probe_budget) {
    const std::size_t d = L.dim(), n = L.num_outcomes();
    if (psi.dim() != d) throw InputError("link and surrogate dimensions differ");
    if (target.num_outcomes() != n) throw InputError("target and surrogate outcome counts differ");

    IndirectElicitationReport rep;
    std::vector<Vec> probes;
    if (d <= 2) {
        // On each face of this arrangement the active piece sets and the link
        // value are constant, hence so are the level set and psi(u).
        std::vector<Hyperplane> hs;
        std::set<Vec> seen;
        auto add = [&](const Vec& normal, const Rational& offset) {
            if (is_zero(normal)) return;
            Vec key = hyperplane_key(normal, offset);
            if (!seen.insert(key).second) return;
            Vec a(key.begin(), key.end() - 1);
            hs.push_back(Hyperplane{std::move(a), key.back()});
        };
        for (std::size_t y = 0; y < n; ++y) {
            const auto& ps = L.pieces(y);
            for (std::size_t i = 0; i < ps.size(); ++i) {
                for (std::size_t j = i + 1; j < ps.size(); ++j) {
                    add(ps[i].gradient - ps[j].gradient, ps[j].intercept - ps[i].intercept);
                }
            }
        }
        const std::size_t piece_planes = hs.size();
        for (const auto& r : psi.regions()) {
            for (const auto& c : r.region.inequalities()) add(c.normal, c.offset);
            for (const auto& c : r.region.equalities()) add(c.normal, c.offset);
        }
        for (auto& face : arrangement_faces(hs, d)) probes.push_back(std::move(face.point));
        rep.exhaustiveness = Exhaustiveness::CompleteOverPieceComplex;
        rep.provenance.push_back(std::to_string(probes.size()) + " faces of the arrangement of " +
                                 std::to_string(piece_planes) + " piece boundaries and " +
                                 std::to_string(hs.size() - piece_planes) + " link boundaries");
    } else {
        std::set<Vec> seen;
        auto take = [&](Vec u) {
            if (probes.size() < probe_budget && seen.insert(u).second) probes.push_back(std::move(u));
        };
        const long denom = n <= 4 ? 6 : 3;
        for (const auto& q : simplex_grid(n, denom)) {
            for (auto& u : sample_points(surrogate_minimizers(L, Distribution(q)))) take(std::move(u));
        }
        const std::size_t from_grid = probes.size();
        for (const auto& r : psi.regions()) {
            for (auto& u : sample_points(r.region)) take(std::move(u));
        }
        rep.exhaustiveness = Exhaustiveness::Sampled;
        rep.provenance.push_back(std::to_string(from_grid) + " minimizers of grid distributions with denominator " +
                                 std::to_string(denom));
        rep.provenance.push_back(std::to_string(probes.size() - from_grid) + " link region points");
    }
    rep.probes = probes.size();
    for (const auto& u : probes) {
        if (auto v = probe(L, psi, target, u)) rep.violations.push_back(std::move(*v));
    }
    rep.probe_points = std::move(probes);
    std::sort(rep.violations.begin(), rep.violations.end(), [](const IndirectViolation& a, const IndirectViolation& b) {
        if (a.u != b.u) return a.u < b.u;
        return a.p < b.p;
    });
    return rep;
}

bool verify_violation(const PolyhedralSurrogate& L, const Link& psi, const PropertyCells& target,
                      const IndirectViolation& v) {
    if (!target.domain().contains(v.p)) return false;
    if (!minimizes(L, v.u, Distribution(v.p))) return false;
    if (psi(v.u) != v.got) return false;
    return !target.has_report(v.got) || !target.cell(v.got).contains(v.p);
}

std::string to_string(Exhaustiveness e) {
    return e == Exhaustiveness::CompleteOverPieceComplex ? "complete-over-piece-complex" : "sampled";
}

}  // namespace flatbound

#include <algorithm>
#include <set>

#include "flatbound/errors.hpp"
#include "flatbound/flats.hpp"

namespace flatbound {

Polyhedron flat_polyhedron(const Flat& flat) {
    const std::size_t n = flat.outcomes.size();
    Polyhedron out = Polyhedron::simplex(n);
    if (flat.domain) {
        if (flat.domain->ambient_dim() != n) throw InputError("flat domain has wrong dimension");
        out.intersect_with(*flat.domain);
    }
    for (const auto& w : flat.columns) {
        if (w.size() != n) throw InputError("flat column has wrong length");
        out.add_equality(w, 0);
    }
    return out;
}

FlatCertificate certify_flat(const Flat& flat, const Vec& p, const Polyhedron& cell) {
    const Polyhedron f = flat_polyhedron(flat);
    if (p.size() != f.ambient_dim() || cell.ambient_dim() != f.ambient_dim()) {
        throw InputError("flat, point and cell dimensions differ");
    }
    if (!f.contains(p)) return NotOnFlat{};
    auto r = polyhedron_contains(cell, f);
    if (auto* v = std::get_if<Violation>(&r)) return std::move(*v);
    return Certified{};
}

bool is_certified(const FlatCertificate& c) { return std::holds_alternative<Certified>(c); }

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

struct SearchContext {
    std::size_t n = 0;
    Vec p;
    Polyhedron cell{0};
    Polyhedron face{0};      // smallest face of P holding p
    Polyhedron restricted{0};  // cell within that face
    Subspace tangent = Subspace::zero(0);
    std::optional<Vec> face_column;
    std::optional<Polyhedron> domain;
    std::vector<std::string> outcomes;
};

// Presentation of the flat face ∩ (p + U): functionals vanishing on span(p) + U,
// independent on span(p) + tangent, plus the face column when p is on the boundary.
Flat present(const SearchContext& ctx, const std::vector<Vec>& u_basis) {
    Matrix l_rows{ctx.p};
    l_rows.insert(l_rows.end(), u_basis.begin(), u_basis.end());
    const auto ann = kernel(l_rows, ctx.n).basis();
    std::vector<Vec> v_basis{ctx.p};
    for (const auto& t : ctx.tangent.basis()) v_basis.push_back(t);
    std::vector<Vec> restricted;
    for (const auto& w : ann) {
        Vec r;
        for (const auto& v : v_basis) r.push_back(dot(w, v));
        restricted.push_back(std::move(r));
    }
    Flat flat{ctx.outcomes, {}, ctx.domain};
    for (auto i : independent_subset(restricted, v_basis.size())) {
        flat.columns.push_back(normalize_direction(ann[i], false));
    }
    if (ctx.face_column) flat.columns.push_back(*ctx.face_column);
    return flat;
}

std::optional<Flat> try_subspace(const SearchContext& ctx, const std::vector<Vec>& u_basis) {
    Flat flat = present(ctx, u_basis);
    if (is_certified(certify_flat(flat, ctx.p, ctx.cell))) return flat;
    return std::nullopt;
}

// Exact for k = 1: a segment through p spans the face and exits through two
// facets i, j. Both exits must lie in the cell, so the direction is a positive
// combination of (cell ∩ facet_i) - p and its negative of (cell ∩ facet_j) - p.
std::optional<Flat> line_search(const SearchContext& ctx) {
    const auto& facets = ctx.face.inequalities();
    std::vector<std::vector<Vec>> spokes(facets.size());
    for (std::size_t i = 0; i < facets.size(); ++i) {
        Polyhedron on_facet = ctx.restricted;
        on_facet.add_equality(facets[i].normal, facets[i].offset);
        for (const auto& v : vertices(on_facet)) spokes[i].push_back(v - ctx.p);
    }
    for (std::size_t i = 0; i < facets.size(); ++i) {
        if (spokes[i].empty()) continue;
        for (std::size_t j = i + 1; j < facets.size(); ++j) {
            if (spokes[j].empty()) continue;
            const std::size_t a = spokes[i].size(), b = spokes[j].size();
            Polyhedron lp(a + b);
            for (std::size_t t = 0; t < a + b; ++t) lp.add_inequality(Rational(-1) * unit(a + b, t), 0);
            Vec norm = zeros(a + b);
            for (std::size_t t = 0; t < a; ++t) norm[t] = 1;
            lp.add_equality(norm, 1);
            for (std::size_t y = 0; y < ctx.n; ++y) {
                Vec row(a + b);
                for (std::size_t t = 0; t < a; ++t) row[t] = spokes[i][t][y];
                for (std::size_t t = 0; t < b; ++t) row[a + t] = spokes[j][t][y];
                lp.add_equality(std::move(row), 0);
            }
            const auto sol = feasible_point(lp);
            if (!sol) continue;
            Vec v = zeros(ctx.n);
            for (std::size_t t = 0; t < a; ++t) v = v + (*sol)[t] * spokes[i][t];
            if (auto f = try_subspace(ctx, {v})) return f;
        }
    }
    return std::nullopt;
}

// Exact for k = face_dim - 1: whether face ∩ (p + U) stays in the cell depends
// only on the sign pattern of the hyperplane normal against the vertices of the
// face and of the restricted cell, so one representative per arrangement face
// settles every hyperplane.
std::optional<Flat> hyperplane_search(const SearchContext& ctx) {
    const auto& basis = ctx.tangent.basis();
    const std::size_t m = basis.size();
    std::vector<Vec> pts = vertices(ctx.face);
    for (auto& v : vertices(ctx.restricted)) pts.push_back(std::move(v));
    std::vector<Hyperplane> hs;
    std::set<Vec> seen;
    for (const auto& w : pts) {
        const Vec d = w - ctx.p;
        Vec z(m);
        for (std::size_t b = 0; b < m; ++b) z[b] = dot(basis[b], d);
        if (is_zero(z)) continue;
        Vec key = normalize_direction(z, false);
        if (seen.insert(key).second) hs.push_back(Hyperplane{std::move(key), 0});
    }
    for (const auto& face : arrangement_faces(hs, m, true)) {
        Vec normal = zeros(ctx.n);
        for (std::size_t b = 0; b < m; ++b) {
            if (!face.point[b].is_zero()) normal = normal + face.point[b] * basis[b];
        }
        const Subspace u = ctx.tangent.intersect_kernel({normal});
        if (auto f = try_subspace(ctx, u.basis())) return f;
    }
    return std::nullopt;
}

// Candidate subspaces S ∩ ker(subset of facet normals) of dimension exactly k.
std::optional<Flat> kernel_family_search(const SearchContext& ctx, const Subspace& s, std::size_t k) {
    if (s.dim() == k) {
        if (auto f = try_subspace(ctx, s.basis())) return f;
    }
    std::vector<Vec> normals;
    std::set<Vec> seen;
    for (const auto* poly : {&ctx.cell, &ctx.face}) {
        for (const auto& c : poly->inequalities()) {
            if (is_zero(c.normal)) continue;
            Vec key = normalize_direction(c.normal, false);
            if (seen.insert(key).second) normals.push_back(std::move(key));
        }
    }
    const std::size_t max_size = std::min(s.dim(), normals.size());
    std::set<std::vector<Vec>> tried;
    for (std::size_t size = 1; size <= max_size; ++size) {
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            Matrix rows;
            for (auto i : idx) rows.push_back(normals[i]);
            const Subspace u = s.intersect_kernel(rows);
            if (u.dim() == k) {
                Matrix key = kernel(u.basis(), ctx.n).basis();  // canonical: RREF of the complement
                row_reduce(key, ctx.n);
                if (tried.insert(key).second) {
                    if (auto f = try_subspace(ctx, u.basis())) return f;
                }
            }
            std::size_t t = size;
            while (t > 0 && idx[t - 1] == normals.size() - size + t - 1) --t;
            if (t == 0) break;
            ++idx[t - 1];
            for (std::size_t j = t; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return std::nullopt;
}

}  // namespace

FlatSearch max_flat_dimension(const Vec& p, const Polyhedron& cell, const std::optional<Polyhedron>& domain,
                              std::vector<std::string> outcomes) {
    const std::size_t n = p.size();
    if (cell.ambient_dim() != n) throw InputError("cell and point dimensions differ");
    if (outcomes.empty()) outcomes = default_labels(n);
    if (outcomes.size() != n) throw InputError("outcome labels do not match the point");
    Polyhedron dom = Polyhedron::simplex(n);
    if (domain) dom.intersect_with(*domain);
    if (!dom.contains(p)) throw PreconditionError("point " + to_string(p) + " is outside the domain");
    if (!cell.contains(p)) throw PreconditionError("point " + to_string(p) + " is outside the cell");

    SearchContext ctx;
    ctx.n = n;
    ctx.p = p;
    ctx.cell = cell;
    ctx.domain = domain;
    ctx.outcomes = std::move(outcomes);
    ctx.face = remove_redundant(minimal_face(dom, p));
    ctx.tangent = feasible_direction_subspace(ctx.face, p);
    ctx.restricted = intersect(cell, ctx.face);

    // Sum of the homogenized tight constraints: nonnegative on P, zero exactly on the face.
    Vec col = zeros(n);
    bool tight = false;
    for (const auto& c : dom.inequalities()) {
        if (!c.slack(p).is_zero()) continue;
        tight = true;
        col = col + (c.offset * ones(n) - c.normal);
    }
    if (tight && !is_zero(col)) ctx.face_column = normalize_direction(col, true);

    const std::size_t m = ctx.tangent.dim();
    const Subspace s = feasible_direction_subspace(ctx.restricted, p);

    FlatSearch out;
    out.face_dim = m;
    out.fsd_dim = s.dim();
    out.face_column = ctx.face_column.has_value();
    bool exhaustive = true;
    for (std::size_t k = s.dim(); k >= 1; --k) {
        std::optional<Flat> found;
        if (k == m) {
            found = try_subspace(ctx, ctx.tangent.basis());
        } else if (k == 1) {
            found = line_search(ctx);
        } else if (k + 1 == m) {
            found = hyperplane_search(ctx);
        } else {
            found = kernel_family_search(ctx, s, k);
        }
        if (found) {
            out.k = k;
            out.witness = std::move(*found);
            out.status = exhaustive ? SearchStatus::CertifiedExhaustive : SearchStatus::Heuristic;
            return out;
        }
        if (k != m && k != 1 && k + 1 != m) exhaustive = false;
    }
    out.k = 0;
    out.witness = present(ctx, {});
    if (!is_certified(certify_flat(out.witness, p, cell))) {
        throw InvariantError("the point flat through p is not contained in the cell");
    }
    out.status = exhaustive ? SearchStatus::CertifiedExhaustive : SearchStatus::Heuristic;
    return out;
}

std::string to_string(SearchStatus s) {
    return s == SearchStatus::CertifiedExhaustive ? "certified-exhaustive" : "heuristic";
}

std::string to_string(Corollary c) {
    switch (c) {
        case Corollary::SingleValued: return "single-valued";
        case Corollary::ElicitableInterior: return "elicitable-interior";
        case Corollary::Neither: return "neither";
    }
    return "neither";
}

}  // namespace flatbound

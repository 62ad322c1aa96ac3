#include <algorithm>

#include "flatbound/errors.hpp"
#include "flatbound/flats.hpp"

namespace flatbound {

namespace {

const Polyhedron& cell_at(const PropertyCells& target, const Distribution& p, const std::string& r) {
    if (p.size() != target.num_outcomes()) throw InputError("distribution length does not match the outcomes");
    const Polyhedron& cell = target.cell(r);
    if (!cell.contains(p.probs())) {
        throw InputError("p = " + to_string(p.probs()) + " is not in the cell of report '" + r + "'");
    }
    return cell;
}

}  // namespace

std::size_t fsd_lower_bound(const PropertyCells& target, const Distribution& p, const std::string& r) {
    const Polyhedron& cell = cell_at(target, p, r);
    const Polyhedron face = minimal_face(target.domain(), p.probs());
    const std::size_t m = feasible_direction_subspace(face, p.probs()).dim();
    const std::size_t s = feasible_direction_subspace(intersect(cell, face), p.probs()).dim();
    return m > s ? m - s : 0;
}

BoundReport flat_lower_bound(const PropertyCells& target, const Distribution& p, const std::string& r,
                             std::optional<bool> elicitable, std::string target_name) {
    const Polyhedron& cell = cell_at(target, p, r);
    BoundReport rep;
    rep.target = std::move(target_name);
    rep.p = p.probs();
    rep.r = r;
    rep.fsd_bound = fsd_lower_bound(target, p, r);

    const auto reports = target.reports_at(p.probs());
    if (reports.size() == 1) {
        rep.corollary = Corollary::SingleValued;
        rep.checks.push_back("p lies in exactly one cell");
    } else {
        rep.checks.push_back("p lies in " + std::to_string(reports.size()) + " cells");
        const bool interior = relint_contains(target.domain(), p.probs());
        rep.checks.push_back(interior ? "p is in the relative interior of P" : "p is on the boundary of P");
        bool elic = false;
        if (interior) {
            if (elicitable) {
                elic = *elicitable;
                rep.checks.push_back(elic ? "target given by a loss, hence elicitable" : "target declared not elicitable");
            } else if (target.restriction() && !same_set(target.domain(), Polyhedron::simplex(target.num_outcomes()))) {
                rep.checks.push_back("elicitability on a proper restriction is not decided");
            } else {
                elic = std::holds_alternative<Found>(recover_loss(target));
                rep.checks.push_back(elic ? "a loss eliciting the cells was recovered" : "no loss elicits the cells");
            }
        }
        if (interior && elic) {
            rep.corollary = Corollary::ElicitableInterior;
        } else {
            rep.corollary = Corollary::Neither;
            return rep;
        }
    }
    FlatSearch search = max_flat_dimension(p.probs(), cell, target.restriction(), target.outcomes());
    rep.flat_bound = search.face_dim - search.k;
    rep.search = std::move(search);
    return rep;
}

bool condition_v_interior(const Flat& v, const std::optional<Polyhedron>& restriction) {
    const std::size_t d = v.columns.size();
    if (d == 0) return true;
    const std::size_t n = v.outcomes.size();
    Polyhedron dom = Polyhedron::simplex(n);
    if (restriction) dom.intersect_with(*restriction);
    if (dom.is_empty()) throw PreconditionError("restriction does not meet the simplex");
    std::vector<Vec> images;
    for (const auto& x : vertices(dom)) {
        Vec z(d);
        for (std::size_t j = 0; j < d; ++j) z[j] = dot(v.columns[j], x);
        images.push_back(std::move(z));
    }
    // Full dimension of the image polytope.
    Matrix diffs;
    for (std::size_t i = 1; i < images.size(); ++i) diffs.push_back(images[i] - images[0]);
    if (rank(diffs, d) < d) return false;
    // Origin as a combination with every weight strictly positive (relative interior).
    const std::size_t k = images.size();
    Polyhedron lp(k + 1);
    Vec weights = zeros(k + 1);
    for (std::size_t i = 0; i < k; ++i) {
        weights[i] = 1;
        Vec row = zeros(k + 1);
        row[i] = -1;
        row[k] = 1;
        lp.add_inequality(std::move(row), 0);  // s <= alpha_i
    }
    lp.add_equality(weights, 1);
    for (std::size_t j = 0; j < d; ++j) {
        Vec row = zeros(k + 1);
        for (std::size_t i = 0; i < k; ++i) row[i] = images[i][j];
        lp.add_equality(std::move(row), 0);
    }
    const auto r = lp_solve(unit(k + 1, k), lp, Sense::Maximize);
    const auto* o = std::get_if<LpOptimal>(&r);
    return o != nullptr && o->value.sign() > 0;
}

RiskBound bayes_risk_bound(const DiscreteLoss& loss, const Flat& level_flat, const std::optional<Polyhedron>& restriction) {
    const std::size_t n = loss.num_outcomes();
    if (level_flat.outcomes.size() != n) throw InputError("flat and loss have different outcomes");
    const std::size_t d = level_flat.constraint_count();
    Flat flat = level_flat;
    if (restriction) {
        flat.domain = flat.domain ? intersect(*flat.domain, *restriction) : *restriction;
    }
    const Polyhedron f = flat_polyhedron(flat);
    if (f.is_empty()) throw InputError("the level flat is empty");
    Polyhedron dom = Polyhedron::simplex(n);
    if (restriction) dom.intersect_with(*restriction);

    if (!condition_v_interior(level_flat, restriction)) return NotApplicable{"the origin is not interior to the image of the flat functionals"};
    if (std::holds_alternative<RiskConstant>(bayes_risk_constant_on(loss, f))) {
        return NotApplicable{"the Bayes risk is constant on the flat"};
    }

    // Probe at a relative-interior point of the flat.
    const auto vs = vertices(f);
    Vec probe = zeros(n);
    for (const auto& v : vs) probe = probe + v;
    probe = Rational(1, static_cast<long>(vs.size())) * probe;
    if (!relint_contains(dom, probe)) return NotApplicable{"the flat does not reach the relative interior of P"};

    const PropertyCells cells = elicited_property(loss, restriction);
    const auto at = cells.reports_at(probe);
    if (at.empty()) throw InvariantError("no report attains the Bayes risk at the probe point");
    const std::string& r = at.front();

    // Level set of the elicited property equal to the flat: the hypothesis as stated.
    if (at.size() == 1 && same_set(cells.cell(r), f)) return d + 1;

    // Finite report sets never satisfy that equality for d >= 1. Any flat
    // through the probe inside the Bayes-risk level set also lies in the cell
    // of r on which l(r, .) is constant (an affine function bounded below by
    // the concave Bayes risk and tight at a relative-interior point), so the
    // flat search there decides the bound.
    Polyhedron level = cells.cell(r);
    level.add_equality(loss.row(r), dot(loss.row(r), probe));
    const FlatSearch search = max_flat_dimension(probe, level, restriction, loss.outcomes());
    if (search.status != SearchStatus::CertifiedExhaustive) {
        return NotApplicable{"the flat search inside the level set was not exhaustive"};
    }
    if (search.face_dim >= search.k + d + 1) return d + 1;
    return NotApplicable{"a flat with " + std::to_string(d) + " columns fits inside the Bayes-risk level set"};
}

}  // namespace flatbound

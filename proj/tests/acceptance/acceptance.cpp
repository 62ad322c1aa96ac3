// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "../unit/test_support.hpp"
#include "flatbound/cli.hpp"
#include "flatbound/io.hpp"
#include "flatbound/render.hpp"

using namespace flatbound;
using namespace flatbound::testing;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && s >= limit_s && c.ok) {
        c.ok = false;
        c.detail = "time limit " + std::to_string(limit_s) + " s exceeded";
    }
    if (!c.ok) ++failures;
    std::printf("%s  %2d  %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), s, c.ok ? "" : ": ",
                c.detail.c_str());
}

Json run_json(const Request& req) {
    const auto res = run(req);
    if (res.exit_code != 0) throw std::runtime_error("exit " + std::to_string(res.exit_code) + ": " + res.error);
    return Json::parse(res.output);
}

Request bound_request(const std::string& target, const std::string& p, const std::string& r) {
    Request req;
    req.command = "bound";
    req.target = target;
    req.p = p;
    req.r = r;
    return req;
}

std::vector<DiscreteLoss> seeded_losses() {
    std::mt19937_64 rng(2718);
    std::vector<DiscreteLoss> out;
    for (int i = 0; i < 10; ++i) out.push_back(random_loss(rng, 3, 3));
    return out;
}

// Argmin by direct enumeration of expected losses.
bool argmin_contains(const DiscreteLoss& loss, const Vec& p, const std::string& r) {
    Rational best;
    for (std::size_t i = 0; i < loss.num_reports(); ++i) {
        Rational e;
        for (std::size_t y = 0; y < p.size(); ++y) e += loss.matrix()[i][y] * p[y];
        if (i == 0 || e < best) best = e;
    }
    Rational mine;
    const Vec& row = loss.row(r);
    for (std::size_t y = 0; y < p.size(); ++y) mine += row[y] * p[y];
    return mine == best;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DiscreteLoss bundled_loss(const std::string& name) { return parse_loss(*select_role(load_document(name), Role::Loss)); }

}  // namespace

int main() {
    criterion(1, "abstain loss at the uniform point: fsd_bound 0, flat_bound 2, certified-exhaustive", 1.0, [](Check& c) {
        const Json j = run_json(bound_request("abstain3", "1/3,1/3,1/3", "abstain"));
        c.require(j["fsd_bound"] == 0, "fsd_bound = " + j["fsd_bound"].dump());
        c.require(j["flat_bound"] == 2, "flat_bound = " + j["flat_bound"].dump());
        c.require(j["status"] == "certified-exhaustive", "status = " + j["status"].dump());
    });

    criterion(2, "abstain loss at (1/4, 1/4, 1/2): fsd_bound 1, flat_bound 1", 1.0, [](Check& c) {
        const Json j = run_json(bound_request("abstain3", "1/4,1/4,1/2", "abstain"));
        c.require(j["fsd_bound"] == 1, "fsd_bound = " + j["fsd_bound"].dump());
        c.require(j["flat_bound"] == 1, "flat_bound = " + j["flat_bound"].dump());
    });

    criterion(3, "weather cells: not elicitable, flat_bound 2 at the snowy point", 2.0, [](Check& c) {
        Request el;
        el.command = "elicitable";
        el.cells = "weather";
        const Json e = run_json(el);
        c.require(e["result"] == "NotElicitable", "elicitable result = " + e["result"].dump());
        Request b = bound_request("", "1/8,37/50,27/200", "snowy");
        b.target.reset();
        b.cells = "weather";
        const Json j = run_json(b);
        c.require(j["flat_bound"] == 2, "flat_bound = " + j["flat_bound"].dump());
    });

    criterion(4, "elicited cells match argmin enumeration on the 325-point grid", 10.0, [](Check& c) {
        std::vector<DiscreteLoss> losses{abstain_loss(), zero_one_loss(3)};
        for (auto& l : seeded_losses()) losses.push_back(std::move(l));
        const auto grid = simplex_grid(3, 24);
        c.require(grid.size() == 325, "grid has " + std::to_string(grid.size()) + " points");
        for (std::size_t li = 0; li < losses.size(); ++li) {
            const auto& loss = losses[li];
            const auto cells = elicited_property(loss);
            for (const auto& p : grid) {
                for (const auto& r : loss.reports()) {
                    const bool in_cell = cells.has_report(r) && cells.cell(r).contains(p);
                    c.require(in_cell == argmin_contains(loss, p, r),
                              "loss " + std::to_string(li) + ", report " + r + ", p = " + to_string(p));
                }
            }
        }
    });

    criterion(5, "recover_loss round trip on 10 seeded losses and the abstain cells", 0, [](Check& c) {
        std::vector<DiscreteLoss> losses = seeded_losses();
        losses.push_back(abstain_loss());
        for (std::size_t li = 0; li < losses.size(); ++li) {
            const auto cells = elicited_property(losses[li]);
            const auto rec = recover_loss(cells);
            c.require(std::holds_alternative<Found>(rec), "loss " + std::to_string(li) + " not recovered");
            if (!std::holds_alternative<Found>(rec)) continue;
            const auto round = elicited_property(std::get<Found>(rec).loss);
            c.require(round.cells().size() == cells.cells().size(), "cell count differs for loss " + std::to_string(li));
            for (const auto& cell : cells.cells()) {
                c.require(round.has_report(cell.report) && same_set(round.cell(cell.report), cell.region),
                          "cell " + cell.report + " differs for loss " + std::to_string(li));
            }
        }
    });

    criterion(6, "finite-support variance: Bayes risk bound 2 on the flat E[Y] = 1", 0, [](Check& c) {
        const Flat f{{"0", "1", "2"}, {vec({-1, 0, 1})}, std::nullopt};
        const RiskBound b = bayes_risk_bound(squared_grid_loss(), f);
        c.require(std::holds_alternative<std::size_t>(b),
                  std::holds_alternative<NotApplicable>(b) ? std::get<NotApplicable>(b).reason : "");
        if (const auto* k = std::get_if<std::size_t>(&b)) c.require(*k == 2, "bound = " + std::to_string(*k));
        const auto bundle = parse_flat(*select_role(load_document("variance-support3"), Role::Flat));
        const RiskBound bb = bayes_risk_bound(bundled_loss("variance-support3"), bundle);
        c.require(std::holds_alternative<std::size_t>(bb) && std::get<std::size_t>(bb) == 2, "bundled variance bound");
    });

    criterion(7, "25 seeded surrogates: witness flats certified, minimizer/level-set duality", 0, [](Check& c) {
        std::mt19937_64 rng(31415);
        for (int seed = 0; seed < 25; ++seed) {
            const std::size_t d = 1 + seed % 2, n = 2 + seed % 3;
            const auto L = random_surrogate(rng, d, n);
            const auto grid = simplex_grid(n, 4);
            std::vector<Polyhedron> mins;
            for (const auto& p : grid) mins.push_back(surrogate_minimizers(L, Distribution(p)));
            // Probes: one point per face of the piece arrangement, plus a minimizer per grid point.
            std::vector<std::string> labels(n);
            for (std::size_t y = 0; y < n; ++y) labels[y] = L.outcomes()[y];
            std::vector<Vec> probes =
                check_indirect_elicitation(L, Link(d, {}, "any"),
                                           PropertyCells(labels, {{"any", Polyhedron(n)}}))
                    .probe_points;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const Distribution p(grid[i]);
                const Vec u = is_bounded(mins[i]) ? vertices(mins[i]).front() : *feasible_point(mins[i]);
                probes.push_back(u);
                const Flat f = extract_witness_flat(L, u, p);
                c.require(is_certified(certify_flat(f, p.probs(), surrogate_level_set(L, u))),
                          "seed " + std::to_string(seed) + ": witness at p = " + to_string(p.probs()));
            }
            for (const auto& u : probes) {
                const Polyhedron lvl = surrogate_level_set(L, u);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    c.require(mins[i].contains(u) == lvl.contains(grid[i]),
                              "seed " + std::to_string(seed) + ": duality at u = " + to_string(u) + ", p = " + to_string(grid[i]));
                }
            }
        }
    });

    criterion(8, "separating hyperplanes and shared-point flat agreement for bundled and seeded losses", 0, [](Check& c) {
        std::vector<DiscreteLoss> losses{bundled_loss("abstain3"), bundled_loss("mode3"), bundled_loss("variance-support3"),
                                         bundled_loss("hinge-binary")};
        for (auto& l : seeded_losses()) losses.push_back(std::move(l));
        std::mt19937_64 rng(8);
        for (std::size_t li = 0; li < losses.size(); ++li) {
            const auto& loss = losses[li];
            const std::size_t n = loss.num_outcomes();
            const auto cells = elicited_property(loss);
            for (const auto& a : cells.cells()) {
                for (const auto& b : cells.cells()) {
                    if (a.report == b.report) continue;
                    const std::string tag = "loss " + std::to_string(li) + " (" + a.report + ", " + b.report + ")";
                    const Vec v = separating_hyperplane(loss, a.report, b.report);
                    Polyhedron nonneg(n), nonpos(n);
                    nonneg.add_inequality(Rational(-1) * v, 0);
                    nonpos.add_inequality(v, 0);
                    c.require(contains_all(nonneg, b.region), tag + ": second cell on the wrong side");
                    c.require(contains_all(nonpos, a.region), tag + ": first cell on the wrong side");
                    Polyhedron ha = a.region, hb = b.region;
                    ha.add_equality(v, 0);
                    hb.add_equality(v, 0);
                    const Polyhedron both = intersect(a.region, b.region);
                    c.require(same_set(ha, both) && same_set(hb, both), tag + ": hyperplane sections differ");
                }
            }
            // Shared interior points: witness flats and random flats through p sit in every cell holding p or in none.
            for (const auto& p : simplex_grid(n, n == 3 ? 24 : 48)) {
                if (Distribution(p).support_size() != n) continue;
                const auto rs = cells.reports_at(p);
                if (rs.size() < 2) continue;
                std::vector<Flat> flats;
                for (const auto& r : rs) flats.push_back(max_flat_dimension(p, cells.cell(r), std::nullopt, loss.outcomes()).witness);
                for (int t = 0; t < 4; ++t) {
                    // One random functional shifted to vanish at p.
                    Vec w(n);
                    for (auto& x : w) x = random_rational(rng, -3, 3, 1);
                    const Vec col = w - (dot(w, p) * ones(n));
                    if (!is_zero(col)) flats.push_back(Flat{loss.outcomes(), {col}, std::nullopt});
                }
                for (const auto& f : flats) {
                    const auto first = is_certified(certify_flat(f, p, cells.cell(rs[0])));
                    for (const auto& r : rs) {
                        c.require(is_certified(certify_flat(f, p, cells.cell(r))) == first,
                                  "loss " + std::to_string(li) + ": flat disagreement at " + to_string(p));
                    }
                }
            }
        }
    });

    criterion(9, "hinge loss: sign link complete with no violation, inverted link violated", 0, [](Check& c) {
        const auto bundle = load_document("hinge-binary");
        const auto L = parse_surrogate(*select_role(bundle, Role::Surrogate));
        const auto target = elicited_property(parse_loss(*select_role(bundle, Role::Loss)));
        const Link sign = parse_link(bundle["link"]);
        const Link inverted = parse_link(bundle["inverted_link"]);
        const auto ok = check_indirect_elicitation(L, sign, target);
        c.require(!ok.violation_found(), "sign link reported a violation");
        c.require(ok.exhaustiveness == Exhaustiveness::CompleteOverPieceComplex, "sign link check not complete");
        const auto bad = check_indirect_elicitation(L, inverted, target);
        c.require(bad.violation_found(), "inverted link not refuted");
        bool at_one = false;
        for (const auto& v : bad.violations) {
            c.require(verify_violation(L, inverted, target, v), "violation at u = " + to_string(v.u) + " does not re-verify");
            at_one = at_one || (v.u == vec({1}) && v.p == vec({0, 1}));
        }
        c.require(at_one, "no violation at u = 1, p = e_pos");
    });

    criterion(10, "abstain and weather diagrams match the golden SVG files", 0, [](Check& c) {
        const std::string dir = FLATBOUND_GOLDEN_DIR;
        const auto abstain = render_simplex(bundled_loss("abstain3"),
                                            {{vec({q(1, 3), q(1, 3), q(1, 3)}), "•"}, {vec({q(1, 4), q(1, 4), q(1, 2)}), "★"}},
                                            {}, "abstain3");
        c.require(abstain == read_file(dir + "/abstain3.svg"), "abstain3.svg differs");
        const auto weather_doc = parse_cells(*select_role(load_document("weather"), Role::Cells));
        const auto weather = render_simplex(weather_doc.build(), {{vec({q(1, 8), q(37, 50), q(27, 200)}), "q"}}, {}, "weather");
        c.require(weather == read_file(dir + "/weather.svg"), "weather.svg differs");
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}

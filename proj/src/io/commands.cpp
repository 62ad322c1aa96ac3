#include <fstream>

#include "flatbound/cli.hpp"
#include "flatbound/io.hpp"
#include "flatbound/render.hpp"

namespace flatbound {

namespace {

class UsageError : public ParseError {
public:
    using ParseError::ParseError;
};

struct Target {
    std::string name;
    std::optional<DiscreteLoss> loss;
    PropertyCells cells;
};

const std::string& need(const std::optional<std::string>& v, const char* flag) {
    if (!v) throw UsageError(std::string("missing required option ") + flag);
    return *v;
}

Target load_target(const Request& req) {
    if (req.target && req.cells) throw UsageError("give only one of --target and --cells");
    const std::string& ref = req.target ? *req.target : need(req.cells, "--target or --cells");
    const Json doc = load_document(ref);
    if (auto j = select_role(doc, Role::Loss)) {
        DiscreteLoss loss = parse_loss(*j);
        PropertyCells cells = elicited_property(loss);
        return Target{ref, std::move(loss), std::move(cells)};
    }
    if (auto j = select_role(doc, Role::Cells)) {
        try {
            return Target{ref, std::nullopt, parse_cells(*j).build()};
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(ref + ": " + e.what());
        }
    }
    throw ParseError(ref + ": document holds neither a loss nor cells");
}

template <class T>
T load_part(const std::string& ref, Role role, T (*parse)(const Json&), const char* what) {
    const Json doc = load_document(ref);
    auto j = select_role(doc, role);
    if (!j) throw ParseError(ref + ": document holds no " + what);
    return parse(*j);
}

Vec parse_point(const std::string& text, const char* flag) {
    try {
        return parse_csv(text);
    } catch (const InputError& e) {
        throw ParseError(std::string(flag) + ": " + e.what());
    }
}

Distribution load_distribution(const Request& req, std::size_t n) {
    Vec p = parse_point(need(req.p, "--p"), "--p");
    if (p.size() != n) throw ParseError("--p: expected " + std::to_string(n) + " entries");
    try {
        return Distribution(std::move(p));
    } catch (const InputError& e) {
        throw ParseError(std::string("--p: ") + e.what());
    }
}

Json labels(const std::vector<std::string>& xs) {
    Json arr = Json::array();
    for (const auto& x : xs) arr.push_back(x);
    return arr;
}

Json cells_json(const PropertyCells& cells) {
    Json arr = Json::array();
    for (const auto& c : cells.cells()) arr.push_back(Json{{"report", c.report}, {"region", polyhedron_json(c.region)}});
    return arr;
}

Json analyze(const Request& req) {
    const Target t = load_target(req);
    Json out{{"command", "analyze"}, {"target", t.name}, {"outcomes", labels(t.cells.outcomes())}};
    out["cells"] = cells_json(t.cells);
    out["coverage_certified"] = t.cells.coverage_certified();
    if (t.loss) {
        // Concave and piecewise linear: the minimum sits at a simplex vertex and
        // the maximum at some cell vertex.
        std::optional<std::pair<Rational, Vec>> lo, hi;
        for (const auto& c : t.cells.cells()) {
            for (const auto& v : vertices(c.region)) {
                const Rational r = bayes_risk_at(*t.loss, v);
                if (!lo || r < lo->first) lo.emplace(r, v);
                if (!hi || r > hi->first) hi.emplace(r, v);
            }
        }
        Json pieces = Json::array();
        for (const auto& c : t.cells.cells()) pieces.push_back(Json{{"report", c.report}, {"risk", to_json(t.loss->row(c.report))}});
        out["bayes_risk"] = Json{{"min", to_json(lo->first)}, {"argmin", to_json(lo->second)},
                                 {"max", to_json(hi->first)}, {"argmax", to_json(hi->second)},
                                 {"pieces", pieces}};
    }
    return out;
}

Json bound(const Request& req) {
    const Target t = load_target(req);
    const Distribution p = load_distribution(req, t.cells.num_outcomes());
    const std::string& r = need(req.r, "--r");
    if (!t.cells.has_report(r)) throw ParseError("--r: unknown report '" + r + "'");
    std::optional<bool> elicitable;
    if (t.loss) elicitable = true;
    Json out{{"command", "bound"}};
    out.update(to_json(flat_lower_bound(t.cells, p, r, elicitable, t.name)));
    return out;
}

Json elicitable(const Request& req) {
    const Target t = load_target(req);
    Json out{{"command", "elicitable"}, {"target", t.name}};
    out.update(to_json(recover_loss(t.cells)));
    return out;
}

Json flat(const Request& req) {
    const Flat f = load_part(need(req.flat, "--flat"), Role::Flat, &parse_flat, "flat");
    const Polyhedron poly = flat_polyhedron(f);
    Json out{{"command", "flat"}, {"flat", to_json(f)}};
    if (poly.is_empty()) throw PreconditionError("the flat is empty");
    out["dimension"] = affine_dimension(poly);
    out["region"] = polyhedron_json(poly);
    out["interior_condition"] = condition_v_interior(f, f.domain);
    if (!req.target && !req.cells) return out;

    const Target t = load_target(req);
    if (t.cells.outcomes() != f.outcomes) throw ParseError("flat and target outcomes differ");
    if (req.r) {
        if (!t.cells.has_report(*req.r)) throw ParseError("--r: unknown report '" + *req.r + "'");
        Vec p;
        if (req.p) {
            p = load_distribution(req, f.outcomes.size()).probs();
        } else {
            const auto vs = vertices(poly);
            p = zeros(f.outcomes.size());
            for (const auto& v : vs) p = p + v;
            p = Rational(1, static_cast<long>(vs.size())) * p;
        }
        const FlatCertificate cert = certify_flat(f, p, t.cells.cell(*req.r));
        Json c{{"r", *req.r}, {"p", to_json(p)}};
        if (std::holds_alternative<Certified>(cert)) {
            c["result"] = "certified";
        } else if (std::holds_alternative<NotOnFlat>(cert)) {
            c["result"] = "not-on-flat";
        } else {
            c["result"] = "violation";
            c["point"] = to_json(std::get<Violation>(cert).point);
        }
        out["certificate"] = c;
    }
    if (t.loss) {
        const RiskBound b = bayes_risk_bound(*t.loss, f, t.cells.restriction());
        if (const auto* k = std::get_if<std::size_t>(&b)) {
            out["bayes_risk_bound"] = Json{{"result", "bound"}, {"bound", *k}};
        } else {
            out["bayes_risk_bound"] = Json{{"result", "not-applicable"}, {"reason", std::get<NotApplicable>(b).reason}};
        }
    }
    return out;
}

Json indirect(const Request& req) {
    const PolyhedralSurrogate L = load_part(need(req.surrogate, "--surrogate"), Role::Surrogate, &parse_surrogate, "surrogate");
    const Link psi = load_part(need(req.link, "--link"), Role::Link, &parse_link, "link");
    const Target t = load_target(req);
    if (t.cells.outcomes() != L.outcomes()) throw ParseError("surrogate and target outcomes differ");
    Json out{{"command", "indirect"}, {"target", t.name}};
    out.update(to_json(check_indirect_elicitation(L, psi, t.cells, req.probe_budget)));
    return out;
}

Json render_cmd(const Request& req) {
    const Target t = load_target(req);
    const std::string& path = need(req.out, "--out");
    std::vector<Annotation> marks;
    for (const auto& m : req.marks) {
        const auto eq = m.find('=');
        if (eq == std::string::npos) throw ParseError("--mark: expected LABEL=p1,p2,p3");
        marks.push_back(Annotation{parse_point(m.substr(eq + 1), "--mark"), m.substr(0, eq)});
        if (marks.back().point.size() != 3) throw ParseError("--mark: expected 3 coordinates");
    }
    std::vector<Flat> flats;
    if (req.flat) flats.push_back(load_part(*req.flat, Role::Flat, &parse_flat, "flat"));
    const std::string svg = render_simplex(t.cells, marks, flats, t.name);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParseError("--out: cannot write " + path);
    file << svg;
    return Json{{"command", "render"}, {"target", t.name}, {"out", path}, {"bytes", svg.size()}};
}

}  // namespace

RunResult run(const Request& req) {
    RunResult res;
    try {
        Json out;
        if (req.command == "analyze") {
            out = analyze(req);
        } else if (req.command == "bound") {
            out = bound(req);
        } else if (req.command == "elicitable") {
            out = elicitable(req);
        } else if (req.command == "flat") {
            out = flat(req);
        } else if (req.command == "indirect") {
            out = indirect(req);
        } else if (req.command == "render") {
            out = render_cmd(req);
        } else {
            throw UsageError("unknown command '" + req.command + "'");
        }
        res.output = out.dump(2) + "\n";
    } catch (const InputError& e) {
        res.exit_code = 2;
        res.error = std::string("error: ") + e.what() + "\n";
    } catch (const PreconditionError& e) {
        res.exit_code = 3;
        res.error = std::string("precondition failed: ") + e.what() + "\n";
    } catch (const InvariantError& e) {
        res.exit_code = 4;
        res.error = std::string("internal error: ") + e.what() + "\n";
    } catch (const std::exception& e) {
        res.exit_code = 4;
        res.error = std::string("internal error: ") + e.what() + "\n";
    }
    return res;
}

}  // namespace flatbound

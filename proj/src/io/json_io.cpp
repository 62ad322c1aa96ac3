#include <fstream>
#include <sstream>

#include "flatbound/io.hpp"

namespace flatbound {

namespace detail {
struct BundledEntry {
    const char* name;
    const char* text;
};
extern const BundledEntry kBundled[];
extern const std::size_t kBundledCount;
}  // namespace detail

namespace {

std::string at(const std::string& where, const std::string& key) { return where + "." + key; }
std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing field '" + key + "'");
    return *it;
}

const Json& array_field(const Json& obj, const std::string& key, const std::string& where) {
    const Json& v = field(obj, key, where);
    if (!v.is_array()) fail(at(where, key), "expected an array");
    return v;
}

std::string parse_label(const Json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string label");
    return v.get<std::string>();
}

std::vector<std::string> parse_labels(const Json& obj, const std::string& key, const std::string& where) {
    const Json& arr = array_field(obj, key, where);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(parse_label(arr[i], at(at(where, key), i)));
    return out;
}

std::size_t parse_count(const Json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(where, "expected a nonnegative integer");
    return v.get<std::size_t>();
}

void parse_constraints(const Json& obj, const std::string& key, const std::string& where, std::size_t dim,
                       bool equality, Polyhedron& out) {
    if (!obj.contains(key)) return;
    const Json& arr = array_field(obj, key, where);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = at(at(where, key), i);
        Vec normal = parse_vector(field(arr[i], "normal", w), at(w, "normal"));
        if (normal.size() != dim) fail(at(w, "normal"), "expected " + std::to_string(dim) + " entries");
        Rational offset = parse_rational(field(arr[i], "offset", w), at(w, "offset"));
        if (equality) {
            out.add_equality(std::move(normal), std::move(offset));
        } else {
            out.add_inequality(std::move(normal), std::move(offset));
        }
    }
}

Polyhedron parse_region(const Json& obj, const std::string& where, std::size_t dim) {
    Polyhedron out(dim);
    parse_constraints(obj, "inequalities", where, dim, false, out);
    parse_constraints(obj, "equalities", where, dim, true, out);
    return out;
}

Json constraints_json(const std::vector<Constraint>& cs) {
    Json arr = Json::array();
    for (const auto& c : cs) arr.push_back(Json{{"normal", to_json(c.normal)}, {"offset", to_json(c.offset)}});
    return arr;
}

void put_region(Json& obj, const Polyhedron& region) {
    obj["inequalities"] = constraints_json(region.inequalities());
    if (!region.equalities().empty()) obj["equalities"] = constraints_json(region.equalities());
}

template <class Fn>
auto wrap(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const InputError& e) {
        throw ParseError(e.what());
    }
}

Json vertices_json(const std::vector<Vec>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back(to_json(v));
    return arr;
}

Json labels_json(const std::vector<std::string>& xs) {
    Json arr = Json::array();
    for (const auto& x : xs) arr.push_back(x);
    return arr;
}

}  // namespace

Json parse_json(std::string_view text, const std::string& source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // The library message already names line and column.
        throw ParseError(source + ": " + e.what());
    }
}

Rational parse_rational(const Json& value, const std::string& where) {
    if (value.is_number_integer()) {
        return value.is_number_unsigned() ? Rational(value.get<unsigned long>()) : Rational(value.get<long>());
    }
    if (value.is_number_float()) fail(where, "decimal numbers are rejected; write rationals as \"a/b\" strings");
    if (!value.is_string()) fail(where, "expected a rational string");
    try {
        return Rational::parse(value.get<std::string>());
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

Vec parse_vector(const Json& value, const std::string& where) {
    if (!value.is_array()) fail(where, "expected an array of rationals");
    Vec out;
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(parse_rational(value[i], at(where, i)));
    return out;
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const Vec& v) {
    Json arr = Json::array();
    for (const auto& x : v) arr.push_back(x.str());
    return arr;
}

PropertyCells CellsDocument::build() const { return PropertyCells(outcomes, cells, restriction); }

DiscreteLoss parse_loss(const Json& doc) {
    const std::string w = "loss";
    auto reports = parse_labels(doc, "reports", w);
    auto outcomes = parse_labels(doc, "outcomes", w);
    const Json& m = array_field(doc, "matrix", w);
    if (m.size() != reports.size()) fail(at(w, "matrix"), "expected one row per report");
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < m.size(); ++i) {
        Vec row = parse_vector(m[i], at(at(w, "matrix"), i));
        if (row.size() != outcomes.size()) {
            fail(at(at(w, "matrix"), i), "ragged matrix: expected " + std::to_string(outcomes.size()) + " entries");
        }
        rows.push_back(std::move(row));
    }
    return wrap([&] { return DiscreteLoss(std::move(reports), std::move(outcomes), std::move(rows)); });
}

CellsDocument parse_cells(const Json& doc) {
    const std::string w = "cells";
    CellsDocument out;
    out.outcomes = parse_labels(doc, "outcomes", w);
    const std::size_t n = out.outcomes.size();
    const Json& arr = array_field(doc, "cells", w);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string cw = at(at(w, "cells"), i);
        out.cells.push_back(Cell{parse_label(field(arr[i], "report", cw), at(cw, "report")), parse_region(arr[i], cw, n)});
    }
    if (doc.contains("restriction")) out.restriction = parse_region(doc["restriction"], at(w, "restriction"), n);
    return out;
}

PolyhedralSurrogate parse_surrogate(const Json& doc) {
    const std::string w = "surrogate";
    const std::size_t d = parse_count(field(doc, "dim", w), at(w, "dim"));
    auto outcomes = parse_labels(doc, "outcomes", w);
    const Json& arr = array_field(doc, "pieces", w);
    if (arr.size() != outcomes.size()) fail(at(w, "pieces"), "expected one piece list per outcome");
    std::vector<std::vector<AffinePiece>> pieces(arr.size());
    for (std::size_t y = 0; y < arr.size(); ++y) {
        const std::string yw = at(at(w, "pieces"), y);
        if (!arr[y].is_array()) fail(yw, "expected an array of pieces");
        for (std::size_t i = 0; i < arr[y].size(); ++i) {
            const std::string pw = at(yw, i);
            Vec g = parse_vector(field(arr[y][i], "gradient", pw), at(pw, "gradient"));
            if (g.size() != d) fail(at(pw, "gradient"), "expected " + std::to_string(d) + " entries");
            pieces[y].push_back({std::move(g), parse_rational(field(arr[y][i], "intercept", pw), at(pw, "intercept"))});
        }
    }
    return wrap([&] { return PolyhedralSurrogate(d, std::move(outcomes), std::move(pieces)); });
}

Link parse_link(const Json& doc) {
    const std::string w = "link";
    const std::size_t d = parse_count(field(doc, "dim", w), at(w, "dim"));
    const Json& arr = array_field(doc, "regions", w);
    std::vector<LinkRegion> regions;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string rw = at(at(w, "regions"), i);
        regions.push_back({parse_region(arr[i], rw, d), parse_label(field(arr[i], "report", rw), at(rw, "report"))});
    }
    return Link(d, std::move(regions), parse_label(field(doc, "default", w), at(w, "default")));
}

Flat parse_flat(const Json& doc) {
    const std::string w = "flat";
    Flat out;
    out.outcomes = parse_labels(doc, "outcomes", w);
    const Json& arr = array_field(doc, "columns", w);
    for (std::size_t j = 0; j < arr.size(); ++j) {
        Vec col = parse_vector(arr[j], at(at(w, "columns"), j));
        if (col.size() != out.outcomes.size()) fail(at(at(w, "columns"), j), "expected one entry per outcome");
        out.columns.push_back(std::move(col));
    }
    if (doc.contains("domain")) out.domain = parse_region(doc["domain"], at(w, "domain"), out.outcomes.size());
    return out;
}

Json to_json(const DiscreteLoss& loss) {
    Json m = Json::array();
    for (const auto& row : loss.matrix()) m.push_back(to_json(row));
    return Json{{"reports", labels_json(loss.reports())}, {"outcomes", labels_json(loss.outcomes())}, {"matrix", m}};
}

Json to_json(const CellsDocument& cells) {
    Json arr = Json::array();
    for (const auto& c : cells.cells) {
        Json obj{{"report", c.report}};
        put_region(obj, c.region);
        arr.push_back(std::move(obj));
    }
    Json out{{"outcomes", labels_json(cells.outcomes)}, {"cells", arr}};
    if (cells.restriction) {
        Json r = Json::object();
        put_region(r, *cells.restriction);
        out["restriction"] = r;
    }
    return out;
}

Json to_json(const PolyhedralSurrogate& L) {
    Json pieces = Json::array();
    for (std::size_t y = 0; y < L.num_outcomes(); ++y) {
        Json ps = Json::array();
        for (const auto& p : L.pieces(y)) ps.push_back(Json{{"gradient", to_json(p.gradient)}, {"intercept", to_json(p.intercept)}});
        pieces.push_back(std::move(ps));
    }
    return Json{{"dim", L.dim()}, {"outcomes", labels_json(L.outcomes())}, {"pieces", pieces}};
}

Json to_json(const Link& link) {
    Json regions = Json::array();
    for (const auto& r : link.regions()) {
        Json obj = Json::object();
        put_region(obj, r.region);
        obj["report"] = r.report;
        regions.push_back(std::move(obj));
    }
    return Json{{"dim", link.dim()}, {"regions", regions}, {"default", link.default_report()}};
}

Json to_json(const Flat& flat) {
    Json cols = Json::array();
    for (const auto& c : flat.columns) cols.push_back(to_json(c));
    Json out{{"outcomes", labels_json(flat.outcomes)}, {"columns", cols}};
    if (flat.domain) {
        Json d = Json::object();
        put_region(d, *flat.domain);
        out["domain"] = d;
    }
    return out;
}

Json polyhedron_json(const Polyhedron& region) {
    Json out = Json::object();
    put_region(out, region);
    if (!out.contains("equalities")) out["equalities"] = Json::array();
    if (is_bounded(region)) out["vertices"] = vertices_json(vertices(region));
    return out;
}

Json to_json(const FlatSearch& s) {
    return Json{{"k", s.k},
                {"face_dim", s.face_dim},
                {"fsd_dim", s.fsd_dim},
                {"face_column", s.face_column},
                {"status", to_string(s.status)},
                {"witness", to_json(s.witness)}};
}

Json to_json(const BoundReport& r) {
    Json out{{"target", r.target}, {"p", to_json(r.p)}, {"r", r.r}, {"corollary", to_string(r.corollary)}};
    out["checks"] = labels_json(r.checks);
    out["fsd_bound"] = r.fsd_bound;
    out["flat_bound"] = r.flat_bound ? Json(*r.flat_bound) : Json(nullptr);
    if (r.search) {
        out["status"] = to_string(r.search->status);
        out["search"] = to_json(*r.search);
    } else {
        out["status"] = "not-applicable";
    }
    return out;
}

Json to_json(const RecoveryResult& result) {
    if (const auto* f = std::get_if<Found>(&result)) return Json{{"result", "Found"}, {"loss", to_json(f->loss)}};
    const auto& ne = std::get<NotElicitable>(result);
    return Json{{"result", "NotElicitable"}, {"conflict", labels_json(ne.conflict)}, {"reason", ne.reason}};
}

Json to_json(const IndirectElicitationReport& rep) {
    Json out = Json::object();
    if (rep.violations.empty()) {
        out["verdict"] = "no-violation-found";
    } else {
        const auto& v = rep.violations.front();
        out["verdict"] = "violation";
        out["violation"] = Json{{"u", to_json(v.u)}, {"p", to_json(v.p)}, {"expected", labels_json(v.expected)}, {"got", v.got}};
    }
    Json all = Json::array();
    for (const auto& v : rep.violations) {
        all.push_back(Json{{"u", to_json(v.u)}, {"p", to_json(v.p)}, {"expected", labels_json(v.expected)}, {"got", v.got}});
    }
    out["violations"] = all;
    out["probes"] = Json{{"count", rep.probes}, {"provenance", labels_json(rep.provenance)}};
    out["exhaustiveness"] = to_string(rep.exhaustiveness);
    return out;
}

const std::map<std::string, std::string_view>& bundled_examples() {
    static const std::map<std::string, std::string_view> table = [] {
        std::map<std::string, std::string_view> m;
        for (std::size_t i = 0; i < detail::kBundledCount; ++i) m.emplace(detail::kBundled[i].name, detail::kBundled[i].text);
        return m;
    }();
    return table;
}

Json load_document(const std::string& ref) {
    std::string name = ref, key;
    if (auto hash = ref.rfind('#'); hash != std::string::npos) {
        name = ref.substr(0, hash);
        key = ref.substr(hash + 1);
    }
    Json doc;
    const auto& bundled = bundled_examples();
    if (auto it = bundled.find(name); it != bundled.end()) {
        doc = parse_json(it->second, name);
    } else {
        std::ifstream in(name, std::ios::binary);
        if (!in) throw ParseError(name + ": no bundled example or readable file with this name");
        std::ostringstream buf;
        buf << in.rdbuf();
        doc = parse_json(buf.str(), name);
    }
    if (key.empty()) return doc;
    if (!doc.is_object() || !doc.contains(key)) throw ParseError(ref + ": no entry '" + key + "'");
    return doc[key];
}

std::optional<Json> select_role(const Json& doc, Role role) {
    if (!doc.is_object()) return std::nullopt;
    const char* marker = nullptr;
    const char* entry = nullptr;
    switch (role) {
        case Role::Loss: marker = "matrix"; entry = "loss"; break;
        case Role::Cells: marker = "cells"; entry = "property"; break;
        case Role::Surrogate: marker = "pieces"; entry = "surrogate"; break;
        case Role::Link: marker = "regions"; entry = "link"; break;
        case Role::Flat: marker = "columns"; entry = "flat"; break;
    }
    if (doc.contains(marker)) return doc;
    if (doc.contains(entry) && doc[entry].is_object()) return doc[entry];
    return std::nullopt;
}

}  // namespace flatbound

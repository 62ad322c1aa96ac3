#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flatbound/errors.hpp"
#include "flatbound/flats.hpp"
#include "flatbound/loss.hpp"
#include "flatbound/surrogate.hpp"
#include "json.hpp"

namespace flatbound {

using Json = nlohmann::ordered_json;

// Malformed document. The message starts with the source name and the field path.
class ParseError : public InputError {
public:
    using InputError::InputError;
};

/// Parses JSON text; syntax errors carry line and column.
Json parse_json(std::string_view text, const std::string& source);

/// Rationals are "a/b" or integer strings; JSON integers are accepted too and
/// decimals are rejected.
Rational parse_rational(const Json& value, const std::string& where);
Vec parse_vector(const Json& value, const std::string& where);
Json to_json(const Rational& r);
Json to_json(const Vec& v);

/// A cells document as written, before the simplex constraints are added.
struct CellsDocument {
    std::vector<std::string> outcomes;
    std::vector<Cell> cells;
    std::optional<Polyhedron> restriction;

    PropertyCells build() const;
};

DiscreteLoss parse_loss(const Json& doc);
CellsDocument parse_cells(const Json& doc);
PolyhedralSurrogate parse_surrogate(const Json& doc);
Link parse_link(const Json& doc);
Flat parse_flat(const Json& doc);

Json to_json(const DiscreteLoss& loss);
Json to_json(const CellsDocument& cells);
Json to_json(const PolyhedralSurrogate& surrogate);
Json to_json(const Link& link);
Json to_json(const Flat& flat);

Json polyhedron_json(const Polyhedron& region);
Json to_json(const FlatSearch& search);
Json to_json(const BoundReport& report);
Json to_json(const RecoveryResult& result);
Json to_json(const IndirectElicitationReport& report);

/// Bundled example documents keyed by name (abstain3, weather, ...).
const std::map<std::string, std::string_view>& bundled_examples();

/// Resolves NAME or PATH, optionally suffixed with #key to pick one entry
/// of a bundle.
Json load_document(const std::string& ref);

/// Picks the part of a document playing a role. A document is used as is when
/// it carries the role's marker field, otherwise the bundle entry named after
/// the role is used.
enum class Role { Loss, Cells, Surrogate, Link, Flat };
std::optional<Json> select_role(const Json& doc, Role role);

}  // namespace flatbound

#pragma once

// JSON forms of every object, schema "stratk-1". Output is normalized:
// keys sorted, ids sorted, rationals as reduced strings, so that parsing and
// re-emitting is byte-identical.

#include <string>
#include <vector>

#include "json.hpp"
#include "stratk/homotopy.hpp"
#include "stratk/ktheory.hpp"
#include "stratk/tangent.hpp"

namespace stratk::io {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "stratk-1";

/// Throws parse on a missing or unknown schema field.
void check_schema(const Json& j);
Json header(const std::string& kind);
std::string kind_of(const Json& j);

Json load_file(const std::string& path);
/// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

Rational rational_from_json(const Json& j);
Json to_json(const Rational& q);
Matrix matrix_from_json(const Json& j);
Json to_json(const Matrix& m);

/// A builtin name ("signed_perm(2)") or an embedded category object.
StructureCategory category_from_json(const Json& j);
Json to_json(const StructureCategory& c);
/// Builtin name or a path to a category file.
StructureCategory category_from_arg(const std::string& arg);

CellComplex complex_from_json(const Json& j);
Json to_json(const CellComplex& x, bool with_strata = false);
CellularMap map_from_json(const Json& j, const CellComplex& src, const CellComplex& dst);
Json to_json(const CellularMap& f);

/// A "space" file, or a "complex" file read as a one-stratum space.
StratifiedSpace space_from_json(const Json& j);
Json to_json(const StratifiedSpace& s);

VBundle bundle_from_json(const Json& j);
Json to_json(const VBundle& e);

StratifiedBundle stratified_from_json(const Json& j);
Json to_json(const StratifiedBundle& x);

PolytopalManifold polytope_from_json(const Json& j);
Json to_json(const PolytopalManifold& m);

Json to_json(const ValidationReport& r);
Json to_json(const KGroup& k);

}  // namespace stratk::io

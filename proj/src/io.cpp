#include "stratk/io.hpp"

#include <filesystem>
#include <fstream>
#include <algorithm>

namespace stratk::io {

namespace {

// Directory of the file being read; string references resolve against it.
thread_local std::filesystem::path current_dir;

[[noreturn]] void fail(const std::string& entity, const std::string& message) {
  throw Error(Error::Kind::parse, entity, message);
}

const Json& field(const Json& j, const char* key, const std::string& entity) {
  if (!j.is_object()) fail(entity, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(entity, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string string_of(const Json& j, const std::string& entity) {
  if (!j.is_string()) fail(entity, "expected a string");
  return j.get<std::string>();
}

std::size_t size_of(const Json& j, const std::string& entity) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(entity, "expected a non-negative integer");
  return j.get<std::size_t>();
}

bool is_reference(const Json& j) {
  if (!j.is_string()) return false;
  const auto s = j.get<std::string>();
  return s.size() > 5 && s.compare(s.size() - 5, 5, ".json") == 0;
}

// Inline object, or a path to a file holding it.
Json resolve(const Json& j) { return is_reference(j) ? load_file((current_dir / j.get<std::string>()).string()) : j; }

EdgePath path_from_json(const Json& j, const std::string& entity) {
  if (!j.is_array()) fail(entity, "expected an edge path");
  EdgePath p;
  for (const auto& step : j) {
    if (!step.is_array() || step.size() != 2 || !step[0].is_string() || !step[1].is_number_integer())
      fail(entity, "edge path steps are [edge, +1 or -1]");
    const int sign = step[1].get<int>();
    if (sign != 1 && sign != -1) fail(entity, "edge path steps are [edge, +1 or -1]");
    p.push_back({step[0].get<std::string>(), sign == 1});
  }
  return p;
}

Json path_json(const EdgePath& p) {
  Json out = Json::array();
  for (const auto& s : p) out.push_back(Json::array({s.edge, s.forward ? 1 : -1}));
  return out;
}

std::map<std::string, Matrix> matrices_from_json(const Json& j, const std::string& entity) {
  if (!j.is_object()) fail(entity, "expected an object of matrices");
  std::map<std::string, Matrix> out;
  for (const auto& [k, v] : j.items()) out.emplace(k, matrix_from_json(v));
  return out;
}

Json matrices_json(const std::map<std::string, Matrix>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = to_json(v);
  return out;
}

std::vector<std::size_t> sizes_from_json(const Json& j, const std::string& entity) {
  if (!j.is_array()) fail(entity, "expected a list of dimensions");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(size_of(x, entity));
  return out;
}

bool is_builtin(const StructureCategory& c) {
  try {
    const auto b = StructureCategory::from_name(c.name());
    if (b.name() != c.name() || b.is_open() != c.is_open() || b.objects() != c.objects()) return false;
    if (b.is_open()) return b.max_dim() == c.max_dim();
    std::set<Matrix> x(b.morphisms().begin(), b.morphisms().end()), y(c.morphisms().begin(), c.morphisms().end());
    return x == y;
  } catch (const Error&) {
    return false;
  }
}

Json category_ref(const CategoryPtr& c) {
  if (is_builtin(*c)) return c->name();
  Json j = to_json(*c);
  j.erase("schema");
  return j;
}

CategoryPtr category_of(const Json& j) { return share(category_from_json(j)); }

VBundle bundle_on(const CellComplex& base, const CategoryPtr& c, const Json& j, const std::string& entity) {
  VBundle e;
  e.base = base;
  e.category = c;
  e.fiber = sizes_from_json(field(j, "fiber", entity), entity + ".fiber");
  e.labels = matrices_from_json(field(j, "labels", entity), entity + ".labels");
  return e;
}

Json bundle_body(const VBundle& e) {
  Json j = Json::object();
  j["fiber"] = e.fiber;
  j["labels"] = matrices_json(e.labels);
  return j;
}

}  // namespace

void check_schema(const Json& j) {
  if (!j.is_object()) fail("schema", "expected a JSON object");
  auto it = j.find("schema");
  if (it == j.end()) fail("schema", "missing schema version");
  if (!it->is_string() || it->get<std::string>() != kSchema)
    fail("schema", "unsupported schema version " + it->dump() + ", expected \"" + kSchema + "\"");
}

Json header(const std::string& kind) {
  Json j = Json::object();
  j["schema"] = kSchema;
  j["kind"] = kind;
  return j;
}

std::string kind_of(const Json& j) { return string_of(field(j, "kind", "kind"), "kind"); }

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::usage, path, "cannot open file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(Error::Kind::parse, path, e.what());
  }
  try {
    check_schema(j);
  } catch (const Error& e) {
    throw Error(Error::Kind::parse, path, e.what());
  }
  current_dir = std::filesystem::path(path).parent_path();
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  fail(j.dump(), "rationals are strings such as \"-1/2\" or integers");
}

Json to_json(const Rational& q) { return q.get_str(); }

Matrix matrix_from_json(const Json& j) {
  const auto& shape = field(j, "shape", "matrix");
  if (!shape.is_array() || shape.size() != 2) fail("matrix", "shape is [rows, cols]");
  const std::size_t r = size_of(shape[0], "matrix"), c = size_of(shape[1], "matrix");
  const auto& rows = field(j, "rows", "matrix");
  if (!rows.is_array() || rows.size() != r) fail(j.dump(), "row count differs from the shape");
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!rows[i].is_array() || rows[i].size() != c) fail(j.dump(), "row length differs from the shape");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = rational_from_json(rows[i][k]);
  }
  return m;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  Json j = Json::object();
  j["shape"] = Json::array({m.rows(), m.cols()});
  j["rows"] = std::move(rows);
  return j;
}

StructureCategory category_from_json(const Json& raw) {
  if (raw.is_string() && !is_reference(raw)) return StructureCategory::from_name(raw.get<std::string>());
  const Json j = resolve(raw);
  if (auto it = j.find("builtin"); it != j.end()) return StructureCategory::from_name(string_of(*it, "builtin"));
  const std::string name = string_of(field(j, "name", "category"), "category.name");
  std::set<std::size_t> objects;
  for (auto d : sizes_from_json(field(j, "objects", name), name + ".objects")) objects.insert(d);
  std::vector<Matrix> morphisms;
  const auto& ms = field(j, "morphisms", name);
  if (!ms.is_array()) fail(name, "morphisms is a list of matrices");
  for (const auto& m : ms) morphisms.push_back(matrix_from_json(m));
  const auto& f = field(j, "flags", name);
  StructureCategory::Flags flags;
  flags.is_groupoid = f.value("groupoid", false);
  flags.has_sum = f.value("sum", false);
  flags.has_tensor = f.value("tensor", false);
  return StructureCategory::finite(name, objects, std::move(morphisms), flags);
}

Json to_json(const StructureCategory& c) {
  Json j = header("category");
  if (c.is_open()) {
    j["builtin"] = c.name();
    return j;
  }
  j["name"] = c.name();
  j["objects"] = Json(std::vector<std::size_t>(c.objects().begin(), c.objects().end()));
  std::set<Matrix> sorted(c.morphisms().begin(), c.morphisms().end());
  Json ms = Json::array();
  for (const auto& m : sorted) ms.push_back(to_json(m));
  j["morphisms"] = std::move(ms);
  j["flags"] = {{"groupoid", c.flags().is_groupoid}, {"sum", c.flags().has_sum}, {"tensor", c.flags().has_tensor}};
  return j;
}

StructureCategory category_from_arg(const std::string& arg) {
  if (arg.size() > 5 && arg.compare(arg.size() - 5, 5, ".json") == 0) return category_from_json(load_file(arg));
  return StructureCategory::from_name(arg);
}

CellComplex complex_from_json(const Json& raw) {
  const Json j = resolve(raw);
  const auto& cells = field(j, "cells", "complex");
  if (!cells.is_array()) fail("complex", "cells is a list");
  std::vector<const Json*> order;
  for (const auto& c : cells) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(), [](const Json* a, const Json* b) {
    return a->value("dim", 0) < b->value("dim", 0);
  });
  CellComplex x;
  for (const Json* cp : order) {
    const Json& c = *cp;
    const std::string id = string_of(field(c, "id", "cell"), "cell.id");
    if (x.has(id)) fail(id, "duplicate cell id");
    const int dim = static_cast<int>(size_of(field(c, "dim", id), id));
    const int stratum = c.value("stratum", 0);
    Cell cell{id, dim, {}, {}};
    if (dim == 2) {
      if (c.contains("walk")) cell.walk = path_from_json(c["walk"], id);
      if (cell.walk.empty()) cell.boundary = {string_of(field(c, "basepoint", id), id)};
    } else if (dim > 0) {
      const auto& b = field(c, "boundary", id);
      if (!b.is_array()) fail(id, "boundary is a list of cell ids");
      for (const auto& f : b) cell.boundary.push_back(string_of(f, id));
      if (dim == 1 && cell.boundary.size() != 2) fail(id, "an edge has boundary [src, dst]");
    }
    try {
      x.add(cell, stratum);
    } catch (const Error& e) {
      fail(id, e.what());
    }
  }
  return x;
}

Json to_json(const CellComplex& x, bool with_strata) {
  Json cells = Json::array();
  for (const auto& [id, c] : x.cells()) {
    Json j = Json::object();
    j["id"] = id;
    j["dim"] = c.dim;
    if (c.dim == 2) {
      if (c.walk.empty()) j["basepoint"] = c.boundary.at(0);
      else j["walk"] = path_json(c.walk);
    } else if (c.dim > 0) {
      j["boundary"] = c.boundary;
    }
    if (with_strata) j["stratum"] = x.stratum(id);
    cells.push_back(std::move(j));
  }
  Json j = header("complex");
  j["cells"] = std::move(cells);
  return j;
}

CellularMap map_from_json(const Json& j, const CellComplex& src, const CellComplex& dst) {
  CellularMap f(src, dst);
  if (auto it = j.find("vertices"); it != j.end())
    for (const auto& [k, v] : it->items()) f.set_vertex(k, string_of(v, k));
  if (auto it = j.find("edges"); it != j.end())
    for (const auto& [k, v] : it->items()) f.set_edge(k, path_from_json(v, k));
  if (auto it = j.find("cells"); it != j.end())
    for (const auto& [k, v] : it->items()) f.set_cell(k, string_of(v, k));
  return f;
}

Json to_json(const CellularMap& f) {
  Json vertices = Json::object(), edges = Json::object(), cells = Json::object();
  for (const auto& [id, c] : f.src().cells()) {
    if (!f.defined(id)) continue;
    if (c.dim == 0) vertices[id] = f.image(id);
    else if (c.dim == 1) edges[id] = path_json(f.path(id));
    else cells[id] = f.image(id);
  }
  return {{"vertices", vertices}, {"edges", edges}, {"cells", cells}};
}

StratifiedSpace space_from_json(const Json& raw) {
  const Json j = resolve(raw);
  StratifiedSpace s;
  if (kind_of(j) == "complex") {
    s.base0 = complex_from_json(j);
    return s;
  }
  if (kind_of(j) != "space") fail("space", "expected a space or a complex");
  s.base0 = complex_from_json(field(j, "base0", "space"));
  const auto& layers = field(j, "layers", "space");
  if (!layers.is_array()) fail("space", "layers is a list");
  CellComplex below = s.base0;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string entity = "layer " + std::to_string(k + 1);
    const auto& l = layers[k];
    Layer layer;
    layer.m = complex_from_json(field(l, "m", entity));
    for (const auto& a : field(l, "a", entity)) layer.a.insert(string_of(a, entity + ".a"));
    if (!layer.m.is_subcomplex(layer.a)) fail(entity, "attaching set is not a subcomplex of M");
    layer.h = map_from_json(field(l, "h", entity), layer.m.subcomplex(layer.a), below);
    s.layers.push_back(std::move(layer));
    below = assemble(s);
  }
  return s;
}

Json to_json(const StratifiedSpace& s) {
  Json j = header("space");
  j["base0"] = to_json(s.base0);
  j["base0"].erase("schema");
  Json layers = Json::array();
  for (const auto& l : s.layers) {
    Json m = to_json(l.m);
    m.erase("schema");
    layers.push_back({{"m", m}, {"a", std::vector<std::string>(l.a.begin(), l.a.end())}, {"h", to_json(l.h)}});
  }
  j["layers"] = std::move(layers);
  return j;
}

VBundle bundle_from_json(const Json& raw) {
  const Json j = resolve(raw);
  if (kind_of(j) != "bundle") fail("bundle", "expected a bundle");
  const CellComplex base = complex_from_json(field(j, "base", "bundle"));
  return bundle_on(base, category_of(field(j, "category", "bundle")), j, "bundle");
}

Json to_json(const VBundle& e) {
  Json j = header("bundle");
  j.update(bundle_body(e));
  j["base"] = to_json(e.base);
  j["base"].erase("schema");
  j["category"] = category_ref(e.category);
  return j;
}

StratifiedBundle stratified_from_json(const Json& raw) {
  const Json j = resolve(raw);
  if (kind_of(j) == "bundle") return single_stratum(bundle_from_json(j));
  if (kind_of(j) != "stratified_bundle") fail("stratified_bundle", "expected a stratified bundle");
  StratifiedSpace space = space_from_json(field(j, "space", "stratified_bundle"));
  const CategoryPtr c = category_of(field(j, "category", "stratified_bundle"));
  VBundle layer0 = bundle_on(space.base0, c, field(j, "layer0", "stratified_bundle"), "layer0");
  const auto& ls = field(j, "layers", "stratified_bundle");
  if (!ls.is_array() || ls.size() != space.layers.size()) fail("layers", "one entry per layer of the space");
  std::vector<AttachLayer> layers;
  for (std::size_t k = 0; k < ls.size(); ++k) {
    const std::string entity = "layer " + std::to_string(k + 1);
    AttachLayer l{bundle_on(space.layers[k].m, c, ls[k], entity), {}};
    l.phi = matrices_from_json(field(ls[k], "fiber_maps", entity), entity + ".fiber_maps");
    layers.push_back(std::move(l));
  }
  return build_stratified(std::move(space), std::move(layer0), std::move(layers));
}

Json to_json(const StratifiedBundle& x) {
  Json j = header("stratified_bundle");
  j["space"] = to_json(x.space);
  j["space"].erase("schema");
  j["category"] = category_ref(x.category());
  j["layer0"] = bundle_body(x.layer0);
  Json layers = Json::array();
  for (const auto& l : x.layers) {
    Json b = bundle_body(l.m);
    b["fiber_maps"] = matrices_json(l.phi);
    layers.push_back(std::move(b));
  }
  j["layers"] = std::move(layers);
  return j;
}

PolytopalManifold polytope_from_json(const Json& raw) {
  const Json j = resolve(raw);
  if (kind_of(j) != "polytope") fail("polytope", "expected a polytope");
  PolytopalManifold m;
  m.ambient = size_of(field(j, "ambient", "polytope"), "ambient");
  const auto& vs = field(j, "vertices", "polytope");
  if (!vs.is_object()) fail("vertices", "vertices maps ids to coordinates");
  for (const auto& [id, p] : vs.items()) {
    if (!p.is_array() || p.size() != m.ambient) fail(id, "coordinates need one entry per ambient axis");
    std::vector<Rational> q;
    for (const auto& x : p) q.push_back(rational_from_json(x));
    m.coords[id] = std::move(q);
    m.cells.add_vertex(id);
  }
  const auto& cells = field(j, "cells", "polytope");
  if (!cells.is_array()) fail("cells", "cells is a list");
  std::map<int, std::vector<std::pair<std::string, std::vector<std::string>>>> by_level;
  std::map<std::string, std::set<std::string>> verts_of;
  for (const auto& c : cells) {
    const std::string id = string_of(field(c, "id", "cell"), "cell.id");
    const auto level = static_cast<int>(size_of(field(c, "level", id), id));
    if (level == 0) fail(id, "vertices are listed under \"vertices\"");
    std::vector<std::string> vl;
    for (const auto& v : field(c, "vertices", id)) {
      vl.push_back(string_of(v, id));
      if (!m.coords.count(vl.back())) fail(id, "unknown vertex " + vl.back());
    }
    verts_of[id] = std::set<std::string>(vl.begin(), vl.end());
    by_level[level].emplace_back(id, std::move(vl));
  }
  std::map<std::pair<std::string, std::string>, std::string> edge_of;
  for (const auto& [level, list] : by_level)
    for (const auto& [id, vl] : list) {
      if (m.cells.has(id)) fail(id, "duplicate cell id");
      if (level == 1) {
        if (vl.size() != 2) fail(id, "an edge lists two vertices");
        m.cells.add_edge(id, vl[0], vl[1]);
        edge_of[{vl[0], vl[1]}] = id;
      } else if (level == 2) {
        EdgePath walk;
        for (std::size_t k = 0; k < vl.size(); ++k) {
          const auto &a = vl[k], &b = vl[(k + 1) % vl.size()];
          if (auto it = edge_of.find({a, b}); it != edge_of.end()) walk.push_back({it->second, true});
          else if (auto jt = edge_of.find({b, a}); jt != edge_of.end()) walk.push_back({jt->second, false});
          else fail(id, "no edge joins " + a + " and " + b);
        }
        m.cells.add_face(id, walk);
      } else {
        std::vector<std::string> facets;
        for (const auto& [fid, fv] : by_level[level - 1])
          if (std::includes(verts_of[id].begin(), verts_of[id].end(), verts_of[fid].begin(), verts_of[fid].end()))
            facets.push_back(fid);
        if (facets.empty()) fail(id, "no facets among the cells one level down");
        m.cells.add_cell(id, level, facets);
      }
    }
  return m;
}

Json to_json(const PolytopalManifold& m) {
  Json j = header("polytope");
  j["ambient"] = m.ambient;
  Json vs = Json::object();
  for (const auto& [id, p] : m.coords) {
    Json q = Json::array();
    for (const auto& x : p) q.push_back(to_json(x));
    vs[id] = std::move(q);
  }
  j["vertices"] = std::move(vs);
  Json cells = Json::array();
  for (const auto& [id, c] : m.cells.cells()) {
    if (c.dim == 0) continue;
    std::vector<std::string> vl;
    if (c.dim == 1) {
      vl = c.boundary;
    } else if (c.dim == 2) {
      for (const auto& s : c.walk) vl.push_back(m.cells.start(s));
    } else {
      for (const auto& v : m.cells.closure(id))
        if (m.cells.dim(v) == 0) vl.push_back(v);
    }
    cells.push_back({{"id", id}, {"level", c.dim}, {"vertices", vl}});
  }
  j["cells"] = std::move(cells);
  return j;
}

Json to_json(const ValidationReport& r) {
  Json issues = Json::array();
  for (const auto& i : r.issues) issues.push_back({{"code", i.code}, {"entity", i.entity}, {"message", i.message}});
  return {{"ok", r.ok()}, {"issues", issues}};
}

Json to_json(const KGroup& k) {
  auto ints = [](const std::vector<Integer>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
  };
  Json rel = Json::array();
  for (std::size_t r = 0; r < k.relations.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < k.relations.cols; ++c) row.push_back(k.relations(r, c).get_si());
    rel.push_back(std::move(row));
  }
  Json cm = Json::array();
  for (const auto& e : k.class_map) cm.push_back(ints(e));
  Json basis = Json::array();
  for (const auto& b : k.basis) basis.push_back(ints(b));
  return {{"generators", k.generators}, {"relations", rel},        {"presentation", k.presentation()},
          {"torsion", ints(k.torsion)}, {"free_rank", k.free_rank}, {"class_map", cm},
          {"basis", basis},            {"window", k.window},       {"window_label", k.window_label()}};
}

}  // namespace stratk::io

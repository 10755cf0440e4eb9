#include "verbs.hpp"

#include <random>
#include <sstream>

namespace stratk::cli {

namespace {

std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? sep : "") << v[i];
  return s.str();
}

std::string dims_text(const std::vector<std::vector<std::size_t>>& dims) {
  std::vector<std::string> parts;
  std::string out;
  for (std::size_t j = 0; j < dims.size(); ++j) out += (j ? " | " : "") + join(dims[j], ",");
  return out;
}

void add_report(Outcome& out, const ValidationReport& r) {
  out.report["validation"] = io::to_json(r);
  if (!r.ok()) out.code = 1;
  for (const auto& i : r.issues) out.lines.push_back(i.code + " " + i.entity + ": " + i.message);
}

CategoryPtr category(const Options& o) { return share(io::category_from_arg(o.category)); }

bool is_bundle_file(const io::Json& j) { return io::kind_of(j) == "bundle"; }

struct MapFile {
  StratifiedSpace src;
  CellularMap map;
  std::optional<std::vector<CellularMap>> decomposition;
};

MapFile load_map(const std::string& path, const StratifiedSpace& dst) {
  const io::Json j = io::load_file(path);
  if (io::kind_of(j) != "map") throw Error(Error::Kind::parse, path, "expected a map file");
  MapFile m;
  m.src = io::space_from_json(j.at("src"));
  const CellComplex total = assemble(dst);
  m.map = io::map_from_json(j.at("map"), assemble(m.src), total);
  if (auto it = j.find("decomposition"); it != j.end()) {
    if (!it->is_array() || it->size() != m.src.layers.size())
      throw Error(Error::Kind::parse, path, "decomposition needs one map per layer");
    std::vector<CellularMap> d;
    for (std::size_t k = 0; k < it->size(); ++k)
      d.push_back(io::map_from_json((*it)[k], m.src.layers[k].m, dst.layers.at(k).m));
    m.decomposition = std::move(d);
  }
  return m;
}

Gauge random_gauge(const CellComplex& base, const VBundle& e, std::mt19937_64& rng) {
  Gauge g;
  for (const auto& v : base.vertices()) {
    const std::size_t r = e.rank_at(v);
    if (e.category->is_open()) {
      g[v] = Matrix::identity(r).scaled(Rational(static_cast<long>(rng() % 5) + 1));
      continue;
    }
    const auto autos = e.category->automorphisms(r);
    g[v] = autos.at(rng() % autos.size());
  }
  return g;
}

void record(Outcome& out, const std::string& name, bool pass, const std::string& detail = "") {
  out.report["checks"].push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
  out.lines.push_back(std::string(pass ? "pass " : "FAIL ") + name + (detail.empty() ? "" : ": " + detail));
  if (!pass) out.code = 1;
}

template <class T, class Parse>
bool round_trips(const T& x, Parse parse) {
  const std::string once = io::dump(io::to_json(x));
  return io::dump(io::to_json(parse(io::Json::parse(once)))) == once;
}

ClassMonoid monoid(const StratifiedSpace& s, const Options& o) { return enumerate_classes(s, category(o), o.cap); }

void k0_fields(Outcome& out, const ClassMonoid& m, const KGroup& k, const std::string& prefix) {
  io::Json j = io::to_json(k);
  j["classes"] = m.classes.size();
  j["partial"] = m.partial;
  if (prefix.empty()) out.report.update(j);
  else out.report[prefix] = j;
}

}  // namespace

Outcome validate(const std::string& file, const Options&) {
  Outcome out;
  const io::Json j = io::load_file(file);
  const std::string kind = io::kind_of(j);
  out.report["input_kind"] = kind;
  if (kind == "category") {
    add_report(out, validate_category(io::category_from_json(j)));
  } else if (kind == "complex") {
    add_report(out, validate_complex(io::complex_from_json(j)));
  } else if (kind == "space") {
    const auto s = io::space_from_json(j);
    ValidationReport r = validate_complex(s.base0);
    for (const auto& l : s.layers) {
      for (const auto& i : validate_complex(l.m).issues) r.issues.push_back(i);
      for (const auto& i : validate_map(l.h).issues) r.issues.push_back(i);
    }
    if (r.ok())
      for (const auto& i : validate_complex(assemble(s)).issues) r.issues.push_back(i);
    add_report(out, r);
  } else if (kind == "bundle") {
    add_report(out, validate_bundle(io::bundle_from_json(j)));
  } else if (kind == "stratified_bundle") {
    const auto x = io::stratified_from_json(j);
    ValidationReport r;
    for (std::size_t s = 0; s < x.strata(); ++s)
      for (const auto& i : validate_bundle(x.stratum_bundle(s)).issues) r.issues.push_back(i);
    add_report(out, r);
  } else if (kind == "polytope") {
    add_report(out, validate_polytope(io::polytope_from_json(j)));
  } else {
    throw Error(Error::Kind::parse, file, "nothing to validate for kind \"" + kind + "\"");
  }
  if (out.code == 0) out.lines.insert(out.lines.begin(), "valid " + kind);
  return out;
}

Outcome assemble(const std::string& file, const Options&) {
  Outcome out;
  const auto s = io::space_from_json(io::load_file(file));
  const CellComplex total = assemble(s);
  out.result = io::to_json(total, true);
  out.report["cells_per_dim"] = total.counts();
  std::vector<std::size_t> strata;
  for (int k = 0; k <= total.max_stratum(); ++k) strata.push_back(total.stratum_cells(k).size());
  out.report["cells_per_stratum"] = strata;
  out.report["euler_characteristic"] = total.euler_characteristic();
  out.lines.push_back("cells per dimension: " + join(total.counts()));
  out.lines.push_back("cells per stratum: " + join(strata));
  return out;
}

Outcome classify(const std::string& file, const Options& o) {
  Outcome out;
  const auto s = io::space_from_json(io::load_file(file));
  io::Json classes = io::Json::array();
  if (s.layers.empty()) {
    for (const auto& e : classify_bundles(s.base0, category(o), o.cap)) classes.push_back(io::to_json(e));
  } else {
    const auto m = monoid(s, o);
    for (std::size_t i = 0; i < m.classes.size(); ++i) classes.push_back(io::to_json(m.classes[i]));
    out.report["partial"] = m.partial;
  }
  out.report["count"] = classes.size();
  out.report["cap"] = o.cap;
  out.report["category"] = o.category;
  out.result = io::Json{{"classes", classes}};
  out.lines.push_back(std::to_string(classes.size()) + " classes with fiber ranks <= " + std::to_string(o.cap));
  return out;
}

Outcome combine(const std::string& op, const std::string& a, const std::string& b, const Options&) {
  Outcome out;
  const io::Json ja = io::load_file(a), jb = io::load_file(b);
  const MatrixBifunctor f = MatrixBifunctor::from_name(op);
  if (is_bundle_file(ja) && is_bundle_file(jb)) {
    const VBundle e = map_bundle2(f, io::bundle_from_json(ja), io::bundle_from_json(jb));
    out.result = io::to_json(e);
    out.lines.push_back("bundle with fiber dims " + join(e.fiber));
  } else {
    const auto x = map_stratified2(f, io::stratified_from_json(ja), io::stratified_from_json(jb));
    out.result = io::to_json(x);
    out.report["fiber_dims"] = x.fiber_dims();
    out.lines.push_back("fiber dims per stratum: " + dims_text(x.fiber_dims()));
  }
  return out;
}

Outcome apply_functor(const std::string& functor, const std::string& file, const Options&) {
  Outcome out;
  const io::Json j = io::load_file(file);
  const MatrixFunctor f = MatrixFunctor::from_name(functor);
  if (is_bundle_file(j)) {
    const VBundle e = map_bundle(f, io::bundle_from_json(j));
    out.result = io::to_json(e);
    out.lines.push_back("bundle with fiber dims " + join(e.fiber));
  } else {
    const auto x = map_stratified(f, io::stratified_from_json(j));
    out.result = io::to_json(x);
    out.report["fiber_dims"] = x.fiber_dims();
    out.lines.push_back("fiber dims per stratum: " + dims_text(x.fiber_dims()));
  }
  return out;
}

Outcome pullback(const std::string& map_file, const std::string& file, const Options&) {
  Outcome out;
  const io::Json j = io::load_file(file);
  if (is_bundle_file(j)) {
    const VBundle e = io::bundle_from_json(j);
    StratifiedSpace dst;
    dst.base0 = e.base;
    const MapFile m = load_map(map_file, dst);
    const VBundle p = pullback_bundle(m.map, e);
    out.result = io::to_json(p);
    out.lines.push_back("pulled back to " + std::to_string(p.base.size()) + " cells");
  } else {
    const auto x = io::stratified_from_json(j);
    const MapFile m = load_map(map_file, x.space);
    const auto p = pullback_stratified(m.src, m.map, x, m.decomposition);
    out.result = io::to_json(p);
    out.report["fiber_dims"] = p.fiber_dims();
    out.lines.push_back("fiber dims per stratum: " + dims_text(p.fiber_dims()));
  }
  return out;
}

Outcome flatten(const std::string& file, const Options&) {
  Outcome out;
  const VBundle e = flatten(io::stratified_from_json(io::load_file(file)));
  out.result = io::to_json(e);
  out.report["fiber"] = e.fiber;
  out.lines.push_back("flat bundle with fiber dims " + join(e.fiber));
  return out;
}

Outcome tangent(const std::string& file, const Options&) {
  Outcome out;
  const auto t = build_tangent(io::polytope_from_json(io::load_file(file)));
  const CellComplex& total = t.total();
  std::vector<std::size_t> strata;
  for (int k = 0; k <= total.max_stratum(); ++k) strata.push_back(total.stratum_cells(k).size());
  out.result = io::to_json(t);
  out.report["strata_cells"] = strata;
  out.report["fiber_dims"] = t.fiber_dims();
  out.lines.push_back("strata cells: " + join(strata));
  out.lines.push_back("fiber dims: " + dims_text(t.fiber_dims()));
  return out;
}

Outcome k0(const std::string& file, const Options& o) {
  Outcome out;
  const auto s = io::space_from_json(io::load_file(file));
  const auto m = monoid(s, o);
  const KGroup k = grothendieck(m);
  k0_fields(out, m, k, "");
  out.lines.push_back("K0 = " + k.presentation() + " (" + k.window_label() + ")");
  out.lines.push_back(std::to_string(m.classes.size()) + " classes" + (m.partial ? ", search budget exhausted" : ""));
  return out;
}

Outcome k0_hom(const std::string& file, std::optional<std::size_t> stratum, const std::string& map_file,
               const Options& o) {
  if (stratum.has_value() == !map_file.empty())
    throw Error(Error::Kind::usage, "k0-hom", "give exactly one of --stratum and --map");
  Outcome out;
  const auto s = io::space_from_json(io::load_file(file));
  const auto m = monoid(s, o);
  const KGroup k = grothendieck(m);
  ClassMonoid other;
  KGroup ko;
  GroupHom h;
  const KGroup *from = &k, *to = &ko;
  if (stratum) {
    if (*stratum > s.layers.size()) throw Error(Error::Kind::usage, std::to_string(*stratum), "no such stratum");
    other = monoid(stratum_space(s, *stratum), o);
    ko = grothendieck(other);
    h = restriction_hom(m, k, *stratum, other, ko);
    k0_fields(out, m, k, "source");
    k0_fields(out, other, ko, "target");
  } else {
    const MapFile mf = load_map(map_file, s);
    other = monoid(mf.src, o);
    ko = grothendieck(other);
    h = pullback_hom(mf.map, other, ko, m, k, mf.decomposition);
    k0_fields(out, m, k, "source");
    k0_fields(out, other, ko, "target");
  }
  io::Json images = io::Json::array();
  for (const auto& im : h.images) {
    if (!im) {
      images.push_back(nullptr);
      continue;
    }
    io::Json v = io::Json::array();
    for (const auto& x : *im) v.push_back(x.get_str());
    images.push_back(v);
  }
  // column c: image of the c-th coordinate direction of the source
  io::Json matrix = io::Json::array();
  for (std::size_t r = 0; r < to->coords(); ++r) matrix.push_back(io::Json::array());
  bool complete = !h.partial;
  std::vector<std::string> cols;
  for (std::size_t c = 0; c < from->coords(); ++c) {
    KElement e = from->zero();
    e[c] = 1;
    const auto im = apply_hom(h, *from, *to, e);
    complete = complete && im.has_value();
    for (std::size_t r = 0; r < to->coords(); ++r) {
      if (im) matrix[r].push_back((*im)[r].get_str());
      else matrix[r].push_back(nullptr);
    }
  }
  out.report["images"] = images;
  out.report["matrix"] = matrix;
  out.report["partial"] = !complete;
  out.lines.push_back(k.presentation() + " -> " + ko.presentation() + " (" + ko.window_label() + ")");
  for (std::size_t r = 0; r < to->coords(); ++r) out.lines.push_back("  " + matrix[r].dump());
  if (!complete) out.lines.push_back("some images leave the window");
  return out;
}

Outcome check(const std::vector<std::string>& files, const Options& o) {
  Outcome out;
  out.report["checks"] = io::Json::array();
  std::mt19937_64 rng(o.seed);
  for (const auto& file : files) {
    const io::Json j = io::load_file(file);
    const std::string kind = io::kind_of(j);
    const std::string tag = file + ": ";
    if (kind == "category") {
      const auto c = io::category_from_json(j);
      const auto r = validate_category(c);
      record(out, tag + "category closure", r.ok(), r.ok() ? "" : r.issues.front().message);
      record(out, tag + "normalized round trip", round_trips(c, io::category_from_json));
    } else if (kind == "complex" || kind == "space") {
      const auto s = io::space_from_json(j);
      const auto r = validate_complex(assemble(s));
      record(out, tag + "assembled complex is regular", r.ok(), r.ok() ? "" : r.issues.front().message);
      record(out, tag + "normalized round trip", round_trips(s, io::space_from_json));
    } else if (kind == "bundle") {
      const VBundle e = io::bundle_from_json(j);
      const auto r = validate_bundle(e);
      record(out, tag + "bundle axioms", r.ok(), r.ok() ? "" : r.issues.front().message);
      if (!r.ok()) continue;
      const VBundle g = apply_gauge(e, random_gauge(e.base, e, rng));
      record(out, tag + "gauge invariance", static_cast<bool>(is_isomorphic(e, g, o.seed)));
      record(out, tag + "normalization is idempotent", normalize(normalize(e)) == normalize(e));
      record(out, tag + "normalized round trip", round_trips(e, io::bundle_from_json));
    } else if (kind == "stratified_bundle") {
      const auto x = io::stratified_from_json(j);
      std::vector<Gauge> g;
      for (std::size_t s = 0; s < x.strata(); ++s)
        g.push_back(random_gauge(x.stratum_base(s), x.stratum_bundle(s), rng));
      const auto y = apply_stratified_gauge(x, g);
      record(out, tag + "stratified gauge invariance", static_cast<bool>(is_isomorphic_stratified(x, y)));
      try {
        const VBundle flat = flatten(x);
        bool agree = validate_bundle(flat).ok();
        for (std::size_t s = 0; s < x.strata() && agree; ++s)
          agree = static_cast<bool>(is_isomorphic(restrict_to_stratum(x, flat, s), x.stratum_bundle(s), o.seed));
        record(out, tag + "flat cocycle restricts to every stratum", agree);
      } catch (const Error& e) {
        if (e.kind() != Error::Kind::not_a_bundle) throw;
        record(out, tag + "flat cocycle restricts to every stratum", true, "not flattenable, skipped");
      }
      record(out, tag + "normalized round trip", round_trips(x, io::stratified_from_json));
    } else if (kind == "polytope") {
      const auto p = io::polytope_from_json(j);
      const auto r = validate_polytope(p);
      record(out, tag + "polytope geometry", r.ok(), r.ok() ? "" : r.issues.front().message);
      if (!r.ok()) continue;
      const auto t = build_tangent(p);
      bool dims = true;
      for (std::size_t s = 0; s < t.strata(); ++s) dims = dims && t.fiber_dims()[s] == std::vector<std::size_t>{s};
      record(out, tag + "tangent fiber dimension equals stratum dimension", dims);
      record(out, tag + "normalized round trip", round_trips(p, io::polytope_from_json));
    } else {
      throw Error(Error::Kind::parse, file, "no invariants for kind \"" + kind + "\"");
    }
  }
  return out;
}

}  // namespace stratk::cli

#include "stratk/bundle.hpp"

#include <algorithm>
#include <random>

namespace stratk {

CategoryPtr share(StructureCategory c) { return std::make_shared<const StructureCategory>(std::move(c)); }

std::size_t VBundle::rank_at(const std::string& cell) const {
  const std::size_t comp = base.component_of(cell);
  if (comp >= fiber.size()) throw Error(Error::Kind::integrity, cell, "no fiber for component");
  return fiber[comp];
}

Matrix VBundle::label(const OrientedEdge& e) const {
  auto it = labels.find(e.edge);
  if (it == labels.end()) throw Error(Error::Kind::map, e.edge, "edge has no label");
  if (e.forward) return it->second;
  auto inv = it->second.inverse();
  if (!inv) throw Error(Error::Kind::not_a_bundle, e.edge, "label is not invertible");
  return *inv;
}

Matrix VBundle::transport(const EdgePath& p, const std::string& start) const {
  Matrix m = Matrix::identity(rank_at(start));
  for (const auto& s : p) m = label(s) * m;
  return m;
}

VBundle VBundle::trivial(const CellComplex& base, CategoryPtr category, std::size_t rank) {
  VBundle e{base, std::move(category), {}, {}};
  e.fiber.assign(base.components().size(), rank);
  for (const auto& id : base.edges()) e.labels[id] = Matrix::identity(rank);
  return e;
}

bool operator==(const VBundle& a, const VBundle& b) {
  return same_cells(a.base, b.base) && a.fiber == b.fiber && a.labels == b.labels &&
         a.category->name() == b.category->name();
}

ValidationReport validate_bundle(const VBundle& e) {
  ValidationReport r;
  const auto comps = e.base.components();
  if (e.fiber.size() != comps.size()) {
    r.add("fiber-count", "", "expected one fiber dimension per component");
    return r;
  }
  for (const auto& [id, m] : e.labels)
    if (!e.base.has(id) || e.base.dim(id) != 1) r.add("unknown-edge", id, "label on a non-edge");
  bool labels_ok = true;
  for (const auto& id : e.base.edges()) {
    auto it = e.labels.find(id);
    if (it == e.labels.end()) {
      r.add("missing-label", id, "edge has no label");
      labels_ok = false;
      continue;
    }
    const std::size_t n = e.rank_at(id);
    if (it->second.rows() != n || it->second.cols() != n) {
      r.add("label-shape", id, "label shape does not match the fiber");
      labels_ok = false;
    } else if (!e.category->is_automorphism(it->second)) {
      r.add("non-automorphism", id, "label is not an automorphism of the category");
      labels_ok = false;
    }
  }
  if (!labels_ok) return r;
  for (const auto& f : e.base.cells_of_dim(2)) {
    const Cell& c = e.base.cell(f);
    if (!e.transport(c.walk, e.base.anchor(f)).is_identity())
      r.add("holonomy", f, "holonomy around the 2-cell is not the identity");
  }
  return r;
}

VBundle apply_gauge(const VBundle& e, const Gauge& g) {
  VBundle out = e;
  for (auto& [id, m] : out.labels) {
    const auto& gs = g.at(e.base.src(id));
    auto inv = gs.inverse();
    if (!inv) throw Error(Error::Kind::precondition, e.base.src(id), "gauge value is not invertible");
    m = g.at(e.base.dst(id)) * m * *inv;
  }
  return out;
}

Gauge normalizing_gauge(const VBundle& e) {
  const SpanningForest forest = spanning_forest(e.base);
  Gauge g;
  for (const auto& v : e.base.vertices()) {
    const auto& root = forest.roots[e.base.component_of(v)];
    g[v] = *e.transport(forest.path_from_root(e.base, v), root).inverse();
  }
  return g;
}

VBundle normalize(const VBundle& e) { return apply_gauge(e, normalizing_gauge(e)); }

namespace {

// C with C a_e = b_e C for the given label pairs.
std::optional<Matrix> find_intertwiner(const StructureCategory& c, std::size_t n,
                                       const std::vector<std::pair<Matrix, Matrix>>& pairs, std::uint64_t seed) {
  if (n == 0) return Matrix::identity(0);
  const auto intertwines = [&](const Matrix& m) {
    for (const auto& [a, b] : pairs)
      if (!(m * a == b * m)) return false;
    return true;
  };
  if (intertwines(Matrix::identity(n))) return Matrix::identity(n);
  if (!c.is_open()) {
    for (const auto& m : c.automorphisms(n))
      if (intertwines(m)) return m;
    return std::nullopt;
  }
  Matrix sys(pairs.size() * n * n, n * n);
  std::size_t row = 0;
  for (const auto& [a, b] : pairs)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j, ++row)
        for (std::size_t k = 0; k < n; ++k) {
          sys(row, i * n + k) += a(k, j);
          sys(row, k * n + j) -= b(i, k);
        }
  const Matrix basis = nullspace(sys);
  if (basis.cols() == 0) return std::nullopt;
  const auto reshape = [&](const std::vector<Rational>& coeff) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < basis.cols(); ++k)
      if (coeff[k] != 0)
        for (std::size_t idx = 0; idx < n * n; ++idx) m(idx / n, idx % n) += coeff[k] * basis(idx, k);
    return m;
  };
  std::vector<Rational> coeff(basis.cols(), 0);
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    std::fill(coeff.begin(), coeff.end(), 0);
    coeff[k] = 1;
    Matrix m = reshape(coeff);
    if (m.inverse()) return m;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-7, 7);
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (auto& q : coeff) q = dist(rng);
    Matrix m = reshape(coeff);
    if (m.inverse()) return m;
  }
  return std::nullopt;
}

}  // namespace

IsoResult is_isomorphic(const VBundle& e, const VBundle& f, std::uint64_t seed) {
  if (!same_cells(e.base, f.base)) throw Error(Error::Kind::base_mismatch, "", "bundles live over different bases");
  IsoResult res;
  if (e.fiber != f.fiber) {
    res.reason = "fiber dimensions differ";
    return res;
  }
  const Gauge ge = normalizing_gauge(e), gf = normalizing_gauge(f);
  const VBundle ne = apply_gauge(e, ge), nf = apply_gauge(f, gf);
  const auto comps = e.base.components();
  std::vector<Matrix> constant;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    std::vector<std::pair<Matrix, Matrix>> pairs;
    for (const auto& g : pi1(e.base, ci).generators) pairs.emplace_back(ne.labels.at(g), nf.labels.at(g));
    auto c = find_intertwiner(*e.category, e.fiber[ci], pairs, seed + ci);
    if (!c) {
      res.reason = "no intertwining automorphism on component " + comps[ci].front();
      return res;
    }
    constant.push_back(*c);
  }
  Gauge w;
  for (const auto& v : e.base.vertices())
    w[v] = *gf.at(v).inverse() * constant[e.base.component_of(v)] * ge.at(v);
  res.witness = std::move(w);
  return res;
}

VBundle pullback_bundle(const CellularMap& f, const VBundle& e) {
  if (!same_cells(f.dst(), e.base)) throw Error(Error::Kind::base_mismatch, "", "map does not land in the bundle's base");
  VBundle out{f.src(), e.category, {}, {}};
  for (const auto& comp : f.src().components()) out.fiber.push_back(e.rank_at(f.image(comp.front())));
  for (const auto& id : f.src().edges())
    out.labels[id] = e.transport(f.path(id), f.image(f.src().src(id)));
  return out;
}

VBundle restrict_bundle(const VBundle& e, const std::set<std::string>& cells) {
  return pullback_bundle(CellularMap::inclusion(e.base, cells), e);
}

std::vector<std::vector<Matrix>> holonomy_classes(const Pi1Presentation& p, const StructureCategory& c,
                                                  std::size_t dim, std::size_t budget) {
  const auto autos = c.automorphisms(dim);
  const std::size_t g = p.generators.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < g; ++i) {
    if (autos.empty() || total > budget / std::max<std::size_t>(autos.size(), 1))
      throw Error(Error::Kind::budget, c.name(), "labeling enumeration exceeds the budget");
    total *= autos.size();
  }
  if (autos.empty()) return {};
  std::vector<Matrix> inverses;
  for (const auto& a : autos) inverses.push_back(*a.inverse());

  std::set<std::vector<Matrix>> seen, reps;
  std::vector<std::size_t> idx(g, 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::vector<Matrix> tuple;
    for (std::size_t i = 0; i < g; ++i) tuple.push_back(autos[idx[i]]);
    bool ok = true;
    for (const auto& word : p.relators) {
      Matrix m = Matrix::identity(dim);
      for (const auto& [gen, sign] : word) {
        const std::size_t k = idx[gen];
        m = (sign > 0 ? autos[k] : inverses[k]) * m;
      }
      if (!m.is_identity()) {
        ok = false;
        break;
      }
    }
    if (ok && !seen.count(tuple)) {
      std::vector<Matrix> best = tuple;
      for (std::size_t k = 0; k < autos.size(); ++k) {
        std::vector<Matrix> conj;
        for (const auto& a : tuple) conj.push_back(autos[k] * a * inverses[k]);
        if (conj < best) best = conj;
        seen.insert(std::move(conj));
      }
      reps.insert(std::move(best));
    }
    for (std::size_t i = g; i-- > 0;) {
      if (++idx[i] < autos.size()) break;
      idx[i] = 0;
    }
  }
  return {reps.begin(), reps.end()};
}

std::vector<VBundle> classify_bundles(const CellComplex& base, const CategoryPtr& c, std::size_t rank_cap,
                                      std::size_t budget) {
  if (c->is_open()) throw Error(Error::Kind::unsupported_category, c->name(), "cannot classify over an open category");
  if (!c->flags().is_groupoid)
    throw Error(Error::Kind::unsupported_category, c->name(), "classification needs a groupoid");
  const auto comps = base.components();
  struct Option {
    std::size_t rank;
    std::vector<Matrix> holonomy;
  };
  std::vector<std::vector<Option>> per_comp;
  std::vector<Pi1Presentation> pres;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    pres.push_back(pi1(base, ci));
    std::vector<Option> opts;
    for (auto r : c->objects()) {
      if (r > rank_cap) continue;
      for (auto& h : holonomy_classes(pres.back(), *c, r, budget)) opts.push_back({r, std::move(h)});
    }
    per_comp.push_back(std::move(opts));
  }
  std::vector<VBundle> out;
  if (std::any_of(per_comp.begin(), per_comp.end(), [](const auto& o) { return o.empty(); })) return out;
  std::vector<std::size_t> idx(comps.size(), 0);
  while (true) {
    VBundle e{base, c, {}, {}};
    for (std::size_t ci = 0; ci < comps.size(); ++ci) e.fiber.push_back(per_comp[ci][idx[ci]].rank);
    for (const auto& id : base.edges()) e.labels[id] = Matrix::identity(e.fiber[base.component_of(id)]);
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      const auto& opt = per_comp[ci][idx[ci]];
      for (std::size_t k = 0; k < pres[ci].generators.size(); ++k) e.labels[pres[ci].generators[k]] = opt.holonomy[k];
    }
    out.push_back(std::move(e));
    if (out.size() > budget) throw Error(Error::Kind::budget, c->name(), "classification exceeds the budget");
    std::size_t i = comps.size();
    while (i-- > 0) {
      if (++idx[i] < per_comp[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace stratk

#pragma once

// Cellular homotopies on prism complexes, shared by the unit tests and the
// acceptance suite.

#include <functional>
#include <random>

#include "fixtures.hpp"
#include "stratk/homotopy.hpp"

namespace homotopy {

using namespace stratk;

/// Cycle c0 -> c1 -> ... -> c(n-1) -> c0 along edges e0..e(n-1).
inline CellComplex ngon(int n) {
  CellComplex x;
  for (int k = 0; k < n; ++k) x.add_vertex("c" + std::to_string(k));
  for (int k = 0; k < n; ++k) x.add_edge("e" + std::to_string(k), "c" + std::to_string(k), "c" + std::to_string((k + 1) % n));
  return x;
}

/// Base n-gon with the cylinder n-gon x I attached along its bottom.
inline StratifiedSpace cylinder(int n) {
  StratifiedSpace s;
  s.base0 = ngon(n);
  Layer l;
  l.m = prism(ngon(n));
  for (const auto& [id, c] : s.base0.cells()) l.a.insert(prism_cell(id, '0'));
  l.h = CellularMap(l.m.subcomplex(l.a), s.base0);
  for (int k = 0; k < n; ++k) {
    l.h.set_vertex(prism_cell("c" + std::to_string(k), '0'), "c" + std::to_string(k));
    l.h.set_edge(prism_cell("e" + std::to_string(k), '0'), {{"e" + std::to_string(k), true}});
  }
  s.layers.push_back(l);
  return s;
}

/// H(c@t) = f(c), with every vertical cell collapsed.
inline CellularMap constant(const StratifiedSpace& s, const CellularMap& f) {
  const CellComplex src = assemble(prism_space(s));
  CellularMap h(src, f.dst());
  for (const auto& [id, cell] : src.cells()) {
    const std::string c = id.substr(0, id.size() - 2);
    const char t = id.back();
    const int d = f.src().dim(c);
    if (t != 'I') {
      if (d == 0) h.set_vertex(id, f.image(c));
      else if (d == 1) h.set_edge(id, f.path(c));
      else h.set_cell(id, f.image(c));
    } else if (d == 0) {
      h.set_edge(id, {});
    } else {
      h.set_cell(id, f.image(c));
    }
  }
  return h;
}

struct Instance {
  std::string name;
  StratifiedSpace space;
  CellularMap h;
  /// Bundles over the target of h.
  std::function<StratifiedBundle(std::mt19937_64&)> bundle;
  std::optional<std::vector<CellularMap>> decomposition = std::nullopt;
};

inline Matrix random_auto(const StructureCategory& c, std::size_t n, std::mt19937_64& rng) {
  const auto autos = c.automorphisms(n);
  return autos[std::uniform_int_distribution<std::size_t>(0, autos.size() - 1)(rng)];
}

/// Random labels on the n-gon.
inline VBundle random_ngon_bundle(int n, const CategoryPtr& c, std::size_t r, std::mt19937_64& rng) {
  VBundle e = VBundle::trivial(ngon(n), c, r);
  for (int k = 0; k < n; ++k) e.labels["e" + std::to_string(k)] = random_auto(*c, r, rng);
  return e;
}

/// Random cylinder bundle: the bottom copies the base, verticals are random
/// and the top is forced by flatness; fiber maps are +-identity.
inline StratifiedBundle random_cylinder_bundle(int n, const CategoryPtr& c, std::size_t r, std::mt19937_64& rng) {
  const VBundle base = random_ngon_bundle(n, c, r, rng);
  AttachLayer l{VBundle::trivial(prism(ngon(n)), c, r), {}};
  std::vector<Matrix> v;
  for (int k = 0; k < n; ++k) v.push_back(random_auto(*c, r, rng));
  for (int k = 0; k < n; ++k) {
    const Matrix& lk = base.labels.at("e" + std::to_string(k));
    l.m.labels[prism_cell("e" + std::to_string(k), '0')] = lk;
    l.m.labels[prism_cell("c" + std::to_string(k), 'I')] = v[k];
    l.m.labels[prism_cell("e" + std::to_string(k), '1')] = v[(k + 1) % n] * lk * *v[k].inverse();
  }
  const Matrix sign = rng() % 2 ? Matrix::identity(r) : Matrix::identity(r).scaled(-1);
  for (int k = 0; k < n; ++k) l.phi[prism_cell("c" + std::to_string(k), '0')] = sign;
  return build_stratified(cylinder(n), base, {l});
}

/// Random gauge on every stratum of x.
inline StratifiedBundle regauge(const StratifiedBundle& x, std::mt19937_64& rng) {
  std::vector<Gauge> g(x.strata());
  for (std::size_t j = 0; j < x.strata(); ++j) {
    const VBundle& b = x.stratum_bundle(j);
    for (const auto& v : b.base.vertices()) g[j][v] = random_auto(*x.category(), b.rank_at(v), rng);
  }
  return apply_stratified_gauge(x, g);
}

/// X x I -> X.
inline CellularMap projection(const CellComplex& x) {
  StratifiedSpace s;
  s.base0 = x;
  return constant(s, CellularMap::identity(x));
}

/// Bundles over the prism: pulled back along the projection, then gauged.
inline StratifiedBundle over_prism(const StratifiedSpace& s, const StratifiedBundle& y, std::mt19937_64& rng) {
  std::vector<CellularMap> g;
  for (const auto& l : s.layers) g.push_back(projection(l.m));
  return regauge(pullback_stratified(prism_space(s), constant(s, CellularMap::identity(assemble(s))), y, g), rng);
}

/// The identity of the stratified prism over s: its ends are the bottom
/// and top inclusions.
inline Instance prism_identity(std::string name, const StratifiedSpace& s,
                               std::function<StratifiedBundle(std::mt19937_64&)> base_bundle) {
  const StratifiedSpace p = prism_space(s);
  std::vector<CellularMap> g;
  for (const auto& l : p.layers) g.push_back(CellularMap::identity(l.m));
  return {std::move(name), s, CellularMap::identity(assemble(p)),
          [s, base_bundle](std::mt19937_64& rng) { return over_prism(s, base_bundle(rng), rng); }, g};
}

inline std::vector<Instance> instances() {
  std::vector<Instance> out;
  const auto sp2 = fixture::sp(2);
  for (int n = 2; n <= 5; ++n) {
    StratifiedSpace s;
    s.base0 = ngon(n);
    out.push_back(prism_identity(std::to_string(n) + "-gon x I", s, [n, sp2](std::mt19937_64& rng) {
      return single_stratum(random_ngon_bundle(n, sp2, 2, rng));
    }));
  }
  for (int n = 2; n <= 4; ++n)
    out.push_back(prism_identity("cylinder " + std::to_string(n) + " x I", cylinder(n), [n, sp2](std::mt19937_64& rng) {
      return random_cylinder_bundle(n, sp2, 2, rng);
    }));
  out.push_back(prism_identity("handle x I", fixture::handle_space(), [](std::mt19937_64& rng) {
    return fixture::handle_bundle(rng() % 2 ? 1 : -1, rng() % 2 ? 1 : -1);
  }));
  out.push_back(prism_identity("disc model x I", fixture::disc_model(),
                               [sp2](std::mt19937_64&) { return fixture::disc_bundle(2, sp2); }));
  {
    StratifiedSpace s;
    s.base0 = fixture::circle();
    out.push_back({"constant degree 2 on the circle", s, constant(s, fixture::circle_degree(2)),
                   [sp2](std::mt19937_64& rng) {
                     VBundle e = VBundle::trivial(fixture::circle(), sp2, 2);
                     e.labels["e"] = random_auto(*sp2, 2, rng);
                     return single_stratum(e);
                   }});
  }
  return out;
}

}  // namespace homotopy

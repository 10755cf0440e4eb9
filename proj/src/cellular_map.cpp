#include <algorithm>

#include "stratk/complex.hpp"

namespace stratk {

CellularMap CellularMap::inclusion(const CellComplex& sub, const CellComplex& x) {
  CellularMap f(sub, x);
  for (const auto& [id, c] : sub.cells()) {
    if (!x.has(id) || x.dim(id) != c.dim) throw Error(Error::Kind::map, id, "not a cell of the target");
    if (c.dim == 1) f.set_edge(id, {{id, true}});
    else f.image_[id] = id;
  }
  return f;
}

CellularMap CellularMap::inclusion(const CellComplex& x, const std::set<std::string>& ids) {
  return inclusion(x.subcomplex(ids), x);
}

CellularMap CellularMap::identity(const CellComplex& x) { return inclusion(x, x); }

void CellularMap::set_vertex(const std::string& v, const std::string& image) { image_[v] = image; }

void CellularMap::set_edge(const std::string& e, const EdgePath& path) {
  paths_[e] = path;
  image_.erase(e);
}

void CellularMap::set_cell(const std::string& c, const std::string& image) {
  if (src_.has(c) && src_.dim(c) == 1) {
    if (!dst_.has(image) || dst_.dim(image) != 0)
      throw Error(Error::Kind::map, c, "edges map to paths; use set_edge");
    paths_[c] = {};
  }
  image_[c] = image;
}

std::string CellularMap::image(const std::string& c) const {
  auto it = image_.find(c);
  if (it != image_.end()) return it->second;
  auto p = paths_.find(c);
  if (p == paths_.end()) throw Error(Error::Kind::map, c, "cellular map undefined on cell");
  if (p->second.empty()) return image(src_.src(c));
  return p->second.front().edge;
}

const EdgePath& CellularMap::path(const std::string& e) const {
  auto p = paths_.find(e);
  if (p == paths_.end()) throw Error(Error::Kind::map, e, "edge has no edge-path image");
  return p->second;
}

EdgePath CellularMap::map_path(const EdgePath& p) const {
  EdgePath out;
  for (const auto& step : p) {
    const EdgePath& q = path(step.edge);
    if (step.forward) out.insert(out.end(), q.begin(), q.end());
    else for (auto it = q.rbegin(); it != q.rend(); ++it) out.push_back(it->reversed());
  }
  return out;
}

std::set<std::string> CellularMap::image_cells(const std::string& c) const {
  if (src_.dim(c) != 1) return {image(c)};
  const EdgePath& p = path(c);
  if (p.empty()) return {image(src_.src(c))};
  std::set<std::string> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.insert(p[i].edge);
    if (i + 1 < p.size()) out.insert(dst_.end(p[i]));
  }
  return out;
}

namespace {

EdgePath free_reduce(const EdgePath& w) {
  EdgePath out;
  for (const auto& s : w) {
    if (!out.empty() && out.back() == s.reversed()) out.pop_back();
    else out.push_back(s);
  }
  while (out.size() >= 2 && out.front() == out.back().reversed()) {
    out.erase(out.begin());
    out.pop_back();
  }
  return out;
}

bool is_power_of(const EdgePath& w, const EdgePath& base) {
  const std::size_t n = base.size();
  if (n == 0 || w.size() % n != 0) return false;
  for (const EdgePath& b : {base, reverse_path(base)})
    for (std::size_t r = 0; r < n; ++r) {
      bool ok = true;
      for (std::size_t i = 0; i < w.size() && ok; ++i) ok = w[i] == b[(i + r) % n];
      if (ok) return true;
    }
  return false;
}

}  // namespace

ValidationReport validate_map(const CellularMap& f) {
  ValidationReport r;
  const CellComplex& x = f.src();
  const CellComplex& y = f.dst();
  const auto known = [&](const std::string& c) {
    try {
      const std::string img = f.image(c);
      return y.has(img);
    } catch (const Error&) {
      return false;
    }
  };
  for (const auto& [id, c] : x.cells()) {
    if (!f.defined(id)) {
      r.add("undefined", id, "no image");
      continue;
    }
    if (!known(id)) {
      r.add("unknown-image", id, "image is not a cell of the target");
      continue;
    }
    const std::string img = f.image(id);
    if (y.dim(img) > c.dim) r.add("dimension", id, "image " + img + " has larger dimension");
    if (c.dim == 1) {
      const EdgePath& p = f.path(id);
      if (!known(c.boundary[0]) || !known(c.boundary[1])) continue;
      const std::string a = f.image(c.boundary[0]), b = f.image(c.boundary[1]);
      bool steps_ok = std::all_of(p.begin(), p.end(), [&](const OrientedEdge& s) {
        return y.has(s.edge) && y.dim(s.edge) == 1;
      });
      if (!steps_ok) {
        r.add("unknown-image", id, "edge path leaves the target's edges");
        continue;
      }
      bool chained = p.empty() ? a == b : (y.start(p.front()) == a && y.end(p.back()) == b);
      for (std::size_t i = 0; chained && i + 1 < p.size(); ++i) chained = y.end(p[i]) == y.start(p[i + 1]);
      if (!chained) r.add("endpoints", id, "edge path does not join the endpoint images");
    } else if (c.dim == 2) {
      EdgePath w;
      try {
        w = f.map_path(c.walk);
      } catch (const Error&) {
        continue;
      }
      const auto cl = y.closure(img);
      for (const auto& s : w)
        if (!cl.count(s.edge)) r.add("boundary", id, "boundary image leaves the closure of " + img);
      const EdgePath red = free_reduce(w);
      const bool ok = red.empty() || (y.dim(img) == 2 && is_power_of(red, y.cell(img).walk));
      if (!ok) r.add("boundary", id, "boundary walk is not mapped onto the walk of " + img);
    } else if (c.dim >= 3) {
      const auto cl = y.closure(img);
      for (const auto& face : c.boundary) {
        if (!known(face)) continue;
        for (const auto& d : f.image_cells(face))
          if (!cl.count(d)) r.add("boundary", id, "facet " + face + " leaves the closure of " + img);
      }
    }
  }
  return r;
}

CellularMap compose(const CellularMap& g, const CellularMap& f) {
  CellularMap out(f.src(), g.dst());
  for (const auto& [id, c] : f.src().cells()) {
    if (c.dim == 1) out.set_edge(id, g.map_path(f.path(id)));
    else if (c.dim == 0) out.set_vertex(id, g.image(f.image(id)));
    else out.set_cell(id, g.image(f.image(id)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pushouts and stratified spaces

PushoutResult build_pushout(const CellComplex& m, const std::set<std::string>& a, const CellularMap& h,
                            const CellComplex& x, std::optional<int> stratum) {
  if (!m.is_subcomplex(a)) throw Error(Error::Kind::construction, "A", "attaching set is not a subcomplex");
  for (const auto& c : a) {
    if (!h.defined(c)) throw Error(Error::Kind::map, c, "attaching map undefined on cell");
    if (!x.has(h.image(c))) throw Error(Error::Kind::map, c, "attaching map leaves the target");
    if (m.dim(c) == 1)
      for (const auto& s : h.path(c))
        if (!x.has(s.edge)) throw Error(Error::Kind::map, c, "attaching path leaves the target");
  }
  const int tag = stratum.value_or(x.max_stratum() + 1);
  CellComplex total = x;
  const auto end_image = [&](const std::string& v) { return a.count(v) ? h.image(v) : v; };
  for (int d = 0; d <= m.dimension(); ++d)
    for (const auto& id : m.cells_of_dim(d)) {
      if (a.count(id)) continue;
      if (total.has(id)) throw Error(Error::Kind::map, id, "cell id of M collides with the target");
      const Cell& c = m.cell(id);
      if (d == 0) {
        total.add_vertex(id, tag);
      } else if (d == 1) {
        total.add_edge(id, end_image(c.boundary[0]), end_image(c.boundary[1]), tag);
      } else if (d == 2) {
        EdgePath walk;
        for (const auto& s : c.walk) {
          if (!a.count(s.edge)) {
            walk.push_back(s);
            continue;
          }
          const EdgePath& p = h.path(s.edge);
          if (s.forward) walk.insert(walk.end(), p.begin(), p.end());
          else for (auto it = p.rbegin(); it != p.rend(); ++it) walk.push_back(it->reversed());
        }
        total.add_face(id, walk, tag, walk.empty() ? end_image(m.anchor(id)) : "");
      } else {
        std::vector<std::string> facets;
        for (const auto& f : c.boundary) facets.push_back(a.count(f) ? h.image(f) : f);
        total.add_cell(id, d, facets, tag);
      }
    }

  CellularMap chi(m, total);
  for (const auto& [id, c] : m.cells()) {
    const bool attached = a.count(id) > 0;
    if (c.dim == 1) chi.set_edge(id, attached ? h.path(id) : EdgePath{{id, true}});
    else if (c.dim == 0) chi.set_vertex(id, attached ? h.image(id) : id);
    else chi.set_cell(id, attached ? h.image(id) : id);
  }
  CellularMap inc = CellularMap::inclusion(x, total);
  return {std::move(total), std::move(chi), std::move(inc)};
}

std::vector<CellComplex> assemble_stages(const StratifiedSpace& space) {
  std::vector<CellComplex> stages;
  CellComplex x0 = space.base0;
  for (const auto& [id, c] : space.base0.cells()) x0.set_stratum(id, 0);
  stages.push_back(std::move(x0));
  for (std::size_t k = 0; k < space.layers.size(); ++k) {
    const Layer& l = space.layers[k];
    stages.push_back(build_pushout(l.m, l.a, l.h, stages.back(), static_cast<int>(k + 1)).total);
  }
  return stages;
}

CellComplex assemble(const StratifiedSpace& space) { return assemble_stages(space).back(); }

CellularMap characteristic_map(const StratifiedSpace& space, std::size_t layer) {
  if (layer >= space.layers.size()) throw Error(Error::Kind::precondition, std::to_string(layer), "no such layer");
  const auto stages = assemble_stages(space);
  const Layer& l = space.layers[layer];
  CellularMap chi = build_pushout(l.m, l.a, l.h, stages[layer], static_cast<int>(layer + 1)).characteristic;
  // land in the final total complex
  return compose(CellularMap::inclusion(stages[layer + 1], stages.back()), chi);
}

BoolReport check_stratum_preserving(const CellularMap& f) {
  BoolReport r;
  for (const auto& [id, c] : f.src().cells()) {
    const int s = f.src().stratum(id);
    for (const auto& d : f.image_cells(id))
      if (f.dst().stratum(d) != s) {
        r.holds = false;
        r.offending.push_back(id);
        break;
      }
  }
  if (!r.holds) r.detail = "cells leave their stratum";
  return r;
}

}  // namespace stratk

#include "stratk/complex.hpp"

#include <algorithm>
#include <deque>

namespace stratk {

EdgePath reverse_path(const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(it->reversed());
  return out;
}

// ---------------------------------------------------------------------------
// CellComplex

void CellComplex::insert(Cell c, int stratum) {
  if (c.id.empty()) throw Error(Error::Kind::construction, "", "empty cell id");
  if (has(c.id)) throw Error(Error::Kind::construction, c.id, "duplicate cell id");
  stratum_[c.id] = stratum;
  components_ready_ = false;
  std::string id = c.id;
  cells_.emplace(std::move(id), std::move(c));
}

void CellComplex::add_vertex(const std::string& id, int stratum) { insert(Cell{id, 0, {}, {}}, stratum); }

void CellComplex::add_edge(const std::string& id, const std::string& src, const std::string& dst, int stratum) {
  for (const auto& v : {src, dst})
    if (!has(v) || dim(v) != 0) throw Error(Error::Kind::construction, id, "edge endpoint " + v + " is not a vertex");
  insert(Cell{id, 1, {src, dst}, {}}, stratum);
}

bool is_closed_walk(const CellComplex& x, const EdgePath& walk) {
  for (const auto& step : walk)
    if (!x.has(step.edge) || x.dim(step.edge) != 1) return false;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const auto& next = walk[(i + 1) % walk.size()];
    if (x.end(walk[i]) != x.start(next)) return false;
  }
  return true;
}

void CellComplex::add_face(const std::string& id, const EdgePath& walk, int stratum, const std::string& basepoint) {
  for (const auto& step : walk)
    if (!has(step.edge) || dim(step.edge) != 1)
      throw Error(Error::Kind::construction, id, "walk step " + step.edge + " is not an edge");
  if (!is_closed_walk(*this, walk)) throw Error(Error::Kind::construction, id, "boundary walk is not closed");
  Cell c{id, 2, {}, walk};
  if (walk.empty()) {
    if (!has(basepoint) || dim(basepoint) != 0)
      throw Error(Error::Kind::construction, id, "degenerate 2-cell needs a basepoint vertex");
    c.boundary = {basepoint};
  }
  insert(std::move(c), stratum);
}

void CellComplex::add_cell(const std::string& id, int d, const std::vector<std::string>& facets, int stratum) {
  if (d < 3) throw Error(Error::Kind::construction, id, "add_cell is for dimension >= 3");
  if (facets.empty()) throw Error(Error::Kind::construction, id, "cell without facets");
  for (const auto& f : facets)
    if (!has(f) || dim(f) >= d) throw Error(Error::Kind::construction, id, "facet " + f + " is not a lower cell");
  std::vector<std::string> sorted = facets;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  insert(Cell{id, d, sorted, {}}, stratum);
}

void CellComplex::add(const Cell& c, int stratum) {
  switch (c.dim) {
    case 0: add_vertex(c.id, stratum); break;
    case 1: add_edge(c.id, c.boundary.at(0), c.boundary.at(1), stratum); break;
    case 2: add_face(c.id, c.walk, stratum, c.boundary.empty() ? "" : c.boundary[0]); break;
    default: add_cell(c.id, c.dim, c.boundary, stratum);
  }
}

const Cell& CellComplex::cell(const std::string& id) const {
  auto it = cells_.find(id);
  if (it == cells_.end()) throw Error(Error::Kind::construction, id, "unknown cell");
  return it->second;
}

int CellComplex::dimension() const {
  int d = -1;
  for (const auto& [id, c] : cells_) d = std::max(d, c.dim);
  return d;
}

std::vector<std::string> CellComplex::cells_of_dim(int d) const {
  std::vector<std::string> out;
  for (const auto& [id, c] : cells_)
    if (c.dim == d) out.push_back(id);
  return out;
}

std::vector<std::size_t> CellComplex::counts() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(dimension() + 1), 0);
  for (const auto& [id, c] : cells_) ++out[static_cast<std::size_t>(c.dim)];
  return out;
}

long CellComplex::euler_characteristic() const {
  long chi = 0;
  for (const auto& [id, c] : cells_) chi += (c.dim % 2 == 0) ? 1 : -1;
  return chi;
}

std::vector<std::string> CellComplex::facets(const std::string& id) const {
  const Cell& c = cell(id);
  std::vector<std::string> out;
  if (c.dim == 2) {
    for (const auto& s : c.walk) out.push_back(s.edge);
    if (c.walk.empty()) out = c.boundary;
  } else {
    out = c.boundary;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<std::string> CellComplex::closure(const std::string& id) const {
  return closure(std::set<std::string>{id});
}

std::set<std::string> CellComplex::closure(const std::set<std::string>& ids) const {
  std::set<std::string> out;
  std::vector<std::string> stack(ids.begin(), ids.end());
  while (!stack.empty()) {
    std::string c = std::move(stack.back());
    stack.pop_back();
    if (!out.insert(c).second) continue;
    for (auto& f : facets(c)) stack.push_back(f);
  }
  return out;
}

std::string CellComplex::anchor(const std::string& id) const {
  const Cell& c = cell(id);
  switch (c.dim) {
    case 0: return id;
    case 1: return c.boundary[0];
    case 2: return c.walk.empty() ? c.boundary[0] : start(c.walk.front());
    default: return anchor(c.boundary.front());
  }
}

int CellComplex::stratum(const std::string& id) const {
  auto it = stratum_.find(id);
  if (it == stratum_.end()) throw Error(Error::Kind::construction, id, "unknown cell");
  return it->second;
}

void CellComplex::set_stratum(const std::string& id, int s) {
  if (!has(id)) throw Error(Error::Kind::construction, id, "unknown cell");
  stratum_[id] = s;
}

int CellComplex::max_stratum() const {
  int s = -1;
  for (const auto& [id, t] : stratum_) s = std::max(s, t);
  return s;
}

std::set<std::string> CellComplex::stratum_cells(int s) const {
  std::set<std::string> out;
  for (const auto& [id, t] : stratum_)
    if (t == s) out.insert(id);
  return out;
}

bool CellComplex::is_subcomplex(const std::set<std::string>& ids) const {
  for (const auto& id : ids) {
    if (!has(id)) return false;
    for (const auto& f : facets(id))
      if (!ids.count(f)) return false;
  }
  return true;
}

CellComplex CellComplex::subcomplex(const std::set<std::string>& ids) const {
  for (const auto& id : ids) {
    if (!has(id)) throw Error(Error::Kind::construction, id, "subcomplex cell not in complex");
    for (const auto& f : facets(id))
      if (!ids.count(f)) throw Error(Error::Kind::construction, id, "subcomplex misses face " + f);
  }
  CellComplex out;
  for (int d = 0; d <= dimension(); ++d)
    for (const auto& id : cells_of_dim(d))
      if (ids.count(id)) out.add(cell(id), stratum(id));
  return out;
}

void CellComplex::index_components() const {
  if (components_ready_) return;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& v : vertices()) adj[v];
  for (const auto& e : edges()) {
    adj[src(e)].push_back(dst(e));
    adj[dst(e)].push_back(src(e));
  }
  std::set<std::string> seen;
  components_.clear();
  component_index_.clear();
  for (const auto& [v, nbrs] : adj) {
    if (seen.count(v)) continue;
    std::vector<std::string> comp;
    std::deque<std::string> queue{v};
    seen.insert(v);
    while (!queue.empty()) {
      std::string u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (const auto& w : adj[u])
        if (seen.insert(w).second) queue.push_back(w);
    }
    std::sort(comp.begin(), comp.end());
    for (const auto& u : comp) component_index_[u] = components_.size();
    components_.push_back(std::move(comp));
  }
  components_ready_ = true;
}

std::vector<std::vector<std::string>> CellComplex::components() const {
  index_components();
  return components_;
}

std::size_t CellComplex::component_of(const std::string& id) const {
  index_components();
  auto it = component_index_.find(anchor(id));
  if (it == component_index_.end()) throw Error(Error::Kind::construction, id, "cell outside every component");
  return it->second;
}

bool operator==(const CellComplex& a, const CellComplex& b) {
  if (a.stratum_ != b.stratum_ || a.cells_.size() != b.cells_.size()) return false;
  for (const auto& [id, c] : a.cells_) {
    auto it = b.cells_.find(id);
    if (it == b.cells_.end()) return false;
    const Cell& d = it->second;
    if (c.dim != d.dim || c.boundary != d.boundary || c.walk != d.walk) return false;
  }
  return true;
}

bool same_cells(const CellComplex& a, const CellComplex& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [id, c] : a.cells()) {
    if (!b.has(id)) return false;
    const Cell& d = b.cell(id);
    if (c.dim != d.dim || c.boundary != d.boundary || c.walk != d.walk) return false;
  }
  return true;
}

ValidationReport validate_complex(const CellComplex& x) {
  ValidationReport r;
  for (const auto& [id, c] : x.cells()) {
    for (const auto& f : x.facets(id)) {
      if (!x.has(f)) r.add("unknown-face", id, "face " + f + " does not exist");
      else if (x.dim(f) >= c.dim) r.add("dimension", id, "face " + f + " is not of lower dimension");
    }
    if (c.dim == 1 && c.boundary.size() != 2) r.add("edge-boundary", id, "edge needs two endpoints");
    if (c.dim == 2 && !is_closed_walk(x, c.walk)) r.add("open-walk", id, "boundary walk is not closed");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Spanning forests and pi_1

EdgePath SpanningForest::path_from_root(const CellComplex& x, const std::string& v) const {
  EdgePath up;
  std::string cur = v;
  for (auto it = parent.find(cur); it != parent.end(); it = parent.find(cur)) {
    up.push_back(it->second);
    cur = x.start(it->second);
  }
  std::reverse(up.begin(), up.end());
  return up;
}

SpanningForest spanning_forest(const CellComplex& x) {
  std::map<std::string, std::vector<OrientedEdge>> out_edges;
  for (const auto& e : x.edges()) {
    if (x.src(e) == x.dst(e)) continue;
    out_edges[x.src(e)].push_back({e, true});
    out_edges[x.dst(e)].push_back({e, false});
  }
  SpanningForest forest;
  std::set<std::string> seen;
  for (const auto& comp : x.components()) {
    forest.roots.push_back(comp.front());
    std::deque<std::string> queue{comp.front()};
    seen.insert(comp.front());
    while (!queue.empty()) {
      const std::string u = queue.front();
      queue.pop_front();
      for (const auto& step : out_edges[u]) {
        const std::string w = x.end(step);
        if (!seen.insert(w).second) continue;
        forest.parent[w] = step;
        forest.tree_edges.insert(step.edge);
        queue.push_back(w);
      }
    }
  }
  return forest;
}

Pi1Presentation pi1(const CellComplex& x, std::size_t component) {
  const auto comps = x.components();
  if (component >= comps.size())
    throw Error(Error::Kind::precondition, std::to_string(component), "no such component");
  const std::set<std::string> verts(comps[component].begin(), comps[component].end());
  const SpanningForest forest = spanning_forest(x);
  Pi1Presentation p;
  p.basepoint = comps[component].front();
  std::map<std::string, std::size_t> index;
  for (const auto& e : x.edges()) {
    if (!verts.count(x.src(e))) continue;
    if (forest.tree_edges.count(e)) {
      p.tree_edges.insert(e);
    } else {
      index[e] = p.generators.size();
      p.generators.push_back(e);
    }
  }
  for (const auto& f : x.cells_of_dim(2)) {
    if (!verts.count(x.anchor(f))) continue;
    std::vector<std::pair<std::size_t, int>> word;
    for (const auto& s : x.cell(f).walk) {
      auto it = index.find(s.edge);
      if (it != index.end()) word.emplace_back(it->second, s.forward ? 1 : -1);
    }
    p.relators.push_back(std::move(word));
    p.relator_cells.push_back(f);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Prisms

CellComplex prism(const CellComplex& x) {
  CellComplex p;
  const auto at = [](const std::string& id, const char* end) { return id + "@" + end; };
  const int top = x.dimension();
  for (const char* end : {"0", "1"})
    for (int d = 0; d <= top; ++d)
      for (const auto& id : x.cells_of_dim(d)) {
        Cell c = x.cell(id);
        c.id = at(id, end);
        for (auto& b : c.boundary) b = at(b, end);
        for (auto& s : c.walk) s.edge = at(s.edge, end);
        p.add(c, x.stratum(id));
      }
  for (int d = 0; d <= top; ++d)
    for (const auto& id : x.cells_of_dim(d)) {
      const Cell& c = x.cell(id);
      const int s = x.stratum(id);
      if (d == 0) {
        p.add_edge(at(id, "I"), at(id, "0"), at(id, "1"), s);
      } else if (d == 1) {
        const std::string a = c.boundary[0], b = c.boundary[1];
        p.add_face(at(id, "I"), {{at(id, "0"), true}, {at(b, "I"), true}, {at(id, "1"), false}, {at(a, "I"), false}}, s);
      } else {
        std::vector<std::string> facets{at(id, "0"), at(id, "1")};
        for (const auto& f : x.facets(id)) facets.push_back(at(f, "I"));
        p.add_cell(at(id, "I"), d + 1, facets, s);
      }
    }
  return p;
}

CellularMap prism_end(const CellComplex& x, const CellComplex& prism_complex, int end) {
  const std::string suffix = end == 0 ? "@0" : "@1";
  CellularMap f(x, prism_complex);
  for (const auto& [id, c] : x.cells()) {
    if (c.dim == 1) f.set_edge(id, {{id + suffix, true}});
    else if (c.dim == 0) f.set_vertex(id, id + suffix);
    else f.set_cell(id, id + suffix);
  }
  return f;
}

}  // namespace stratk

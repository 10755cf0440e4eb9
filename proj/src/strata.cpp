#include "stratk/strata.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace stratk {

namespace {

// Shortest edge path from `from` to `to` inside the 1-skeleton of `cells`.
EdgePath path_within(const CellComplex& x, const std::set<std::string>& cells, const std::string& from,
                     const std::string& to) {
  std::map<std::string, OrientedEdge> via;
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (const auto& e : cells) {
      if (x.dim(e) != 1) continue;
      for (bool fwd : {true, false}) {
        const OrientedEdge s{e, fwd};
        if (x.start(s) != v || seen.count(x.end(s))) continue;
        seen.insert(x.end(s));
        via[x.end(s)] = s;
        queue.push_back(x.end(s));
      }
    }
  }
  if (!seen.count(to)) throw Error(Error::Kind::integrity, to, "vertex not reachable inside the cell closure");
  EdgePath p;
  for (std::string v = to; v != from; v = x.start(via.at(v))) p.push_back(via.at(v));
  std::reverse(p.begin(), p.end());
  return p;
}

Matrix checked_inverse(const Matrix& m, const std::string& entity) {
  auto inv = m.inverse();
  if (!inv) throw Error(Error::Kind::not_a_bundle, entity, "map is not invertible");
  return *inv;
}

}  // namespace

Matrix local_transport(const VBundle& b, const std::string& cell, const std::string& w, EdgeEnd end) {
  const CellComplex& x = b.base;
  const Cell& c = x.cell(cell);
  if (c.dim == 0) {
    if (cell != w) throw Error(Error::Kind::integrity, cell, "vertex is not " + w);
    return Matrix::identity(b.rank_at(cell));
  }
  if (c.dim == 1) {
    const std::string &s = c.boundary[0], &t = c.boundary[1];
    if (end < 0) {
      if (w == s && w == t) throw Error(Error::Kind::ambiguous, cell, "both ends of the loop meet " + w);
      if (w == s) end = 0;
      else if (w == t) end = 1;
      else throw Error(Error::Kind::integrity, cell, w + " is not an endpoint");
    }
    if ((end == 0 ? s : t) != w) throw Error(Error::Kind::integrity, cell, w + " is not at the requested end");
    return end == 0 ? Matrix::identity(b.rank_at(cell)) : b.label({cell, true});
  }
  const std::string a = x.anchor(cell);
  return b.transport(path_within(x, x.closure(cell), a, w), a);
}

std::string StratifiedBundle::frame_vertex(const std::string& cell) const {
  return stratum_base(static_cast<std::size_t>(total().stratum(cell))).anchor(cell);
}

std::size_t StratifiedBundle::frame_rank(const std::string& cell) const {
  return stratum_bundle(static_cast<std::size_t>(total().stratum(cell))).rank_at(frame_vertex(cell));
}

Matrix StratifiedBundle::specialize(const std::string& c, const std::string& d, EdgeEnd end) const {
  if (c == d) return Matrix::identity(frame_rank(c));
  const int j = total().stratum(c), i = total().stratum(d);
  if (i > j) throw Error(Error::Kind::integrity, d, "face lies in a higher stratum than " + c);
  const VBundle& b = stratum_bundle(static_cast<std::size_t>(j));
  const CellComplex& m = b.base;
  if (i == j) return local_transport(b, c, m.anchor(d), end);

  const Layer& layer = space.layers[static_cast<std::size_t>(j - 1)];
  const auto& phi = layers[static_cast<std::size_t>(j - 1)].phi;
  std::vector<std::pair<std::string, EdgeEnd>> faces;
  if (m.dim(c) == 1) {
    for (EdgeEnd e : {0, 1})
      if (end < 0 || end == e) faces.emplace_back(m.cell(c).boundary[static_cast<std::size_t>(e)], e);
  } else {
    for (const auto& f : m.closure(c))
      if (f != c) faces.emplace_back(f, -1);
  }

  std::vector<Matrix> cands;
  for (const auto& [f, e] : faces)
    if (layer.a.count(f) && layer.h.image(f) == d) cands.push_back(phi.at(f) * local_transport(b, c, m.anchor(f), e));
  if (cands.empty() && m.dim(c) >= 2) {
    int best = -1;
    for (const auto& [f, e] : faces) {
      if (!layer.a.count(f)) continue;
      const std::string img = layer.h.image(f);
      if (!total().closure(img).count(d)) continue;
      if (best >= 0 && m.dim(f) > best) continue;
      if (best < 0 || m.dim(f) < best) {
        cands.clear();
        best = m.dim(f);
      }
      cands.push_back(specialize(img, d, -1) * phi.at(f) * local_transport(b, c, m.anchor(f), -1));
    }
  }
  if (cands.empty()) throw Error(Error::Kind::integrity, c + "->" + d, "no attached face reaches the target");
  for (const auto& m2 : cands)
    if (m2 != cands.front()) {
      if (m.dim(c) == 1 && end < 0) throw Error(Error::Kind::ambiguous, c, "both ends reach " + d);
      throw Error(Error::Kind::naturality, c + "->" + d, "specializations through different faces disagree");
    }
  return cands.front();
}

std::vector<std::vector<std::size_t>> StratifiedBundle::fiber_dims() const {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t j = 0; j < strata(); ++j) {
    std::set<std::size_t> s(stratum_bundle(j).fiber.begin(), stratum_bundle(j).fiber.end());
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

bool operator==(const StratifiedBundle& a, const StratifiedBundle& b) {
  if (!(a.total() == b.total()) || !(a.layer0 == b.layer0) || a.layers.size() != b.layers.size()) return false;
  for (std::size_t k = 0; k < a.layers.size(); ++k)
    if (!(a.layers[k].m == b.layers[k].m) || a.layers[k].phi != b.layers[k].phi) return false;
  return true;
}

namespace {

void require_valid(const VBundle& e, const std::string& what) {
  const auto r = validate_bundle(e);
  if (!r.ok())
    throw Error(Error::Kind::construction, r.issues.front().entity, what + ": " + r.issues.front().message);
}

// End of h(a) reached from end `e` of the edge a; -1 when h(a) is a vertex.
EdgeEnd image_end(const CellularMap& h, const std::string& a, EdgeEnd e) {
  const auto& p = h.path(a);
  if (p.empty()) return -1;
  return p.front().forward ? e : 1 - e;
}

void complete_layer(StratifiedBundle& x, std::size_t k) {
  const Layer& layer = x.space.layers[k];
  const CellComplex& m = x.layers[k].m.base;
  auto& phi = x.layers[k].phi;
  for (const auto& [id, f] : phi)
    if (!layer.a.count(id)) throw Error(Error::Kind::construction, id, "fiber map on a cell outside the attached part");

  std::vector<std::string> order(layer.a.begin(), layer.a.end());
  std::stable_sort(order.begin(), order.end(), [&](const auto& p, const auto& q) { return m.dim(p) < m.dim(q); });
  for (const auto& a : order) {
    if (m.dim(a) == 1 && layer.h.path(a).size() > 1)
      throw Error(Error::Kind::construction, a, "attaching map must send each edge to a single cell");
    if (phi.count(a)) continue;
    if (m.dim(a) == 0) throw Error(Error::Kind::construction, a, "fiber map missing on a vertex");
    const std::string v = m.anchor(a), c = layer.h.image(a), cv = layer.h.image(v);
    if (x.total().stratum(c) != x.total().stratum(cv))
      throw Error(Error::Kind::construction, a, "fiber map missing where the image changes stratum");
    const Matrix s = x.specialize(c, cv, m.dim(a) == 1 ? image_end(layer.h, a, 0) : -1);
    phi[a] = checked_inverse(s, c) * phi.at(v);
  }

  const auto& cat = *x.category();
  for (const auto& a : order) {
    const Matrix& f = phi.at(a);
    const std::string c = layer.h.image(a);
    if (f.rows() != x.frame_rank(c) || f.cols() != x.layers[k].m.rank_at(a))
      throw Error(Error::Kind::construction, a, "fiber map shape does not match the frames");
    if (!cat.contains(f)) throw Error(Error::Kind::construction, a, "fiber map is not a morphism of the category");
  }

  for (const auto& a : order) {
    if (m.dim(a) == 0) continue;
    std::vector<std::pair<std::string, EdgeEnd>> faces;
    if (m.dim(a) == 1) faces = {{m.src(a), 0}, {m.dst(a), 1}};
    else
      for (const auto& b : m.facets(a)) faces.emplace_back(b, -1);
    const std::string c = layer.h.image(a);
    for (const auto& [b, e] : faces) {
      const Matrix lhs = phi.at(b) * local_transport(x.layers[k].m, a, m.anchor(b), e);
      const std::string d = layer.h.image(b);
      const EdgeEnd e2 = m.dim(a) == 1 ? image_end(layer.h, a, e) : -1;
      const Matrix rhs = x.specialize(c, d, e2) * phi.at(a);
      if (lhs != rhs) throw Error(Error::Kind::naturality, a + "/" + b, "fiber maps do not commute with transport");
    }
  }
}

}  // namespace

StratifiedBundle build_stratified(StratifiedSpace space, VBundle layer0, std::vector<AttachLayer> layers) {
  if (layers.size() != space.layers.size())
    throw Error(Error::Kind::construction, "", "one layer bundle per attached layer is required");
  if (!same_cells(layer0.base, space.base0)) throw Error(Error::Kind::base_mismatch, "", "layer 0 bundle base");
  require_valid(layer0, "layer 0");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (!same_cells(layers[k].m.base, space.layers[k].m))
      throw Error(Error::Kind::base_mismatch, std::to_string(k + 1), "layer bundle base");
    if (layers[k].m.category->name() != layer0.category->name())
      throw Error(Error::Kind::construction, layers[k].m.category->name(), "layers use different categories");
    require_valid(layers[k].m, "layer " + std::to_string(k + 1));
  }
  StratifiedBundle x;
  x.stages = assemble_stages(space);
  x.space = std::move(space);
  x.layer0 = std::move(layer0);
  x.layers = std::move(layers);
  for (std::size_t k = 0; k < x.layers.size(); ++k) complete_layer(x, k);
  return x;
}

StratifiedBundle single_stratum(const VBundle& e) {
  StratifiedSpace s;
  s.base0 = e.base;
  return build_stratified(std::move(s), e, {});
}

VBundle flatten(const StratifiedBundle& x) {
  for (const auto& l : x.layers)
    for (const auto& [a, f] : l.phi)
      if (!f.is_square() || !f.inverse()) throw Error(Error::Kind::not_a_bundle, a, "fiber map is not invertible");
  const CellComplex& t = x.total();
  VBundle out{t, x.category(), {}, {}};
  for (const auto& comp : t.components()) {
    const std::size_t r = x.frame_rank(comp.front());
    for (const auto& c : comp)
      if (x.frame_rank(c) != r) throw Error(Error::Kind::not_a_bundle, c, "fiber dimension jumps");
    out.fiber.push_back(r);
  }
  for (const auto& e : t.edges())
    out.labels[e] = x.specialize(e, t.dst(e), 1) * checked_inverse(x.specialize(e, t.src(e), 0), e);
  const auto r = validate_bundle(out);
  if (!r.ok()) {
    const auto& i = r.issues.front();
    throw Error(i.code == "holonomy" ? Error::Kind::naturality : Error::Kind::not_a_bundle, i.entity, i.message);
  }
  return out;
}

VBundle restrict_to_stratum(const StratifiedBundle& x, const VBundle& flat, std::size_t j) {
  if (j >= x.strata()) throw Error(Error::Kind::precondition, std::to_string(j), "no such stratum");
  if (j == 0) return pullback_bundle(CellularMap::inclusion(x.space.base0, x.total()), flat);
  return pullback_bundle(characteristic_map(x.space, j - 1), flat);
}

StratifiedBundle apply_stratified_gauge(const StratifiedBundle& x, const std::vector<Gauge>& g) {
  if (g.size() != x.strata()) throw Error(Error::Kind::precondition, "", "one gauge per stratum is required");
  VBundle l0 = apply_gauge(x.layer0, g[0]);
  std::vector<AttachLayer> layers;
  for (std::size_t k = 0; k < x.layers.size(); ++k) {
    const Layer& layer = x.space.layers[k];
    AttachLayer l{apply_gauge(x.layers[k].m, g[k + 1]), {}};
    for (const auto& [a, f] : x.layers[k].phi) {
      const std::string c = layer.h.image(a);
      const Matrix& gc = g[static_cast<std::size_t>(x.total().stratum(c))].at(x.frame_vertex(c));
      l.phi[a] = gc * f * checked_inverse(g[k + 1].at(l.m.base.anchor(a)), a);
    }
    layers.push_back(std::move(l));
  }
  return build_stratified(x.space, std::move(l0), std::move(layers));
}

namespace {

// One unknown automorphism per (stratum, component).
struct Block {
  std::size_t stratum, comp, n;
  std::vector<std::pair<Matrix, Matrix>> labels;  // normalized (x, y) generator labels
};

// P C_b Q = R C_c S
struct Constraint {
  std::size_t b, c;
  Matrix p, q, r, s;
  std::string entity;
};

bool holds(const Constraint& k, const std::vector<Matrix>& val) {
  return k.p * val[k.b] * k.q == k.r * val[k.c] * k.s;
}

}  // namespace

StratifiedIso is_isomorphic_stratified(const StratifiedBundle& x, const StratifiedBundle& y, std::size_t budget,
                                       std::uint64_t seed) {
  if (!(x.total() == y.total()) || x.strata() != y.strata())
    throw Error(Error::Kind::base_mismatch, "", "stratified bundles live over different spaces");
  for (std::size_t j = 1; j < x.strata(); ++j)
    if (!same_cells(x.stratum_base(j), y.stratum_base(j)) || x.space.layers[j - 1].a != y.space.layers[j - 1].a)
      throw Error(Error::Kind::base_mismatch, std::to_string(j), "layers differ");
  StratifiedIso res;
  for (std::size_t j = 0; j < x.strata(); ++j)
    if (x.stratum_bundle(j).fiber != y.stratum_bundle(j).fiber) {
      res.reason = "fiber dimensions differ";
      return res;
    }

  std::vector<Gauge> nx, ny;
  std::vector<std::vector<std::size_t>> block_of;  // [stratum][component]
  std::vector<Block> blocks;
  for (std::size_t j = 0; j < x.strata(); ++j) {
    const VBundle &bx = x.stratum_bundle(j), &by = y.stratum_bundle(j);
    nx.push_back(normalizing_gauge(bx));
    ny.push_back(normalizing_gauge(by));
    const VBundle ex = apply_gauge(bx, nx.back()), ey = apply_gauge(by, ny.back());
    block_of.emplace_back();
    for (std::size_t ci = 0; ci < bx.fiber.size(); ++ci) {
      Block b{j, ci, bx.fiber[ci], {}};
      for (const auto& g : pi1(bx.base, ci).generators) b.labels.emplace_back(ex.labels.at(g), ey.labels.at(g));
      block_of.back().push_back(blocks.size());
      blocks.push_back(std::move(b));
    }
  }

  std::vector<Constraint> cons;
  for (std::size_t k = 0; k < x.layers.size(); ++k) {
    const std::size_t j = k + 1;
    const CellComplex& m = x.stratum_base(j);
    for (const auto& [a, fx] : x.layers[k].phi) {
      const Matrix& fy = y.layers[k].phi.at(a);
      const std::string v = m.anchor(a), c = x.space.layers[k].h.image(a);
      const auto i = static_cast<std::size_t>(x.total().stratum(c));
      const std::string w = x.frame_vertex(c);
      Constraint con{block_of[j][m.component_of(v)], block_of[i][x.stratum_base(i).component_of(w)],
                     fy * checked_inverse(ny[j].at(v), v), nx[j].at(v), checked_inverse(ny[i].at(w), w),
                     nx[i].at(w) * fx, a};
      cons.push_back(std::move(con));
    }
  }

  std::vector<Matrix> val;
  const auto& cat = *x.category();
  if (!cat.is_open()) {
    std::vector<std::vector<Matrix>> cands;
    for (const auto& b : blocks) {
      std::vector<Matrix> list;
      const auto ok = [&](const Matrix& c) {
        for (const auto& [lx, ly] : b.labels)
          if (c * lx != ly * c) return false;
        return true;
      };
      const Matrix id = Matrix::identity(b.n);
      if (ok(id)) list.push_back(id);
      for (const auto& c : cat.automorphisms(b.n))
        if (c != id && ok(c)) list.push_back(c);
      if (list.empty()) {
        res.reason = "layer bundles differ on stratum " + std::to_string(b.stratum);
        return res;
      }
      cands.push_back(std::move(list));
    }
    // constraints are checked once both of their blocks are assigned
    std::vector<std::vector<const Constraint*>> due(blocks.size());
    for (const auto& c : cons) due[std::max(c.b, c.c)].push_back(&c);
    val.assign(blocks.size(), Matrix());
    std::size_t nodes = 0;
    bool exhausted = false;
    const auto search = [&](auto&& self, std::size_t i) -> bool {
      if (i == blocks.size()) return true;
      for (const auto& c : cands[i]) {
        if (++nodes > budget) {
          exhausted = true;
          return false;
        }
        val[i] = c;
        bool good = true;
        for (const auto* k : due[i])
          if (!holds(*k, val)) {
            good = false;
            break;
          }
        if (good && self(self, i + 1)) return true;
        if (exhausted) return false;
      }
      return false;
    };
    if (!search(search, 0)) {
      res.inconclusive = exhausted;
      res.reason = exhausted ? "inconclusive-budget" : "no gauge intertwines the fiber maps";
      return res;
    }
  } else {
    val.clear();
    for (const auto& b : blocks) val.push_back(Matrix::identity(b.n));
    bool identity = std::all_of(cons.begin(), cons.end(), [&](const Constraint& k) { return holds(k, val); });
    for (const auto& b : blocks)
      for (const auto& [lx, ly] : b.labels) identity = identity && lx == ly;
    if (!identity) {
      std::vector<std::size_t> off;
      std::size_t unknowns = 0;
      for (const auto& b : blocks) {
        off.push_back(unknowns);
        unknowns += b.n * b.n;
      }
      std::vector<std::vector<Rational>> rows;
      const auto add = [&](const Constraint& k) {
        const std::size_t nb = blocks[k.b].n, nc = blocks[k.c].n;
        for (std::size_t p = 0; p < k.p.rows(); ++p)
          for (std::size_t s = 0; s < k.q.cols(); ++s) {
            std::vector<Rational> row(unknowns, 0);
            for (std::size_t u = 0; u < nb; ++u)
              for (std::size_t l = 0; l < nb; ++l) row[off[k.b] + u * nb + l] += k.p(p, u) * k.q(l, s);
            for (std::size_t u = 0; u < nc; ++u)
              for (std::size_t l = 0; l < nc; ++l) row[off[k.c] + u * nc + l] -= k.r(p, u) * k.s(l, s);
            rows.push_back(std::move(row));
          }
      };
      for (std::size_t bi = 0; bi < blocks.size(); ++bi)
        for (const auto& [lx, ly] : blocks[bi].labels) {
          const Matrix id = Matrix::identity(blocks[bi].n);
          add({bi, bi, id, lx, ly, id, ""});
        }
      for (const auto& c : cons) add(c);
      Matrix sys(rows.size(), unknowns);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t u = 0; u < unknowns; ++u) sys(r, u) = rows[r][u];
      const Matrix basis = rows.empty() ? Matrix::identity(unknowns) : nullspace(sys);
      const auto build = [&](const std::vector<Rational>& coeff) {
        std::vector<Matrix> out;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
          const std::size_t n = blocks[bi].n;
          Matrix m(n, n);
          for (std::size_t t = 0; t < basis.cols(); ++t)
            if (coeff[t] != 0)
              for (std::size_t idx = 0; idx < n * n; ++idx) m(idx / n, idx % n) += coeff[t] * basis(off[bi] + idx, t);
          out.push_back(std::move(m));
        }
        return out;
      };
      const auto usable = [&](const std::vector<Matrix>& v) {
        for (const auto& m : v)
          if (!cat.is_automorphism(m)) return false;
        return true;
      };
      std::vector<Rational> coeff(basis.cols(), 0);
      bool found = false;
      for (std::size_t t = 0; t < basis.cols() && !found; ++t) {
        std::fill(coeff.begin(), coeff.end(), 0);
        coeff[t] = 1;
        val = build(coeff);
        found = usable(val);
      }
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<long> dist(-7, 7);
      for (int attempt = 0; attempt < 200 && !found && basis.cols() > 0; ++attempt) {
        for (auto& q : coeff) q = dist(rng);
        val = build(coeff);
        found = usable(val);
      }
      if (!found && unknowns == 0) {
        val = build(coeff);
        found = true;
      }
      if (!found) {
        res.reason = basis.cols() == 0 ? "no gauge intertwines the fiber maps" : "no invertible intertwiner found";
        res.inconclusive = basis.cols() > 0;
        return res;
      }
    }
  }

  std::vector<Gauge> w(x.strata());
  for (std::size_t j = 0; j < x.strata(); ++j) {
    const CellComplex& base = x.stratum_base(j);
    for (const auto& v : base.vertices())
      w[j][v] = checked_inverse(ny[j].at(v), v) * val[block_of[j][base.component_of(v)]] * nx[j].at(v);
  }
  res.witness = std::move(w);
  return res;
}

namespace {

const CellComplex& stratum_base(const StratifiedSpace& s, std::size_t j) {
  return j == 0 ? s.base0 : s.layers[j - 1].m;
}

// Copies f onto the cells of `from`, landing in `to`.
CellularMap restrict_map(const CellularMap& f, const CellComplex& from, const CellComplex& to) {
  CellularMap g(from, to);
  for (const auto& [id, c] : from.cells()) {
    if (c.dim == 1) g.set_edge(id, f.path(id));
    else if (c.dim == 0) g.set_vertex(id, f.image(id));
    else g.set_cell(id, f.image(id));
  }
  return g;
}

EdgePath oriented_image(const CellularMap& h, const OrientedEdge& s) {
  EdgePath q = h.path(s.edge);
  return s.forward ? q : reverse_path(q);
}

// Unique shortest path in the 1-skeleton of A' from `from` to `to` whose
// image under h' spells `word`.
EdgePath lift_edge(const std::string& a, const CellComplex& m2, const std::set<std::string>& a2, const CellularMap& h2,
                   const std::string& from, const std::string& to, const EdgePath& word) {
  using State = std::pair<std::string, std::size_t>;
  std::map<State, std::size_t> dist, count;
  std::map<State, std::pair<State, OrientedEdge>> via;
  std::deque<State> queue;
  const State start{from, 0}, goal{to, word.size()};
  dist[start] = 0;
  count[start] = 1;
  queue.push_back(start);
  while (!queue.empty()) {
    const State st = queue.front();
    queue.pop_front();
    if (dist.count(goal) && dist[st] >= dist[goal]) break;
    for (const auto& e : a2) {
      if (m2.dim(e) != 1) continue;
      for (bool fwd : {true, false}) {
        const OrientedEdge step{e, fwd};
        if (m2.start(step) != st.first) continue;
        const EdgePath q = oriented_image(h2, step);
        if (st.second + q.size() > word.size() ||
            !std::equal(q.begin(), q.end(), word.begin() + static_cast<long>(st.second)))
          continue;
        const State nx{m2.end(step), st.second + q.size()};
        if (!dist.count(nx)) {
          dist[nx] = dist[st] + 1;
          count[nx] = 0;
          via[nx] = {st, step};
          queue.push_back(nx);
        }
        if (dist[nx] == dist[st] + 1) count[nx] = std::min<std::size_t>(2, count[nx] + count[st]);
      }
    }
  }
  if (!dist.count(goal)) throw Error(Error::Kind::map, a, "edge has no lift into the attached part");
  if (count[goal] > 1) throw Error(Error::Kind::ambiguous, a, "edge lifts along several shortest paths");
  EdgePath p;
  for (State st = goal; st != start; st = via.at(st).first) p.push_back(via.at(st).second);
  std::reverse(p.begin(), p.end());
  return p;
}

void check_decomposition(const CellularMap& g, const Layer& l, const Layer& l2, const CellularMap& f) {
  const auto r = validate_map(g);
  if (!r.ok()) throw Error(Error::Kind::map, r.issues.front().entity, "layer map: " + r.issues.front().message);
  for (const auto& [id, c] : l.m.cells()) {
    const bool inside = l.a.count(id) > 0;
    bool respects = inside ? true : l2.a.count(g.image(id)) == 0;
    if (inside)
      for (const auto& img : g.image_cells(id)) respects = respects && l2.a.count(img) > 0;
    if (!respects) throw Error(Error::Kind::map, id, "layer map does not respect the attached parts");
    if (!inside) continue;
    bool ok;
    if (c.dim == 1) ok = l2.h.map_path(g.path(id)) == f.map_path(l.h.path(id));
    else ok = l2.h.image(g.image(id)) == f.image(l.h.image(id));
    if (!ok) throw Error(Error::Kind::map, id, "layer map does not commute with the attaching maps");
  }
}

}  // namespace

std::vector<CellularMap> infer_decomposition(const StratifiedSpace& src, const CellularMap& f,
                                             const StratifiedSpace& dst) {
  if (!same_cells(f.src(), assemble(src)) || !same_cells(f.dst(), assemble(dst)))
    throw Error(Error::Kind::base_mismatch, "", "map does not match the stratified spaces");
  const auto sp = check_stratum_preserving(f);
  if (!sp.holds)
    throw Error(Error::Kind::not_stratum_preserving, sp.offending.empty() ? "" : sp.offending.front(), sp.detail);
  if (src.layers.size() != dst.layers.size())
    throw Error(Error::Kind::not_stratum_preserving, "", "different numbers of strata");
  std::vector<CellularMap> out;
  for (std::size_t k = 0; k < src.layers.size(); ++k) {
    const Layer &l = src.layers[k], &l2 = dst.layers[k];
    const CellComplex &m = l.m, &m2 = l2.m;
    CellularMap g(m, m2);
    std::map<std::string, std::set<std::string>> forced;
    for (const auto& [id, c] : m.cells()) {
      if (l.a.count(id)) continue;
      if (c.dim == 0) g.set_vertex(id, f.image(id));
      else if (c.dim >= 2) g.set_cell(id, f.image(id));
      else {
        const EdgePath& p = f.path(id);
        g.set_edge(id, p);
        if (p.empty()) {
          for (const auto& v : c.boundary)
            if (l.a.count(v)) throw Error(Error::Kind::map, id, "collapsed edge drags the attached part along");
          continue;
        }
        if (l.a.count(c.boundary[0])) forced[c.boundary[0]].insert(m2.start(p.front()));
        if (l.a.count(c.boundary[1])) forced[c.boundary[1]].insert(m2.end(p.back()));
      }
    }
    for (const auto& v : m.vertices()) {
      if (!l.a.count(v)) continue;
      std::set<std::string> cands = forced[v];
      if (cands.empty()) {
        const std::string target = f.image(l.h.image(v));
        for (const auto& w : m2.vertices())
          if (l2.a.count(w) && l2.h.image(w) == target) cands.insert(w);
      }
      if (cands.size() != 1)
        throw Error(cands.empty() ? Error::Kind::map : Error::Kind::ambiguous, v,
                    cands.empty() ? "vertex has no lift" : "vertex lifts to several cells");
      g.set_vertex(v, *cands.begin());
    }
    for (const auto& a : m.edges())
      if (l.a.count(a))
        g.set_edge(a, lift_edge(a, m2, l2.a, l2.h, g.image(m.src(a)), g.image(m.dst(a)), f.map_path(l.h.path(a))));
    for (int d = 2; d <= m.dimension(); ++d)
      for (const auto& a : m.cells_of_dim(d)) {
        if (!l.a.count(a)) continue;
        const std::string target = f.image(l.h.image(a));
        std::vector<std::string> cands;
        for (const auto& w : l2.a)
          if (m2.dim(w) <= d && l2.h.image(w) == target) cands.push_back(w);
        if (cands.size() != 1)
          throw Error(cands.empty() ? Error::Kind::map : Error::Kind::ambiguous, a,
                      cands.empty() ? "cell has no lift" : "cell lifts to several cells");
        g.set_cell(a, cands.front());
      }
    check_decomposition(g, l, l2, f);
    out.push_back(std::move(g));
  }
  return out;
}

StratifiedBundle pullback_stratified(const StratifiedSpace& src, const CellularMap& f, const StratifiedBundle& x,
                                     std::optional<std::vector<CellularMap>> decomposition) {
  std::vector<CellularMap> g;
  if (decomposition) {
    if (!same_cells(f.src(), assemble(src)) || !same_cells(f.dst(), x.total()))
      throw Error(Error::Kind::base_mismatch, "", "map does not match the stratified spaces");
    const auto sp = check_stratum_preserving(f);
    if (!sp.holds)
      throw Error(Error::Kind::not_stratum_preserving, sp.offending.empty() ? "" : sp.offending.front(), sp.detail);
    if (decomposition->size() != src.layers.size() || src.layers.size() != x.layers.size())
      throw Error(Error::Kind::precondition, "", "one layer map per attached layer is required");
    g = std::move(*decomposition);
    for (std::size_t k = 0; k < g.size(); ++k) check_decomposition(g[k], src.layers[k], x.space.layers[k], f);
  } else {
    g = infer_decomposition(src, f, x.space);
  }
  g.insert(g.begin(), restrict_map(f, src.base0, x.space.base0));
  const CellComplex total = assemble(src);

  VBundle l0 = pullback_bundle(g[0], x.layer0);
  std::vector<AttachLayer> layers;
  for (std::size_t k = 0; k < src.layers.size(); ++k) {
    const Layer &l = src.layers[k], &l2 = x.space.layers[k];
    const CellularMap& gj = g[k + 1];
    const VBundle& mj = x.layers[k].m;
    AttachLayer out{pullback_bundle(gj, mj), {}};
    for (const auto& a : l.a) {
      const int da = l.m.dim(a);
      if (da == 0) {
        out.phi[a] = x.layers[k].phi.at(gj.image(a));
        continue;
      }
      const std::string c = l.h.image(a);
      if (total.stratum(c) == total.stratum(l.h.image(l.m.anchor(a)))) continue;  // derived on build

      std::string ah;
      EdgeEnd end_s = -1;
      if (da == 1 && !gj.path(a).empty()) {
        if (gj.path(a).size() > 1) throw Error(Error::Kind::construction, a, "multi-cell lift across a rank change");
        ah = gj.path(a).front().edge;
        end_s = gj.path(a).front().forward ? 0 : 1;
      } else {
        ah = gj.image(a);
      }
      const Matrix t_src = checked_inverse(local_transport(mj, ah, gj.image(l.m.anchor(a)), end_s), ah);

      const auto i = static_cast<std::size_t>(total.stratum(c));
      const CellularMap& gi = g[i];
      const std::string c2 = l2.h.image(ah);
      const std::string w = gi.image(stratum_base(src, i).anchor(c));
      EdgeEnd end_t = -1;
      if (x.stratum_base(i).dim(c2) == 1) {
        const EdgePath& p = gi.path(c);
        if (p.size() != 1) throw Error(Error::Kind::construction, a, "multi-cell lift across a rank change");
        end_t = p.front().forward ? 0 : 1;
      }
      out.phi[a] = local_transport(x.stratum_bundle(i), c2, w, end_t) * x.layers[k].phi.at(ah) * t_src;
    }
    layers.push_back(std::move(out));
  }
  return build_stratified(src, std::move(l0), std::move(layers));
}

}  // namespace stratk

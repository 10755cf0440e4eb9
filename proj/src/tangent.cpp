#include "stratk/tangent.hpp"

#include <array>

namespace stratk {

namespace {

Matrix columns(const std::vector<std::vector<Rational>>& cols, std::size_t n) {
  Matrix m(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
  return m;
}

// Coordinates of the columns of `v` in the basis `b` (full column rank).
Matrix coordinates(const Matrix& b, const Matrix& v) {
  const Matrix bt = b.transpose();
  return *(bt * b).inverse() * bt * v;
}

std::string vertex_name(int x, int y, int z) { return "v" + std::to_string(x) + std::to_string(y) + std::to_string(z); }

}  // namespace

Matrix PolytopalManifold::direction(const std::string& cell) const {
  std::vector<std::string> verts;
  for (const auto& c : cells.closure(cell))
    if (cells.dim(c) == 0) verts.push_back(c);
  const auto& origin = coords.at(verts.front());
  std::vector<std::vector<Rational>> diffs;
  for (std::size_t i = 1; i < verts.size(); ++i) {
    std::vector<Rational> d(ambient);
    for (std::size_t r = 0; r < ambient; ++r) d[r] = coords.at(verts[i])[r] - origin[r];
    diffs.push_back(std::move(d));
  }
  if (diffs.empty()) return Matrix(ambient, 0);
  // rows of the reduced echelon form: independent of the vertex order
  std::vector<std::size_t> pivots;
  const Matrix r = rref(columns(diffs, ambient).transpose(), &pivots);
  Matrix b(ambient, pivots.size());
  for (std::size_t c = 0; c < pivots.size(); ++c)
    for (std::size_t i = 0; i < ambient; ++i) b(i, c) = r(c, i);
  return b;
}

ValidationReport validate_polytope(const PolytopalManifold& m) {
  ValidationReport r;
  for (const auto& v : m.cells.vertices()) {
    auto it = m.coords.find(v);
    if (it == m.coords.end() || it->second.size() != m.ambient) r.add("coordinates", v, "vertex needs ambient coordinates");
  }
  if (!r.ok()) return r;
  for (const auto& [id, c] : m.cells.cells()) {
    const Matrix b = m.direction(id);
    if (b.cols() != static_cast<std::size_t>(c.dim)) {
      r.add("direction", id, "affine hull dimension differs from the cell dimension");
      continue;
    }
    for (const auto& f : m.cells.facets(id))
      if (hconcat(b, m.direction(f)).rank() != b.cols()) r.add("containment", f, "face leaves the affine hull of " + id);
  }
  return r;
}

Matrix tangent_projection(const std::vector<Rational>& x) {
  Rational norm2 = 0;
  for (const auto& q : x) norm2 += q * q;
  if (norm2 == 0) throw Error(Error::Kind::domain, "", "projection needs a nonzero point");
  Matrix p = Matrix::identity(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) p(i, j) -= x[i] * x[j] / norm2;
  return p;
}

Matrix orthogonal_projection(const PolytopalManifold& m, const std::string& cell, const std::string& face) {
  const Matrix bc = m.direction(cell), bf = m.direction(face);
  if (bf.cols() == 0) return Matrix(0, bc.cols());
  return coordinates(bf, bc);
}

Matrix projection_along(const PolytopalManifold& m, const std::string& cell, const std::string& face,
                        const Matrix& complement) {
  const Matrix bc = m.direction(cell), bf = m.direction(face);
  const std::size_t d = bc.cols(), k = bf.cols();
  if (k == 0) return Matrix(0, d);
  if (complement.cols() + k != d) throw Error(Error::Kind::precondition, face, "complement has the wrong dimension");
  const Matrix t = coordinates(bc, bf), c = coordinates(bc, complement);
  if (bc * c != complement) throw Error(Error::Kind::precondition, cell, "complement leaves the direction space");
  const auto inv = hconcat(t, c).inverse();
  if (!inv) throw Error(Error::Kind::precondition, face, "complement meets the face directions");
  Matrix p(k, d);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t s = 0; s < d; ++s) p(r, s) = (*inv)(r, s);
  return p;
}

StratifiedSpace skeletal_space(const CellComplex& x) {
  StratifiedSpace s;
  for (const auto& v : x.vertices()) s.base0.add_vertex(v);
  CellComplex below = s.base0;
  for (int d = 1; d <= x.dimension(); ++d) {
    Layer layer;
    for (const auto& sigma : x.cells_of_dim(d)) {
      const auto rename = [&](const std::string& t) { return t == sigma ? sigma : sigma + ":" + t; };
      for (int e = 0; e <= d; ++e)
        for (const auto& tau : x.closure(sigma)) {
          if (x.dim(tau) != e) continue;
          Cell c = x.cell(tau);
          c.id = rename(tau);
          for (auto& b : c.boundary) b = rename(b);
          for (auto& st : c.walk) st.edge = rename(st.edge);
          layer.m.add(c, 0);
          if (tau != sigma) layer.a.insert(c.id);
        }
    }
    layer.h = CellularMap(layer.m.subcomplex(layer.a), below);
    for (const auto& sigma : x.cells_of_dim(d))
      for (const auto& tau : x.closure(sigma)) {
        if (tau == sigma) continue;
        const std::string id = sigma + ":" + tau;
        if (x.dim(tau) == 0) layer.h.set_vertex(id, tau);
        else if (x.dim(tau) == 1) layer.h.set_edge(id, {{tau, true}});
        else layer.h.set_cell(id, tau);
      }
    s.layers.push_back(std::move(layer));
    below = assemble(s);
  }
  return s;
}

StratifiedBundle build_tangent(const PolytopalManifold& m, const std::optional<ProjectionRule>& rule) {
  const auto report = validate_polytope(m);
  if (!report.ok()) throw Error(Error::Kind::construction, report.issues.front().entity, report.issues.front().message);
  StratifiedSpace space = skeletal_space(m.cells);
  const CategoryPtr gl = share(StructureCategory::gl_open(m.ambient));
  VBundle layer0 = VBundle::trivial(space.base0, gl, 0);
  std::vector<AttachLayer> layers;
  for (int d = 1; d <= m.cells.dimension(); ++d) {
    AttachLayer l{VBundle::trivial(space.layers[static_cast<std::size_t>(d - 1)].m, gl, static_cast<std::size_t>(d)), {}};
    for (const auto& sigma : m.cells.cells_of_dim(d))
      for (const auto& tau : m.cells.closure(sigma)) {
        if (tau == sigma) continue;
        const std::string id = sigma + ":" + tau;
        Matrix p = rule ? (*rule)(m, sigma, tau) : orthogonal_projection(m, sigma, tau);
        const auto k = static_cast<std::size_t>(m.cells.dim(tau));
        if (p.rows() != k || p.cols() != static_cast<std::size_t>(d))
          throw Error(Error::Kind::construction, id, "projection has the wrong shape");
        if (p.rank() != k) throw Error(Error::Kind::construction, id, "attaching fiber map is not surjective");
        l.phi[id] = std::move(p);
      }
    layers.push_back(std::move(l));
  }
  return build_stratified(std::move(space), std::move(layer0), std::move(layers));
}

ChoiceReport choice_independence_check(const PolytopalManifold& m, const ProjectionRule& alt) {
  const StratifiedBundle x = build_tangent(m);
  std::optional<StratifiedBundle> y;
  try {
    y = build_tangent(m, alt);
  } catch (const Error& e) {
    throw Error(Error::Kind::precondition, e.entity(), std::string("alternative projections are invalid: ") + e.what());
  }
  const auto iso = is_isomorphic_stratified(x, *y);
  ChoiceReport r;
  r.holds = static_cast<bool>(iso);
  r.witness = iso.witness;
  if (!r.holds) {
    r.detail = iso.reason;
    return r;
  }
  r.identity_witness = true;
  for (const auto& g : *iso.witness)
    for (const auto& [v, mat] : g) r.identity_witness = r.identity_witness && mat.is_identity();
  r.detail = r.identity_witness ? "isomorphic via identities" : "isomorphic via a non-identity gauge";
  return r;
}

PolytopalManifold PolytopalManifold::segment() {
  PolytopalManifold m;
  m.ambient = 1;
  m.cells.add_vertex("a");
  m.cells.add_vertex("b");
  m.cells.add_edge("i", "a", "b");
  m.coords = {{"a", {0}}, {"b", {1}}};
  return m;
}

PolytopalManifold PolytopalManifold::square() {
  PolytopalManifold m;
  m.ambient = 2;
  const std::array<std::array<int, 2>, 4> pts{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  EdgePath walk;
  for (int k = 0; k < 4; ++k) {
    m.cells.add_vertex("s" + std::to_string(k));
    m.coords["s" + std::to_string(k)] = {pts[k][0], pts[k][1]};
  }
  for (int k = 0; k < 4; ++k) {
    m.cells.add_edge("t" + std::to_string(k), "s" + std::to_string(k), "s" + std::to_string((k + 1) % 4));
    walk.push_back({"t" + std::to_string(k), true});
  }
  m.cells.add_face("D", walk);
  return m;
}

PolytopalManifold PolytopalManifold::cube() {
  PolytopalManifold m;
  m.ambient = 3;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        m.cells.add_vertex(vertex_name(x, y, z));
        m.coords[vertex_name(x, y, z)] = {x, y, z};
      }
  std::map<std::pair<std::string, std::string>, std::string> edge_of;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        const std::array<int, 3> p{x, y, z};
        for (int axis = 0; axis < 3; ++axis) {
          if (p[axis] == 1) continue;
          auto q = p;
          q[axis] = 1;
          const std::string a = vertex_name(p[0], p[1], p[2]), b = vertex_name(q[0], q[1], q[2]);
          const std::string id = "e" + a.substr(1) + "-" + b.substr(1);
          m.cells.add_edge(id, a, b);
          edge_of[{a, b}] = id;
        }
      }
  std::vector<std::string> faces;
  const std::array<std::array<int, 2>, 4> cyc{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const int u = (axis + 1) % 3, w = (axis + 2) % 3;
      std::vector<std::string> corners;
      for (const auto& c : cyc) {
        std::array<int, 3> p{};
        p[axis] = side;
        p[u] = c[0];
        p[w] = c[1];
        corners.push_back(vertex_name(p[0], p[1], p[2]));
      }
      EdgePath walk;
      for (int k = 0; k < 4; ++k) {
        const auto &a = corners[k], &b = corners[(k + 1) % 4];
        auto it = edge_of.find({a, b});
        walk.push_back(it != edge_of.end() ? OrientedEdge{it->second, true} : OrientedEdge{edge_of.at({b, a}), false});
      }
      const std::string id = "f" + std::to_string(axis) + std::to_string(side);
      m.cells.add_face(id, walk);
      faces.push_back(id);
    }
  m.cells.add_cell("cube", 3, faces);
  return m;
}

}  // namespace stratk

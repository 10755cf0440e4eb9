#pragma once

// Small complexes shared by the tests.

#include <array>
#include <string>
#include <vector>

#include "stratk/bundle.hpp"
#include "stratk/complex.hpp"
#include "stratk/strata.hpp"

namespace fixture {

using namespace stratk;

inline CellComplex point() {
  CellComplex x;
  x.add_vertex("p");
  return x;
}

/// One vertex, one loop.
inline CellComplex circle(const std::string& v = "v", const std::string& e = "e") {
  CellComplex x;
  x.add_vertex(v);
  x.add_edge(e, v, v);
  return x;
}

/// Two vertices a, b and edges x: a->b, y: b->a.
inline CellComplex circle2() {
  CellComplex x;
  x.add_vertex("a");
  x.add_vertex("b");
  x.add_edge("x", "a", "b");
  x.add_edge("y", "b", "a");
  return x;
}

inline CellComplex wedge2() {
  CellComplex x;
  x.add_vertex("v");
  x.add_edge("e", "v", "v");
  x.add_edge("f", "v", "v");
  return x;
}

inline CellComplex interval() {
  CellComplex x;
  x.add_vertex("a");
  x.add_vertex("b");
  x.add_edge("i", "a", "b");
  return x;
}

/// Square disc: corners s0..s3, edges t0..t3 (tk: sk -> sk+1), face "D".
inline CellComplex square() {
  CellComplex x;
  for (int k = 0; k < 4; ++k) x.add_vertex("s" + std::to_string(k));
  for (int k = 0; k < 4; ++k)
    x.add_edge("t" + std::to_string(k), "s" + std::to_string(k), "s" + std::to_string((k + 1) % 4));
  x.add_face("D", {{"t0", true}, {"t1", true}, {"t2", true}, {"t3", true}});
  return x;
}

inline std::set<std::string> square_boundary() {
  return {"s0", "s1", "s2", "s3", "t0", "t1", "t2", "t3"};
}

/// Boundary of the square onto the circle: t0 wraps once, t1..t3 collapse.
inline CellularMap square_wrap(const CellComplex& circ) {
  CellularMap h(square().subcomplex(square_boundary()), circ);
  for (int k = 0; k < 4; ++k) h.set_vertex("s" + std::to_string(k), "v");
  h.set_edge("t0", {{"e", true}});
  for (int k = 1; k < 4; ++k) h.set_edge("t" + std::to_string(k), {});
  return h;
}

/// Circle stratum with a square disc attached by a degree-1 wrap.
inline StratifiedSpace disc_model() {
  StratifiedSpace s;
  s.base0 = circle();
  s.layers.push_back({square(), square_boundary(), square_wrap(circle())});
  return s;
}

/// Degree-k self-map of circle().
inline CellularMap circle_degree(int k, const CellComplex& c = circle()) {
  CellularMap f(c, c);
  f.set_vertex("v", "v");
  EdgePath p;
  for (int i = 0; i < std::abs(k); ++i) p.push_back({"e", k > 0});
  f.set_edge("e", p);
  return f;
}

// Unit cube: vertices v<xyz>, edges e<a>-<b>, faces f<axis><side>.

inline std::string cube_vertex(int x, int y, int z) {
  return "v" + std::to_string(x) + std::to_string(y) + std::to_string(z);
}

struct CubeEdge {
  std::string id, a, b;
};

inline std::vector<CubeEdge> cube_edges() {
  std::vector<CubeEdge> out;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        const std::array<int, 3> p{x, y, z};
        for (int axis = 0; axis < 3; ++axis) {
          if (p[axis] == 1) continue;
          auto q = p;
          q[axis] = 1;
          const std::string a = cube_vertex(p[0], p[1], p[2]), b = cube_vertex(q[0], q[1], q[2]);
          out.push_back({"e" + a.substr(1) + "-" + b.substr(1), a, b});
        }
      }
  return out;
}

/// Cyclic corner list of the face with coordinate `axis` fixed to `side`.
inline std::vector<std::string> cube_face_corners(int axis, int side) {
  const int u = (axis + 1) % 3, w = (axis + 2) % 3;
  const std::array<std::array<int, 2>, 4> cyc{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  std::vector<std::string> out;
  for (const auto& c : cyc) {
    std::array<int, 3> p{};
    p[axis] = side;
    p[u] = c[0];
    p[w] = c[1];
    out.push_back(cube_vertex(p[0], p[1], p[2]));
  }
  return out;
}

inline OrientedEdge cube_step(const std::string& from, const std::string& to) {
  for (const auto& e : cube_edges()) {
    if (e.a == from && e.b == to) return {e.id, true};
    if (e.b == from && e.a == to) return {e.id, false};
  }
  throw Error(Error::Kind::construction, from + to, "not a cube edge");
}

/// Vertices, then 12 attached intervals, then 6 squares, then the 3-cell.
inline StratifiedSpace cube_space() {
  StratifiedSpace s;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) s.base0.add_vertex(cube_vertex(x, y, z));

  CellComplex x0 = s.base0;
  Layer edges;
  for (const auto& e : cube_edges()) {
    edges.m.add_vertex(e.id + ".0");
    edges.m.add_vertex(e.id + ".1");
    edges.m.add_edge(e.id, e.id + ".0", e.id + ".1");
    edges.a.insert(e.id + ".0");
    edges.a.insert(e.id + ".1");
  }
  edges.h = CellularMap(edges.m.subcomplex(edges.a), x0);
  for (const auto& e : cube_edges()) {
    edges.h.set_vertex(e.id + ".0", e.a);
    edges.h.set_vertex(e.id + ".1", e.b);
  }
  s.layers.push_back(edges);

  CellComplex x1 = assemble(s);
  Layer faces;
  std::vector<std::string> face_ids;
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const std::string f = "f" + std::to_string(axis) + std::to_string(side);
      face_ids.push_back(f);
      const auto corners = cube_face_corners(axis, side);
      EdgePath walk;
      for (int k = 0; k < 4; ++k) faces.m.add_vertex(f + "." + std::to_string(k));
      for (int k = 0; k < 4; ++k) {
        const std::string id = f + ".e" + std::to_string(k);
        faces.m.add_edge(id, f + "." + std::to_string(k), f + "." + std::to_string((k + 1) % 4));
        walk.push_back({id, true});
      }
      faces.m.add_face(f, walk);
      for (const auto& [id, c] : faces.m.cells())
        if (id != f && id.rfind(f + ".", 0) == 0) faces.a.insert(id);
    }
  faces.h = CellularMap(faces.m.subcomplex(faces.a), x1);
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const std::string f = "f" + std::to_string(axis) + std::to_string(side);
      const auto corners = cube_face_corners(axis, side);
      for (int k = 0; k < 4; ++k) {
        faces.h.set_vertex(f + "." + std::to_string(k), corners[k]);
        faces.h.set_edge(f + ".e" + std::to_string(k), {cube_step(corners[k], corners[(k + 1) % 4])});
      }
    }
  s.layers.push_back(faces);

  CellComplex x2 = assemble(s);
  Layer solid;
  for (int d = 0; d <= 2; ++d)
    for (const auto& id : x2.cells_of_dim(d)) {
      Cell c = x2.cell(id);
      c.id = "c." + id;
      for (auto& b : c.boundary) b = "c." + b;
      for (auto& st : c.walk) st.edge = "c." + st.edge;
      solid.m.add(c, 0);
      solid.a.insert(c.id);
    }
  std::vector<std::string> facets;
  for (const auto& f : face_ids) facets.push_back("c." + f);
  solid.m.add_cell("cube", 3, facets);
  solid.h = CellularMap(solid.m.subcomplex(solid.a), x2);
  for (const auto& id : solid.a) {
    const std::string orig = id.substr(2);
    if (x2.dim(orig) == 1) solid.h.set_edge(id, {{orig, true}});
    else if (x2.dim(orig) == 0) solid.h.set_vertex(id, orig);
    else solid.h.set_cell(id, orig);
  }
  s.layers.push_back(solid);
  return s;
}

inline CategoryPtr sp(std::size_t n) { return share(StructureCategory::signed_perm(n)); }

/// Rank-1 circle bundle with holonomy s.
inline VBundle line_on_circle(long s, const CategoryPtr& c = sp(1)) {
  VBundle e = VBundle::trivial(circle(), c, 1);
  e.labels["e"] = Matrix{{s}};
  return e;
}

/// Disc model, rank r everywhere, identity fiber maps on the corners.
inline StratifiedBundle disc_bundle(std::size_t r = 1, const CategoryPtr& c = sp(1)) {
  AttachLayer l{VBundle::trivial(square(), c, r), {}};
  for (int k = 0; k < 4; ++k) l.phi["s" + std::to_string(k)] = Matrix::identity(r);
  return build_stratified(disc_model(), VBundle::trivial(circle(), c, r), {l});
}

/// Rank 1 on the circle, rank 2 on the open disc, corners projecting onto
/// the second coordinate.
inline StratifiedBundle disc_jump() {
  const auto gl = share(StructureCategory::gl_open(2));
  AttachLayer l{VBundle::trivial(square(), gl, 2), {}};
  for (int k = 0; k < 4; ++k) l.phi["s" + std::to_string(k)] = Matrix{{0, 1}};
  return build_stratified(disc_model(), VBundle::trivial(circle(), gl, 1), {l});
}

/// Circle with an interval i: a -> b glued at both ends to v.
inline StratifiedSpace handle_space() {
  StratifiedSpace s;
  s.base0 = circle();
  Layer l{interval(), {"a", "b"}, {}};
  l.h = CellularMap(l.m.subcomplex(l.a), s.base0);
  l.h.set_vertex("a", "v");
  l.h.set_vertex("b", "v");
  s.layers.push_back(l);
  return s;
}

/// Rank 1: holonomy s on the circle, fiber map sigma at the end b.
inline StratifiedBundle handle_bundle(long s, long sigma) {
  AttachLayer l{VBundle::trivial(interval(), sp(1), 1), {{"a", Matrix{{1}}}, {"b", Matrix{{sigma}}}}};
  return build_stratified(handle_space(), line_on_circle(s), {l});
}

}  // namespace fixture

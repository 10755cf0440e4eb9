#include "doctest.h"
#include "fixtures.hpp"

using namespace stratk;

namespace {

// generators of pi_1 over the whole complex: E - V + C
long euler_generator_count(const CellComplex& x) {
  return static_cast<long>(x.edges().size()) - static_cast<long>(x.vertices().size()) +
         static_cast<long>(x.components().size());
}

std::size_t count_dim(const CellComplex& x, int d) { return x.cells_of_dim(d).size(); }

}  // namespace

TEST_CASE("complex construction rejects bad boundaries") {
  CellComplex x = fixture::interval();
  CHECK_THROWS_AS(x.add_edge("bad", "a", "zz"), Error);
  CHECK_THROWS_AS(x.add_face("open", {{"i", true}}), Error);
  CHECK_THROWS_AS(x.add_vertex("a"), Error);
  CHECK(validate_complex(fixture::square()).ok());
  CHECK(fixture::square().closure("D").size() == 9);
  CHECK(fixture::square().anchor("D") == "s0");
}

TEST_CASE("build_pushout") {
  SUBCASE("empty A gives the disjoint union") {
    const auto m = fixture::interval();
    const auto x = fixture::circle();
    const auto r = build_pushout(m, {}, CellularMap(CellComplex{}, x), x);
    CHECK(r.total.size() == m.size() + x.size());
    CHECK(r.total.components().size() == 2);
  }
  SUBCASE("interval with endpoints collapsed to a point is a circle") {
    const auto m = fixture::interval();
    const auto x = fixture::point();
    CellularMap h(m.subcomplex({"a", "b"}), x);
    h.set_vertex("a", "p");
    h.set_vertex("b", "p");
    const auto r = build_pushout(m, {"a", "b"}, h, x);
    // cell-count oracle: |M| - |A| + |X| per dimension
    CHECK(count_dim(r.total, 0) == 2 - 2 + 1);
    CHECK(count_dim(r.total, 1) == 1 - 0 + 0);
    CHECK(r.total.euler_characteristic() ==
          m.euler_characteristic() + x.euler_characteristic() - m.subcomplex({"a", "b"}).euler_characteristic());
    CHECK(r.total.src("i") == "p");
    CHECK(r.total.dst("i") == "p");
    CHECK(validate_map(r.characteristic).ok());
    CHECK(validate_map(r.inclusion).ok());
  }
  SUBCASE("undefined attaching map") {
    const auto m = fixture::interval();
    const auto x = fixture::point();
    CellularMap h(m.subcomplex({"a", "b"}), x);
    h.set_vertex("a", "p");
    try {
      build_pushout(m, {"a", "b"}, h, x);
      FAIL("expected a map error");
    } catch (const Error& e) {
      CHECK(e.kind() == Error::Kind::map);
      CHECK(e.entity() == "b");
    }
  }
}

TEST_CASE("assemble") {
  SUBCASE("no layers") {
    StratifiedSpace s;
    s.base0 = fixture::circle();
    CHECK(assemble(s) == s.base0);
  }
  SUBCASE("disc model") {
    const auto s = fixture::disc_model();
    const auto total = assemble(s);
    CHECK(total.counts() == std::vector<std::size_t>{1, 1, 1});
    CHECK(total.stratum_cells(0) == std::set<std::string>{"e", "v"});
    CHECK(total.stratum_cells(1) == std::set<std::string>{"D"});
    CHECK(total.euler_characteristic() == 1);
    CHECK(assemble(s) == total);
    CHECK(total.cell("D").walk == EdgePath{{"e", true}});
  }
  SUBCASE("cube counts (8, 12, 6, 1) and four strata") {
    const auto s = fixture::cube_space();
    const auto total = assemble(s);
    CHECK(total.counts() == std::vector<std::size_t>{8, 12, 6, 1});
    for (int d = 0; d <= 3; ++d) {
      const auto cells = total.stratum_cells(d);
      CHECK(cells.size() == total.cells_of_dim(d).size());
      for (const auto& c : cells) CHECK(total.dim(c) == d);
    }
    CHECK(total.euler_characteristic() == 1);
    CHECK(validate_complex(total).ok());
    CHECK(validate_map(characteristic_map(s, 2)).ok());
  }
  SUBCASE("stepwise equals one-shot attachment within a level") {
    // attach two intervals to two points one at a time, then both at once
    CellComplex pts;
    pts.add_vertex("p");
    pts.add_vertex("q");
    CellComplex two;
    for (const char* k : {"1", "2"}) {
      two.add_vertex(std::string("a") + k);
      two.add_vertex(std::string("b") + k);
      two.add_edge(std::string("i") + k, std::string("a") + k, std::string("b") + k);
    }
    CellularMap h(two.subcomplex({"a1", "b1", "a2", "b2"}), pts);
    for (const char* v : {"a1", "a2"}) h.set_vertex(v, "p");
    for (const char* v : {"b1", "b2"}) h.set_vertex(v, "q");
    const auto once = build_pushout(two, {"a1", "b1", "a2", "b2"}, h, pts, 1).total;

    CellComplex first = two.subcomplex({"a1", "b1", "i1"});
    CellularMap h1(first.subcomplex({"a1", "b1"}), pts);
    h1.set_vertex("a1", "p");
    h1.set_vertex("b1", "q");
    const auto mid = build_pushout(first, {"a1", "b1"}, h1, pts, 1).total;
    CellComplex second = two.subcomplex({"a2", "b2", "i2"});
    CellularMap h2(second.subcomplex({"a2", "b2"}), mid);
    h2.set_vertex("a2", "p");
    h2.set_vertex("b2", "q");
    CHECK(build_pushout(second, {"a2", "b2"}, h2, mid, 1).total == once);
  }
}

TEST_CASE("pi1 presentations") {
  SUBCASE("point") {
    const auto p = pi1(fixture::point());
    CHECK(p.generators.empty());
    CHECK(p.relators.empty());
  }
  SUBCASE("circle") {
    const auto x = fixture::circle();
    const auto p = pi1(x);
    CHECK(static_cast<long>(p.generators.size()) == euler_generator_count(x));
    CHECK(p.generators == std::vector<std::string>{"e"});
    CHECK(p.relators.empty());
  }
  SUBCASE("wedge of two circles") {
    const auto x = fixture::wedge2();
    const auto p = pi1(x);
    CHECK(static_cast<long>(p.generators.size()) == euler_generator_count(x));
    CHECK(p.generators.size() == 2);
    CHECK(p.relators.empty());
  }
  SUBCASE("square disc: one generator killed by one relator") {
    const auto x = fixture::square();
    const auto p = pi1(x);
    CHECK(static_cast<long>(p.generators.size()) == euler_generator_count(x));
    REQUIRE(p.generators.size() == 1);
    REQUIRE(p.relators.size() == 1);
    CHECK(p.relators[0].size() == 1);
  }
  SUBCASE("cube and disc model") {
    for (const auto& x : {assemble(fixture::cube_space()), assemble(fixture::disc_model()), fixture::circle2()})
      CHECK(static_cast<long>(pi1(x).generators.size()) == euler_generator_count(x));
  }
  SUBCASE("tree paths reach every vertex") {
    const auto x = assemble(fixture::cube_space());
    const auto forest = spanning_forest(x);
    for (const auto& v : x.vertices()) {
      const auto path = forest.path_from_root(x, v);
      std::string cur = forest.roots.front();
      for (const auto& s : path) {
        CHECK(x.start(s) == cur);
        cur = x.end(s);
      }
      CHECK(cur == v);
    }
  }
}

TEST_CASE("cellular maps") {
  const auto c = fixture::circle();
  CHECK(validate_map(CellularMap::identity(c)).ok());
  CHECK(validate_map(fixture::circle_degree(2)).ok());
  CHECK(validate_map(fixture::square_wrap(c)).ok());
  const auto f4 = compose(fixture::circle_degree(2), fixture::circle_degree(2));
  CHECK(f4.path("e").size() == 4);

  CellularMap bad(c, c);
  bad.set_vertex("v", "v");
  CHECK(validate_map(bad).has("undefined", "e"));

  // a square whose boundary goes to a single loop once is not cellular onto a point
  const auto sq = fixture::square();
  CellularMap crush(sq, c);
  for (const auto& v : sq.vertices()) crush.set_vertex(v, "v");
  crush.set_edge("t0", {{"e", true}});
  for (const char* t : {"t1", "t2", "t3"}) crush.set_edge(t, {});
  crush.set_cell("D", "v");
  CHECK(validate_map(crush).has("boundary", "D"));
}

TEST_CASE("check_stratum_preserving") {
  const auto total = assemble(fixture::disc_model());
  CHECK(check_stratum_preserving(CellularMap::identity(total)).holds);

  // interior cell D sent to the boundary edge
  CellularMap collapse(total, total);
  collapse.set_vertex("v", "v");
  collapse.set_edge("e", {{"e", true}});
  collapse.set_cell("D", "e");
  const auto r = check_stratum_preserving(collapse);
  CHECK_FALSE(r.holds);
  CHECK(r.offending == std::vector<std::string>{"D"});

  const auto deg2 = fixture::circle_degree(2);
  // tag oracle: every image cell carries the source cell's tag
  bool tags_match = true;
  for (const auto& [id, cell] : deg2.src().cells())
    for (const auto& d : deg2.image_cells(id)) tags_match &= deg2.dst().stratum(d) == deg2.src().stratum(id);
  CHECK(tags_match);
  CHECK(check_stratum_preserving(deg2).holds);
}

TEST_CASE("prism complexes") {
  const auto c = fixture::circle();
  const auto p = prism(c);
  CHECK(p.counts() == std::vector<std::size_t>{2, 3, 1});
  CHECK(p.euler_characteristic() == c.euler_characteristic());
  CHECK(validate_complex(p).ok());
  CHECK(validate_map(prism_end(c, p, 0)).ok());
  CHECK(validate_map(prism_end(c, p, 1)).ok());
  const auto q = prism(fixture::square());
  CHECK(q.counts() == std::vector<std::size_t>{8, 12, 6, 1});
}

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace stratk;

namespace {

std::vector<Gauge> random_stratified_gauge(const StratifiedBundle& x, std::mt19937_64& rng) {
  std::vector<Gauge> g(x.strata());
  std::uniform_int_distribution<long> entry(-3, 3);
  for (std::size_t j = 0; j < x.strata(); ++j) {
    const VBundle& b = x.stratum_bundle(j);
    for (const auto& v : b.base.vertices()) {
      const std::size_t n = b.rank_at(v);
      if (!x.category()->is_open()) {
        const auto autos = x.category()->automorphisms(n);
        g[j][v] = autos[std::uniform_int_distribution<std::size_t>(0, autos.size() - 1)(rng)];
        continue;
      }
      Matrix m(n, n);
      do
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) m(r, c) = entry(rng);
      while (!m.inverse());
      g[j][v] = m;
    }
  }
  return g;
}

// Degree-2 self-map of the disc model's total complex.
CellularMap disc_degree2(const CellComplex& total) {
  CellularMap f(total, total);
  f.set_vertex("v", "v");
  f.set_edge("e", {{"e", true}, {"e", true}});
  f.set_cell("D", "D");
  return f;
}

CellularMap square_degree2_lift() {
  CellularMap g(fixture::square(), fixture::square());
  for (int k = 0; k < 4; ++k) g.set_vertex("s" + std::to_string(k), "s" + std::to_string(k));
  g.set_edge("t0", {{"t0", true}, {"t1", true}, {"t2", true}, {"t3", true}, {"t0", true}});
  for (int k = 1; k < 4; ++k) g.set_edge("t" + std::to_string(k), {{"t" + std::to_string(k), true}});
  g.set_cell("D", "D");
  return g;
}

}  // namespace

TEST_CASE("build_stratified on the disc model") {
  const auto x = fixture::disc_bundle();
  CHECK(x.strata() == 2);
  for (int k = 0; k < 4; ++k) CHECK(x.layers[0].phi.at("t" + std::to_string(k)) == Matrix{{1}});
  CHECK(x.specialize("D", "v") == Matrix{{1}});
  CHECK(x.specialize("D", "e") == Matrix{{1}});
  CHECK(x.fiber_dims() == std::vector<std::vector<std::size_t>>{{1}, {1}});

  const VBundle flat = flatten(x);
  CHECK(flat.labels.at("e") == Matrix{{1}});
  CHECK(is_isomorphic(restrict_to_stratum(x, flat, 0), x.layer0));
  CHECK(is_isomorphic(restrict_to_stratum(x, flat, 1), x.layers[0].m));
}

TEST_CASE("a Mobius boundary does not extend over the disc") {
  // exhaustive: every sign choice on the four corners violates naturality
  int built = 0;
  for (int mask = 0; mask < 16; ++mask) {
    AttachLayer l{VBundle::trivial(fixture::square(), fixture::sp(1), 1), {}};
    for (int k = 0; k < 4; ++k) l.phi["s" + std::to_string(k)] = Matrix{{(mask >> k) & 1 ? -1 : 1}};
    try {
      build_stratified(fixture::disc_model(), fixture::line_on_circle(-1), {l});
      ++built;
    } catch (const Error& e) {
      CHECK(e.kind() == Error::Kind::naturality);
    }
  }
  CHECK(built == 0);
}

TEST_CASE("construction errors") {
  AttachLayer l{VBundle::trivial(fixture::square(), fixture::sp(1), 1), {}};
  CHECK_THROWS_AS(build_stratified(fixture::disc_model(), fixture::line_on_circle(1), {l}), Error);
  l.phi["D"] = Matrix{{1}};
  try {
    build_stratified(fixture::disc_model(), fixture::line_on_circle(1), {l});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::construction);
    CHECK(e.entity() == "D");
  }
  CHECK_THROWS_AS(build_stratified(fixture::disc_model(), fixture::line_on_circle(1), {}), Error);
}

TEST_CASE("rank jump across strata") {
  const auto x = fixture::disc_jump();
  CHECK(x.fiber_dims() == std::vector<std::vector<std::size_t>>{{1}, {2}});
  CHECK(x.specialize("D", "v") == Matrix{{0, 1}});
  CHECK(x.specialize("D", "e") == Matrix{{0, 1}});
  try {
    flatten(x);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::not_a_bundle);
  }

  AttachLayer l = x.layers[0];
  l.phi.clear();
  for (int k = 0; k < 4; ++k) l.phi["s" + std::to_string(k)] = Matrix{{0, 1}};
  l.phi["t0"] = Matrix{{1, 0}};
  try {
    build_stratified(fixture::disc_model(), x.layer0, {l});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::naturality);
  }
}

TEST_CASE("stratified isomorphism") {
  SUBCASE("random gauges, finite category") {
    std::mt19937_64 rng(3);
    const auto x = fixture::disc_bundle(2, fixture::sp(2));
    for (int t = 0; t < 25; ++t) {
      const auto y = apply_stratified_gauge(x, random_stratified_gauge(x, rng));
      const auto r = is_isomorphic_stratified(x, y);
      REQUIRE(r);
      CHECK(apply_stratified_gauge(x, *r.witness) == y);
    }
  }
  SUBCASE("random gauges, open category") {
    std::mt19937_64 rng(4);
    const auto x = fixture::disc_jump();
    for (int t = 0; t < 10; ++t) {
      const auto y = apply_stratified_gauge(x, random_stratified_gauge(x, rng));
      const auto r = is_isomorphic_stratified(x, y);
      REQUIRE(r);
      CHECK(apply_stratified_gauge(x, *r.witness) == y);
    }
  }
  SUBCASE("the gluing sign is an invariant") {
    // oracle: the flattened holonomy along the handle is the sign itself
    for (long s : {1L, -1L})
      for (long sigma : {1L, -1L}) CHECK(flatten(fixture::handle_bundle(s, sigma)).labels.at("i") == Matrix{{sigma}});
    CHECK(is_isomorphic_stratified(fixture::handle_bundle(1, 1), fixture::handle_bundle(1, 1)));
    CHECK_FALSE(is_isomorphic_stratified(fixture::handle_bundle(1, 1), fixture::handle_bundle(1, -1)));
    CHECK_FALSE(is_isomorphic_stratified(fixture::handle_bundle(1, 1), fixture::handle_bundle(-1, 1)));
    for (long s : {1L, -1L})
      for (long sigma : {1L, -1L})
        for (long s2 : {1L, -1L})
          for (long sigma2 : {1L, -1L}) {
            const bool strat = static_cast<bool>(
                is_isomorphic_stratified(fixture::handle_bundle(s, sigma), fixture::handle_bundle(s2, sigma2)));
            const bool flat = static_cast<bool>(is_isomorphic(flatten(fixture::handle_bundle(s, sigma)),
                                                              flatten(fixture::handle_bundle(s2, sigma2))));
            CHECK(strat == flat);
          }
  }
  SUBCASE("budget") {
    std::mt19937_64 rng(9);
    const auto x = fixture::disc_bundle(2, fixture::sp(2));
    const auto y = apply_stratified_gauge(x, random_stratified_gauge(x, rng));
    const auto r = is_isomorphic_stratified(x, y, 1);
    CHECK_FALSE(r);
    CHECK(r.inconclusive);
    CHECK(r.reason == "inconclusive-budget");
  }
  SUBCASE("fiber dimensions") {
    const auto r = is_isomorphic_stratified(fixture::disc_bundle(1, fixture::sp(2)), fixture::disc_bundle(2, fixture::sp(2)));
    CHECK_FALSE(r);
    CHECK(r.reason == "fiber dimensions differ");
  }
}

TEST_CASE("pullback_stratified") {
  SUBCASE("identity") {
    const auto x = fixture::handle_bundle(-1, -1);
    CHECK(pullback_stratified(x.space, CellularMap::identity(x.total()), x) == x);
  }
  SUBCASE("degree 2 on the base circle of the handle") {
    const auto x = fixture::handle_bundle(-1, -1);
    CellularMap f(x.total(), x.total());
    f.set_vertex("v", "v");
    f.set_edge("e", {{"e", true}, {"e", true}});
    f.set_edge("i", {{"i", true}});
    const auto pb = pullback_stratified(x.space, f, x);
    CHECK(pb.layer0.labels.at("e") == oracle::walk_product({Matrix{{-1}}, Matrix{{-1}}}, 1));
    CHECK(pb.layers[0].phi.at("b") == Matrix{{-1}});
    CHECK(flatten(pb) == pullback_bundle(f, flatten(x)));
    CHECK(is_isomorphic_stratified(pb, fixture::handle_bundle(1, -1)));
  }
  SUBCASE("degree 2 on the disc model needs its lift spelled out") {
    const auto x = fixture::disc_bundle(2, fixture::sp(2));
    const auto f = disc_degree2(x.total());
    try {
      pullback_stratified(x.space, f, x);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == Error::Kind::ambiguous);
    }
    const auto pb = pullback_stratified(x.space, f, x, std::vector<CellularMap>{square_degree2_lift()});
    CHECK(is_isomorphic_stratified(pb, x));
    CHECK(is_isomorphic(flatten(pb), pullback_bundle(f, flatten(x))));
  }
  SUBCASE("maps that mix strata are refused") {
    const auto x = fixture::handle_bundle(1, 1);
    CellularMap f(x.total(), x.total());
    f.set_vertex("v", "v");
    f.set_edge("e", {{"e", true}});
    f.set_edge("i", {{"e", true}});
    try {
      pullback_stratified(x.space, f, x);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == Error::Kind::not_stratum_preserving);
    }
  }
}

TEST_CASE("single stratum") {
  const auto mob = fixture::line_on_circle(-1);
  const auto x = single_stratum(mob);
  CHECK(x.strata() == 1);
  CHECK(flatten(x) == mob);
}

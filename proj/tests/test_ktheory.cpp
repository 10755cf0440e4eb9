#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "homotopies.hpp"
#include "oracles.hpp"
#include "stratk/ktheory.hpp"

using namespace stratk;

namespace {

StratifiedSpace over(const CellComplex& x) {
  StratifiedSpace s;
  s.base0 = x;
  return s;
}

IntMatrix random_int_matrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_int_distribution<long> entry(-6, 6);
  const std::size_t r = dim(rng), c = dim(rng);
  IntMatrix a(r, c);
  if (rng() % 3 == 0) {
    // low-rank products carry more interesting torsion
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min(r, c))(rng);
    IntMatrix b(r, k), d(k, c);
    for (auto& x : b.data) x = entry(rng);
    for (auto& x : d.data) x = entry(rng);
    return b * d;
  }
  for (auto& x : a.data) x = rng() % 4 == 0 ? 0 : entry(rng);
  return a;
}

oracle::IntRows rows_of(const IntMatrix& a) {
  oracle::IntRows out(a.rows, std::vector<Integer>(a.cols));
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t c = 0; c < a.cols; ++c) out[r][c] = a(r, c);
  return out;
}

bool unimodular(const IntMatrix& u) {
  Matrix m(u.rows, u.cols);
  for (std::size_t r = 0; r < u.rows; ++r)
    for (std::size_t c = 0; c < u.cols; ++c) m(r, c) = Rational(u(r, c));
  const auto inv = m.inverse();
  if (!inv) return false;
  for (std::size_t r = 0; r < u.rows; ++r)
    for (std::size_t c = 0; c < u.cols; ++c)
      if ((*inv)(r, c).get_den() != 1) return false;
  return true;
}

ClassMonoid circle_monoid(std::size_t cap = 2) { return enumerate_classes(over(fixture::circle()), fixture::sp(1), cap); }

std::size_t class_of(const ClassMonoid& m, const VBundle& e) { return *m.find(single_stratum(e)); }

}  // namespace

TEST_CASE("smith normal form") {
  const auto s = smith_normal_form(IntMatrix(0, 3));
  CHECK(s.diagonal.empty());

  IntMatrix a(2, 2);
  a = IntMatrix{{2, 4}, {6, 8}};
  CHECK(smith_normal_form(a).diagonal == std::vector<Integer>{2, 4});

  std::mt19937_64 rng(200);
  for (int t = 0; t < 200; ++t) {
    const IntMatrix m = random_int_matrix(rng);
    const auto f = smith_normal_form(m);
    CHECK(f.u * m * f.v == f.d);
    CHECK(unimodular(f.u));
    CHECK(unimodular(f.v));
    for (std::size_t i = 0; i < f.d.rows; ++i)
      for (std::size_t j = 0; j < f.d.cols; ++j)
        if (i != j || i >= f.diagonal.size()) CHECK(f.d(i, j) == 0);
    for (std::size_t i = 0; i + 1 < f.diagonal.size(); ++i) CHECK(f.diagonal[i + 1] % f.diagonal[i] == 0);
    CHECK(f.diagonal == oracle::smith_diagonal(rows_of(m)));
  }
}

TEST_CASE("classes over a point") {
  for (const auto& c : {fixture::sp(1), fixture::sp(2)}) {
    const auto m = enumerate_classes(over(fixture::point()), c, 2);
    REQUIRE(m.classes.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(m.classes[i].fiber_dims() == std::vector<std::vector<std::size_t>>{{i}});
    const auto k = grothendieck(m);
    CHECK(k.presentation() == "Z");
    CHECK(abs(k.class_map[1][0]) == 1);
    // the rank map is an isomorphism
    for (std::size_t i = 0; i < 3; ++i) CHECK(k.class_map[i][0] == Integer(i) * k.class_map[1][0]);
  }
}

TEST_CASE("classes over the circle") {
  const auto m = circle_monoid();
  CHECK(m.classes.size() == 6);
  CHECK_FALSE(m.partial);
  const auto t = class_of(m, fixture::line_on_circle(1)), mo = class_of(m, fixture::line_on_circle(-1));
  CHECK(t != mo);
  const auto tt = m.add_table.at({t, t}), mm = m.add_table.at({mo, mo});
  REQUIRE(tt);
  REQUIRE(mm);
  CHECK(*tt != *mm);
  CHECK(m.add_table.at({t, mo}) == m.add_table.at({mo, t}));
  CHECK_FALSE(m.add_table.at({*tt, t}));
  CHECK(*unit_class(m) == t);

  const auto k = grothendieck(m);
  CHECK(k.presentation() == "Z^2");
  CHECK(k.window_label() == "within stable window 2");
  CHECK(k.torsion.empty());
  Matrix b(2, 2);
  for (std::size_t r = 0; r < 2; ++r) {
    b(r, 0) = Rational(k.class_map[t][r]);
    b(r, 1) = Rational(k.class_map[mo][r]);
  }
  IntMatrix bi(2, 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) bi(r, c) = b(r, c).get_num();
  CHECK(unimodular(bi));

  // pair completion oracle: equal differences exactly on equivalent pairs
  const auto roots = oracle::pair_completion(m.classes.size(), m.add_table);
  const std::size_t n = m.classes.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t bb = 0; bb < n; ++bb)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          const bool same = k.add(k.class_map[a], k.class_map[d]) == k.add(k.class_map[bb], k.class_map[c]);
          CHECK(same == (roots[a][bb] == roots[c][d]));
        }
}

TEST_CASE("grothendieck on hand-made tables") {
  SUBCASE("free monoid") {
    ClassMonoid m;
    m.classes.resize(3);
    for (std::size_t i = 0; i < 3; ++i) {
      m.add_table[{0, i}] = i;
      m.add_table[{i, 0}] = i;
    }
    m.add_table[{1, 1}] = 2;
    m.add_table[{1, 2}] = m.add_table[{2, 1}] = m.add_table[{2, 2}] = std::nullopt;
    const auto k = grothendieck(m);
    CHECK(k.presentation() == "Z");
    CHECK(k.class_map[2] == k.add(k.class_map[1], k.class_map[1]));
  }
  SUBCASE("idempotent") {
    // 0, a, b, 2b with a + a = a and a + b = b
    ClassMonoid m;
    m.classes.resize(4);
    for (std::size_t i = 0; i < 4; ++i) m.add_table[{0, i}] = m.add_table[{i, 0}] = i;
    m.add_table[{1, 1}] = 1;
    m.add_table[{1, 2}] = m.add_table[{2, 1}] = 2;
    m.add_table[{2, 2}] = 3;
    m.add_table[{1, 3}] = m.add_table[{3, 1}] = 3;
    const auto k = grothendieck(m);
    CHECK(k.class_map[1] == k.zero());
    CHECK(k.presentation() == "Z");
  }
  SUBCASE("torsion") {
    // 0, a, 2a with 2a + a = a
    ClassMonoid m;
    m.classes.resize(3);
    for (std::size_t i = 0; i < 3; ++i) m.add_table[{0, i}] = m.add_table[{i, 0}] = i;
    m.add_table[{1, 1}] = 2;
    m.add_table[{1, 2}] = m.add_table[{2, 1}] = 1;
    m.add_table[{2, 2}] = 2;
    const auto k = grothendieck(m);
    CHECK(k.presentation() == "Z/2");
    CHECK(k.class_map[2] == k.zero());
  }
  SUBCASE("non-commutative") {
    ClassMonoid m;
    m.classes.resize(3);
    m.add_table[{1, 2}] = 1;
    m.add_table[{2, 1}] = 2;
    CHECK_THROWS_AS(grothendieck(m), Error);
  }
}

TEST_CASE("generator order does not matter") {
  const auto m = circle_monoid();
  const auto k = grothendieck(m);
  std::vector<std::size_t> perm(m.classes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    ClassMonoid p;
    p.classes.resize(m.classes.size());
    for (const auto& [ij, c] : m.add_table)
      p.add_table[{perm[ij.first], perm[ij.second]}] = c ? std::optional<std::size_t>(perm[*c]) : std::nullopt;
    const auto kp = grothendieck(p);
    CHECK(kp.free_rank == k.free_rank);
    CHECK(kp.torsion == k.torsion);
  }
}

TEST_CASE("disc model classes") {
  const auto space = fixture::disc_model();
  const auto m = enumerate_classes(space, fixture::sp(1), 1);

  // oracle: every labeling of both layers and every corner choice
  std::vector<StratifiedBundle> brute;
  const auto cat = m.window;
  const std::vector<long> signs{1, -1};
  const std::vector<long> corner{1, -1, 0};
  for (std::size_t r0 : {0, 1})
    for (std::size_t r1 : {0, 1})
      for (int labels = 0; labels < (1 << 5); ++labels)
        for (int code = 0; code < 81; ++code) {
          VBundle l0 = VBundle::trivial(fixture::circle(), cat, r0);
          AttachLayer l{VBundle::trivial(fixture::square(), cat, r1), {}};
          if (r0) l0.labels["e"] = Matrix{{signs[labels & 1]}};
          for (int k = 0, c = code; k < 4; ++k, c /= 3) {
            if (r1) l.m.labels["t" + std::to_string(k)] = Matrix{{signs[(labels >> (k + 1)) & 1]}};
            l.phi["s" + std::to_string(k)] = r0 && r1 ? Matrix{{corner[c % 3]}} : Matrix::zero(r0, r1);
          }
          try {
            brute.push_back(build_stratified(space, l0, {l}));
          } catch (const Error&) {
          }
        }
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < brute.size(); ++i) {
    bool fresh = true;
    for (auto j : reps) fresh = fresh && !is_isomorphic_stratified(brute[j], brute[i]);
    if (fresh) reps.push_back(i);
  }
  CHECK(m.classes.size() == reps.size());
  for (const auto& x : brute) CHECK(m.find(x));

  // a Mobius boundary only occurs under zero fiber maps
  const auto circ = enumerate_classes(over(fixture::circle()), fixture::sp(1), 1);
  const auto kc = grothendieck(circ);
  const auto k = grothendieck(m);
  const auto res = restriction_hom(m, k, 0, circ, kc);
  const auto mo = class_of(circ, fixture::line_on_circle(-1));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < m.classes.size(); ++i)
    if (*res.images[i] == kc.class_map[mo]) {
      ++hits;
      for (const auto& [a, f] : m.classes[i].layers[0].phi) CHECK(f.rank() == 0);
    }
  CHECK(hits == 2);
  CHECK(*res.images[0] == kc.zero());

  // flattenable classes form a sub-monoid whose sums agree with flat sums
  const auto m2 = enumerate_classes(space, fixture::sp(1), 2);
  std::vector<bool> flat(m2.classes.size());
  for (std::size_t i = 0; i < m2.classes.size(); ++i) {
    try {
      flatten(m2.classes[i]);
      flat[i] = true;
    } catch (const Error&) {
    }
  }
  const MatrixBifunctor sum(MatrixBifunctor::Kind::direct_sum);
  std::size_t checked = 0;
  for (const auto& [ij, c] : m2.add_table) {
    if (!c || !flat[ij.first] || !flat[ij.second]) continue;
    CHECK(flat[*c]);
    CHECK(is_isomorphic(flatten(m2.classes[*c]),
                        map_bundle2(sum, flatten(m2.classes[ij.first]), flatten(m2.classes[ij.second]))));
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("pullback homomorphisms") {
  const auto m = circle_monoid();
  const auto k = grothendieck(m);
  const auto t = class_of(m, fixture::line_on_circle(1)), mo = class_of(m, fixture::line_on_circle(-1));

  const auto id = pullback_hom(CellularMap::identity(fixture::circle()), m, k, m, k);
  for (std::size_t i = 0; i < m.classes.size(); ++i) CHECK(*id.images[i] == k.class_map[i]);

  const auto d2 = pullback_hom(fixture::circle_degree(2), m, k, m, k);
  CHECK(hom_matrix(d2, k, {t, mo}, k, {t, mo}) == IntMatrix{{1, 1}, {0, 0}});
  CHECK(hom_matrix(pullback_hom(fixture::circle_degree(3), m, k, m, k), k, {t, mo}, k, {t, mo}) ==
        IntMatrix{{1, 0}, {0, 1}});

  // contravariance: (g f)^* = f^* g^*
  for (int a : {-1, 2, 3})
    for (int b : {-2, 1, 3}) {
      const auto f = fixture::circle_degree(a), g = fixture::circle_degree(b);
      const auto gf = pullback_hom(compose(g, f), m, k, m, k);
      const auto hf = pullback_hom(f, m, k, m, k), hg = pullback_hom(g, m, k, m, k);
      for (std::size_t i = 0; i < m.classes.size(); ++i) CHECK(*gf.images[i] == *apply_hom(hf, k, k, *hg.images[i]));
    }

  // maps that mix strata are refused
  const auto hs = fixture::handle_space();
  const auto hm = enumerate_classes(hs, fixture::sp(1), 1);
  const auto hk = grothendieck(hm);
  CellularMap f(assemble(hs), assemble(hs));
  f.set_vertex("v", "v");
  f.set_edge("e", {{"e", true}});
  f.set_edge("i", {{"e", true}});
  CHECK_THROWS_AS(pullback_hom(f, hm, hk, hm, hk), Error);
}

TEST_CASE("ring structure") {
  const auto m = circle_monoid();
  const auto k = grothendieck(m);
  const auto t = class_of(m, fixture::line_on_circle(1)), mo = class_of(m, fixture::line_on_circle(-1));
  const auto& T = k.class_map[t];
  const auto& M = k.class_map[mo];
  CHECK(*ring_product(m, k, M, M) == T);
  for (std::size_t i = 0; i < m.classes.size(); ++i) CHECK(*ring_product(m, k, T, k.class_map[i]) == k.class_map[i]);
  CHECK(*ring_product(m, k, k.add(T, M), M) == k.add(M, T));
  CHECK(*ring_product(m, k, k.scale(-1, M), M) == k.scale(-1, T));

  CHECK_THROWS_AS(enumerate_classes(over(fixture::circle()), share(StructureCategory::gl_open(1)), 1), Error);
}

TEST_CASE("homotopic maps induce equal homomorphisms") {
  StratifiedSpace s;
  s.base0 = homotopy::ngon(3);
  const StratifiedSpace p = prism_space(s);
  const auto h = CellularMap::identity(assemble(p));
  const auto src = enumerate_classes(s, fixture::sp(1), 2), dst = enumerate_classes(p, fixture::sp(1), 2);
  const auto ks = grothendieck(src), kd = grothendieck(dst);
  CHECK(ks.presentation() == "Z^2");
  CHECK(kd.presentation() == "Z^2");
  const auto h0 = pullback_hom(homotopy_end(h, s.base0, 0), src, ks, dst, kd);
  const auto h1 = pullback_hom(homotopy_end(h, s.base0, 1), src, ks, dst, kd);
  CHECK(h0.images == h1.images);
  CHECK_FALSE(h0.partial);
}

#include "stratk/ktheory.hpp"

#include <algorithm>
#include <functional>

namespace stratk {

namespace {

std::size_t top_rank(const StratifiedBundle& x) {
  std::size_t r = 0;
  for (const auto& dims : x.fiber_dims())
    for (auto d : dims) r = std::max(r, d);
  return r;
}

// Sums of signed permutations with zero maps are partial signed
// permutations, so that is the window for signed permutation families.
CategoryPtr window_category(const StructureCategory& c, std::size_t cap) {
  const std::size_t n = std::max(cap, c.max_dim());
  const bool partial_perm = std::all_of(c.morphisms().begin(), c.morphisms().end(), [](const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t k = 0; k < m.cols(); ++k)
        if (m(r, k) != 0 && m(r, k) != 1 && m(r, k) != -1) return false;
    return m.transpose().rank() == [&] {
      std::size_t nz = 0;
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t k = 0; k < m.cols(); ++k) nz += m(r, k) != 0;
      return nz;
    }();
  });
  if (partial_perm && n <= 4) return share(StructureCategory::partial_signed_perm(n));
  return share(MatrixBifunctor(MatrixBifunctor::Kind::direct_sum).image_category(c, c, n));
}

// b(x, y) when every fiber of it stays within the cap.
std::optional<StratifiedBundle> combine(const MatrixBifunctor& b, const StratifiedBundle& x, const StratifiedBundle& y,
                                        const CategoryPtr& w, std::size_t cap) {
  for (std::size_t j = 0; j < x.strata(); ++j) {
    const auto &fx = x.stratum_bundle(j).fiber, &fy = y.stratum_bundle(j).fiber;
    for (std::size_t i = 0; i < fx.size() && i < fy.size(); ++i)
      if (b.map_objects(fx[i], fy[i]) > cap) return std::nullopt;
  }
  return map_stratified2(b, x, y, w);
}

StratifiedBundle rehome(const StratifiedBundle& x, const CategoryPtr& w) {
  VBundle l0 = x.layer0;
  l0.category = w;
  auto layers = x.layers;
  for (auto& l : layers) l.m.category = w;
  return build_stratified(x.space, std::move(l0), std::move(layers));
}

// Every bundle on `base` up to isomorphism, rank 0 allowed per component.
std::vector<VBundle> layer_classes(const CellComplex& base, const CategoryPtr& c, std::size_t cap) {
  const std::size_t r = std::min(cap, c->max_dim());
  const auto comps = base.components();
  std::vector<std::vector<VBundle>> per;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    std::set<std::string> ids;
    for (const auto& [id, cell] : base.cells())
      if (base.component_of(id) == k) ids.insert(id);
    const CellComplex sub = base.subcomplex(ids);
    std::vector<VBundle> list{VBundle::trivial(sub, c, 0)};
    if (r > 0)
      for (auto& e : classify_bundles(sub, c, r)) list.push_back(std::move(e));
    per.push_back(std::move(list));
  }
  std::vector<VBundle> out;
  std::vector<std::size_t> pick(per.size(), 0);
  while (true) {
    VBundle e{base, c, {}, {}};
    for (std::size_t k = 0; k < per.size(); ++k) {
      const VBundle& part = per[k][pick[k]];
      e.fiber.push_back(part.fiber.empty() ? 0 : part.fiber.front());
      for (const auto& [id, m] : part.labels) e.labels[id] = m;
    }
    out.push_back(std::move(e));
    std::size_t k = 0;
    while (k < per.size() && ++pick[k] == per[k].size()) pick[k++] = 0;
    if (k == per.size()) break;
  }
  return out;
}

StratifiedSpace truncated(const StratifiedSpace& s, std::size_t n) {
  StratifiedSpace t;
  t.base0 = s.base0;
  t.layers.assign(s.layers.begin(), s.layers.begin() + static_cast<std::ptrdiff_t>(n));
  return t;
}

void check_additive(const ClassMonoid& m, const GroupHom& h, const KGroup& dst) {
  for (const auto& [ij, k] : m.add_table) {
    if (!k) continue;
    const auto &a = h.images[ij.first], &b = h.images[ij.second], &c = h.images[*k];
    if (a && b && c && dst.add(*a, *b) != *c)
      throw Error(Error::Kind::integrity, std::to_string(*k), "homomorphism is not additive on the table");
  }
}

Matrix to_rational(const IntMatrix& a) {
  Matrix m(a.rows, a.cols);
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t c = 0; c < a.cols; ++c) m(r, c) = Rational(a(r, c));
  return m;
}

}  // namespace

std::optional<std::size_t> ClassMonoid::find(const StratifiedBundle& x) const {
  if (top_rank(x) > rank_cap) return std::nullopt;
  const StratifiedBundle y = rehome(x, window);
  const auto dims = y.fiber_dims();
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].fiber_dims() == dims && is_isomorphic_stratified(classes[i], y)) return i;
  return std::nullopt;
}

ClassMonoid enumerate_classes(const StratifiedSpace& base, const CategoryPtr& c, std::size_t rank_cap,
                              std::size_t budget) {
  if (c->is_open()) throw Error(Error::Kind::unsupported_category, c->name(), "open categories are not enumerable");
  ClassMonoid m;
  m.base = base;
  m.category = c;
  m.rank_cap = rank_cap;
  m.window = window_category(*c, rank_cap);
  std::size_t spent = 0;

  const auto insert = [&](const StratifiedBundle& x) -> std::optional<std::size_t> {
    const auto dims = x.fiber_dims();
    for (std::size_t i = 0; i < m.classes.size(); ++i) {
      if (m.classes[i].fiber_dims() != dims) continue;
      const auto r = is_isomorphic_stratified(m.classes[i], x, budget);
      if (r) return i;
      if (r.inconclusive) m.partial = true;
    }
    m.classes.push_back(x);
    return m.classes.size() - 1;
  };

  std::vector<std::vector<VBundle>> reps{layer_classes(base.base0, c, rank_cap)};
  for (const auto& l : base.layers) reps.push_back(layer_classes(l.m, c, rank_cap));

  // layers are chosen bottom up; each partial choice is built on the
  // truncated space, which prunes naturality failures early
  std::function<void(const VBundle&, std::vector<AttachLayer>&)> grow = [&](const VBundle& l0,
                                                                             std::vector<AttachLayer>& chosen) {
    if (m.partial) return;
    if (++spent > budget) {
      m.partial = true;
      return;
    }
    const std::size_t j = chosen.size();
    std::optional<StratifiedBundle> probe;
    try {
      probe = build_stratified(truncated(base, j), l0, chosen);
    } catch (const Error&) {
      return;
    }
    if (j == base.layers.size()) {
      insert(rehome(*probe, m.window));
      return;
    }
    const Layer& layer = base.layers[j];
    std::vector<std::string> verts;
    for (const auto& a : layer.a)
      if (layer.m.dim(a) == 0) verts.push_back(a);
    for (const auto& e : reps[j + 1]) {
      std::vector<std::vector<Matrix>> options;
      for (const auto& a : verts) options.push_back(c->hom(e.rank_at(a), probe->frame_rank(layer.h.image(a))));
      if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) continue;
      std::vector<std::size_t> pick(verts.size(), 0);
      while (true) {
        AttachLayer l{e, {}};
        for (std::size_t k = 0; k < verts.size(); ++k) l.phi[verts[k]] = options[k][pick[k]];
        chosen.push_back(std::move(l));
        grow(l0, chosen);
        chosen.pop_back();
        std::size_t k = 0;
        while (k < verts.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
        if (k == verts.size()) break;
      }
    }
  };
  for (const auto& l0 : reps[0]) {
    std::vector<AttachLayer> chosen;
    grow(l0, chosen);
  }

  // close under sums inside the window
  for (std::size_t i = 0; i < m.classes.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (const auto& [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        if (m.add_table.count({a, b})) continue;
        const auto s = combine(MatrixBifunctor(MatrixBifunctor::Kind::direct_sum), m.classes[a], m.classes[b],
                               m.window, rank_cap);
        m.add_table[{a, b}] = s ? insert(*s) : std::nullopt;
      }
  return m;
}

KElement KGroup::reduce(KElement x) const {
  for (std::size_t t = 0; t < torsion.size(); ++t) {
    x[t] %= torsion[t];
    if (x[t] < 0) x[t] += torsion[t];
  }
  return x;
}

KElement KGroup::add(const KElement& a, const KElement& b) const {
  KElement s(coords());
  for (std::size_t t = 0; t < s.size(); ++t) s[t] = a[t] + b[t];
  return reduce(std::move(s));
}

KElement KGroup::scale(const Integer& k, const KElement& a) const {
  KElement s(coords());
  for (std::size_t t = 0; t < s.size(); ++t) s[t] = k * a[t];
  return reduce(std::move(s));
}

std::string KGroup::presentation() const {
  std::vector<std::string> parts;
  if (free_rank == 1) parts.push_back("Z");
  if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
  for (const auto& d : torsion) parts.push_back("Z/" + d.get_str());
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " (+) " + parts[i];
  return out;
}

std::string KGroup::window_label() const { return "within stable window " + std::to_string(window); }

KGroup grothendieck(const ClassMonoid& m) {
  for (const auto& [ij, k] : m.add_table) {
    auto it = m.add_table.find({ij.second, ij.first});
    if (it != m.add_table.end() && it->second != k)
      throw Error(Error::Kind::integrity, std::to_string(ij.first) + "+" + std::to_string(ij.second),
                  "addition table is not commutative");
  }
  KGroup g;
  g.window = m.rank_cap;
  std::map<std::size_t, std::size_t> col;
  for (std::size_t i = 1; i < m.classes.size(); ++i) {
    col[i] = g.generators.size();
    g.generators.push_back(i);
  }
  const std::size_t n = g.generators.size();
  std::vector<std::vector<Integer>> rows;
  for (const auto& [ij, k] : m.add_table) {
    if (!k || ij.first > ij.second) continue;
    std::vector<Integer> row(n, 0);
    if (ij.first) row[col[ij.first]] += 1;
    if (ij.second) row[col[ij.second]] += 1;
    if (*k) row[col[*k]] -= 1;
    if (std::any_of(row.begin(), row.end(), [](const Integer& x) { return x != 0; })) rows.push_back(std::move(row));
  }
  g.relations = IntMatrix(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) g.relations(r, c) = rows[r][c];

  const SmithForm s = smith_normal_form(g.relations);
  g.divisors = s.diagonal;
  const std::size_t rank = s.diagonal.size();
  std::vector<std::size_t> kept;  // coordinate directions of the output
  for (std::size_t t = 0; t < rank; ++t)
    if (s.diagonal[t] != 1) {
      kept.push_back(t);
      g.torsion.push_back(s.diagonal[t]);
    }
  for (std::size_t t = rank; t < n; ++t) kept.push_back(t);
  g.free_rank = n - rank;

  const Matrix vinv = *to_rational(s.v).inverse();
  for (auto t : kept) {
    std::vector<Integer> b(n);
    for (std::size_t c = 0; c < n; ++c) b[c] = vinv(t, c).get_num();
    g.basis.push_back(std::move(b));
  }
  g.class_map.assign(m.classes.size(), g.zero());
  for (std::size_t i = 1; i < m.classes.size(); ++i) {
    KElement x;
    for (auto t : kept) x.push_back(s.v(col[i], t));
    g.class_map[i] = g.reduce(std::move(x));
  }
  for (const auto& [ij, k] : m.add_table)
    if (k && g.add(g.class_map[ij.first], g.class_map[ij.second]) != g.class_map[*k])
      throw Error(Error::Kind::integrity, std::to_string(*k), "class map is not additive");
  return g;
}

std::optional<KElement> apply_hom(const GroupHom& h, const KGroup& src, const KGroup& dst, const KElement& x) {
  KElement out = dst.zero();
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (x[t] == 0) continue;
    for (std::size_t g = 0; g < src.generators.size(); ++g) {
      const Integer coef = x[t] * src.basis[t][g];
      if (coef == 0) continue;
      const auto& img = h.images[src.generators[g]];
      if (!img) return std::nullopt;
      out = dst.add(out, dst.scale(coef, *img));
    }
  }
  return out;
}

StratifiedSpace stratum_space(const StratifiedSpace& base, std::size_t j) {
  StratifiedSpace s;
  s.base0 = j == 0 ? base.base0 : base.layers.at(j - 1).m;
  return s;
}

GroupHom restriction_hom(const ClassMonoid& m, const KGroup& k, std::size_t j, const ClassMonoid& tm,
                         const KGroup& tk) {
  (void)k;
  if (j > m.base.layers.size()) throw Error(Error::Kind::precondition, std::to_string(j), "no such stratum");
  if (!tm.base.layers.empty() || !same_cells(tm.base.base0, stratum_space(m.base, j).base0))
    throw Error(Error::Kind::base_mismatch, std::to_string(j), "target monoid lives over another base");
  GroupHom h;
  for (const auto& x : m.classes) {
    const auto idx = tm.find(single_stratum(x.stratum_bundle(j)));
    if (!idx) h.partial = true;
    h.images.push_back(idx ? std::optional<KElement>(tk.class_map[*idx]) : std::nullopt);
  }
  check_additive(m, h, tk);
  return h;
}

GroupHom pullback_hom(const CellularMap& f, const ClassMonoid& src, const KGroup& ks, const ClassMonoid& dst,
                      const KGroup& kd, std::optional<std::vector<CellularMap>> decomposition) {
  (void)kd;
  if (!decomposition) decomposition = infer_decomposition(src.base, f, dst.base);
  GroupHom h;
  for (const auto& x : dst.classes) {
    const auto idx = src.find(pullback_stratified(src.base, f, x, decomposition));
    if (!idx) h.partial = true;
    h.images.push_back(idx ? std::optional<KElement>(ks.class_map[*idx]) : std::nullopt);
  }
  check_additive(dst, h, ks);
  return h;
}

IntMatrix hom_matrix(const GroupHom& h, const KGroup& ks, const std::vector<std::size_t>& src_basis,
                     const KGroup& kt, const std::vector<std::size_t>& tgt_basis) {
  (void)ks;
  if (!kt.torsion.empty() || tgt_basis.size() != kt.coords())
    throw Error(Error::Kind::precondition, "", "target basis must span a free group");
  Matrix b(kt.coords(), tgt_basis.size());
  for (std::size_t c = 0; c < tgt_basis.size(); ++c)
    for (std::size_t r = 0; r < kt.coords(); ++r) b(r, c) = Rational(kt.class_map.at(tgt_basis[c])[r]);
  const auto binv = b.inverse();
  if (!binv) throw Error(Error::Kind::precondition, "", "target classes are not a basis");
  IntMatrix out(tgt_basis.size(), src_basis.size());
  for (std::size_t c = 0; c < src_basis.size(); ++c) {
    const auto& img = h.images.at(src_basis[c]);
    if (!img) throw Error(Error::Kind::precondition, std::to_string(src_basis[c]), "image outside the window");
    Matrix y(kt.coords(), 1);
    for (std::size_t r = 0; r < kt.coords(); ++r) y(r, 0) = Rational((*img)[r]);
    const Matrix x = *binv * y;
    for (std::size_t r = 0; r < tgt_basis.size(); ++r) {
      if (x(r, 0).get_den() != 1) throw Error(Error::Kind::precondition, "", "target classes are not a Z-basis");
      out(r, c) = x(r, 0).get_num();
    }
  }
  return out;
}

std::optional<std::size_t> unit_class(const ClassMonoid& m) {
  if (m.rank_cap < 1) return std::nullopt;
  std::vector<AttachLayer> layers;
  for (const auto& l : m.base.layers) {
    AttachLayer a{VBundle::trivial(l.m, m.window, 1), {}};
    for (const auto& v : l.a)
      if (l.m.dim(v) == 0) a.phi[v] = Matrix::identity(1);
    layers.push_back(std::move(a));
  }
  try {
    return m.find(build_stratified(m.base, VBundle::trivial(m.base.base0, m.window, 1), std::move(layers)));
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

// Integer coefficients writing x over the classes listed in `atoms`.
std::optional<std::vector<Integer>> over_classes(const KGroup& k, const std::vector<std::size_t>& atoms,
                                                 const KElement& x) {
  const std::size_t n = k.coords(), w = atoms.size() + k.torsion.size();
  IntMatrix a(n, w);
  for (std::size_t c = 0; c < atoms.size(); ++c)
    for (std::size_t r = 0; r < n; ++r) a(r, c) = k.class_map[atoms[c]][r];
  for (std::size_t t = 0; t < k.torsion.size(); ++t) a(t, atoms.size() + t) = k.torsion[t];
  const SmithForm s = smith_normal_form(a);
  std::vector<Integer> y(n, 0), z(w, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) y[r] += s.u(r, c) * x[c];
  for (std::size_t r = 0; r < n; ++r) {
    if (r < s.diagonal.size()) {
      if (y[r] % s.diagonal[r] != 0) return std::nullopt;
      z[r] = y[r] / s.diagonal[r];
    } else if (y[r] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Integer> out(atoms.size(), 0);
  for (std::size_t r = 0; r < atoms.size(); ++r)
    for (std::size_t c = 0; c < w; ++c) out[r] += s.v(r, c) * z[c];
  return out;
}

}  // namespace

std::optional<KElement> ring_product(const ClassMonoid& m, const KGroup& k, const KElement& a, const KElement& b) {
  if (!m.category->flags().has_tensor)
    throw Error(Error::Kind::unsupported_category, m.category->name(), "category has no tensor product");
  // classes that are not sums of two nonzero classes generate the group
  std::set<std::size_t> sums;
  for (const auto& [ij, c] : m.add_table)
    if (c && ij.first && ij.second) sums.insert(*c);
  std::vector<std::size_t> atoms;
  for (std::size_t i = 1; i < m.classes.size(); ++i)
    if (!sums.count(i)) atoms.push_back(i);
  const auto ca = over_classes(k, atoms, a), cb = over_classes(k, atoms, b);
  if (!ca || !cb) return std::nullopt;
  KElement out = k.zero();
  for (std::size_t g = 0; g < atoms.size(); ++g)
    for (std::size_t h = 0; h < atoms.size(); ++h) {
      const Integer coef = (*ca)[g] * (*cb)[h];
      if (coef == 0) continue;
      const auto x = combine(MatrixBifunctor(MatrixBifunctor::Kind::tensor), m.classes[atoms[g]],
                             m.classes[atoms[h]], m.window, m.rank_cap);
      const auto c = x ? m.find(*x) : std::nullopt;
      if (!c) return std::nullopt;
      out = k.add(out, k.scale(coef, k.class_map[*c]));
    }
  return out;
}

}  // namespace stratk

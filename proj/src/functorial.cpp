#include "stratk/functorial.hpp"

namespace stratk {

namespace {

VBundle map_into(const MatrixFunctor& f, const VBundle& e, const CategoryPtr& cat) {
  VBundle out{e.base, cat, {}, {}};
  for (auto n : e.fiber) out.fiber.push_back(f.map_object(n));
  for (const auto& [id, m] : e.labels) out.labels[id] = f.apply(m);
  return out;
}

VBundle map2_into(const MatrixBifunctor& b, const VBundle& e, const VBundle& e2, const CategoryPtr& cat) {
  if (!same_cells(e.base, e2.base)) throw Error(Error::Kind::base_mismatch, "", "bundles live over different bases");
  VBundle out{e.base, cat, {}, {}};
  for (std::size_t i = 0; i < e.fiber.size(); ++i) out.fiber.push_back(b.map_objects(e.fiber[i], e2.fiber[i]));
  for (const auto& [id, m] : e.labels) out.labels[id] = b.apply(m, e2.labels.at(id));
  return out;
}

CategoryPtr image2(const MatrixBifunctor& b, const StructureCategory& c, const StructureCategory& c2) {
  return share(b.image_category(c, c2, b.map_objects(c.max_dim(), c2.max_dim())));
}

}  // namespace

VBundle map_bundle(const MatrixFunctor& f, const VBundle& e) {
  return map_into(f, e, share(f.image_category(*e.category)));
}

VBundle map_bundle2(const MatrixBifunctor& b, const VBundle& e, const VBundle& e2) {
  return map2_into(b, e, e2, image2(b, *e.category, *e2.category));
}

StratifiedBundle map_stratified(const MatrixFunctor& f, const StratifiedBundle& x) {
  const CategoryPtr cat = share(f.image_category(*x.category()));
  std::vector<AttachLayer> layers;
  for (const auto& l : x.layers) {
    AttachLayer out{map_into(f, l.m, cat), {}};
    for (const auto& [a, m] : l.phi) out.phi[a] = f.apply(m);
    layers.push_back(std::move(out));
  }
  return build_stratified(x.space, map_into(f, x.layer0, cat), std::move(layers));
}

StratifiedBundle map_stratified2(const MatrixBifunctor& b, const StratifiedBundle& x, const StratifiedBundle& x2,
                                 const CategoryPtr& into) {
  if (!(x.total() == x2.total()) || x.layers.size() != x2.layers.size())
    throw Error(Error::Kind::base_mismatch, "", "stratifications differ");
  for (std::size_t k = 0; k < x.layers.size(); ++k) {
    const Layer &l = x.space.layers[k], &l2 = x2.space.layers[k];
    if (!same_cells(l.m, l2.m) || l.a != l2.a) throw Error(Error::Kind::base_mismatch, std::to_string(k + 1), "attached pairs differ");
    for (const auto& a : l.a)
      if (l.h.image_cells(a) != l2.h.image_cells(a))
        throw Error(Error::Kind::base_mismatch, a, "attaching maps differ");
  }
  const CategoryPtr cat = into ? into : image2(b, *x.category(), *x2.category());
  std::vector<AttachLayer> layers;
  for (std::size_t k = 0; k < x.layers.size(); ++k) {
    AttachLayer out{map2_into(b, x.layers[k].m, x2.layers[k].m, cat), {}};
    for (const auto& [a, m] : x.layers[k].phi) out.phi[a] = b.apply(m, x2.layers[k].phi.at(a));
    layers.push_back(std::move(out));
  }
  return build_stratified(x.space, map2_into(b, x.layer0, x2.layer0, cat), std::move(layers));
}

}  // namespace stratk

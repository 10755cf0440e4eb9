#pragma once

// Functors and bifunctors applied to bundles and stratified bundles,
// stratum by stratum. Naturality of the image is always re-checked.

#include "stratk/bundle.hpp"
#include "stratk/lincat.hpp"
#include "stratk/strata.hpp"

namespace stratk {

VBundle map_bundle(const MatrixFunctor& f, const VBundle& e);
/// Same base required; throws base_mismatch otherwise.
VBundle map_bundle2(const MatrixBifunctor& b, const VBundle& e, const VBundle& e2);

StratifiedBundle map_stratified(const MatrixFunctor& f, const StratifiedBundle& x);
/// Same stratified base and attached pairs required.
/// `into` overrides the image category.
StratifiedBundle map_stratified2(const MatrixBifunctor& b, const StratifiedBundle& x, const StratifiedBundle& x2,
                                 const CategoryPtr& into = nullptr);

inline StratifiedBundle direct_sum(const StratifiedBundle& x, const StratifiedBundle& y) {
  return map_stratified2(MatrixBifunctor(MatrixBifunctor::Kind::direct_sum), x, y);
}
inline StratifiedBundle tensor(const StratifiedBundle& x, const StratifiedBundle& y) {
  return map_stratified2(MatrixBifunctor(MatrixBifunctor::Kind::tensor), x, y);
}

}  // namespace stratk

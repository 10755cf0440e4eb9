#pragma once

// Stratified bundles: layer bundles over the attached pairs (M, A) glued to
// the strata below by fiber maps over the attaching maps.
//
// The frame of a cell c of stratum j is the fiber of the stratum-j bundle at
// the anchor vertex of c (in X0 for j = 0, in M_j otherwise). A fiber map
// phi(a), for a cell a of A_j, goes from the frame of a in M_j to the frame
// of h(a).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratk/bundle.hpp"
#include "stratk/complex.hpp"

namespace stratk {

struct AttachLayer {
  VBundle m;
  std::map<std::string, Matrix> phi;
};

/// End of an edge: 0 = src, 1 = dst, -1 = infer from the target vertex.
using EdgeEnd = int;

/// Transport in `b` from the anchor of `cell` to the vertex `w`, staying in
/// the closure of `cell`.
Matrix local_transport(const VBundle& b, const std::string& cell, const std::string& w, EdgeEnd end = -1);

class StratifiedBundle {
 public:
  StratifiedSpace space;
  VBundle layer0;
  std::vector<AttachLayer> layers;
  std::vector<CellComplex> stages;  ///< assembled X0..Xn

  const CellComplex& total() const { return stages.back(); }
  std::size_t strata() const { return layers.size() + 1; }
  const CategoryPtr& category() const { return layer0.category; }
  /// Bundle carrying stratum j (layer0 for j = 0).
  const VBundle& stratum_bundle(std::size_t j) const { return j == 0 ? layer0 : layers[j - 1].m; }
  const CellComplex& stratum_base(std::size_t j) const { return stratum_bundle(j).base; }
  /// Anchor of a total-complex cell inside its stratum base.
  std::string frame_vertex(const std::string& cell) const;
  std::size_t frame_rank(const std::string& cell) const;
  /// Map from the frame of c to the frame of its face d, approaching d from
  /// inside c (through the given end when c is an edge).
  Matrix specialize(const std::string& c, const std::string& d, EdgeEnd end = -1) const;
  /// Fiber dimensions per stratum, each sorted and unique.
  std::vector<std::vector<std::size_t>> fiber_dims() const;
};

bool operator==(const StratifiedBundle& a, const StratifiedBundle& b);

/// Validates layer bundles, derives fiber maps left out on cells whose
/// image shares a stratum with the image of their anchor, and checks
/// naturality on every face of every attached cell.
StratifiedBundle build_stratified(StratifiedSpace space, VBundle layer0, std::vector<AttachLayer> layers);

/// Layer decomposition [g_1, ..., g_n] of a stratum-preserving map, g_j
/// from M_j to M'_j. Throws ambiguous when a lift is not unique.
std::vector<CellularMap> infer_decomposition(const StratifiedSpace& src, const CellularMap& f,
                                             const StratifiedSpace& dst);

/// f: assemble(src) -> total of x. Decomposition inferred when not given.
StratifiedBundle pullback_stratified(const StratifiedSpace& src, const CellularMap& f, const StratifiedBundle& x,
                                     std::optional<std::vector<CellularMap>> decomposition = std::nullopt);

/// Single flat cocycle on the total complex. Throws not_a_bundle when a
/// fiber map is not invertible or ranks jump.
VBundle flatten(const StratifiedBundle& x);

/// Pullback of a flat bundle on the total complex to stratum j's base.
VBundle restrict_to_stratum(const StratifiedBundle& x, const VBundle& flat, std::size_t j);

struct StratifiedIso {
  std::optional<std::vector<Gauge>> witness;  ///< one gauge per stratum
  std::string reason;
  bool inconclusive = false;
  explicit operator bool() const { return witness.has_value(); }
};

/// Layer gauges g_j with g_j . X_j = Y_j intertwining every fiber map.
/// Finite categories are searched exhaustively up to `budget` nodes.
StratifiedIso is_isomorphic_stratified(const StratifiedBundle& x, const StratifiedBundle& y,
                                       std::size_t budget = 1000000, std::uint64_t seed = 0x5eed);

/// Applies per-stratum gauges: layer bundles and fiber maps transformed.
StratifiedBundle apply_stratified_gauge(const StratifiedBundle& x, const std::vector<Gauge>& g);

/// Trivial single-stratum object.
StratifiedBundle single_stratum(const VBundle& e);

}  // namespace stratk

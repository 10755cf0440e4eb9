#pragma once

// V-bundles over cell complexes, encoded as flat cocycles: one fiber
// dimension per connected component and one invertible label per edge,
// transporting the fiber at src to the fiber at dst.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratk/complex.hpp"
#include "stratk/lincat.hpp"

namespace stratk {

using Gauge = std::map<std::string, Matrix>;

struct VBundle {
  CellComplex base;
  CategoryPtr category;
  std::vector<std::size_t> fiber;  ///< indexed like base.components()
  std::map<std::string, Matrix> labels;

  std::size_t rank_at(const std::string& cell) const;
  /// Label of an oriented edge; the inverse for a backwards step.
  Matrix label(const OrientedEdge& e) const;
  /// Transport along a path: L_k ... L_1. Identity of the start fiber for an
  /// empty path starting at `start`.
  Matrix transport(const EdgePath& p, const std::string& start) const;
  /// Trivial bundle with the given fiber dimension on every component.
  static VBundle trivial(const CellComplex& base, CategoryPtr category, std::size_t rank);
};

bool operator==(const VBundle& a, const VBundle& b);

CategoryPtr share(StructureCategory c);

/// Fiber counts, label shapes, labels being automorphisms of the category,
/// and trivial holonomy around every 2-cell.
ValidationReport validate_bundle(const VBundle& e);

/// g . E: labels become g(dst) L g(src)^-1.
VBundle apply_gauge(const VBundle& e, const Gauge& g);

/// Gauge that makes every spanning-tree label the identity.
Gauge normalizing_gauge(const VBundle& e);
VBundle normalize(const VBundle& e);

struct IsoResult {
  std::optional<Gauge> witness;  ///< g with g . E = F
  std::string reason;
  bool inconclusive = false;
  explicit operator bool() const { return witness.has_value(); }
};

/// Searches for a gauge carrying E to F. Finite categories are searched
/// exhaustively per component; open categories solve the linear
/// intertwining equations and look for an invertible solution.
IsoResult is_isomorphic(const VBundle& e, const VBundle& f, std::uint64_t seed = 0x5eed);

/// Pulls E back along f; edges collapsed by f get identity labels.
VBundle pullback_bundle(const CellularMap& f, const VBundle& e);
VBundle restrict_bundle(const VBundle& e, const std::set<std::string>& cells);

/// One normalized representative per isomorphism class, fiber ranks taken
/// from the category's objects up to rank_cap.
std::vector<VBundle> classify_bundles(const CellComplex& base, const CategoryPtr& c, std::size_t rank_cap,
                                      std::size_t budget = 1000000);

/// Representatives of Aut(dim)-orbits of generator tuples satisfying the
/// relators, under simultaneous conjugation; sorted.
std::vector<std::vector<Matrix>> holonomy_classes(const Pi1Presentation& p, const StructureCategory& c,
                                                  std::size_t dim, std::size_t budget = 1000000);

}  // namespace stratk

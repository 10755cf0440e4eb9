#pragma once

// Stratified tangent data of polytopal manifolds. Strata are skeletal: the
// open k-cells form stratum k. Each closed k-cell is attached along its
// boundary by the identity of the underlying polytope, so the derivative of
// the attaching map is the identity and the fiber map over a face is the
// projection of the cell's direction space onto the face's.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratk/strata.hpp"

namespace stratk {

struct PolytopalManifold {
  std::size_t ambient = 0;
  CellComplex cells;
  std::map<std::string, std::vector<Rational>> coords;  ///< vertex -> point

  /// Columns span the affine hull of the cell's closure, translated to 0.
  Matrix direction(const std::string& cell) const;

  static PolytopalManifold segment();
  static PolytopalManifold square();
  static PolytopalManifold cube();
};

/// Dimensions of direction spaces and containment of faces in cofaces.
ValidationReport validate_polytope(const PolytopalManifold& m);

/// P(x) = I - x x^T / (x . x).
Matrix tangent_projection(const std::vector<Rational>& x);

/// Orthogonal projection of the direction space of `cell` onto that of its
/// face, in the coordinates of the two direction bases.
Matrix orthogonal_projection(const PolytopalManifold& m, const std::string& cell, const std::string& face);

/// Projection onto the face along the span of `complement` (ambient
/// vectors as columns, inside the cell's direction space).
Matrix projection_along(const PolytopalManifold& m, const std::string& cell, const std::string& face,
                        const Matrix& complement);

using ProjectionRule = std::function<Matrix(const PolytopalManifold&, const std::string& cell, const std::string& face)>;

/// Layer k gathers a copy of every closed k-cell; the copy of a face f of
/// the cell c has id "c:f".
StratifiedSpace skeletal_space(const CellComplex& x);

/// Trivial rank-k layer bundles in gl_open(ambient). Throws construction
/// when a fiber map is not surjective.
StratifiedBundle build_tangent(const PolytopalManifold& m, const std::optional<ProjectionRule>& rule = std::nullopt);

struct ChoiceReport {
  bool holds = false;
  bool identity_witness = false;
  std::optional<std::vector<Gauge>> witness;
  std::string detail;
};

/// Builds the family with the default and the alternative projections and
/// searches for a stratified isomorphism. Throws precondition when the
/// alternative does not give valid attaching data.
ChoiceReport choice_independence_check(const PolytopalManifold& m, const ProjectionRule& alt);

}  // namespace stratk

#pragma once

// Cellular homotopies as maps out of prism complexes X x [0, 1] (see prism
// in complex.hpp for the cell names).

#include <optional>
#include <string>
#include <vector>

#include "stratk/strata.hpp"

namespace stratk {

/// c@0, c@1 or c@I.
std::string prism_cell(const std::string& c, char t);

/// Every stratum times the interval; the attaching maps are h x id, which
/// needs cell-to-cell attaching maps.
StratifiedSpace prism_space(const StratifiedSpace& s);

/// The map X -> Y at one end (t = 0 or 1) of H: prism(X) -> Y.
CellularMap homotopy_end(const CellularMap& h, const CellComplex& x, int t);

struct HomotopyReport {
  bool holds = false;
  std::optional<std::vector<Gauge>> witness;
  std::string detail;
};

/// Pulls y back along both ends of h and searches for a stratified
/// isomorphism. h must be stratum preserving on assemble(prism_space(s));
/// its layer decomposition is inferred when not given, and the ends use
/// its restrictions to M x {t}.
HomotopyReport homotopy_invariance_check(const StratifiedSpace& s, const CellularMap& h, const StratifiedBundle& y,
                                         std::optional<std::vector<CellularMap>> decomposition = std::nullopt);

}  // namespace stratk

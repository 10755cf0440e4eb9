#pragma once

// Iso-class monoids of stratified bundles over a fixed base and their
// Grothendieck groups. Everything is computed inside a rank window: classes
// have every fiber dimension <= rank_cap, and sums that leave the window
// are recorded as such rather than guessed.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratk/functorial.hpp"
#include "stratk/smith.hpp"
#include "stratk/strata.hpp"

namespace stratk {

struct ClassMonoid {
  StratifiedSpace base;
  CategoryPtr category;  ///< category the layer data is drawn from
  CategoryPtr window;    ///< category every representative is stated in
  std::size_t rank_cap = 4;
  std::vector<StratifiedBundle> classes;  ///< classes[0] is zero
  /// [i] + [j]; nullopt marks a sum outside the window.
  std::map<std::pair<std::size_t, std::size_t>, std::optional<std::size_t>> add_table;
  bool partial = false;  ///< a search ran out of budget

  /// Index of the class of x, restated in the window category; nullopt
  /// when x is outside the window or matches no class.
  std::optional<std::size_t> find(const StratifiedBundle& x) const;
};

/// Exhaustive and deterministic. Throws unsupported_category for open
/// categories.
ClassMonoid enumerate_classes(const StratifiedSpace& base, const CategoryPtr& c, std::size_t rank_cap = 4,
                              std::size_t budget = 1000000);

/// Coordinates in Z/d_1 + ... + Z/d_t + Z^r, torsion first.
using KElement = std::vector<Integer>;

struct KGroup {
  std::vector<std::size_t> generators;  ///< nonzero class indices
  IntMatrix relations;                  ///< rows e_i + e_j - e_k
  std::vector<Integer> divisors;        ///< nonzero Smith diagonal
  std::vector<Integer> torsion;         ///< divisors > 1
  std::size_t free_rank = 0;
  std::vector<KElement> class_map;  ///< per monoid class
  /// Generator combination realizing each coordinate direction.
  std::vector<std::vector<Integer>> basis;
  std::size_t window = 0;

  std::size_t coords() const { return torsion.size() + free_rank; }
  KElement zero() const { return KElement(coords(), 0); }
  KElement reduce(KElement x) const;
  KElement add(const KElement& a, const KElement& b) const;
  KElement scale(const Integer& k, const KElement& a) const;
  /// "Z^r (+) Z/d1 (+) ...", "Z" for rank one, "0" for the trivial group.
  std::string presentation() const;
  std::string window_label() const;
};

/// Throws integrity on a non-commutative table or when the class map fails
/// additivity.
KGroup grothendieck(const ClassMonoid& m);

/// Images of the source classes; nullopt where the image leaves the target
/// window.
struct GroupHom {
  std::vector<std::optional<KElement>> images;
  bool partial = false;
};

/// Image of an arbitrary element; nullopt when a needed generator image is
/// missing.
std::optional<KElement> apply_hom(const GroupHom& h, const KGroup& src, const KGroup& dst, const KElement& x);

/// Base of stratum j as a one-stratum space.
StratifiedSpace stratum_space(const StratifiedSpace& base, std::size_t j);

/// Restriction to stratum j: X0 for j = 0, the layer bundle over M_j
/// otherwise. The target monoid is enumerated over stratum_space(base, j).
GroupHom restriction_hom(const ClassMonoid& m, const KGroup& k, std::size_t j, const ClassMonoid& tm,
                         const KGroup& tk);

/// f: assemble(src.base) -> total complex of dst.base. Maps K(dst) to K(src).
/// Throws not_stratum_preserving for maps that mix strata.
GroupHom pullback_hom(const CellularMap& f, const ClassMonoid& src, const KGroup& ks, const ClassMonoid& dst,
                      const KGroup& kd, std::optional<std::vector<CellularMap>> decomposition = std::nullopt);

/// Matrix of h in chosen bases: column c is the image of src_basis[c]
/// written in tgt_basis. Needs a torsion-free target spanned by tgt_basis.
IntMatrix hom_matrix(const GroupHom& h, const KGroup& ks, const std::vector<std::size_t>& src_basis,
                     const KGroup& kt, const std::vector<std::size_t>& tgt_basis);

/// Class of the trivial line, when it lies in the window.
std::optional<std::size_t> unit_class(const ClassMonoid& m);

/// Bilinear extension of [E].[F] = [E (x) F]; nullopt when a product
/// leaves the window. Throws unsupported_category without a tensor.
std::optional<KElement> ring_product(const ClassMonoid& m, const KGroup& k, const KElement& a, const KElement& b);

}  // namespace stratk

#pragma once

// Finite structure categories: subcategories of finite-dimensional real
// vector spaces whose objects are R^n (one per dimension) and whose
// morphisms are exact rational matrices.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stratk/error.hpp"
#include "stratk/matrix.hpp"

namespace stratk {

/// Composition in the category: g after f.
Matrix compose(const Matrix& g, const Matrix& f);

class StructureCategory {
 public:
  struct Flags {
    bool is_groupoid = false;
    bool has_sum = false;
    bool has_tensor = false;
  };

  /// Finite, fully enumerated category. The zero object R^0 and the zero
  /// maps to and from it are always members, listed or not.
  static StructureCategory finite(std::string name, std::set<std::size_t> objects,
                                  std::vector<Matrix> morphisms, Flags flags);
  /// Open category: every rational matrix between objects of dimension
  /// <= max_dim is a member. Supports membership, not enumeration.
  static StructureCategory open(std::string name, std::size_t max_dim, Flags flags);

  static StructureCategory trivial();
  /// Signed permutation matrices of sizes 1..n.
  static StructureCategory signed_perm(std::size_t n);
  /// Matrices with at most one nonzero entry, +-1, per row and column:
  /// block sums of signed permutations and zero maps.
  static StructureCategory partial_signed_perm(std::size_t n);
  static StructureCategory gl_open(std::size_t n);
  /// "trivial", "signed_perm(N)", "partial_signed_perm(N)", "gl_open(N)".
  static StructureCategory from_name(const std::string& name);

  const std::string& name() const { return name_; }
  const Flags& flags() const { return flags_; }
  bool is_open() const { return open_; }
  std::size_t max_dim() const { return max_dim_; }
  const std::set<std::size_t>& objects() const { return objects_; }
  /// Throws unsupported_category for open categories.
  const std::vector<Matrix>& morphisms() const;

  bool contains(const Matrix& m) const;
  bool is_automorphism(const Matrix& m) const;
  /// Invertible members R^dim -> R^dim whose inverse is also a member.
  std::vector<Matrix> automorphisms(std::size_t dim) const;
  std::vector<Matrix> hom(std::size_t src, std::size_t dst) const;

 private:
  std::string name_;
  Flags flags_;
  bool open_ = false;
  std::size_t max_dim_ = 0;
  std::set<std::size_t> objects_;
  std::vector<Matrix> morphisms_;
  std::set<Matrix> index_;
  std::map<std::size_t, std::vector<Matrix>> autos_;
};

using CategoryPtr = std::shared_ptr<const StructureCategory>;

/// Every violated closure invariant. Sum and tensor closure are checked for
/// results whose dimensions stay within the listed objects.
ValidationReport validate_category(const StructureCategory& c);

/// Groups of automorphisms generated by block sums of the category's
/// automorphisms together with the block-swap symmetries, for every
/// dimension up to max_dim. Falls back to an open category when a group
/// would exceed `group_limit` elements.
StructureCategory symmetric_sum_closure(const StructureCategory& c, std::size_t max_dim,
                                        std::size_t group_limit = 100000);

/// Finite category whose automorphism groups are generated by `generators`
/// (plus any non-invertible members listed verbatim).
StructureCategory generated_category(std::string name, const std::vector<Matrix>& generators, StructureCategory::Flags flags,
                                     std::size_t group_limit = 100000);

class MatrixFunctor {
 public:
  enum class Kind { identity, dual_inverse_transpose, determinant, tensor_by, to_trivial, table };

  static MatrixFunctor identity();
  static MatrixFunctor dual_inverse_transpose();
  static MatrixFunctor determinant();
  static MatrixFunctor tensor_by(std::size_t k);
  static MatrixFunctor to_trivial();
  static MatrixFunctor table(std::string name, std::map<std::size_t, std::size_t> objects,
                             std::map<Matrix, Matrix> morphisms);
  /// "identity", "dual", "det", "tensor(K)", "trivial".
  static MatrixFunctor from_name(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;
  std::size_t map_object(std::size_t dim) const;
  /// Throws domain when f is outside the functor's domain.
  Matrix apply(const Matrix& f) const;
  /// Category the functor lands in when applied to `source`.
  StructureCategory image_category(const StructureCategory& source) const;

 private:
  Kind kind_ = Kind::identity;
  std::size_t k_ = 1;
  std::string name_;
  std::map<std::size_t, std::size_t> objects_;
  std::map<Matrix, Matrix> table_;
};

Matrix apply_functor(const MatrixFunctor& f, const Matrix& m);

/// Identities, composition on every composable pair, and image membership,
/// checked exhaustively over a finite domain.
ValidationReport validate_functor(const MatrixFunctor& f, const StructureCategory& domain,
                                  const StructureCategory& target);

class MatrixBifunctor {
 public:
  enum class Kind { direct_sum, tensor, hom };

  explicit MatrixBifunctor(Kind kind) : kind_(kind) {}
  static MatrixBifunctor from_name(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;
  std::size_t map_objects(std::size_t a, std::size_t b) const;
  /// hom(f, g) = g (x) (f^-1)^T, defined for invertible f only.
  Matrix apply(const Matrix& f, const Matrix& g) const;
  StructureCategory image_category(const StructureCategory& a, const StructureCategory& b,
                                   std::size_t max_dim) const;

 private:
  Kind kind_;
};

ValidationReport validate_bifunctor(const MatrixBifunctor& b, const StructureCategory& left,
                                    const StructureCategory& right);

struct NormBoundReport {
  bool holds = false;
  std::size_t dimension = 0;
  double beta_inverse_norm = 0;  ///< operator norm of beta^-1
  double bound = 0;              ///< sqrt(d) R |beta^-1|
  double operator_norm = 0;      ///< power-iteration estimate of |f|
  double max_ratio = 0;          ///< max |f x| / |x| over basis columns and samples
  std::size_t samples_checked = 0;
};

/// Checks |f| <= sqrt(d) R |beta^-1| for a map f whose values on the basis
/// columns of beta are bounded by R. Squared basis norms are compared
/// exactly; operator norms are irrational and use doubles at 1e-9.
NormBoundReport norm_bound_check(const Matrix& beta, const Rational& bound_r, const Matrix& f,
                                 std::size_t samples, std::uint64_t seed = 0x5eed);

/// Largest singular value by power iteration on m^T m.
double operator_norm_estimate(const Matrix& m, int iterations = 500);

}  // namespace stratk

#include "stratk/lincat.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <regex>

namespace stratk {

Matrix compose(const Matrix& g, const Matrix& f) {
  if (g.cols() != f.rows())
    throw Error(Error::Kind::composability, g.to_string() + " o " + f.to_string(),
                "morphisms are not composable");
  return g * f;
}

// ---------------------------------------------------------------------------
// StructureCategory

StructureCategory StructureCategory::finite(std::string name, std::set<std::size_t> objects,
                                            std::vector<Matrix> morphisms, Flags flags) {
  StructureCategory c;
  c.name_ = std::move(name);
  c.flags_ = flags;
  c.objects_ = std::move(objects);
  std::sort(morphisms.begin(), morphisms.end());
  morphisms.erase(std::unique(morphisms.begin(), morphisms.end()), morphisms.end());
  c.morphisms_ = std::move(morphisms);
  c.index_.insert(c.morphisms_.begin(), c.morphisms_.end());
  for (auto d : c.objects_) c.max_dim_ = std::max(c.max_dim_, d);
  for (const auto& m : c.morphisms_) c.max_dim_ = std::max({c.max_dim_, m.rows(), m.cols()});
  for (const auto& m : c.morphisms_) {
    if (!m.is_square()) continue;
    auto inv = m.inverse();
    if (inv && c.contains(*inv)) c.autos_[m.rows()].push_back(m);
  }
  return c;
}

StructureCategory StructureCategory::open(std::string name, std::size_t max_dim, Flags flags) {
  StructureCategory c;
  c.name_ = std::move(name);
  c.flags_ = flags;
  c.open_ = true;
  c.max_dim_ = max_dim;
  for (std::size_t d = 0; d <= max_dim; ++d) c.objects_.insert(d);
  return c;
}

StructureCategory StructureCategory::trivial() {
  return finite("trivial", {0}, {Matrix::identity(0)}, Flags{true, true, true});
}

StructureCategory StructureCategory::signed_perm(std::size_t n) {
  std::vector<Matrix> mors;
  std::set<std::size_t> objects;
  for (std::size_t k = 1; k <= n; ++k) {
    objects.insert(k);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (std::size_t signs = 0; signs < (std::size_t{1} << k); ++signs) {
        Matrix m(k, k);
        for (std::size_t col = 0; col < k; ++col) m(perm[col], col) = ((signs >> col) & 1) ? -1 : 1;
        mors.push_back(std::move(m));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return finite("signed_perm(" + std::to_string(n) + ")", std::move(objects), std::move(mors),
                Flags{true, true, true});
}

StructureCategory StructureCategory::partial_signed_perm(std::size_t n) {
  std::vector<Matrix> mors;
  std::set<std::size_t> objects;
  for (std::size_t r = 1; r <= n; ++r) {
    objects.insert(r);
    for (std::size_t c = 1; c <= n; ++c) {
      Matrix m(r, c);
      std::vector<bool> used(r, false);
      const auto fill = [&](auto&& self, std::size_t col) -> void {
        if (col == c) {
          mors.push_back(m);
          return;
        }
        self(self, col + 1);
        for (std::size_t row = 0; row < r; ++row) {
          if (used[row]) continue;
          used[row] = true;
          for (int sign : {1, -1}) {
            m(row, col) = sign;
            self(self, col + 1);
          }
          m(row, col) = 0;
          used[row] = false;
        }
      };
      fill(fill, 0);
    }
  }
  return finite("partial_signed_perm(" + std::to_string(n) + ")", std::move(objects), std::move(mors),
                Flags{false, true, true});
}

StructureCategory StructureCategory::gl_open(std::size_t n) {
  return open("gl_open(" + std::to_string(n) + ")", n, Flags{false, true, true});
}

StructureCategory StructureCategory::from_name(const std::string& name) {
  static const std::regex pattern(R"(\s*(signed_perm|partial_signed_perm|gl_open)\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch match;
  if (name == "trivial") return trivial();
  if (std::regex_match(name, match, pattern)) {
    const std::size_t n = std::stoul(match[2].str());
    if (match[1] == "signed_perm") {
      if (n > 5) throw Error(Error::Kind::usage, name, "signed_perm is enumerated up to n = 5");
      return signed_perm(n);
    }
    if (match[1] == "partial_signed_perm") {
      if (n > 4) throw Error(Error::Kind::usage, name, "partial_signed_perm is enumerated up to n = 4");
      return partial_signed_perm(n);
    }
    return gl_open(n);
  }
  throw Error(Error::Kind::usage, name, "unknown builtin category");
}

const std::vector<Matrix>& StructureCategory::morphisms() const {
  if (open_) throw Error(Error::Kind::unsupported_category, name_, "open categories are not enumerable");
  return morphisms_;
}

bool StructureCategory::contains(const Matrix& m) const {
  if (m.rows() == 0 || m.cols() == 0) return m.rows() <= max_dim_ && m.cols() <= max_dim_;
  if (open_) return m.rows() <= max_dim_ && m.cols() <= max_dim_;
  return index_.count(m) > 0;
}

bool StructureCategory::is_automorphism(const Matrix& m) const {
  if (!m.is_square() || !contains(m)) return false;
  auto inv = m.inverse();
  return inv && contains(*inv);
}

std::vector<Matrix> StructureCategory::automorphisms(std::size_t dim) const {
  if (open_) throw Error(Error::Kind::unsupported_category, name_, "open categories are not enumerable");
  if (dim == 0) return {Matrix::identity(0)};
  auto it = autos_.find(dim);
  return it == autos_.end() ? std::vector<Matrix>{} : it->second;
}

std::vector<Matrix> StructureCategory::hom(std::size_t src, std::size_t dst) const {
  if (open_) throw Error(Error::Kind::unsupported_category, name_, "open categories are not enumerable");
  if (src == 0 || dst == 0) return {Matrix::zero(dst, src)};
  std::vector<Matrix> out;
  for (const auto& m : morphisms_)
    if (m.rows() == dst && m.cols() == src) out.push_back(m);
  return out;
}

ValidationReport validate_category(const StructureCategory& c) {
  ValidationReport report;
  if (c.is_open()) return report;
  const auto& mors = c.morphisms();
  const auto is_object = [&](std::size_t d) { return d == 0 || c.objects().count(d) > 0; };
  for (const auto& m : mors) {
    if (!is_object(m.rows()) || !is_object(m.cols()))
      report.add("unknown-object", m.to_string(), "morphism between unlisted objects");
  }
  for (auto d : c.objects())
    if (!c.contains(Matrix::identity(d)))
      report.add("missing-identity", "R^" + std::to_string(d), "identity not listed");

  std::set<Matrix> reported;
  const auto missing = [&](const char* code, const Matrix& m, const std::string& why) {
    if (reported.insert(m).second) report.add(code, m.to_string(), why);
  };
  for (const auto& f : mors)
    for (const auto& g : mors) {
      if (g.cols() != f.rows()) continue;
      Matrix gf = g * f;
      if (!c.contains(gf)) missing("missing-composite", gf, g.to_string() + " o " + f.to_string() + " not listed");
    }
  if (c.flags().is_groupoid) {
    for (const auto& f : mors) {
      auto inv = f.inverse();
      if (!inv) {
        report.add("missing-inverse", f.to_string(), "morphism is not invertible");
      } else if (!c.contains(*inv)) {
        missing("missing-inverse", *inv, "inverse of " + f.to_string() + " not listed");
      }
    }
  }
  const std::size_t top = c.max_dim();
  if (c.flags().has_sum) {
    for (auto a : c.objects())
      for (auto b : c.objects())
        if (a + b <= top && !is_object(a + b))
          report.add("missing-object-sum", "R^" + std::to_string(a + b), "dimension sum not an object");
    for (const auto& f : mors)
      for (const auto& g : mors) {
        if (f.rows() + g.rows() > top || f.cols() + g.cols() > top) continue;
        Matrix s = direct_sum(f, g);
        if (!c.contains(s)) missing("missing-sum", s, f.to_string() + " (+) " + g.to_string() + " not listed");
      }
  }
  if (c.flags().has_tensor) {
    for (const auto& f : mors)
      for (const auto& g : mors) {
        if (f.rows() * g.rows() > top || f.cols() * g.cols() > top) continue;
        Matrix t = kronecker(f, g);
        if (!c.contains(t)) missing("missing-tensor", t, f.to_string() + " (x) " + g.to_string() + " not listed");
      }
  }
  return report;
}

namespace {

// Closes `generators` (all n x n invertible) under multiplication.
std::optional<std::set<Matrix>> group_closure(std::size_t n, const std::vector<Matrix>& generators,
                                              std::size_t limit) {
  std::set<Matrix> group{Matrix::identity(n)};
  std::deque<Matrix> queue{Matrix::identity(n)};
  while (!queue.empty()) {
    Matrix x = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators) {
      Matrix y = g * x;
      if (group.insert(y).second) {
        if (group.size() > limit) return std::nullopt;
        queue.push_back(std::move(y));
      }
    }
  }
  return group;
}

void compositions(std::size_t n, const std::set<std::size_t>& parts, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (n == 0) {
    out.push_back(prefix);
    return;
  }
  for (auto p : parts) {
    if (p == 0 || p > n) continue;
    prefix.push_back(p);
    compositions(n - p, parts, prefix, out);
    prefix.pop_back();
  }
}

Matrix block_embed(const std::vector<std::size_t>& blocks, std::size_t which, const Matrix& g) {
  Matrix out(0, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    out = direct_sum(out, i == which ? g : Matrix::identity(blocks[i]));
  return out;
}

Matrix block_swap(const std::vector<std::size_t>& blocks, std::size_t i) {
  const std::size_t n = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
  std::size_t offset = 0;
  for (std::size_t k = 0; k < i; ++k) offset += blocks[k];
  const std::size_t a = blocks[i], b = blocks[i + 1];
  Matrix p(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < offset || k >= offset + a + b) p(k, k) = 1;
  }
  // first block (a) moves after the second (b)
  for (std::size_t k = 0; k < a; ++k) p(offset + b + k, offset + k) = 1;
  for (std::size_t k = 0; k < b; ++k) p(offset + k, offset + a + k) = 1;
  return p;
}

bool is_signed_perm_family(const StructureCategory& c) {
  return !c.is_open() && (c.name().rfind("signed_perm(", 0) == 0 || c.name() == "trivial");
}

StructureCategory signed_perm_or_open(std::size_t n) {
  if (n == 0) return StructureCategory::trivial();
  if (n <= 4) return StructureCategory::signed_perm(n);
  return StructureCategory::gl_open(n);
}

}  // namespace

StructureCategory generated_category(std::string name, const std::vector<Matrix>& generators,
                                     StructureCategory::Flags flags, std::size_t group_limit) {
  std::map<std::size_t, std::vector<Matrix>> by_dim;
  std::vector<Matrix> extra;
  std::size_t top = 0;
  for (const auto& g : generators) {
    top = std::max({top, g.rows(), g.cols()});
    if (g.is_square() && g.inverse())
      by_dim[g.rows()].push_back(g);
    else
      extra.push_back(g);
  }
  std::vector<Matrix> mors = extra;
  std::set<std::size_t> objects;
  for (auto& [dim, gens] : by_dim) {
    objects.insert(dim);
    auto group = group_closure(dim, gens, group_limit);
    if (!group) return StructureCategory::open(name, top, flags);
    mors.insert(mors.end(), group->begin(), group->end());
  }
  for (const auto& g : extra) {
    objects.insert(g.rows());
    objects.insert(g.cols());
  }
  objects.erase(0);
  return StructureCategory::finite(std::move(name), std::move(objects), std::move(mors), flags);
}

StructureCategory symmetric_sum_closure(const StructureCategory& c, std::size_t max_dim,
                                        std::size_t group_limit) {
  if (c.is_open()) return StructureCategory::gl_open(std::max(max_dim, c.max_dim()));
  if (is_signed_perm_family(c) && c.max_dim() <= 1) return signed_perm_or_open(max_dim);
  std::set<std::size_t> parts;
  for (auto d : c.objects())
    if (d > 0 && !c.automorphisms(d).empty()) parts.insert(d);
  std::vector<Matrix> mors;
  std::set<std::size_t> objects;
  for (std::size_t n = 1; n <= max_dim; ++n) {
    std::vector<std::vector<std::size_t>> comps;
    std::vector<std::size_t> prefix;
    compositions(n, parts, prefix, comps);
    if (comps.empty()) continue;
    std::vector<Matrix> gens;
    for (const auto& blocks : comps) {
      for (std::size_t i = 0; i < blocks.size(); ++i)
        for (const auto& g : c.automorphisms(blocks[i])) gens.push_back(block_embed(blocks, i, g));
      for (std::size_t i = 0; i + 1 < blocks.size(); ++i) gens.push_back(block_swap(blocks, i));
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    auto group = group_closure(n, gens, group_limit);
    if (!group) return StructureCategory::gl_open(max_dim);
    objects.insert(n);
    mors.insert(mors.end(), group->begin(), group->end());
  }
  for (const auto& m : c.morphisms())
    if (!(m.is_square() && m.inverse())) mors.push_back(m);
  auto flags = c.flags();
  flags.has_sum = true;
  return StructureCategory::finite(c.name() + "+sum(" + std::to_string(max_dim) + ")", std::move(objects),
                                   std::move(mors), flags);
}

// ---------------------------------------------------------------------------
// Functors

MatrixFunctor MatrixFunctor::identity() { return MatrixFunctor{}; }

MatrixFunctor MatrixFunctor::dual_inverse_transpose() {
  MatrixFunctor f;
  f.kind_ = Kind::dual_inverse_transpose;
  return f;
}

MatrixFunctor MatrixFunctor::determinant() {
  MatrixFunctor f;
  f.kind_ = Kind::determinant;
  return f;
}

MatrixFunctor MatrixFunctor::tensor_by(std::size_t k) {
  MatrixFunctor f;
  f.kind_ = Kind::tensor_by;
  f.k_ = k;
  return f;
}

MatrixFunctor MatrixFunctor::to_trivial() {
  MatrixFunctor f;
  f.kind_ = Kind::to_trivial;
  return f;
}

MatrixFunctor MatrixFunctor::table(std::string name, std::map<std::size_t, std::size_t> objects,
                                   std::map<Matrix, Matrix> morphisms) {
  MatrixFunctor f;
  f.kind_ = Kind::table;
  f.name_ = std::move(name);
  f.objects_ = std::move(objects);
  f.table_ = std::move(morphisms);
  return f;
}

MatrixFunctor MatrixFunctor::from_name(const std::string& name) {
  static const std::regex tensor(R"(\s*tensor\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch match;
  if (name == "identity") return identity();
  if (name == "dual") return dual_inverse_transpose();
  if (name == "det" || name == "determinant") return determinant();
  if (name == "trivial") return to_trivial();
  if (std::regex_match(name, match, tensor)) return tensor_by(std::stoul(match[1].str()));
  throw Error(Error::Kind::usage, name, "unknown builtin functor");
}

std::string MatrixFunctor::name() const {
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::dual_inverse_transpose: return "dual";
    case Kind::determinant: return "det";
    case Kind::tensor_by: return "tensor(" + std::to_string(k_) + ")";
    case Kind::to_trivial: return "trivial";
    case Kind::table: return name_;
  }
  return "?";
}

std::size_t MatrixFunctor::map_object(std::size_t dim) const {
  switch (kind_) {
    case Kind::identity:
    case Kind::dual_inverse_transpose: return dim;
    case Kind::determinant: return 1;
    case Kind::tensor_by: return dim * k_;
    case Kind::to_trivial: return 0;
    case Kind::table: {
      auto it = objects_.find(dim);
      if (it == objects_.end())
        throw Error(Error::Kind::domain, "R^" + std::to_string(dim), "object outside functor table");
      return it->second;
    }
  }
  return dim;
}

Matrix MatrixFunctor::apply(const Matrix& f) const {
  switch (kind_) {
    case Kind::identity: return f;
    case Kind::dual_inverse_transpose: {
      auto inv = f.inverse();
      if (!inv) throw Error(Error::Kind::domain, f.to_string(), "dual functor needs an invertible morphism");
      return inv->transpose();
    }
    case Kind::determinant: {
      if (!f.is_square()) throw Error(Error::Kind::domain, f.to_string(), "determinant of a non-square morphism");
      Matrix d(1, 1);
      d(0, 0) = f.determinant();
      return d;
    }
    case Kind::tensor_by: return kronecker(f, Matrix::identity(k_));
    case Kind::to_trivial: return Matrix::identity(0);
    case Kind::table: {
      if (f.rows() == 0 || f.cols() == 0) return Matrix::zero(map_object(f.rows()), map_object(f.cols()));
      auto it = table_.find(f);
      if (it == table_.end()) throw Error(Error::Kind::domain, f.to_string(), "morphism outside functor table");
      return it->second;
    }
  }
  return f;
}

StructureCategory MatrixFunctor::image_category(const StructureCategory& source) const {
  if (kind_ == Kind::identity) return source;
  if (kind_ == Kind::to_trivial) return StructureCategory::trivial();
  if (source.is_open()) {
    std::size_t top = 0;
    for (std::size_t d = 0; d <= source.max_dim(); ++d) top = std::max(top, map_object(d));
    return StructureCategory::gl_open(top);
  }
  if (is_signed_perm_family(source)) {
    if (kind_ == Kind::dual_inverse_transpose) return source;
    if (kind_ == Kind::determinant) return StructureCategory::signed_perm(1);
    if (kind_ == Kind::tensor_by) return signed_perm_or_open(source.max_dim() * k_);
  }
  std::vector<Matrix> images;
  for (const auto& m : source.morphisms()) {
    try {
      images.push_back(apply(m));
    } catch (const Error&) {
      // outside the domain: not part of the image
    }
  }
  return generated_category(name() + "(" + source.name() + ")", images, source.flags());
}

Matrix apply_functor(const MatrixFunctor& f, const Matrix& m) { return f.apply(m); }

ValidationReport validate_functor(const MatrixFunctor& f, const StructureCategory& domain,
                                  const StructureCategory& target) {
  ValidationReport report;
  if (domain.is_open()) {
    report.add("open-domain", domain.name(), "functor laws are only checked on finite domains");
    return report;
  }
  const auto& mors = domain.morphisms();
  std::map<Matrix, Matrix> image;
  for (const auto& m : mors) {
    try {
      Matrix fm = f.apply(m);
      if (fm.rows() != f.map_object(m.rows()) || fm.cols() != f.map_object(m.cols()))
        report.add("object-mismatch", m.to_string(), "image shape disagrees with object map");
      if (!target.contains(fm)) report.add("image-outside-target", m.to_string(), "image " + fm.to_string());
      image.emplace(m, std::move(fm));
    } catch (const Error& e) {
      report.add("undefined", m.to_string(), e.what());
    }
  }
  for (auto d : domain.objects()) {
    const Matrix id = Matrix::identity(d);
    auto it = image.find(id);
    if (it != image.end() && !it->second.is_identity())
      report.add("identity", id.to_string(), "identity not preserved");
  }
  for (const auto& a : mors)
    for (const auto& b : mors) {
      if (b.cols() != a.rows()) continue;
      auto ia = image.find(a), ib = image.find(b), iba = image.find(b * a);
      if (ia == image.end() || ib == image.end() || iba == image.end()) continue;
      if (ib->second * ia->second != iba->second)
        report.add("composition", b.to_string() + " o " + a.to_string(), "F(g o f) != F(g) o F(f)");
    }
  return report;
}

// ---------------------------------------------------------------------------
// Bifunctors

MatrixBifunctor MatrixBifunctor::from_name(const std::string& name) {
  if (name == "sum" || name == "direct_sum") return MatrixBifunctor(Kind::direct_sum);
  if (name == "tensor") return MatrixBifunctor(Kind::tensor);
  if (name == "hom") return MatrixBifunctor(Kind::hom);
  throw Error(Error::Kind::usage, name, "unknown builtin bifunctor");
}

std::string MatrixBifunctor::name() const {
  switch (kind_) {
    case Kind::direct_sum: return "sum";
    case Kind::tensor: return "tensor";
    case Kind::hom: return "hom";
  }
  return "?";
}

std::size_t MatrixBifunctor::map_objects(std::size_t a, std::size_t b) const {
  return kind_ == Kind::direct_sum ? a + b : a * b;
}

Matrix MatrixBifunctor::apply(const Matrix& f, const Matrix& g) const {
  switch (kind_) {
    case Kind::direct_sum: return direct_sum(f, g);
    case Kind::tensor: return kronecker(f, g);
    case Kind::hom: {
      auto inv = f.inverse();
      if (!inv) throw Error(Error::Kind::domain, f.to_string(), "hom needs an invertible first argument");
      return kronecker(g, inv->transpose());
    }
  }
  return f;
}

StructureCategory MatrixBifunctor::image_category(const StructureCategory& a, const StructureCategory& b,
                                                  std::size_t max_dim) const {
  if (a.is_open() || b.is_open()) return StructureCategory::gl_open(max_dim);
  if (is_signed_perm_family(a) && is_signed_perm_family(b)) return signed_perm_or_open(max_dim);
  std::vector<Matrix> images;
  for (const auto& f : a.morphisms())
    for (const auto& g : b.morphisms()) {
      if (map_objects(f.rows(), g.rows()) > max_dim || map_objects(f.cols(), g.cols()) > max_dim) continue;
      try {
        images.push_back(apply(f, g));
      } catch (const Error&) {
      }
    }
  auto flags = a.flags();
  flags.is_groupoid = a.flags().is_groupoid && b.flags().is_groupoid;
  auto generated = generated_category(name() + "(" + a.name() + "," + b.name() + ")", images, flags);
  if (kind_ == Kind::direct_sum && !generated.is_open()) return symmetric_sum_closure(generated, max_dim);
  return generated;
}

ValidationReport validate_bifunctor(const MatrixBifunctor& bf, const StructureCategory& left,
                                    const StructureCategory& right) {
  ValidationReport report;
  if (left.is_open() || right.is_open()) {
    report.add("open-domain", left.name() + "," + right.name(), "laws are only checked on finite domains");
    return report;
  }
  for (auto a : left.objects())
    for (auto b : right.objects()) {
      Matrix img = bf.apply(Matrix::identity(a), Matrix::identity(b));
      if (!img.is_identity())
        report.add("identity", std::to_string(a) + "," + std::to_string(b), "identity not preserved");
    }
  std::vector<std::pair<Matrix, Matrix>> lpairs, rpairs;
  for (const auto& f : left.morphisms())
    for (const auto& g : left.morphisms())
      if (g.cols() == f.rows()) lpairs.emplace_back(f, g);
  for (const auto& f : right.morphisms())
    for (const auto& g : right.morphisms())
      if (g.cols() == f.rows()) rpairs.emplace_back(f, g);
  for (const auto& [f, g] : lpairs)
    for (const auto& [f2, g2] : rpairs) {
      try {
        if (bf.apply(g, g2) * bf.apply(f, f2) != bf.apply(g * f, g2 * f2))
          report.add("interchange", g.to_string() + "," + g2.to_string(), "B(g,g')B(f,f') != B(gf,g'f')");
      } catch (const Error& e) {
        report.add("undefined", f.to_string(), e.what());
      }
    }
  return report;
}

// ---------------------------------------------------------------------------
// Norm bound

double operator_norm_estimate(const Matrix& m, int iterations) {
  const std::size_t r = m.rows(), c = m.cols();
  if (r == 0 || c == 0) return 0.0;
  std::vector<double> a(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a[i * c + j] = m(i, j).get_d();
  std::vector<double> v(c), w(r), u(c);
  for (std::size_t j = 0; j < c; ++j) v[j] = 1.0 + 0.137 * static_cast<double>(j);
  double lambda = 0;
  for (int it = 0; it < iterations; ++it) {
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0) return 0.0;
    for (double& x : v) x /= norm;
    for (std::size_t i = 0; i < r; ++i) {
      w[i] = 0;
      for (std::size_t j = 0; j < c; ++j) w[i] += a[i * c + j] * v[j];
    }
    for (std::size_t j = 0; j < c; ++j) {
      u[j] = 0;
      for (std::size_t i = 0; i < r; ++i) u[j] += a[i * c + j] * w[i];
    }
    double rq = 0;
    for (std::size_t j = 0; j < c; ++j) rq += v[j] * u[j];
    lambda = rq;
    v = u;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

NormBoundReport norm_bound_check(const Matrix& beta, const Rational& bound_r, const Matrix& f,
                                 std::size_t samples, std::uint64_t seed) {
  const std::size_t d = beta.rows();
  if (!beta.is_square()) throw Error(Error::Kind::precondition, beta.to_string(), "basis matrix must be square");
  if (f.cols() != d) throw Error(Error::Kind::composability, f.to_string(), "map does not act on R^d");
  auto beta_inv = beta.inverse();
  if (!beta_inv) throw Error(Error::Kind::precondition, beta.to_string(), "basis matrix is singular");
  const Matrix images = f * beta;
  const Rational r2 = bound_r * bound_r;
  for (std::size_t j = 0; j < d; ++j)
    if (column_norm2(images, j) > r2)
      throw Error(Error::Kind::precondition, "b" + std::to_string(j), "|f(b_i)| exceeds R");

  NormBoundReport rep;
  rep.dimension = d;
  rep.beta_inverse_norm = operator_norm_estimate(*beta_inv);
  rep.bound = std::sqrt(static_cast<double>(d)) * bound_r.get_d() * rep.beta_inverse_norm;
  rep.operator_norm = operator_norm_estimate(f);
  const double tol = 1e-9;
  bool holds = rep.operator_norm <= rep.bound * (1 + tol) + tol;

  const auto check = [&](const Matrix& x) {
    const Rational nx = column_norm2(x, 0);
    if (nx == 0) return;
    const Rational nfx = column_norm2(f * x, 0);
    const double ratio = std::sqrt(Rational(nfx / nx).get_d());
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > rep.bound * (1 + tol) + tol) holds = false;
    ++rep.samples_checked;
  };
  for (std::size_t j = 0; j < d; ++j) {
    Matrix col(d, 1);
    for (std::size_t i = 0; i < d; ++i) col(i, 0) = beta(i, j);
    check(col);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 10);
  for (std::size_t s = 0; s < samples; ++s) {
    Matrix x(d, 1);
    for (std::size_t i = 0; i < d; ++i) {
      x(i, 0) = Rational(num(rng), den(rng));
      x(i, 0).canonicalize();
    }
    check(x);
  }
  rep.holds = holds;
  return rep;
}

}  // namespace stratk

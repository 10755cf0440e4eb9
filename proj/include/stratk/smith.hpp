#pragma once

// Integer matrices and their Smith normal form.

#include <initializer_list>
#include <vector>

#include "stratk/error.hpp"
#include "stratk/matrix.hpp"

namespace stratk {

struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Integer> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init);
  static IntMatrix identity(std::size_t n);

  Integer& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  IntMatrix operator*(const IntMatrix& rhs) const;
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

struct SmithForm {
  IntMatrix u, d, v;               ///< u * a * v = d, u and v unimodular
  std::vector<Integer> diagonal;  ///< nonzero diagonal, d1 | d2 | ...
};

SmithForm smith_normal_form(const IntMatrix& a);

}  // namespace stratk

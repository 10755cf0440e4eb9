#include "stratk/smith.hpp"

#include <utility>

namespace stratk {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> init) : rows(init.size()) {
  cols = rows ? init.begin()->size() : 0;
  for (const auto& row : init) {
    if (row.size() != cols) throw Error(Error::Kind::domain, "", "ragged integer matrix");
    for (long x : row) data.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  IntMatrix out(rows, rhs.cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols; ++j) out(i, j) += (*this)(i, k) * rhs(k, j);
    }
  return out;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(a, c), m(b, c));
}
void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t r = 0; r < m.rows; ++r) std::swap(m(r, a), m(r, b));
}
// row a += k * row b
void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Integer& k) {
  for (std::size_t c = 0; c < m.cols; ++c) m(a, c) += k * m(b, c);
}
void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Integer& k) {
  for (std::size_t r = 0; r < m.rows; ++r) m(r, a) += k * m(r, b);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm s{IntMatrix::identity(a.rows), a, IntMatrix::identity(a.cols), {}};
  IntMatrix& d = s.d;
  const std::size_t n = std::min(a.rows, a.cols);
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pr = d.rows, pc = d.cols;
      for (std::size_t r = t; r < d.rows; ++r)
        for (std::size_t c = t; c < d.cols; ++c)
          if (d(r, c) != 0 && (pr == d.rows || abs(d(r, c)) < abs(d(pr, pc)))) {
            pr = r;
            pc = c;
          }
      if (pr == d.rows) return s;
      swap_rows(d, t, pr);
      swap_rows(s.u, t, pr);
      swap_cols(d, t, pc);
      swap_cols(s.v, t, pc);

      bool clean = true;
      for (std::size_t r = t + 1; r < d.rows; ++r) {
        if (d(r, t) == 0) continue;
        const Integer q = d(r, t) / d(t, t);
        add_row(d, r, t, -q);
        add_row(s.u, r, t, -q);
        clean = clean && d(r, t) == 0;
      }
      for (std::size_t c = t + 1; c < d.cols; ++c) {
        if (d(t, c) == 0) continue;
        const Integer q = d(t, c) / d(t, t);
        add_col(d, c, t, -q);
        add_col(s.v, c, t, -q);
        clean = clean && d(t, c) == 0;
      }
      if (!clean) continue;
      // the pivot must divide the rest of the block
      std::size_t bad = d.rows;
      for (std::size_t r = t + 1; r < d.rows && bad == d.rows; ++r)
        for (std::size_t c = t + 1; c < d.cols; ++c)
          if (d(r, c) % d(t, t) != 0) {
            bad = r;
            break;
          }
      if (bad == d.rows) break;
      add_row(d, t, bad, 1);
      add_row(s.u, t, bad, 1);
    }
    if (d(t, t) < 0) {
      for (std::size_t c = 0; c < d.cols; ++c) d(t, c) = -d(t, c);
      for (std::size_t c = 0; c < s.u.cols; ++c) s.u(t, c) = -s.u(t, c);
    }
    s.diagonal.push_back(d(t, t));
  }
  return s;
}

}  // namespace stratk

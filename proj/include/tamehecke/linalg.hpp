#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gf.hpp"

namespace tamehecke {

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<FieldElement> {
  static bool is_zero(const FieldElement& a) { return a.is_zero(); }
  static FieldElement inverse(const FieldElement& a) { return a.inv(); }
  static FieldElement one_like(const FieldElement& zero) { return zero.field().one(); }
};

template <>
struct ScalarTraits<mpq_class> {
  static bool is_zero(const mpq_class& a) { return sgn(a) == 0; }
  static mpq_class inverse(const mpq_class& a) { return 1 / a; }
  static mpq_class one_like(const mpq_class&) { return 1; }
};

/// Dense row-major matrix over an exact field. `zero` fixes the scalar ring
/// (for F_q it carries the field).
template <class T>
class Matrix {
 public:
  using Traits = ScalarTraits<T>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& zero)
      : rows_(rows), cols_(cols), zero_(zero), data_(rows * cols, zero) {}

  static Matrix identity(std::size_t n, const T& zero) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Traits::one_like(zero);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& zero() const { return zero_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  void append_row(const std::vector<T>& r) {
    require(r.size() == cols_, ErrorCode::size_mismatch, "row length differs from column count");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  Matrix operator*(const Matrix& o) const {
    require(cols_ == o.rows_, ErrorCode::size_mismatch, "matrix product shape mismatch");
    Matrix r(rows_, o.cols_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (Traits::is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  std::vector<T> operator*(const std::vector<T>& v) const {
    require(cols_ == v.size(), ErrorCode::size_mismatch, "matrix-vector shape mismatch");
    std::vector<T> r(rows_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::size_mismatch, "matrix sum shape mismatch");
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::size_mismatch, "matrix difference shape mismatch");
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
  }

  Matrix scaled(const T& s) const {
    Matrix r = *this;
    for (auto& v : r.data_) v *= s;
    return r;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!Traits::is_zero(v)) return false;
    return true;
  }

  struct Rref {
    Matrix reduced;
    std::vector<std::size_t> pivots;
  };

  // Gauss-Jordan; the pivot in each column is the first nonzero entry at or below the current row.
  Rref rref() const {
    Matrix m = *this;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t pr = r;
      while (pr < rows_ && Traits::is_zero(m(pr, c))) ++pr;
      if (pr == rows_) continue;
      if (pr != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap(m(r, j), m(pr, j));
      const T inv = Traits::inverse(m(r, c));
      for (std::size_t j = c; j < cols_; ++j) m(r, j) = m(r, j) * inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || Traits::is_zero(m(i, c))) continue;
        const T f = m(i, c);
        for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return {std::move(m), std::move(pivots)};
  }

  std::size_t rank() const { return rref().pivots.size(); }

  // One basis vector per free column, with a 1 in that column.
  std::vector<std::vector<T>> nullspace() const {
    const auto [m, pivots] = rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (is_pivot[f]) continue;
      std::vector<T> v(cols_, zero_);
      v[f] = Traits::one_like(zero_);
      for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m(i, f);
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  T zero_{};
  std::vector<T> data_;
};

using FqMatrix = Matrix<FieldElement>;
using RatMatrix = Matrix<mpq_class>;
using RatVector = std::vector<mpq_class>;

inline FqMatrix make_fq_matrix(std::size_t rows, std::size_t cols, const Field& f) {
  return FqMatrix(rows, cols, f.zero());
}
inline RatMatrix make_rat_matrix(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols, mpq_class(0)); }

/// Integer polynomial, coefficients low-to-high.
using IntPoly = std::vector<mpz_class>;

/// det(lambda I - M) by Faddeev-LeVerrier. Every coefficient must come out integral.
inline IntPoly char_poly(const RatMatrix& a) {
  require(a.rows() == a.cols(), ErrorCode::non_square, "char_poly needs a square matrix");
  const std::size_t n = a.rows();
  std::vector<mpq_class> c(n + 1);
  c[n] = 1;
  RatMatrix m = make_rat_matrix(n, n);
  const RatMatrix id = RatMatrix::identity(n, mpq_class(0));
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + id.scaled(c[n - k + 1]);
    const RatMatrix am = a * m;
    mpq_class trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    c[n - k] = -trace / static_cast<long>(k);
  }
  IntPoly out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    c[i].canonicalize();
    require(c[i].get_den() == 1, ErrorCode::internal_invariant, "non-integral characteristic coefficient");
    out[i] = c[i].get_num();
  }
  return out;
}

/// p(M) by Horner.
inline RatMatrix evaluate(const IntPoly& p, const RatMatrix& m) {
  require(m.rows() == m.cols(), ErrorCode::non_square, "polynomial evaluation needs a square matrix");
  const RatMatrix id = RatMatrix::identity(m.rows(), mpq_class(0));
  RatMatrix acc = make_rat_matrix(m.rows(), m.cols());
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * m + id.scaled(mpq_class(*it));
  return acc;
}

namespace detail {

using RatPoly = std::vector<mpq_class>;  // low-to-high, trimmed

inline void trim(RatPoly& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

inline RatPoly rat_rem(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size()) {
    const mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

inline RatPoly rat_monic_gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = rat_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  const mpq_class lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

}  // namespace detail

/// p / gcd(p, p') for a monic integer polynomial: same roots, each simple.
inline IntPoly squarefree_part(const IntPoly& p) {
  require(!p.empty() && p.back() == 1, ErrorCode::internal_invariant, "squarefree_part expects a monic polynomial");
  if (p.size() <= 2) return p;
  detail::RatPoly a(p.begin(), p.end()), da;
  for (std::size_t i = 1; i < p.size(); ++i) da.push_back(mpq_class(p[i] * static_cast<long>(i)));
  const detail::RatPoly g = detail::rat_monic_gcd(a, da);
  // long division a / g
  detail::RatPoly quo(a.size() - g.size() + 1, 0), rem = a;
  const std::size_t dg = g.size() - 1;
  for (std::size_t k = rem.size() - 1; k >= dg; --k) {
    const mpq_class f = rem[k] / g.back();
    quo[k - dg] = f;
    for (std::size_t i = 0; i <= dg; ++i) rem[k - dg + i] -= f * g[i];
    if (k == dg) break;
  }
  IntPoly out;
  for (auto& c : quo) {
    c.canonicalize();
    require(c.get_den() == 1, ErrorCode::internal_invariant, "non-integral squarefree factor");
    out.push_back(c.get_num());
  }
  return out;
}

inline nlohmann::json to_json_value(const mpq_class& v) {
  mpq_class c = v;
  c.canonicalize();
  return {{"numerator", c.get_num().get_str()}, {"denominator", c.get_den().get_str()}};
}

inline mpq_class rational_from_json(const nlohmann::json& j) {
  mpq_class v(mpz_class(j.at("numerator").get<std::string>()), mpz_class(j.at("denominator").get<std::string>()));
  v.canonicalize();
  return v;
}

}  // namespace tamehecke

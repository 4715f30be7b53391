#pragma once

#include <vector>

#include "gf.hpp"

namespace tamehecke {

/// Univariate polynomial over F_q, coefficients low-to-high, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Field f) : field_(std::move(f)) {}
  Poly(Field f, std::vector<FieldElement> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) { trim(); }

  static Poly constant(const FieldElement& a) { return Poly(a.field(), {a}); }
  // X - x
  static Poly linear_root(const FieldElement& x) { return Poly(x.field(), {-x, x.field().one()}); }
  static Poly monomial(const FieldElement& a, std::size_t k) {
    std::vector<FieldElement> c(k + 1, a.field().zero());
    c[k] = a;
    return Poly(a.field(), std::move(c));
  }

  const Field& field() const { return field_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<FieldElement>& coeffs() const { return c_; }

  FieldElement coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return field_.zero();
    return c_[k];
  }

  FieldElement operator()(const FieldElement& x) const {
    FieldElement r = field_.zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  Poly operator+(const Poly& o) const {
    std::vector<FieldElement> r(std::max(c_.size(), o.c_.size()), field_.zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    return Poly(field_, std::move(r));
  }

  Poly operator-() const {
    std::vector<FieldElement> r = c_;
    for (auto& v : r) v = -v;
    return Poly(field_, std::move(r));
  }

  Poly operator-(const Poly& o) const { return *this + (-o); }

  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(field_);
    std::vector<FieldElement> r(c_.size() + o.c_.size() - 1, field_.zero());
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(field_, std::move(r));
  }

  Poly operator*(const FieldElement& s) const {
    std::vector<FieldElement> r = c_;
    for (auto& v : r) v *= s;
    return Poly(field_, std::move(r));
  }

  // Euclidean division; returns {quotient, remainder}.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    require(!d.is_zero(), ErrorCode::division_by_zero, "polynomial division by zero");
    std::vector<FieldElement> rem = c_;
    const int dd = d.degree();
    std::vector<FieldElement> quo(std::max(0, degree() - dd + 1), field_.zero());
    const FieldElement lead_inv = d.c_.back().inv();
    for (int k = degree(); k >= dd; --k) {
      const FieldElement f = rem[k] * lead_inv;
      if (f.is_zero()) continue;
      quo[k - dd] = f;
      for (int i = 0; i <= dd; ++i) rem[k - dd + i] -= f * d.c_[i];
    }
    return {Poly(field_, std::move(quo)), Poly(field_, std::move(rem))};
  }

  bool operator==(const Poly& o) const { return c_ == o.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  Field field_;
  std::vector<FieldElement> c_;
};

inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace tamehecke

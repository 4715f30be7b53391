#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace tamehecke {

namespace detail {

struct FieldData {
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;  // monic, low-to-high, size k+1
  std::vector<std::uint32_t> exp;      // exp[i] = g^i, size q-1
  std::vector<std::uint32_t> log;      // log[exp[i]] = i, log[0] unused
  std::vector<std::uint32_t> pow_p;    // p^i, i <= k
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over F_p as coefficient vectors, low-to-high, trimmed.
using PPoly = std::vector<std::uint32_t>;

inline void trim(PPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

inline PPoly poly_mod(PPoly a, const PPoly& m, std::uint32_t p) {
  trim(a);
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t f = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - f * m[i] % p) % p);
    trim(a);
  }
  return a;
}

inline PPoly poly_mul(const PPoly& a, const PPoly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
  trim(r);
  return r;
}

// Monic polynomial of degree `deg` whose lower coefficients are the base-p digits of `code`.
inline PPoly monic_from_code(std::uint64_t code, std::uint32_t deg, std::uint32_t p) {
  PPoly r(deg + 1, 0);
  for (std::uint32_t i = 0; i < deg; ++i) {
    r[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  r[deg] = 1;
  return r;
}

inline bool is_irreducible(const PPoly& m, std::uint32_t p) {
  const std::uint32_t k = static_cast<std::uint32_t>(m.size() - 1);
  for (std::uint32_t d = 1; 2 * d <= k; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c)
      if (poly_mod(m, monic_from_code(c, d, p), p).empty()) return false;
  }
  return true;
}

}  // namespace detail

class Field;

/// An element of F_q stored as the base-p encoding of its coefficient vector.
class FieldElement {
 public:
  FieldElement() = default;

  std::uint32_t code() const { return code_; }
  bool is_zero() const { return code_ == 0; }
  bool is_one() const { return code_ == 1; }
  bool bound() const { return data_ != nullptr; }
  Field field() const;

  std::vector<std::uint32_t> coeffs() const {
    std::vector<std::uint32_t> c(data_->k);
    std::uint32_t v = code_;
    for (auto& digit : c) {
      digit = v % data_->p;
      v /= data_->p;
    }
    return c;
  }

  FieldElement operator+(const FieldElement& o) const {
    check(o);
    if (data_->k == 1) return make((code_ + o.code_) % data_->p);
    std::uint32_t a = code_, b = o.code_, r = 0;
    for (std::uint32_t i = 0; i < data_->k; ++i) {
      r += ((a % data_->p + b % data_->p) % data_->p) * data_->pow_p[i];
      a /= data_->p;
      b /= data_->p;
    }
    return make(r);
  }

  FieldElement operator-() const {
    if (data_->k == 1) return make((data_->p - code_) % data_->p);
    std::uint32_t a = code_, r = 0;
    for (std::uint32_t i = 0; i < data_->k; ++i) {
      r += ((data_->p - a % data_->p) % data_->p) * data_->pow_p[i];
      a /= data_->p;
    }
    return make(r);
  }

  FieldElement operator-(const FieldElement& o) const { return *this + (-o); }

  FieldElement operator*(const FieldElement& o) const {
    check(o);
    if (code_ == 0 || o.code_ == 0) return make(0);
    const std::uint32_t n = data_->q - 1;
    return make(data_->exp[(data_->log[code_] + data_->log[o.code_]) % n]);
  }

  FieldElement inv() const {
    require(code_ != 0, ErrorCode::division_by_zero, "inverse of zero");
    const std::uint32_t n = data_->q - 1;
    return make(data_->exp[(n - data_->log[code_]) % n]);
  }

  FieldElement operator/(const FieldElement& o) const {
    check(o);
    return *this * o.inv();
  }

  FieldElement pow(std::int64_t e) const {
    if (e < 0) return inv().pow(-e);
    if (e == 0) return make(1);
    if (code_ == 0) return make(0);
    const std::uint64_t n = data_->q - 1;
    const std::uint64_t l = data_->log[code_] * (static_cast<std::uint64_t>(e) % n) % n;
    return make(data_->exp[l]);
  }

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  bool operator==(const FieldElement& o) const { return code_ == o.code_ && data_ == o.data_; }
  bool operator<(const FieldElement& o) const { return code_ < o.code_; }

 private:
  friend class Field;
  FieldElement(std::shared_ptr<const detail::FieldData> data, std::uint32_t code)
      : data_(std::move(data)), code_(code) {}

  FieldElement make(std::uint32_t code) const { return FieldElement(data_, code); }

  void check(const FieldElement& o) const {
    require(data_ && data_ == o.data_, ErrorCode::field_mismatch, "operands from different fields");
  }

  std::shared_ptr<const detail::FieldData> data_;
  std::uint32_t code_ = 0;
};

/// F_q with q = p^k, elements enumerated by increasing base-p code.
class Field {
 public:
  Field() = default;

  std::uint32_t p() const { return data_->p; }
  std::uint32_t k() const { return data_->k; }
  std::uint32_t q() const { return data_->q; }
  const std::vector<std::uint32_t>& modulus() const { return data_->modulus; }

  FieldElement zero() const { return FieldElement(data_, 0); }
  FieldElement one() const { return FieldElement(data_, 1); }

  FieldElement element(std::uint32_t code) const {
    require(code < data_->q, ErrorCode::malformed_flag_data, "element code out of range");
    return FieldElement(data_, code);
  }

  // Image of an integer in the prime subfield.
  FieldElement from_int(std::int64_t n) const {
    const std::int64_t p = data_->p;
    return FieldElement(data_, static_cast<std::uint32_t>(((n % p) + p) % p));
  }

  FieldElement from_coeffs(const std::vector<std::uint32_t>& c) const {
    require(c.size() <= data_->k, ErrorCode::malformed_flag_data, "too many coefficients");
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      require(c[i] < data_->p, ErrorCode::malformed_flag_data, "coefficient not reduced mod p");
      code += c[i] * data_->pow_p[i];
    }
    return FieldElement(data_, code);
  }

  std::vector<FieldElement> elements() const {
    std::vector<FieldElement> out;
    out.reserve(data_->q);
    for (std::uint32_t c = 0; c < data_->q; ++c) out.emplace_back(FieldElement(data_, c));
    return out;
  }

  bool operator==(const Field& o) const { return data_ == o.data_; }

 private:
  friend class FieldElement;
  friend Field make_field(std::uint32_t, std::uint32_t, std::optional<std::vector<std::uint32_t>>);
  explicit Field(std::shared_ptr<const detail::FieldData> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::FieldData> data_;
};

inline Field FieldElement::field() const {
  require(data_ != nullptr, ErrorCode::field_mismatch, "unbound field element");
  return Field(data_);
}

inline constexpr std::uint32_t max_field_size = 1u << 16;

inline Field make_field(std::uint32_t p, std::uint32_t k = 1,
                        std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
  require(detail::is_prime(p), ErrorCode::non_prime_characteristic, std::to_string(p) + " is not prime");
  require(k >= 1, ErrorCode::malformed_modulus, "extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    require(q <= max_field_size, ErrorCode::field_too_large, "q exceeds 2^16");
  }

  auto data = std::make_shared<detail::FieldData>();
  data->p = p;
  data->k = k;
  data->q = static_cast<std::uint32_t>(q);
  data->pow_p.resize(k + 1);
  data->pow_p[0] = 1;
  for (std::uint32_t i = 1; i <= k; ++i) data->pow_p[i] = data->pow_p[i - 1] * p;

  if (modulus) {
    auto m = *modulus;
    require(m.size() == k + 1 && m.back() == 1, ErrorCode::malformed_modulus,
            "modulus must be monic of degree k");
    for (auto c : m) require(c < p, ErrorCode::malformed_modulus, "modulus coefficient not reduced mod p");
    require(detail::is_irreducible(m, p), ErrorCode::reducible_modulus, "modulus is reducible");
    data->modulus = std::move(m);
  } else if (k == 1) {
    data->modulus = {0, 1};
  } else {
    for (std::uint64_t c = 0; c < q; ++c) {
      auto m = detail::monic_from_code(c, k, p);
      if (detail::is_irreducible(m, p)) {
        data->modulus = std::move(m);
        break;
      }
    }
  }

  // Multiplication tables from a primitive element, found by scanning codes.
  auto to_poly = [&](std::uint32_t code) {
    detail::PPoly r(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      r[i] = code % p;
      code /= p;
    }
    detail::trim(r);
    return r;
  };
  auto to_code = [&](const detail::PPoly& a) {
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < a.size(); ++i) code += a[i] * data->pow_p[i];
    return code;
  };
  const std::uint32_t n = data->q - 1;
  data->exp.assign(n, 0);
  data->log.assign(data->q, 0);
  for (std::uint32_t g = 1; g < data->q; ++g) {
    const auto gp = to_poly(g);
    detail::PPoly cur{1};
    std::uint32_t order = 0;
    std::vector<char> seen(data->q, 0);
    bool primitive = true;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t c = to_code(cur);
      if (seen[c]) {
        primitive = false;
        break;
      }
      seen[c] = 1;
      data->exp[i] = c;
      data->log[c] = i;
      cur = detail::poly_mod(detail::poly_mul(cur, gp, p), data->modulus, p);
      ++order;
    }
    if (primitive && order == n && to_code(cur) == 1) break;
    require(g + 1 < data->q, ErrorCode::internal_invariant, "no primitive element found");
  }
  return Field(std::shared_ptr<const detail::FieldData>(std::move(data)));
}

inline nlohmann::json to_json_value(const FieldElement& a) {
  if (a.field().k() == 1) return a.code();
  return a.coeffs();
}

inline nlohmann::json to_json_value(const Field& f) {
  return {{"p", f.p()}, {"k", f.k()}, {"modulus", f.modulus()}};
}

inline std::string to_string(const FieldElement& a) { return to_json_value(a).dump(); }

}  // namespace tamehecke

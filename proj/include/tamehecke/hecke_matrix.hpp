#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sheaves.hpp"

namespace tamehecke {

/// Matrix of a local Hecke operator in the basis {F_z}: rows by y, columns by z.
struct HeckeMatrix {
  P1Point x;
  TorsionKind kind = TorsionKind::sky;
  std::uint32_t q = 0;
  FieldElement t;
  std::string method;
  std::vector<std::int64_t> entries;  // row-major q x q

  std::int64_t at(std::size_t y, std::size_t z) const { return entries[y * q + z]; }
  std::int64_t& at(std::size_t y, std::size_t z) { return entries[y * q + z]; }

  bool same_entries(const HeckeMatrix& o) const { return q == o.q && entries == o.entries; }

  RatMatrix to_rational() const {
    RatMatrix m = make_rat_matrix(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) m(i, j) = static_cast<long>(at(i, j));
    return m;
  }
};

inline HeckeMatrix make_hecke_matrix(const RamificationDivisor& D, const P1Point& x, TorsionKind kind,
                                     std::string method) {
  HeckeMatrix h;
  h.x = x;
  h.kind = kind;
  h.q = D.q();
  h.t = D.t();
  h.method = std::move(method);
  h.entries.assign(static_cast<std::size_t>(h.q) * h.q, 0);
  return h;
}

/// Torsion kinds with automorphism group Gm at x: Sky off D, K10 and K01 on D.
inline std::vector<TorsionKind> gm_kinds_at(const RamificationDivisor& D, const P1Point& x) {
  if (D.contains(x)) return {TorsionKind::k10, TorsionKind::k01};
  return {TorsionKind::sky};
}

/// Every (x, kind) with a Hecke matrix: points of P^1 in field order, infinity last.
inline std::vector<TorsionClass> hecke_family(const RamificationDivisor& D) {
  std::vector<TorsionClass> out;
  for (const auto& x : projective_line(D.field()))
    for (auto k : gm_kinds_at(D, x)) out.push_back({x, k});
  return out;
}

inline void require_gm_kind(const RamificationDivisor& D, const TorsionClass& c) {
  require(c.kind != TorsionKind::k0, ErrorCode::unsupported_kind,
          "K0 acts by the elementary operator, not by a matrix in this basis");
  if (D.contains(c.support))
    require(c.kind != TorsionKind::sky, ErrorCode::point_in_d, "skyscrapers live off D");
  else
    require(c.kind == TorsionKind::sky, ErrorCode::point_not_in_d, "tagged kinds live on D");
}

inline nlohmann::json to_json_value(const HeckeMatrix& h) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t y = 0; y < h.q; ++y) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t z = 0; z < h.q; ++z) r.push_back(h.at(y, z));
    rows.push_back(r);
  }
  return {{"x", to_json_value(h.x)}, {"torsion_kind", std::string(to_string(h.kind))},
          {"q", h.q},                {"t", to_json_value(h.t)},
          {"method", h.method},      {"entries", rows}};
}

}  // namespace tamehecke

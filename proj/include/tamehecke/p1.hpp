#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gf.hpp"

namespace tamehecke {

/// A point (a:b) of P^1, scaled so the last nonzero coordinate is 1.
class P1Point {
 public:
  P1Point() = default;

  static P1Point from_pair(const FieldElement& a, const FieldElement& b) {
    require(a.bound() && b.bound(), ErrorCode::field_mismatch, "unbound coordinates");
    require(!(a.is_zero() && b.is_zero()), ErrorCode::degenerate_input, "(0:0) is not a point");
    if (!b.is_zero()) return P1Point(a / b, a.field().one());
    return P1Point(a.field().one(), a.field().zero());
  }
  static P1Point finite(const FieldElement& x) { return P1Point(x, x.field().one()); }
  static P1Point infinity(const Field& f) { return P1Point(f.one(), f.zero()); }

  const FieldElement& a() const { return a_; }
  const FieldElement& b() const { return b_; }
  bool is_infinity() const { return b_.is_zero(); }

  FieldElement affine() const {
    require(!is_infinity(), ErrorCode::degenerate_input, "infinity has no affine coordinate");
    return a_;
  }

  bool operator==(const P1Point& o) const { return a_ == o.a_ && b_ == o.b_; }

  // Finite points by field order, infinity last.
  bool operator<(const P1Point& o) const {
    if (is_infinity() != o.is_infinity()) return o.is_infinity();
    return a_ < o.a_;
  }

 private:
  P1Point(FieldElement a, FieldElement b) : a_(std::move(a)), b_(std::move(b)) {}
  FieldElement a_, b_;
};

inline nlohmann::json to_json_value(const P1Point& x) {
  if (x.is_infinity()) return "inf";
  return to_json_value(x.a());
}

inline std::string to_string(const P1Point& x) { return x.is_infinity() ? std::string("inf") : to_string(x.affine()); }

// [u, v] = u0 v1 - u1 v0
inline FieldElement bracket(const P1Point& u, const P1Point& v) {
  return u.a() * v.b() - u.b() * v.a();
}

/// All points of P^1(F_q): finite points in field order, then infinity.
inline std::vector<P1Point> projective_line(const Field& f) {
  std::vector<P1Point> out;
  for (const auto& a : f.elements()) out.push_back(P1Point::finite(a));
  out.push_back(P1Point::infinity(f));
  return out;
}

/// D = [inf, 0, 1, t].
class RamificationDivisor {
 public:
  RamificationDivisor(Field field, FieldElement t) : field_(std::move(field)), t_(std::move(t)) {
    require(t_.field() == field_, ErrorCode::field_mismatch, "t lies in another field");
    require(!t_.is_zero() && !t_.is_one(), ErrorCode::degenerate_divisor, "t must avoid 0 and 1");
    points_ = {P1Point::infinity(field_), P1Point::finite(field_.zero()), P1Point::finite(field_.one()),
               P1Point::finite(t_)};
  }

  const Field& field() const { return field_; }
  const FieldElement& t() const { return t_; }
  std::uint32_t q() const { return field_.q(); }
  const std::array<P1Point, 4>& points() const { return points_; }

  std::optional<std::size_t> index_of(const P1Point& x) const {
    for (std::size_t i = 0; i < 4; ++i)
      if (points_[i] == x) return i;
    return std::nullopt;
  }
  bool contains(const P1Point& x) const { return index_of(x).has_value(); }
  bool contains(const FieldElement& x) const { return contains(P1Point::finite(x)); }

  std::size_t require_index(const P1Point& x) const {
    auto i = index_of(x);
    require(i.has_value(), ErrorCode::point_not_in_d, to_string(x) + " is not in D");
    return *i;
  }

 private:
  Field field_;
  FieldElement t_;
  std::array<P1Point, 4> points_;
};

/// x -> (a x + b)/(c x + d), scaled so the first nonzero entry is 1.
class Mobius {
 public:
  Mobius(FieldElement a, FieldElement b, FieldElement c, FieldElement d) {
    require(!(a * d - b * c).is_zero(), ErrorCode::degenerate_input, "singular Mobius matrix");
    FieldElement lead = !a.is_zero() ? a : (!b.is_zero() ? b : c);
    FieldElement s = lead.inv();
    m_ = {a * s, b * s, c * s, d * s};
  }

  static Mobius identity(const Field& f) { return Mobius(f.one(), f.zero(), f.zero(), f.one()); }

  // The map sending inf, 0, 1 to u, v, w.
  static Mobius from_images(const P1Point& u, const P1Point& v, const P1Point& w) {
    require(!(u == v) && !(v == w) && !(u == w), ErrorCode::coincident_points, "images must be distinct");
    // columns lambda*u and mu*v with lambda*u + mu*v = w
    const FieldElement det = bracket(u, v);
    const FieldElement lambda = bracket(w, v) / det;
    const FieldElement mu = bracket(u, w) / det;
    return Mobius(lambda * u.a(), mu * v.a(), lambda * u.b(), mu * v.b());
  }

  P1Point operator()(const P1Point& x) const {
    return P1Point::from_pair(m_[0] * x.a() + m_[1] * x.b(), m_[2] * x.a() + m_[3] * x.b());
  }

  Mobius compose(const Mobius& inner) const {
    const auto& n = inner.m_;
    return Mobius(m_[0] * n[0] + m_[1] * n[2], m_[0] * n[1] + m_[1] * n[3], m_[2] * n[0] + m_[3] * n[2],
                  m_[2] * n[1] + m_[3] * n[3]);
  }

  Mobius inverse() const { return Mobius(m_[3], -m_[1], -m_[2], m_[0]); }

  const std::array<FieldElement, 4>& entries() const { return m_; }
  bool operator==(const Mobius& o) const { return m_ == o.m_; }

 private:
  std::array<FieldElement, 4> m_;
};

/// Cross-ratio (z1,z2;z3,z4) = [z3,z1][z4,z2] / ([z3,z2][z4,z1]), so (inf,0;1,l) = l.
inline P1Point cross_ratio(const P1Point& z1, const P1Point& z2, const P1Point& z3, const P1Point& z4) {
  const std::array<const P1Point*, 4> z{&z1, &z2, &z3, &z4};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      require(!(*z[i] == *z[j]), ErrorCode::coincident_points, "cross-ratio needs distinct points");
  return P1Point::from_pair(bracket(z3, z1) * bracket(z4, z2), bracket(z3, z2) * bracket(z4, z1));
}

/// M_x: the Mobius map preserving D with M_x(inf) = x. Among the maps with those two
/// properties it is the one acting on D as the double transposition (inf x)(y z), which
/// is what makes the choice unique when t is harmonic or equianharmonic.
inline Mobius mobius_fixing_D(const RamificationDivisor& D, const P1Point& x) {
  const auto& pts = D.points();
  const std::size_t xi = D.require_index(x);
  if (xi == 0) return Mobius::identity(D.field());
  std::array<std::size_t, 4> target{};  // permutation of indices
  target[0] = xi;
  target[xi] = 0;
  std::array<std::size_t, 2> rest{};
  for (std::size_t i = 1, n = 0; i < 4; ++i)
    if (i != xi) rest[n++] = i;
  target[rest[0]] = rest[1];
  target[rest[1]] = rest[0];

  std::optional<Mobius> found;
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = 0; v < 4; ++v)
      for (std::size_t w = 0; w < 4; ++w) {
        if (u == v || v == w || u == w) continue;
        const Mobius m = Mobius::from_images(pts[u], pts[v], pts[w]);
        bool ok = true;
        for (std::size_t i = 0; i < 4 && ok; ++i) ok = m(pts[i]) == pts[target[i]];
        if (!ok) continue;
        require(!found, ErrorCode::internal_invariant, "M_x is not unique");
        found = m;
      }
  require(found.has_value(), ErrorCode::internal_invariant, "no Mobius map realizes M_x");
  return *found;
}

}  // namespace tamehecke

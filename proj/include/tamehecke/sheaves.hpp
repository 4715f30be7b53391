#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "p1.hpp"
#include "poly.hpp"

namespace tamehecke {

// Parabolic torsion sheaves of length 1: a skyscraper off D, or one of three kinds at a
// point of D. K0 has automorphisms Gm x Gm, the others Gm.
enum class TorsionKind { sky, k0, k10, k01 };

inline std::string_view to_string(TorsionKind k) {
  switch (k) {
    case TorsionKind::sky: return "Sky";
    case TorsionKind::k0: return "K0";
    case TorsionKind::k10: return "K10";
    case TorsionKind::k01: return "K01";
  }
  return "?";
}

inline std::optional<TorsionKind> torsion_kind_from_string(std::string_view s) {
  for (auto k : {TorsionKind::sky, TorsionKind::k0, TorsionKind::k10, TorsionKind::k01})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct TorsionClass {
  P1Point support;
  TorsionKind kind = TorsionKind::sky;

  bool operator==(const TorsionClass& o) const { return kind == o.kind && support == o.support; }
  bool operator<(const TorsionClass& o) const {
    if (support == o.support) return kind < o.kind;
    return support < o.support;
  }
};

inline nlohmann::json to_json_value(const TorsionClass& c) {
  return {{"support", to_json_value(c.support)}, {"kind", std::string(to_string(c.kind))}};
}

inline std::string to_string(const TorsionClass& c) {
  return std::string(to_string(c.kind)) + "(" + to_string(c.support) + ")";
}

/// O(d1) + O(d2) with d1 >= d2 and one flag per point of D, indexed like D.points().
/// Fiber coordinates of a section (f, g): (f(x), g(x)) at finite x, (lead_d1 f, lead_d2 g) at infinity.
struct ParabolicBundle {
  int d1 = 0;
  int d2 = 0;
  std::array<P1Point, 4> flags;

  int degree() const { return d1 + d2; }
  bool operator==(const ParabolicBundle& o) const { return d1 == o.d1 && d2 == o.d2 && flags == o.flags; }
};

inline nlohmann::json to_json_value(const ParabolicBundle& e) {
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& f : e.flags) flags.push_back(to_json_value(f));
  return {{"d1", e.d1}, {"d2", e.d2}, {"flags", flags}};
}

/// 2x2 matrix of a fiber map.
struct Mat2 {
  std::array<std::array<FieldElement, 2>, 2> m;

  FieldElement det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

  std::array<FieldElement, 2> apply(const FieldElement& u, const FieldElement& v) const {
    return {m[0][0] * u + m[0][1] * v, m[1][0] * u + m[1][1] * v};
  }
  P1Point apply(const P1Point& l) const {
    auto w = apply(l.a(), l.b());
    return P1Point::from_pair(w[0], w[1]);
  }

  P1Point preimage(const P1Point& l) const {
    const FieldElement d = det();
    require(!d.is_zero(), ErrorCode::internal_invariant, "preimage through a degenerate fiber map");
    const Mat2 inv{{{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}}};
    return inv.apply(l);
  }

  // For a rank-1 matrix.
  P1Point kernel() const {
    if (!m[0][0].is_zero() || !m[0][1].is_zero()) return P1Point::from_pair(-m[0][1], m[0][0]);
    return P1Point::from_pair(-m[1][1], m[1][0]);
  }
  P1Point image() const {
    if (!m[0][0].is_zero() || !m[1][0].is_zero()) return P1Point::from_pair(m[0][0], m[1][0]);
    return P1Point::from_pair(m[0][1], m[1][1]);
  }
};

/// An inclusion O(s0)+O(s1) -> O(t0)+O(t1): entry (i,j) is a section of O(t_i - s_j).
struct BasisChange {
  std::array<int, 2> source{};
  std::array<int, 2> target{};
  std::array<std::array<Poly, 2>, 2> entries;

  Mat2 fiber(const P1Point& p) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Poly& e = entries[i][j];
        r.m[i][j] = p.is_infinity() ? e.coeff(target[i] - source[j]) : e(p.a());
      }
    return r;
  }
};

/// Fiber coordinates of a section (f, g) of O(d1)+O(d2) at p.
inline std::array<FieldElement, 2> fiber_value(const Poly& f, const Poly& g, int d1, int d2, const P1Point& p) {
  if (p.is_infinity()) return {f.coeff(d1), g.coeff(d2)};
  return {f(p.a()), g(p.a())};
}

/// Solves inc * (u, v) = (f, g) for sections (u, v) of the source; absent when (f, g) is not in the image.
inline std::optional<std::pair<Poly, Poly>> section_preimage(const BasisChange& inc, const Poly& f, const Poly& g) {
  const Field fld = f.field();
  const int nu = std::max(0, inc.source[0] + 1), nv = std::max(0, inc.source[1] + 1);
  const int r0 = std::max(0, inc.target[0] + 1), r1 = std::max(0, inc.target[1] + 1);
  const std::size_t unknowns = static_cast<std::size_t>(nu + nv);
  FqMatrix sys = make_fq_matrix(static_cast<std::size_t>(r0 + r1), unknowns + 1, fld);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < (j == 0 ? nu : nv); ++k) {
      const std::size_t col = static_cast<std::size_t>(j == 0 ? k : nu + k);
      for (int i = 0; i < 2; ++i) {
        const Poly& e = inc.entries[i][j];
        for (int d = 0; d <= e.degree(); ++d) {
          const int row = d + k;
          require(row < (i == 0 ? r0 : r1), ErrorCode::internal_invariant, "basis change exceeds degree bounds");
          sys(static_cast<std::size_t>(i == 0 ? row : r0 + row), col) += e.coeff(d);
        }
      }
    }
  for (int d = 0; d < r0; ++d) sys(static_cast<std::size_t>(d), unknowns) = f.coeff(d);
  for (int d = 0; d < r1; ++d) sys(static_cast<std::size_t>(r0 + d), unknowns) = g.coeff(d);
  require(f.degree() < r0 && g.degree() < r1, ErrorCode::malformed_flag_data, "section exceeds degree bounds");
  const auto red = sys.rref();
  if (!red.pivots.empty() && red.pivots.back() == unknowns) return std::nullopt;
  require(red.pivots.size() == unknowns, ErrorCode::internal_invariant, "basis change is not injective");
  std::vector<FieldElement> u(static_cast<std::size_t>(nu), fld.zero()), v(static_cast<std::size_t>(nv), fld.zero());
  for (std::size_t i = 0; i < red.pivots.size(); ++i) {
    const std::size_t c = red.pivots[i];
    if (c < static_cast<std::size_t>(nu))
      u[c] = red.reduced(i, unknowns);
    else
      v[c - nu] = red.reduced(i, unknowns);
  }
  return std::make_pair(Poly(fld, u), Poly(fld, v));
}

struct LowerModification {
  ParabolicBundle bundle;
  BasisChange inclusion;  // new basis expressed in the old one
};

/// Extra data of a length-1 lower modification at x: a flag off D, or a tagged choice at D.
struct FlagData {
  TorsionKind kind = TorsionKind::sky;
  std::optional<P1Point> flag;

  static FlagData sky(const P1Point& l) { return {TorsionKind::sky, l}; }
  static FlagData k0() { return {TorsionKind::k0, std::nullopt}; }
  static FlagData k01(const P1Point& l) { return {TorsionKind::k01, l}; }
  static FlagData k10(const P1Point& l) { return {TorsionKind::k10, l}; }
};

namespace detail {

inline Poly vanishing_section(const P1Point& x) {
  const Field f = x.a().field();
  if (x.is_infinity()) return Poly::constant(f.one());
  return Poly::linear_root(x.a());
}

// Basis of {s : s(x) in l0} for s a section of O(d1)+O(d2), already in normal form.
inline BasisChange sublattice(int d1, int d2, const P1Point& x, const P1Point& l0) {
  const Field f = x.a().field();
  const Poly one = Poly::constant(f.one());
  const Poly zero(f);
  const Poly sx = vanishing_section(x);
  BasisChange b;
  b.target = {d1, d2};
  if (l0.is_infinity()) {
    b.source = {d1, d2 - 1};
    b.entries = {{{one, zero}, {zero, sx}}};
    return b;
  }
  const FieldElement c = l0.a();
  const Poly cp = x.is_infinity() ? Poly::monomial(c, static_cast<std::size_t>(d1 - d2)) : Poly::constant(c);
  if (d1 > d2) {
    b.source = {d1 - 1, d2};
    b.entries = {{{sx, cp}, {zero, one}}};
  } else {
    b.source = {d2, d1 - 1};
    b.entries = {{{cp, sx}, {one, zero}}};
  }
  return b;
}

// dim of {(f, g) : deg f <= a, deg g <= b, (f, g)(x) in l for each condition}.
inline long constrained_sections_dim(const Field& f, int a, int b,
                                     const std::vector<std::pair<P1Point, P1Point>>& conditions) {
  const int na = std::max(0, a + 1), nb = std::max(0, b + 1);
  if (na + nb == 0) return 0;
  FqMatrix sys = make_fq_matrix(0, static_cast<std::size_t>(na + nb), f);
  for (const auto& [x, l] : conditions) {
    std::vector<FieldElement> row(na + nb, f.zero());
    for (int i = 0; i < na; ++i) row[i] = x.is_infinity() ? (i == a ? l.b() : f.zero()) : l.b() * x.a().pow(i);
    for (int i = 0; i < nb; ++i)
      row[na + i] = x.is_infinity() ? (i == b ? -l.a() : f.zero()) : -(l.a() * x.a().pow(i));
    sys.append_row(row);
  }
  return static_cast<long>(na + nb) - static_cast<long>(sys.rank());
}

}  // namespace detail

inline ParabolicBundle twist(const ParabolicBundle& e, int n) { return {e.d1 + n, e.d2 + n, e.flags}; }

/// The flag that the K0 modification at x puts at x; a K10 choice must differ from it.
inline P1Point induced_flag(const RamificationDivisor& D, const ParabolicBundle& e, const P1Point& x) {
  const std::size_t xi = D.require_index(x);
  return detail::sublattice(e.d1, e.d2, x, e.flags[xi]).fiber(x).kernel();
}

/// Length-1 lower modification of e at x, together with the inclusion of the new basis.
inline LowerModification modify_with_inclusion(const RamificationDivisor& D, const ParabolicBundle& e,
                                               const P1Point& x, const FlagData& data) {
  const auto xi = D.index_of(x);
  P1Point l0;
  if (!xi) {
    require(data.kind == TorsionKind::sky, ErrorCode::malformed_flag_data, "only skyscrapers live off D");
    require(data.flag.has_value(), ErrorCode::malformed_flag_data, "a skyscraper modification needs a flag");
    l0 = *data.flag;
  } else {
    require(data.kind != TorsionKind::sky, ErrorCode::malformed_flag_data, "points of D need a tagged kind");
    if (data.kind == TorsionKind::k0) {
      l0 = e.flags[*xi];
    } else {
      require(data.flag.has_value(), ErrorCode::malformed_flag_data, "K10/K01 modifications need a flag");
      if (data.kind == TorsionKind::k01) {
        require(!(*data.flag == e.flags[*xi]), ErrorCode::flag_equals_induced_flag,
                "K01 flag must differ from the existing flag");
        l0 = *data.flag;
      } else {
        l0 = e.flags[*xi];
      }
    }
  }

  LowerModification out;
  out.inclusion = detail::sublattice(e.d1, e.d2, x, l0);
  out.bundle.d1 = out.inclusion.source[0];
  out.bundle.d2 = out.inclusion.source[1];
  const auto& pts = D.points();
  for (std::size_t i = 0; i < 4; ++i) {
    const Mat2 m = out.inclusion.fiber(pts[i]);
    if (!(pts[i] == x)) {
      out.bundle.flags[i] = m.preimage(e.flags[i]);
      continue;
    }
    require(m.image() == l0, ErrorCode::internal_invariant, "fiber image differs from the chosen line");
    const P1Point k = m.kernel();
    if (data.kind == TorsionKind::k10) {
      require(!(*data.flag == k), ErrorCode::flag_equals_induced_flag, "K10 flag must differ from the induced flag");
      out.bundle.flags[i] = *data.flag;
    } else {
      out.bundle.flags[i] = k;
    }
  }
  return out;
}

inline ParabolicBundle modify(const RamificationDivisor& D, const ParabolicBundle& e, const P1Point& x,
                              const FlagData& data) {
  return modify_with_inclusion(D, e, x, data).bundle;
}

enum class Direction { down, up };

/// T_x (down) and its inverse (up) for x in D.
inline ParabolicBundle elementary_shift(const RamificationDivisor& D, const ParabolicBundle& e, const P1Point& x,
                                        Direction dir) {
  D.require_index(x);
  if (dir == Direction::down) return modify(D, e, x, FlagData::k0());
  return modify(D, twist(e, 1), x, FlagData::k0());
}

/// T_D = product of T_x over the given points of D.
inline ParabolicBundle shift_at(const RamificationDivisor& D, ParabolicBundle e, const std::vector<P1Point>& pts) {
  for (const auto& p : pts) e = elementary_shift(D, e, p, Direction::down);
  return e;
}

/// Every length-1 lower modification of e at x with cokernel of the given kind, keyed by its flag.
/// Flags run over P^1 in field order with (1:0) last; K0 yields a single entry keyed by the existing flag.
inline std::vector<std::pair<P1Point, LowerModification>> lower_modifications(const RamificationDivisor& D,
                                                                              const ParabolicBundle& e,
                                                                              const P1Point& x, TorsionKind kind) {
  std::vector<std::pair<P1Point, LowerModification>> out;
  const auto xi = D.index_of(x);
  if (kind == TorsionKind::k0) {
    out.emplace_back(e.flags[D.require_index(x)], modify_with_inclusion(D, e, x, FlagData::k0()));
    return out;
  }
  std::optional<P1Point> forbidden;
  if (kind == TorsionKind::k01) forbidden = e.flags[D.require_index(x)];
  if (kind == TorsionKind::k10) forbidden = induced_flag(D, e, x);
  if (kind == TorsionKind::sky)
    require(!xi, ErrorCode::point_in_d, "skyscraper modifications live off D");
  for (const auto& l : projective_line(D.field())) {
    if (forbidden && l == *forbidden) continue;
    out.emplace_back(l, modify_with_inclusion(D, e, x, FlagData{kind, l}));
  }
  return out;
}

/// Splitting type of the sub-lattice {s : s(x_i) in l_i} of O(d1)+O(d2), found by h^0 probes:
/// h^0 of the sub-lattice twisted by -m is solved as a linear system on polynomial coefficients.
inline std::pair<int, int> splitting_type(const Field& f, int d1, int d2,
                                          const std::vector<std::pair<P1Point, P1Point>>& conditions) {
  auto h0 = [&](int m) { return detail::constrained_sections_dim(f, d1 - m, d2 - m, conditions); };
  const int total = d1 + d2 - static_cast<int>(conditions.size());
  int top = d1;
  while (2 * top >= total && h0(top) == 0) --top;
  const int e1 = top, e2 = total - top;
  auto expected = [&](int m) -> long { return std::max(0, e1 - m + 1) + std::max(0, e2 - m + 1); };
  bool consistent = e1 >= e2;
  for (int m = e2 - 2; m <= d1 + 1 && consistent; ++m) consistent = h0(m) == expected(m);
  require(consistent, ErrorCode::rank_deficient, "conditions do not cut out an index-one sub-lattice");
  return {e1, e2};
}

/// Ẽ = (O(2), no flags) + (O, all flags), and Ê: the same with l_0 = (1:1).
inline std::pair<ParabolicBundle, ParabolicBundle> standard_bundles(const RamificationDivisor& D) {
  const Field& f = D.field();
  const P1Point second = P1Point::from_pair(f.zero(), f.one());
  ParabolicBundle et{2, 0, {second, second, second, second}};
  ParabolicBundle eh = et;
  eh.flags[1] = P1Point::from_pair(f.one(), f.one());
  return {et, eh};
}

/// Cohpar(F_q): skyscrapers at field elements off D in field order, then for each of
/// inf, 0, 1, t the kinds K0, K10, K01.
inline std::vector<TorsionClass> enumerate_cohpar(const RamificationDivisor& D) {
  std::vector<TorsionClass> out;
  for (const auto& y : D.field().elements())
    if (!D.contains(y)) out.push_back({P1Point::finite(y), TorsionKind::sky});
  for (const auto& x : D.points())
    for (auto k : {TorsionKind::k0, TorsionKind::k10, TorsionKind::k01}) out.push_back({x, k});
  return out;
}

inline std::int64_t aut_order(const RamificationDivisor& D, const TorsionClass& c) {
  const std::int64_t u = static_cast<std::int64_t>(D.q()) - 1;
  return c.kind == TorsionKind::k0 ? u * u : u;
}

/// The generic modification of Ẽ with cokernel c, using the flag (g:1) wherever a flag is free.
inline ParabolicBundle generic_modification(const RamificationDivisor& D, const TorsionClass& c,
                                            const FieldElement& g) {
  require(!g.is_zero(), ErrorCode::malformed_flag_data, "the generic flag must avoid (0:1)");
  const ParabolicBundle et = standard_bundles(D).first;
  const P1Point l = P1Point::from_pair(g, D.field().one());
  switch (c.kind) {
    case TorsionKind::sky: return modify(D, et, c.support, FlagData::sky(l));
    case TorsionKind::k0: return modify(D, et, c.support, FlagData::k0());
    case TorsionKind::k10: return modify(D, et, c.support, FlagData::k10(l));
    case TorsionKind::k01: return modify(D, et, c.support, FlagData::k01(l));
  }
  return et;
}

/// alpha: Cohpar -> degree-1 relevant bundles.
inline ParabolicBundle alpha(const RamificationDivisor& D, const TorsionClass& c) {
  return generic_modification(D, c, D.field().one());
}

/// For a (1,0)-bundle: is there a sub line bundle O -> O(1)+O whose fibers are all the flags?
inline bool flags_from_global_section(const RamificationDivisor& D, const ParabolicBundle& e) {
  const Field& f = D.field();
  for (const auto& l : e.flags)
    if (l.is_infinity()) return false;
  // unknowns (s0, s1, w): sigma(x) - a_x w = 0, need a solution with w != 0
  FqMatrix sys = make_fq_matrix(0, 3, f);
  const auto& pts = D.points();
  for (std::size_t i = 0; i < 4; ++i) {
    const FieldElement a = e.flags[i].a();
    if (pts[i].is_infinity())
      sys.append_row({f.zero(), f.one(), -a});
    else
      sys.append_row({f.one(), pts[i].a(), -a});
  }
  for (const auto& v : sys.nullspace())
    if (!v[2].is_zero()) return true;
  return false;
}

struct RelevantLabel {
  TorsionClass label;
  P1Point pi;
};

/// The alpha-label of e if it lies in the relevant locus, after moving it to degree 1 with T_inf.
inline std::optional<RelevantLabel> classify_relevant(const RamificationDivisor& D, ParabolicBundle e) {
  const Field& f = D.field();
  const P1Point inf = P1Point::infinity(f);
  while (e.degree() > 1) e = elementary_shift(D, e, inf, Direction::down);
  while (e.degree() < 1) e = elementary_shift(D, e, inf, Direction::up);
  if (e.d1 != 1 || e.d2 != 0) return std::nullopt;
  int first_summand = 0;
  for (const auto& l : e.flags) first_summand += l.is_infinity() ? 1 : 0;
  if (first_summand >= 2) return std::nullopt;
  if (flags_from_global_section(D, e)) return std::nullopt;

  // Inclusion (sigma, tau) : (1,0) -> (2,0), first column (sigma, 0), second (tau, 1), with
  // sigma = s0 + s1 X, tau = t0 + t1 X + t2 X^2, taking the second summand onto every flag.
  const auto& pts = D.points();
  FqMatrix sys = make_fq_matrix(0, 5, f);
  for (std::size_t i = 0; i < 4; ++i) {
    const FieldElement a = e.flags[i].a(), b = e.flags[i].b();
    if (pts[i].is_infinity()) {
      sys.append_row({f.zero(), a, f.zero(), f.zero(), b});
    } else {
      const FieldElement p = pts[i].a();
      sys.append_row({a, a * p, b, b * p, b * p * p});
    }
  }
  const auto ker = sys.nullspace();
  require(ker.size() == 1, ErrorCode::internal_invariant, "inclusion into Ẽ is not unique");
  const auto& v = ker[0];
  const Poly sigma(f, {v[0], v[1]});
  const Poly tau(f, {v[2], v[3], v[4]});
  require(!sigma.is_zero(), ErrorCode::internal_invariant, "degenerate inclusion into Ẽ");
  const P1Point support = v[1].is_zero() ? inf : P1Point::finite(-v[0] / v[1]);
  const auto si = D.index_of(support);
  if (!si) return RelevantLabel{{support, TorsionKind::sky}, support};

  BasisChange inc;
  inc.source = {1, 0};
  inc.target = {2, 0};
  inc.entries = {{{sigma, tau}, {Poly(f), Poly::constant(f.one())}}};
  const Mat2 m = inc.fiber(support);
  const bool onto_second = m.image() == P1Point::from_pair(f.zero(), f.one());
  const bool kernel_is_flag = e.flags[*si] == m.kernel();
  require(onto_second || kernel_is_flag, ErrorCode::internal_invariant, "no flag condition holds at the support");
  TorsionKind kind = TorsionKind::k0;
  if (!kernel_is_flag) kind = TorsionKind::k10;
  if (!onto_second) kind = TorsionKind::k01;
  return RelevantLabel{{support, kind}, support};
}

inline std::int64_t aut_order(const RamificationDivisor& D, const ParabolicBundle& e) {
  const auto lab = classify_relevant(D, e);
  require(lab.has_value(), ErrorCode::not_in_relevant_locus, "bundle is outside the relevant locus");
  return aut_order(D, lab->label);
}

}  // namespace tamehecke

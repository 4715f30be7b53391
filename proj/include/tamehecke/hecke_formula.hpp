#pragma once

#include <cstdint>

#include "hecke_matrix.hpp"

namespace tamehecke {

// The closed formula for the diagonal entry alpha^x_{z,x}. `as_printed` is the expression
// "#{r} - q + 1" exactly as usually quoted; it disagrees with enumeration and breaks
// commutativity, and is kept only so that this can be demonstrated.
enum class DiagonalRule { corrected, as_printed };

struct FormulaOptions {
  DiagonalRule diagonal = DiagonalRule::corrected;
  // subtracted when neither x nor y lies in D (then 1 for one of them, 0 for both)
  std::int64_t outside_correction = 2;
};

namespace detail {

inline bool fixed_by_mobius(const RamificationDivisor& D, const FieldElement& z, const FieldElement& x,
                            const FieldElement& y) {
  const P1Point zp = P1Point::finite(z);
  if (!D.contains(zp)) return false;
  return mobius_fixing_D(D, zp)(P1Point::finite(x)) == P1Point::finite(y);
}

}  // namespace detail

/// alpha^x_{z,y}: coefficient of F_y in H_x F_z.
inline std::int64_t alpha_coeff(const RamificationDivisor& D, const P1Point& x, const FieldElement& z,
                                const FieldElement& y, const FormulaOptions& opt = {}) {
  if (x.is_infinity()) return z == y ? -1 : 0;
  const Field& f = D.field();
  const std::int64_t q = f.q();
  const FieldElement t = D.t(), one = f.one(), xv = x.a();

  if (!(xv == y)) {
    std::int64_t count = 0;
    const FieldElement den0 = -((xv - y) * (xv - y));
    for (const auto& r : f.elements()) {
      if (r.is_zero()) continue;
      const FieldElement num = (y * r - xv) * ((y - one) * (y - t) * r - (xv - one) * (xv - t));
      if (num / (den0 * r) == z) ++count;
    }
    const bool xd = D.contains(x), yd = D.contains(y);
    const std::int64_t corr = (xd && yd) ? 0 : ((xd || yd) ? 1 : opt.outside_correction);
    const std::int64_t extra = detail::fixed_by_mobius(D, z, xv, y) ? q : 0;
    return count - corr - extra;
  }

  std::int64_t count = 0;
  const FieldElement c = f.from_int(2) * xv - (one + t);
  for (const auto& r : f.elements())
    if (-((xv * r - one) * ((xv - one) * (xv - t) * r - c)) == z) ++count;
  if (opt.diagonal == DiagonalRule::as_printed) return count - q + 1;
  const std::int64_t outside = D.contains(x) ? 0 : q - 1;
  const std::int64_t extra = detail::fixed_by_mobius(D, z, xv, xv) ? q : 0;
  return count + outside - extra;
}

/// The degree-2 map from flags at x of T_y^{(1:1)}Ẽ to the coarse degree-0 label.
/// For x != y the flag is (a:b) in the fiber coordinates of Ẽ at x; for x = y it is (r:s),
/// standing for the flag spanned by (s + r(X - y), s).
inline P1Point degree2_image(const RamificationDivisor& D, const FieldElement& y, const FieldElement& x,
                             const P1Point& flag) {
  require(!D.contains(y) && !D.contains(x), ErrorCode::point_in_d, "degree-2 map needs x, y off D");
  const Field& f = D.field();
  const FieldElement t = D.t(), one = f.one();
  const FieldElement a = flag.a(), b = flag.b();
  if (!(x == y)) {
    const FieldElement num = (y * a - x * b) * ((y - one) * (y - t) * a - (x - one) * (x - t) * b);
    const FieldElement den = -((x - y) * (x - y) * a * b);
    return P1Point::from_pair(num, den);
  }
  const FieldElement r = a, s = b;
  const FieldElement num = (r * y - s) * ((y - one) * (y - t) * r - (f.from_int(2) * y - (one + t)) * s);
  return P1Point::from_pair(num, -(s * s));
}

/// Whether T_x^{(r:1)}T_y^{(1:1)}Ẽ and T_x^{(s:1)}T_y^{(1:1)}Ẽ are isomorphic, by the closed criterion.
inline bool same_fiber(const RamificationDivisor& D, const FieldElement& x, const FieldElement& y,
                       const FieldElement& r, const FieldElement& s) {
  require(!D.contains(y) && !D.contains(x), ErrorCode::point_in_d, "same_fiber needs x, y off D");
  require(!(x == y) && !(r == s), ErrorCode::degenerate_input, "same_fiber needs x != y and r != s");
  const Field& f = D.field();
  const FieldElement one = f.one(), t = D.t();
  if (!(r * s == x * (x - one) * (x - t) / (y * (y - one) * (y - t)))) return false;
  for (const auto& p : {f.zero(), one, t}) {
    const FieldElement e = (x - p) / (y - p);
    if (r == e || s == e) return false;
  }
  return true;
}

/// H_x in the basis {F_z} from the closed formula. For x in D both Gm-kinds get this matrix.
inline HeckeMatrix formula_matrix(const RamificationDivisor& D, const P1Point& x, TorsionKind kind,
                                  const FormulaOptions& opt = {}) {
  require_gm_kind(D, {x, kind});
  HeckeMatrix h = make_hecke_matrix(D, x, kind, "formula");
  const auto elems = D.field().elements();
  for (std::size_t yi = 0; yi < h.q; ++yi)
    for (std::size_t zi = 0; zi < h.q; ++zi) h.at(yi, zi) = alpha_coeff(D, x, elems[zi], elems[yi], opt);
  return h;
}

}  // namespace tamehecke

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cusp.hpp"
#include "hecke_matrix.hpp"

namespace tamehecke {

/// H_c by enumeration: entry (y, z) is the sum of F_z over the T_inf^{-1}-shifted labels of all
/// lower modifications of T_y^{(g:1)}Ẽ with cokernel c.
inline HeckeMatrix oracle_matrix(const RamificationDivisor& D, const TorsionClass& c, const CuspBasis& basis,
                                 const FieldElement& g) {
  require_gm_kind(D, c);
  require(basis.forms.size() == D.q(), ErrorCode::basis_unsolved, "cusp basis has not been solved");
  HeckeMatrix h = make_hecke_matrix(D, c.support, c.kind, "oracle");
  const auto elems = D.field().elements();
  const P1Point inf = P1Point::infinity(D.field());
  for (std::size_t yi = 0; yi < h.q; ++yi) {
    const ParabolicBundle ey = basis_representative(D, elems[yi], g);
    std::vector<mpq_class> row(h.q, 0);
    for (const auto& [flag, mod] : lower_modifications(D, ey, c.support, c.kind)) {
      const auto lab = classify_relevant(D, elementary_shift(D, mod.bundle, inf, Direction::up));
      if (!lab) continue;
      const std::size_t li = basis.index_of(lab->label);
      for (std::size_t zi = 0; zi < h.q; ++zi) row[zi] += basis.value(zi, li);
    }
    for (std::size_t zi = 0; zi < h.q; ++zi) {
      row[zi].canonicalize();
      require(row[zi].get_den() == 1 && row[zi].get_num().fits_slong_p(), ErrorCode::internal_invariant,
              "non-integral Hecke coefficient");
      h.at(yi, zi) = row[zi].get_num().get_si();
    }
  }
  return h;
}

inline HeckeMatrix oracle_matrix(const RamificationDivisor& D, const TorsionClass& c, const CuspBasis& basis) {
  return oracle_matrix(D, c, basis, D.field().one());
}

/// Inclusion of T_y^{(1:1)}Ẽ into Ẽ.
inline LowerModification degree1_representative(const RamificationDivisor& D, const FieldElement& y) {
  const ParabolicBundle et = standard_bundles(D).first;
  const P1Point l = P1Point::from_pair(D.field().one(), D.field().one());
  return modify_with_inclusion(D, et, P1Point::finite(y), FlagData::sky(l));
}

/// Converts a flag at x in the coordinates used by the degree-2 map into fiber coordinates of
/// T_y^{(1:1)}Ẽ: for x != y it is (a:b) in Ẽ at x; for x = y it is (r:s), the flag of (s + r(X - y), s).
inline P1Point degree2_flag_to_fiber(const LowerModification& ey, const FieldElement& y, const FieldElement& x,
                                     const P1Point& flag) {
  const P1Point xp = P1Point::finite(x);
  if (!(x == y)) return ey.inclusion.fiber(xp).preimage(flag);
  const Poly pi = Poly::linear_root(y);
  const Poly sec0 = Poly::constant(flag.b()) + pi * flag.a();
  const Poly sec1 = Poly::constant(flag.b());
  const auto pre = section_preimage(ey.inclusion, sec0, sec1);
  require(pre.has_value(), ErrorCode::internal_invariant, "section does not lie in T_y Ẽ");
  const auto v = fiber_value(pre->first, pre->second, ey.bundle.d1, ey.bundle.d2, xp);
  return P1Point::from_pair(v[0], v[1]);
}

/// Label of the degree-0 modification T_x^{flag} T_y^{(1:1)}Ẽ, flag in degree-2-map coordinates.
inline std::optional<RelevantLabel> degree2_oracle_label(const RamificationDivisor& D, const FieldElement& y,
                                                         const FieldElement& x, const P1Point& flag) {
  require(!D.contains(y) && !D.contains(x), ErrorCode::point_in_d, "degree-2 map needs x, y off D");
  const LowerModification ey = degree1_representative(D, y);
  const P1Point l = degree2_flag_to_fiber(ey, y, x, flag);
  return classify_relevant(D, modify(D, ey.bundle, P1Point::finite(x), FlagData::sky(l)));
}

struct SpecialPreimageRow {
  std::string description;
  P1Point flag;  // in Ẽ coordinates at x
  std::optional<TorsionClass> got;
  std::optional<TorsionClass> expected;
  bool pass = false;
};

struct SpecialPreimageReport {
  std::vector<SpecialPreimageRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return !rows.empty();
  }
};

/// The special flags of the degree-2 map at x for T_y^{(1:1)}Ẽ, and the bundles they must reach:
/// (1:0) -> Ê(-1); (0:1) -> T_D(Ê(1)); and for each split {p1, p2 | p3} of {0, 1, t}, with
/// r = (x-p1)(x-p2)/((y-p1)(y-p2)) and s = (x-p3)/(y-p3): (r:1) -> T_p1 T_p2 Ẽ if r = s, otherwise
/// (r:1) -> T_p1 T_p2 Ê and (s:1) -> T_p3 T_inf Ê.
inline SpecialPreimageReport special_preimage_check(const RamificationDivisor& D, const FieldElement& x,
                                                    const FieldElement& y) {
  require(!D.contains(y) && !D.contains(x), ErrorCode::point_in_d, "special preimages need x, y off D");
  require(!(x == y), ErrorCode::degenerate_input, "special preimages need x != y");
  const Field& f = D.field();
  const auto [et, eh] = standard_bundles(D);
  const auto& pts = D.points();
  const LowerModification ey = degree1_representative(D, y);
  const P1Point xp = P1Point::finite(x);

  SpecialPreimageReport rep;
  auto add = [&](std::string desc, const P1Point& flag, const ParabolicBundle& target, bool want_k0) {
    SpecialPreimageRow row;
    row.description = std::move(desc);
    row.flag = flag;
    const P1Point l = ey.inclusion.fiber(xp).preimage(flag);
    const auto got = classify_relevant(D, modify(D, ey.bundle, xp, FlagData::sky(l)));
    const auto exp = classify_relevant(D, target);
    if (got) row.got = got->label;
    if (exp) row.expected = exp->label;
    row.pass = got && exp && got->label == exp->label && ((got->label.kind == TorsionKind::k0) == want_k0);
    rep.rows.push_back(std::move(row));
  };
  add("(1:0) -> Ê(-1)", P1Point::from_pair(f.one(), f.zero()), twist(eh, -1), false);
  add("(0:1) -> T_D Ê(1)", P1Point::from_pair(f.zero(), f.one()),
      shift_at(D, twist(eh, 1), {pts.begin(), pts.end()}), false);
  for (std::size_t k = 1; k < 4; ++k) {
    std::vector<P1Point> pair;
    for (std::size_t i = 1; i < 4; ++i)
      if (i != k) pair.push_back(pts[i]);
    const FieldElement p1 = pair[0].a(), p2 = pair[1].a(), p3 = pts[k].a();
    const FieldElement r = (x - p1) * (x - p2) / ((y - p1) * (y - p2));
    const FieldElement s = (x - p3) / (y - p3);
    const std::string names = to_string(pair[0]) + "," + to_string(pair[1]) + "|" + to_string(pts[k]);
    if (r == s) {
      add("r = s [" + names + "] -> T T Ẽ", P1Point::finite(r), shift_at(D, et, pair), true);
    } else {
      add("r [" + names + "] -> T T Ê", P1Point::finite(r), shift_at(D, eh, pair), false);
      add("s [" + names + "] -> T T_inf Ê", P1Point::finite(s), shift_at(D, eh, {pts[k], pts[0]}), false);
    }
  }
  return rep;
}

}  // namespace tamehecke

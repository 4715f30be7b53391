#include <gtest/gtest.h>

#include <tamehecke/cusp.hpp>

using namespace tamehecke;

namespace {

struct Instance {
  int p, t;
};
const std::vector<Instance> kInstances{{5, 2}, {5, 3}, {7, 3}, {7, 5}, {11, 6}, {13, 2}};

RamificationDivisor divisor(int p, int t) {
  const Field f = make_field(p);
  return RamificationDivisor(f, f.element(t));
}

// Saturated maps O(degree) -> e by listing every pair of polynomials, bucketed by the set I of
// D-points where the image lies in the flag.
std::array<long, 16> brute_saturated(const RamificationDivisor& D, int degree, const ParabolicBundle& e) {
  const Field& f = D.field();
  const int a = e.d1 - degree, b = e.d2 - degree;
  const int na = std::max(0, a + 1), nb = std::max(0, b + 1);
  const int n = na + nb;
  std::array<long, 16> count{};
  if (n == 0) return count;
  const auto el = f.elements();
  std::vector<std::uint32_t> digits(n, 0);
  for (;;) {
    std::vector<FieldElement> cs, ct;
    for (int i = 0; i < na; ++i) cs.push_back(el[digits[i]]);
    for (int i = 0; i < nb; ++i) ct.push_back(el[digits[na + i]]);
    const Poly s(f, cs), t(f, ct);
    bool ok = !(s.is_zero() && t.is_zero());
    if (ok) ok = gcd(s, t).degree() == 0;
    const FieldElement s_inf = a >= 0 ? s.coeff(a) : f.zero(), t_inf = b >= 0 ? t.coeff(b) : f.zero();
    if (ok) ok = !(s_inf.is_zero() && t_inf.is_zero());
    unsigned mask = 0;
    for (std::size_t i = 0; ok && i < 4; ++i) {
      const P1Point& x = D.points()[i];
      const FieldElement u = x.is_infinity() ? s_inf : s(x.a()), v = x.is_infinity() ? t_inf : t(x.a());
      if ((u * e.flags[i].b() - v * e.flags[i].a()).is_zero()) mask |= 1u << i;
    }
    if (ok) ++count[mask];
    int k = 0;
    while (k < n && ++digits[k] == f.q()) digits[k++] = 0;
    if (k == n) break;
  }
  return count;
}

ParabolicLineBundle line(int degree, unsigned mask) {
  ParabolicLineBundle L{degree, {}};
  for (unsigned i = 0; i < 4; ++i) L.in_I[i] = (mask >> i) & 1u;
  return L;
}

}  // namespace

TEST(CuspSystem, DimensionIsQ) {
  for (auto [p, t] : kInstances) {
    const RamificationDivisor D = divisor(p, t);
    const CuspSystem sys = build_cusp_system(D);
    EXPECT_EQ(sys.unknowns.size(), D.q() + 9);
    EXPECT_EQ(sys.matrix.rows(), 24u);
    EXPECT_EQ(sys.matrix.nullspace().size(), D.q()) << "q=" << p << " t=" << t;
  }
  for (auto [p, k, t] : std::vector<std::array<int, 3>>{{2, 2, 2}, {2, 3, 2}, {3, 2, 5}}) {
    const Field f = make_field(p, k);
    const RamificationDivisor D(f, f.element(t));
    EXPECT_EQ(build_cusp_system(D).matrix.nullspace().size(), D.q());
  }
}

TEST(CuspSystem, ClassRowCoefficients) {
  const RamificationDivisor D = divisor(5, 2);
  const CuspSystem sys = build_cusp_system(D);
  const P1Point inf = P1Point::infinity(D.field());
  // rows are ordered by D-point, K10 before K01; inf comes first
  const auto row = sys.matrix.row(0);
  for (std::size_t i = 0; i < sys.unknowns.size(); ++i) {
    const auto& c = sys.unknowns[i];
    mpq_class want = 0;
    if (c == TorsionClass{inf, TorsionKind::k0}) want = mpq_class(1, 16);
    if (c == TorsionClass{inf, TorsionKind::k10}) want = mpq_class(1, 4);
    EXPECT_EQ(row[i], want) << to_string(c);
  }
}

TEST(CuspSystem, SectionRowsAddOneToTheRank) {
  for (auto [p, t] : kInstances) {
    const RamificationDivisor D = divisor(p, t);
    const CuspSystem sys = build_cusp_system(D);
    RatMatrix classes = make_rat_matrix(0, sys.matrix.cols());
    for (std::size_t i = 0; i < sys.class_rows; ++i) classes.append_row(sys.matrix.row(i));
    EXPECT_EQ(classes.rank(), 8u);
    EXPECT_EQ(sys.matrix.rank(), 9u);
  }
}

TEST(CuspSystem, AllKindSectionRowsOverconstrain) {
  // Letting a section pick K0 at a point adds four independent conditions.
  for (auto [p, t] : std::vector<Instance>{{5, 2}, {7, 3}}) {
    const RamificationDivisor D = divisor(p, t);
    const CuspSystem sys = build_cusp_system(D, SectionRows::all_kinds);
    EXPECT_EQ(sys.matrix.rows(), 89u);
    EXPECT_EQ(sys.matrix.nullspace().size(), D.q() - 4);
  }
}

TEST(CuspBasis, NormalizationAndIdentities) {
  for (auto [p, t] : kInstances) {
    const RamificationDivisor D = divisor(p, t);
    const Field& f = D.field();
    const CuspBasis b = solve_basis(D);
    ASSERT_EQ(b.forms.size(), D.q());
    const auto el = f.elements();
    const P1Point inf = P1Point::infinity(f);
    const auto linf = classify_relevant(D, modify(D, standard_bundles(D).first, inf,
                                                 FlagData::k01(P1Point::finite(f.one()))));
    ASSERT_TRUE(linf);
    for (std::size_t z = 0; z < el.size(); ++z) {
      const CuspForm& fz = b.forms[z];
      EXPECT_EQ(*fz.z, el[z]);
      EXPECT_EQ(fz.at(linf->label), -1);
      for (std::size_t y = 0; y < el.size(); ++y) {
        const auto ly = classify_relevant(D, basis_representative(D, el[y], f.one()));
        EXPECT_EQ(fz.at(ly->label), y == z ? 1 : 0);
      }
      for (const auto& x : D.points()) {
        const mpq_class v0 = fz.at({x, TorsionKind::k0});
        EXPECT_EQ(fz.at({x, TorsionKind::k10}), -v0 / (p - 1));
        EXPECT_EQ(fz.at({x, TorsionKind::k01}), -v0 / (p - 1));
      }
      for (std::size_t i = 0; i < fz.labels.size(); ++i) {
        const P1Point& s = fz.labels[i].support;
        if (!(s == inf) && !(s == P1Point::finite(el[z]))) EXPECT_EQ(fz.values[i], 0) << to_string(fz.labels[i]);
      }
    }
  }
}

TEST(CuspBasis, Json) {
  const RamificationDivisor D = divisor(5, 2);
  const auto j = to_json_value(solve_basis(D).forms[3]);
  EXPECT_EQ(j["z"], 3);
  EXPECT_EQ(j["values"].size(), 14u);
}

TEST(SaturatedHoms, DegreeObstruction) {
  const RamificationDivisor D = divisor(5, 2);
  const ParabolicBundle e = alpha(D, {P1Point::finite(D.field().element(3)), TorsionKind::sky});
  for (unsigned mask = 0; mask < 16; ++mask) EXPECT_EQ(count_saturated_homs(D, line(2, mask), e), 0);
}

TEST(SaturatedHoms, MatchesEnumeration) {
  const RamificationDivisor D = divisor(5, 2);
  const auto labels = enumerate_cohpar(D);
  for (const auto& c : labels) {
    const ParabolicBundle e = alpha(D, c);
    for (int n = -1; n <= 1; ++n) {
      const auto brute = brute_saturated(D, n, e);
      for (unsigned mask = 0; mask < 16; ++mask)
        EXPECT_EQ(count_saturated_homs(D, line(n, mask), e), brute[mask])
            << to_string(c) << " n=" << n << " mask=" << mask;
    }
  }
  // a wider window on the standard bundle and one relevant bundle
  for (const auto& e : {standard_bundles(D).first, alpha(D, labels.front())}) {
    const auto brute = brute_saturated(D, -2, e);
    for (unsigned mask = 0; mask < 16; ++mask) EXPECT_EQ(count_saturated_homs(D, line(-2, mask), e), brute[mask]);
  }
}

TEST(SaturatedHoms, ConstantOnIsomorphismClasses) {
  const RamificationDivisor D = divisor(7, 3);
  const Field& f = D.field();
  for (const auto& c : enumerate_cohpar(D)) {
    const ParabolicBundle a = alpha(D, c);
    for (std::uint32_t g = 2; g < 7; g += 2) {
      ParabolicBundle b;
      try {
        b = generic_modification(D, c, f.element(g));
      } catch (const Error&) {
        continue;
      }
      ASSERT_EQ(classify_relevant(D, b)->label, c);
      for (int n = -2; n <= 1; ++n)
        for (unsigned mask = 0; mask < 16; ++mask)
          EXPECT_EQ(count_saturated_homs(D, line(n, mask), a), count_saturated_homs(D, line(n, mask), b));
    }
  }
}

TEST(Reordered, BasisFormsPass) {
  for (auto [p, t] : std::vector<Instance>{{5, 2}, {7, 3}}) {
    const RamificationDivisor D = divisor(p, t);
    const auto table = saturated_count_table(D);
    for (const auto& fz : solve_basis(D).forms) {
      const auto rep = verify_cusp_reordered(D, fz, table);
      EXPECT_EQ(rep.checks.size(), 7u * 16u);
      EXPECT_TRUE(rep.all_pass());
    }
  }
}

TEST(Reordered, ZeroPassesIndicatorFails) {
  const RamificationDivisor D = divisor(5, 2);
  const auto table = saturated_count_table(D);
  CuspForm zero;
  zero.labels = enumerate_cohpar(D);
  zero.values.assign(zero.labels.size(), 0);
  EXPECT_TRUE(verify_cusp_reordered(D, zero, table).all_pass());
  CuspForm sky = zero;
  sky.values[0] = 1;
  ASSERT_EQ(sky.labels[0].kind, TorsionKind::sky);
  EXPECT_FALSE(verify_cusp_reordered(D, sky, table).all_pass());
}

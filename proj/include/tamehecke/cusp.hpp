#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sheaves.hpp"

namespace tamehecke {

/// A function on the degree-1 relevant locus, stored through alpha as a function on Cohpar.
struct CuspForm {
  std::optional<FieldElement> z;  // basis index, absent for custom functions
  std::vector<TorsionClass> labels;
  RatVector values;

  mpq_class at(const TorsionClass& c) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) return values[i];
    throw Error(ErrorCode::internal_invariant, "unknown torsion class " + to_string(c));
  }
};

inline nlohmann::json to_json_value(const CuspForm& f) {
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < f.labels.size(); ++i) {
    auto v = to_json_value(f.values[i]);
    v["torsion_class"] = to_json_value(f.labels[i]);
    values.push_back(v);
  }
  return {{"z", f.z ? to_json_value(*f.z) : nlohmann::json("custom")}, {"values", values}};
}

/// Which section rows to emit. A section of the support map passes through K10 or K01 over
/// each point of D; `all_kinds` also lets it pass through K0, which is not a section.
enum class SectionRows { gm_kinds, all_kinds };

struct CuspSystem {
  RatMatrix matrix;
  std::vector<TorsionClass> unknowns;
  std::vector<std::string> row_labels;
  std::size_t class_rows = 0;
};

inline CuspSystem build_cusp_system(const RamificationDivisor& D, SectionRows rows = SectionRows::gm_kinds) {
  CuspSystem sys;
  sys.unknowns = enumerate_cohpar(D);
  const std::size_t n = sys.unknowns.size();
  sys.matrix = make_rat_matrix(0, n);
  std::map<TorsionClass, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[sys.unknowns[i]] = i;
  auto weight = [&](const TorsionClass& c) { return mpq_class(1, aut_order(D, c)); };

  for (const auto& x : D.points())
    for (auto k : {TorsionKind::k10, TorsionKind::k01}) {
      RatVector r(n, 0);
      const TorsionClass c0{x, TorsionKind::k0}, ck{x, k};
      r[idx[c0]] = weight(c0);
      r[idx[ck]] = weight(ck);
      sys.matrix.append_row(r);
      sys.row_labels.push_back("class " + std::string(to_string(k)) + " at " + to_string(x));
    }
  sys.class_rows = sys.matrix.rows();

  std::vector<TorsionKind> choices{TorsionKind::k10, TorsionKind::k01};
  if (rows == SectionRows::all_kinds) choices.insert(choices.begin(), TorsionKind::k0);
  const std::size_t nc = choices.size();
  std::size_t total = nc * nc * nc * nc;
  for (std::size_t code = 0; code < total; ++code) {
    RatVector r(n, 0);
    std::string label = "section";
    for (const auto& c : sys.unknowns)
      if (c.kind == TorsionKind::sky) r[idx[c]] = weight(c);
    std::size_t rest = code;
    for (const auto& x : D.points()) {
      const TorsionClass c{x, choices[rest % nc]};
      rest /= nc;
      r[idx[c]] = weight(c);
      label += " " + std::string(to_string(c.kind));
    }
    sys.matrix.append_row(r);
    sys.row_labels.push_back(label);
  }
  return sys;
}

/// T_y^{(1:1)}Ẽ: the skyscraper modification off D and the K01 modification on D.
inline ParabolicBundle basis_representative(const RamificationDivisor& D, const FieldElement& y,
                                            const FieldElement& g) {
  const P1Point yp = P1Point::finite(y);
  const TorsionClass c{yp, D.contains(yp) ? TorsionKind::k01 : TorsionKind::sky};
  return generic_modification(D, c, g);
}

struct CuspBasis {
  std::vector<TorsionClass> labels;
  std::vector<CuspForm> forms;  // forms[i] is F_z for the i-th field element

  std::size_t index_of(const TorsionClass& c) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) return i;
    throw Error(ErrorCode::internal_invariant, "unknown torsion class " + to_string(c));
  }
  const mpq_class& value(std::size_t z, std::size_t label) const { return forms[z].values[label]; }
};

/// F_z: the cusp form equal to 1 at the label of T_z^{(1:1)}Ẽ and 0 at those of T_y^{(1:1)}Ẽ, y != z.
inline CuspBasis solve_basis(const RamificationDivisor& D) {
  const CuspSystem sys = build_cusp_system(D);
  const auto ns = sys.matrix.nullspace();
  const std::size_t q = D.q();
  require(ns.size() == q, ErrorCode::dimension_mismatch,
          "cusp space has dimension " + std::to_string(ns.size()) + ", expected " + std::to_string(q));

  CuspBasis basis;
  basis.labels = sys.unknowns;
  const auto elems = D.field().elements();
  // [N | I] with N(y, j) = j-th kernel vector at the label of T_y^{(1:1)}Ẽ
  RatMatrix aug = make_rat_matrix(q, 2 * q);
  for (std::size_t yi = 0; yi < q; ++yi) {
    const auto lab = classify_relevant(D, basis_representative(D, elems[yi], D.field().one()));
    require(lab.has_value(), ErrorCode::internal_invariant, "basis representative is not relevant");
    const std::size_t li = basis.index_of(lab->label);
    for (std::size_t j = 0; j < q; ++j) aug(yi, j) = ns[j][li];
    aug(yi, q + yi) = 1;
  }
  const auto red = aug.rref();
  require(red.pivots.size() == q && red.pivots.back() == q - 1, ErrorCode::normalization_singular,
          "normalization matrix is singular");
  // N^{-1} sits in the right half; F_z = sum_j N^{-1}(j, z) ns_j
  for (std::size_t zi = 0; zi < q; ++zi) {
    CuspForm f;
    f.z = elems[zi];
    f.labels = sys.unknowns;
    f.values.assign(sys.unknowns.size(), 0);
    for (std::size_t j = 0; j < q; ++j) {
      const mpq_class& c = red.reduced(j, q + zi);
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += c * ns[j][i];
    }
    basis.forms.push_back(std::move(f));
  }
  return basis;
}

/// Line bundle O(degree) with flag data I: the subset of D where its fiber lies in the flag.
struct ParabolicLineBundle {
  int degree = 0;
  std::array<bool, 4> in_I{};
};

namespace detail {

// Sum of mu over squarefree effective divisors of degree k supported off D:
// the coefficient of u^k in (1 - qu)/(1 - u)^3.
inline mpz_class squarefree_mobius_off_D(std::uint32_t q, int k) {
  if (k < 0) return 0;
  const mpz_class kk = k;
  return (kk + 2) * (kk + 1) / 2 - mpz_class(q) * (kk + 1) * kk / 2;
}

}  // namespace detail

/// Number of saturated injections (O(n), I) -> E: nonzero sections s with no zero on P^1,
/// s(x) in l_x exactly for x in I. Inclusion-exclusion over J (forcing s(x) in l_x on D minus I)
/// and over squarefree zero divisors of s (Mobius inversion; the part off D only enters through
/// its degree).
inline mpz_class count_saturated_homs(const RamificationDivisor& D, const ParabolicLineBundle& L,
                                      const ParabolicBundle& e) {
  const Field& f = D.field();
  const auto& pts = D.points();
  const int a0 = e.d1 - L.degree, b0 = e.d2 - L.degree;
  const int top = std::max(a0, b0);
  if (top < 0) return 0;
  std::map<std::pair<int, unsigned>, long> dims;
  auto dim_w = [&](int m, unsigned mask) {
    auto key = std::make_pair(m, mask);
    auto it = dims.find(key);
    if (it != dims.end()) return it->second;
    std::vector<std::pair<P1Point, P1Point>> cond;
    for (unsigned i = 0; i < 4; ++i)
      if (mask & (1u << i)) cond.emplace_back(pts[i], e.flags[i]);
    const long d = detail::constrained_sections_dim(f, a0 - m, b0 - m, cond);
    dims.emplace(key, d);
    return d;
  };
  unsigned imask = 0;
  for (unsigned i = 0; i < 4; ++i)
    if (L.in_I[i]) imask |= 1u << i;

  mpz_class total = 0;
  for (unsigned j = 0; j < 16; ++j) {
    if (j & imask) continue;
    const unsigned k = imask | j;
    const int jsign = (__builtin_popcount(j) % 2) ? -1 : 1;
    for (unsigned s = 0; s < 16; ++s) {
      const int sn = __builtin_popcount(s);
      const int ssign = (sn % 2) ? -1 : 1;
      for (int m = sn; m <= top; ++m) {
        const mpz_class w = detail::squarefree_mobius_off_D(D.q(), m - sn);
        if (w == 0) continue;
        mpz_class term;
        mpz_ui_pow_ui(term.get_mpz_t(), D.q(), static_cast<unsigned long>(dim_w(m, k & ~s)));
        term -= 1;
        total += jsign * ssign * w * term;
      }
    }
  }
  return total;
}

/// Saturated counts into alpha(c) for every c in Cohpar, every I and every degree in [lo, hi].
struct SaturatedCountTable {
  int lo = -3, hi = 3;
  std::vector<TorsionClass> labels;
  // counts[(n - lo) * 16 + mask][label]
  std::vector<std::vector<mpz_class>> counts;
};

inline SaturatedCountTable saturated_count_table(const RamificationDivisor& D, int lo = -3, int hi = 3) {
  SaturatedCountTable t;
  t.lo = lo;
  t.hi = hi;
  t.labels = enumerate_cohpar(D);
  std::vector<ParabolicBundle> bundles;
  for (const auto& c : t.labels) bundles.push_back(alpha(D, c));
  for (int n = lo; n <= hi; ++n)
    for (unsigned mask = 0; mask < 16; ++mask) {
      ParabolicLineBundle L{n, {}};
      for (unsigned i = 0; i < 4; ++i) L.in_I[i] = (mask >> i) & 1u;
      std::vector<mpz_class> row;
      for (const auto& b : bundles) row.push_back(count_saturated_homs(D, L, b));
      t.counts.push_back(std::move(row));
    }
  return t;
}

struct ReorderedCheck {
  int degree = 0;
  unsigned mask = 0;  // bit i set when D.points()[i] is in I
  mpq_class value;
  bool pass = false;
};

struct ReorderedReport {
  std::vector<ReorderedCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// sum over E of (q-1)/#Aut(E) * #sat(L, E) * f(E) must vanish for every (L, I).
inline ReorderedReport verify_cusp_reordered(const RamificationDivisor& D, const CuspForm& f,
                                             const SaturatedCountTable& table) {
  ReorderedReport rep;
  const mpq_class u = static_cast<long>(D.q()) - 1;
  for (int n = table.lo; n <= table.hi; ++n)
    for (unsigned mask = 0; mask < 16; ++mask) {
      const auto& row = table.counts[static_cast<std::size_t>(n - table.lo) * 16 + mask];
      mpq_class sum = 0;
      for (std::size_t i = 0; i < table.labels.size(); ++i)
        sum += u / aut_order(D, table.labels[i]) * mpq_class(row[i]) * f.at(table.labels[i]);
      rep.checks.push_back({n, mask, sum, sgn(sum) == 0});
    }
  return rep;
}

inline ReorderedReport verify_cusp_reordered(const RamificationDivisor& D, const CuspForm& f) {
  return verify_cusp_reordered(D, f, saturated_count_table(D));
}

}  // namespace tamehecke

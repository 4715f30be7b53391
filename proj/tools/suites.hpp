#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <tamehecke/tamehecke.hpp>

namespace tamehecke::cli {

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { lines.push_back("  info  " + what); }
};

struct Context {
  explicit Context(RamificationDivisor d) : D(std::move(d)) {}

  RamificationDivisor D;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  double ratio_tol = 1e-6;
  bool strict = false;
  FormulaOptions formula;

  // lazily computed shared state
  std::optional<CuspBasis> basis;
  std::vector<HeckeMatrix> formula_family, oracle_family;

  const CuspBasis& cusp_basis() {
    if (!basis) basis = solve_basis(D);
    return *basis;
  }
  const std::vector<HeckeMatrix>& formulas() {
    if (formula_family.empty())
      for (const auto& c : hecke_family(D)) formula_family.push_back(formula_matrix(D, c.support, c.kind, formula));
    return formula_family;
  }
  const std::vector<HeckeMatrix>& oracles() {
    if (oracle_family.empty())
      for (const auto& c : hecke_family(D)) oracle_family.push_back(oracle_matrix(D, c, cusp_basis()));
    return oracle_family;
  }
};

inline std::string str(const mpq_class& v) { return v.get_str(); }

inline SuiteResult suite_cusp(Context& ctx) {
  SuiteResult r{"cusp", true, {}};
  const auto& D = ctx.D;
  const std::size_t q = D.q();
  const CuspSystem sys = build_cusp_system(D);
  const std::size_t dim = sys.matrix.cols() - sys.matrix.rank();
  r.check(dim == q, "cusp space dimension " + std::to_string(dim) + " (expected " + std::to_string(q) + ")");

  RatMatrix classes = make_rat_matrix(0, sys.matrix.cols());
  for (std::size_t i = 0; i < sys.class_rows; ++i) classes.append_row(sys.matrix.row(i));
  const std::size_t rc = classes.rank(), rall = sys.matrix.rank();
  r.check(rall == rc + 1, "section rows add rank " + std::to_string(rall - rc) + " to the class rows");

  const CuspBasis& basis = ctx.cusp_basis();
  const Field& f = D.field();
  const auto elems = f.elements();
  const P1Point inf = P1Point::infinity(f);
  const auto linf = classify_relevant(D, basis_representative(D, f.zero(), f.one()));
  bool minus_one = true, remark = true, dual = true, support = true;
  const auto et = standard_bundles(D).first;
  for (std::size_t zi = 0; zi < q; ++zi) {
    const CuspForm& fz = basis.forms[zi];
    minus_one = minus_one && fz.at({inf, TorsionKind::k01}) == -1;
    for (const auto& x : D.points()) {
      const auto l0 = classify_relevant(D, elementary_shift(D, et, x, Direction::down));
      const auto l10 = classify_relevant(D, generic_modification(D, {x, TorsionKind::k10}, f.one()));
      const auto l01 = classify_relevant(D, generic_modification(D, {x, TorsionKind::k01}, f.one()));
      const mpq_class v0 = fz.at(l0->label);
      remark = remark && fz.at(l10->label) == -v0 / static_cast<long>(q - 1) &&
               fz.at(l01->label) == -v0 / static_cast<long>(q - 1);
    }
    for (std::size_t yi = 0; yi < q; ++yi) {
      const auto l = classify_relevant(D, basis_representative(D, elems[yi], f.one()));
      dual = dual && fz.at(l->label) == (yi == zi ? 1 : 0);
    }
    for (std::size_t i = 0; i < fz.labels.size(); ++i) {
      const auto& s = fz.labels[i].support;
      if (sgn(fz.values[i]) != 0 && !(s == inf) && !(s == P1Point::finite(elems[zi]))) support = false;
    }
  }
  (void)linf;
  r.check(minus_one, "F_z at the label of T_inf^(1:1)Ẽ is -1 for every z");
  r.check(remark, "F_z(K10(x)) = F_z(K01(x)) = -F_z(K0(x))/(q-1) for every x in D");
  r.check(dual, "F_z at the label of T_y^(1:1)Ẽ is [y = z]");
  r.check(support, "F_z is supported on the fibers over z and inf");

  const auto table = saturated_count_table(D);
  std::size_t failures = 0;
  std::string first;
  for (const auto& fz : basis.forms) {
    const auto rep = verify_cusp_reordered(D, fz, table);
    for (const auto& c : rep.checks)
      if (!c.pass) {
        if (failures++ == 0)
          first = "z=" + to_string(*fz.z) + " degree " + std::to_string(c.degree) + " I-mask " +
                  std::to_string(c.mask) + " sum " + str(c.value);
      }
  }
  r.check(failures == 0, "reordered cusp condition over degrees [-3,3] and all I" +
                             (failures ? " (" + std::to_string(failures) + " failures, first " + first + ")" : ""));
  return r;
}

inline SuiteResult suite_formula(Context& ctx) {
  SuiteResult r{"formula", true, {}};
  const auto& D = ctx.D;
  const auto elems = D.field().elements();
  const auto& fs = ctx.formulas();
  const auto& os = ctx.oracles();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& a = fs[i];
    const auto& b = os[i];
    std::string diff;
    for (std::size_t y = 0; y < a.q && diff.empty(); ++y)
      for (std::size_t z = 0; z < a.q && diff.empty(); ++z)
        if (a.at(y, z) != b.at(y, z))
          diff = " first mismatch x=" + to_string(a.x) + " y=" + to_string(elems[y]) + " z=" + to_string(elems[z]) +
                 ": formula " + std::to_string(a.at(y, z)) + ", oracle " + std::to_string(b.at(y, z));
    r.check(diff.empty(), "H[" + to_string(TorsionClass{a.x, a.kind}) + "] formula = oracle" + diff);
  }
  const auto& hinf = fs.back();
  bool minus_identity = true;
  for (std::size_t y = 0; y < hinf.q; ++y)
    for (std::size_t z = 0; z < hinf.q; ++z) minus_identity = minus_identity && hinf.at(y, z) == (y == z ? -1 : 0);
  r.check(minus_identity, "H_inf = -Identity");

  // independence of the generic flag representative
  std::mt19937_64 rng(ctx.seed);
  std::uniform_int_distribution<std::uint32_t> pick(std::min<std::uint32_t>(2, D.q() - 1), D.q() - 1);
  const FieldElement g = D.field().element(pick(rng));
  bool same = true;
  const auto fam = hecke_family(D);
  for (std::size_t i = 0; i < fam.size(); ++i) same = same && oracle_matrix(D, fam[i], ctx.cusp_basis(), g).same_entries(os[i]);
  r.check(same, "oracle unchanged with generic flag (" + to_string(g) + ":1)");

  // which Gm-kind the formula describes at points of D
  std::vector<std::string> matched;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (D.contains(fs[i].x) && fs[i].same_entries(os[i])) matched.push_back(to_string(TorsionClass{fs[i].x, fs[i].kind}));
  std::string m;
  for (const auto& s : matched) m += " " + s;
  r.note("formula matches the oracle for the D-kinds:" + m);
  return r;
}

inline SuiteResult suite_commute(Context& ctx) {
  SuiteResult r{"commute", true, {}};
  auto describe = [&](const std::vector<HeckeMatrix>& ms) {
    const auto bad = commutator_failures(ms);
    std::string s = std::to_string(bad.size()) + " non-commuting pairs";
    if (!bad.empty())
      s += ", first " + to_string(TorsionClass{ms[bad[0].first].x, ms[bad[0].first].kind}) + " vs " +
           to_string(TorsionClass{ms[bad[0].second].x, ms[bad[0].second].kind});
    return std::make_pair(bad.empty(), s);
  };
  const auto [fo, fs] = describe(ctx.formulas());
  r.check(fo, "formula family: " + fs);
  const auto [oo, os] = describe(ctx.oracles());
  r.check(oo, "oracle family: " + os);
  return r;
}

inline SuiteResult suite_symmetry(Context& ctx) {
  SuiteResult r{"symmetry", true, {}};
  const auto& D = ctx.D;
  const auto elems = D.field().elements();
  std::size_t bad = 0, checked = 0;
  std::string first;
  for (const auto& x : elems)
    for (const auto& y : elems) {
      if (x == y) continue;
      for (const auto& z : elems) {
        ++checked;
        const auto a = alpha_coeff(D, P1Point::finite(x), z, y, ctx.formula);
        const auto b = alpha_coeff(D, P1Point::finite(y), z, x, ctx.formula);
        if (a != b && bad++ == 0)
          first = " first x=" + to_string(x) + " y=" + to_string(y) + " z=" + to_string(z);
      }
    }
  r.check(bad == 0, "alpha^x_{z,y} = alpha^y_{z,x} (" + std::to_string(checked) + " triples)" + first);

  // the same symmetry read off the oracle matrices
  const auto& os = ctx.oracles();
  auto find = [&](const FieldElement& x) -> const HeckeMatrix& {
    for (const auto& h : os)
      if (h.x == P1Point::finite(x)) return h;
    throw Error(ErrorCode::internal_invariant, "missing operator");
  };
  std::size_t obad = 0;
  for (std::size_t xi = 0; xi < elems.size(); ++xi)
    for (std::size_t yi = 0; yi < elems.size(); ++yi) {
      if (xi == yi) continue;
      const auto& hx = find(elems[xi]);
      const auto& hy = find(elems[yi]);
      for (std::size_t zi = 0; zi < elems.size(); ++zi) obad += hx.at(yi, zi) != hy.at(xi, zi);
    }
  r.check(obad == 0, "the oracle matrices satisfy the same symmetry");
  return r;
}

inline SuiteResult suite_degree2(Context& ctx) {
  SuiteResult r{"degree2", true, {}};
  const auto& D = ctx.D;
  const Field& f = D.field();
  std::vector<FieldElement> off;
  for (const auto& e : f.elements())
    if (!D.contains(e)) off.push_back(e);
  const auto flags = projective_line(f);
  std::size_t image_bad = 0, fiber_bad = 0, ram_bad = 0, images = 0, pairs = 0;
  std::string first_image, first_fiber, first_ram;
  for (const auto& y : off)
    for (const auto& x : off) {
      std::vector<std::optional<RelevantLabel>> labels;
      std::map<P1Point, int> preimages;
      for (const auto& l : flags) {
        const auto lab = degree2_oracle_label(D, y, x, l);
        const P1Point w = degree2_image(D, y, x, l);
        ++images;
        if ((!lab || !(lab->pi == w)) && image_bad++ == 0)
          first_image = " first y=" + to_string(y) + " x=" + to_string(x) + " flag (" + to_string(l.a()) + ":" +
                        to_string(l.b()) + ")";
        labels.push_back(lab);
        ++preimages[w];
      }
      for (std::size_t i = 0; i < flags.size(); ++i) {
        if (!labels[i]) continue;
        const bool gm2 = labels[i]->label.kind == TorsionKind::k0;
        const bool ram = D.contains(labels[i]->pi) && preimages[labels[i]->pi] == 1;
        if (gm2 != ram && ram_bad++ == 0)
          first_ram = " first y=" + to_string(y) + " x=" + to_string(x) + " flag " + to_string(flags[i]);
      }
      if (x == y) continue;
      for (std::size_t i = 0; i + 1 < flags.size(); ++i)
        for (std::size_t j = 0; j + 1 < flags.size(); ++j) {
          if (i == j) continue;
          ++pairs;
          const bool iso = labels[i] && labels[j] && labels[i]->label == labels[j]->label;
          if (iso != same_fiber(D, x, y, flags[i].a(), flags[j].a()) && fiber_bad++ == 0)
            first_fiber = " first y=" + to_string(y) + " x=" + to_string(x) + " r=" + to_string(flags[i].a()) +
                          " s=" + to_string(flags[j].a());
        }
    }
  r.check(image_bad == 0, "label point of every modification equals the closed degree-2 map (" +
                              std::to_string(images) + " flags)" + first_image);
  r.check(fiber_bad == 0, "same-fiber criterion matches isomorphism of images (" + std::to_string(pairs) +
                              " pairs)" + first_fiber);
  r.check(ram_bad == 0, "Gm x Gm images are exactly the ramified flags over D" + first_ram);
  return r;
}

inline SuiteResult suite_special(Context& ctx) {
  SuiteResult r{"special", true, {}};
  const auto& D = ctx.D;
  std::vector<std::pair<FieldElement, FieldElement>> pairs;
  for (const auto& x : D.field().elements())
    for (const auto& y : D.field().elements())
      if (!D.contains(x) && !D.contains(y) && !(x == y)) pairs.emplace_back(x, y);
  if (pairs.size() > 20) {
    std::mt19937_64 rng(ctx.seed);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(20);
  }
  std::size_t rows = 0;
  for (const auto& [x, y] : pairs) {
    const auto rep = special_preimage_check(D, x, y);
    rows += rep.rows.size();
    for (const auto& row : rep.rows)
      if (!row.pass)
        r.check(false, "x=" + to_string(x) + " y=" + to_string(y) + " " + row.description + ": got " +
                           (row.got ? to_string(*row.got) : "absent") + ", expected " +
                           (row.expected ? to_string(*row.expected) : "absent"));
  }
  r.check(r.pass, std::to_string(pairs.size()) + " (x,y) pairs, " + std::to_string(rows) + " special flags");
  return r;
}

inline SuiteResult suite_eigen(Context& ctx, SpectrumReport* out = nullptr,
                               std::vector<SpectralCheck>* checks_out = nullptr) {
  SuiteResult r{"eigen", true, {}};
  const auto& fam = ctx.formulas();
  const auto rep = joint_spectrum(fam, ctx.tol, ctx.seed);
  auto checks = eigen_consistency(rep, ctx.D, ctx.ratio_tol);
  checks.push_back(char_poly_cross_check(fam, rep, ctx.ratio_tol));
  checks.push_back(weil_check(fam, ctx.D.q(), ctx.strict));
  r.note(std::to_string(rep.pairs.size()) + " joint eigenpairs (attempt " + std::to_string(rep.attempts) + ")");
  for (const auto& c : checks) {
    std::ostringstream os;
    os << c.name << " max error " << c.max_error << (c.detail.empty() ? "" : " (" + c.detail + ")");
    if (c.gating)
      r.check(c.pass, os.str());
    else
      r.note(std::string(c.pass ? "holds " : "does not hold ") + os.str() + " [advisory]");
  }
  if (out) *out = rep;
  if (checks_out) *checks_out = checks;
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cusp", "formula", "commute", "symmetry", "degree2", "special", "eigen"};
  return names;
}

inline SuiteResult run_suite(Context& ctx, const std::string& name) {
  if (name == "cusp") return suite_cusp(ctx);
  if (name == "formula") return suite_formula(ctx);
  if (name == "commute") return suite_commute(ctx);
  if (name == "symmetry") return suite_symmetry(ctx);
  if (name == "degree2") return suite_degree2(ctx);
  if (name == "special") return suite_special(ctx);
  if (name == "eigen") return suite_eigen(ctx);
  throw Error(ErrorCode::degenerate_input, "unknown suite " + name);
}

}  // namespace tamehecke::cli

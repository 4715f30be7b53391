// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any gating failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <tamehecke/tamehecke.hpp>

using namespace tamehecke;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  Criterion(std::string n, bool g) : name(std::move(n)), gating(g) {}

  std::string name;
  bool gating = true;
  bool pass = true;
  double seconds = 0;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

template <class F>
void timed(Criterion& c, F&& body) {
  const auto t0 = Clock::now();
  try {
    body();
  } catch (const Error& e) {
    c.fail(std::string("error: ") + e.what());
  }
  c.seconds += std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string tag(int p, int t) { return "q=" + std::to_string(p) + " t=" + std::to_string(t); }

}  // namespace

int main() {
  const std::vector<std::pair<int, int>> instances{{5, 2}, {5, 3}, {7, 3}, {7, 5}, {11, 6}, {13, 2}};
  const std::uint64_t seed = 1;
  std::vector<Criterion> cs{
      {"cusp_dimension", true},
      {"basis_test_vectors", true},
      {"h_inf_minus_identity", true},
      {"formula_equals_oracle", true},
      {"commutativity", true},
      {"coefficient_symmetry", true},
      {"degree2_map", true},
      {"special_preimages", true},
      {"eigenfunction_identity", true},
      {"weil_bound_advisory", false},
      {"reordered_cusp_condition", true},
  };
  double q13_seconds = 0;

  for (const auto& [p, t] : instances) {
    const auto start = Clock::now();
    const Field f = make_field(p);
    const RamificationDivisor D(f, f.element(t));
    const std::size_t q = D.q();
    const auto elems = f.elements();
    const P1Point inf = P1Point::infinity(f);
    const std::string where = tag(p, t);

    // 1. nullspace of the cusp system has dimension q, fast
    CuspBasis basis;
    {
      const auto t0 = Clock::now();
      timed(cs[0], [&] {
        const CuspSystem sys = build_cusp_system(D);
        const std::size_t dim = sys.matrix.nullspace().size();
        if (dim != q) cs[0].fail(where + ": dimension " + std::to_string(dim));
        basis = solve_basis(D);
        if (basis.forms.size() != q) cs[0].fail(where + ": basis has " + std::to_string(basis.forms.size()) + " forms");
      });
      const double s = std::chrono::duration<double>(Clock::now() - t0).count();
      if (s >= 1.0) cs[0].fail(where + ": took " + std::to_string(s) + " s");
    }

    // 2. value -1 at the label of T_inf^(1:1) of the standard bundle; K10 = K01 = -K0/(q-1) on D
    timed(cs[1], [&] {
      const auto linf =
          classify_relevant(D, modify(D, standard_bundles(D).first, inf, FlagData::k01(P1Point::finite(f.one()))));
      if (!linf) return cs[1].fail(where + ": T_inf image not relevant");
      for (std::size_t z = 0; z < q; ++z) {
        const CuspForm& fz = basis.forms[z];
        if (fz.at(linf->label) != -1) cs[1].fail(where + ": F_" + std::to_string(z) + " at T_inf image != -1");
        for (const auto& x : D.points()) {
          const mpq_class expect = -fz.at({x, TorsionKind::k0}) / static_cast<long>(q - 1);
          if (fz.at({x, TorsionKind::k10}) != expect || fz.at({x, TorsionKind::k01}) != expect)
            cs[1].fail(where + ": Gm relation fails at " + to_string(x));
        }
      }
    });

    std::vector<TorsionClass> family;
    std::vector<HeckeMatrix> formulas, oracles;
    const auto t4 = Clock::now();
    timed(cs[3], [&] {
      family = hecke_family(D);
      for (const auto& c : family) {
        formulas.push_back(formula_matrix(D, c.support, c.kind));
        oracles.push_back(oracle_matrix(D, c, basis));
      }
      for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t y = 0; y < q; ++y)
          for (std::size_t z = 0; z < q; ++z)
            if (formulas[i].at(y, z) != oracles[i].at(y, z))
              cs[3].fail(where + ": " + to_string(family[i]) + " y=" + to_string(elems[y]) +
                         " z=" + to_string(elems[z]));
    });
    if (p == 13 && std::chrono::duration<double>(Clock::now() - t4).count() >= 60.0)
      cs[3].fail(where + ": over 60 s");

    // 3. both D-kinds at infinity act as -1, in formula and oracle
    timed(cs[2], [&] {
      bool seen = false;
      for (std::size_t i = 0; i < family.size(); ++i) {
        if (!(family[i].support == inf)) continue;
        seen = true;
        for (const auto* h : {&formulas[i], &oracles[i]})
          for (std::size_t y = 0; y < q; ++y)
            for (std::size_t z = 0; z < q; ++z)
              if (h->at(y, z) != (y == z ? -1 : 0)) cs[2].fail(where + ": " + to_string(family[i]));
      }
      if (!seen) cs[2].fail(where + ": no operator at infinity");
    });

    // 5. exact pairwise commutators, computed here from the integer entries
    timed(cs[4], [&] {
      for (const auto* fam : {&formulas, &oracles})
        for (std::size_t a = 0; a < fam->size(); ++a)
          for (std::size_t b = a + 1; b < fam->size(); ++b) {
            const auto& A = (*fam)[a];
            const auto& B = (*fam)[b];
            for (std::size_t i = 0; i < q; ++i)
              for (std::size_t j = 0; j < q; ++j) {
                mpz_class ab = 0, ba = 0;
                for (std::size_t k = 0; k < q; ++k) {
                  ab += mpz_class(A.at(i, k)) * B.at(k, j);
                  ba += mpz_class(B.at(i, k)) * A.at(k, j);
                }
                if (ab != ba) cs[4].fail(where + ": " + to_string(family[a]) + " vs " + to_string(family[b]));
              }
          }
    });

    // 6. alpha^x_{z,y} = alpha^y_{z,x} for x != y
    timed(cs[5], [&] {
      for (const auto& x : elems)
        for (const auto& y : elems) {
          if (x == y) continue;
          for (const auto& z : elems)
            if (alpha_coeff(D, P1Point::finite(x), z, y) != alpha_coeff(D, P1Point::finite(y), z, x))
              cs[5].fail(where + ": x=" + to_string(x) + " y=" + to_string(y) + " z=" + to_string(z));
        }
    });

    // 7. closed degree-2 map, same-fiber criterion, ramification over D
    timed(cs[6], [&] {
      std::vector<FieldElement> off;
      for (const auto& e : elems)
        if (!D.contains(e)) off.push_back(e);
      const auto flags = projective_line(f);
      for (const auto& y : off)
        for (const auto& x : off) {
          std::vector<std::optional<RelevantLabel>> labels;
          std::map<P1Point, int> preimages;
          for (const auto& l : flags) {
            const auto lab = degree2_oracle_label(D, y, x, l);
            const P1Point w = degree2_image(D, y, x, l);
            if (!lab || !(lab->pi == w))
              cs[6].fail(where + ": image y=" + to_string(y) + " x=" + to_string(x) + " flag " + to_string(l));
            labels.push_back(lab);
            ++preimages[w];
          }
          for (std::size_t i = 0; i < flags.size(); ++i) {
            if (!labels[i]) continue;
            const bool gm2 = labels[i]->label.kind == TorsionKind::k0;
            const bool ramified = D.contains(labels[i]->pi) && preimages[labels[i]->pi] == 1;
            if (gm2 != ramified) cs[6].fail(where + ": ramification y=" + to_string(y) + " x=" + to_string(x));
          }
          if (x == y) continue;
          for (std::size_t i = 0; i < flags.size(); ++i)
            for (std::size_t j = 0; j < flags.size(); ++j) {
              if (i == j || flags[i].is_infinity() || flags[j].is_infinity()) continue;
              const bool iso = labels[i] && labels[j] && labels[i]->label == labels[j]->label;
              if (iso != same_fiber(D, x, y, flags[i].a(), flags[j].a()))
                cs[6].fail(where + ": same fiber x=" + to_string(x) + " y=" + to_string(y) +
                           " r=" + to_string(flags[i].a()) + " s=" + to_string(flags[j].a()));
            }
        }
    });

    // 8. special flags: 20 seeded pairs, or every pair when fewer exist
    timed(cs[7], [&] {
      std::vector<std::pair<FieldElement, FieldElement>> pairs;
      for (const auto& x : elems)
        for (const auto& y : elems)
          if (!D.contains(x) && !D.contains(y) && !(x == y)) pairs.emplace_back(x, y);
      if (pairs.size() > 20) {
        std::mt19937_64 rng(seed);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(20);
      }
      for (const auto& [x, y] : pairs) {
        const auto rep = special_preimage_check(D, x, y);
        // two fixed flags plus one or two per split of {0, 1, t}
        if (rep.rows.size() < 5) cs[7].fail(where + ": " + std::to_string(rep.rows.size()) + " rows");
        for (const auto& row : rep.rows)
          if (!row.pass) cs[7].fail(where + ": x=" + to_string(x) + " y=" + to_string(y) + " " + row.description);
      }
    });

    // 9 and 10. joint spectrum of the family
    SpectrumReport spectrum;
    timed(cs[8], [&] {
      spectrum = joint_spectrum(formulas, 1e-8, seed);
      if (spectrum.pairs.size() != q) cs[8].fail(where + ": " + std::to_string(spectrum.pairs.size()) + " eigenpairs");
      for (const auto& c : eigen_consistency(spectrum, D, 1e-6))
        if (c.gating && !c.pass) cs[8].fail(where + ": " + c.name + " error " + std::to_string(c.max_error));
      const auto roots = char_poly_cross_check(formulas, spectrum, 1e-6);
      if (!roots.pass) cs[8].fail(where + ": " + roots.name);
    });
    timed(cs[9], [&] {
      const auto w = weil_check(formulas, static_cast<std::uint32_t>(q), false);
      if (!w.pass) cs[9].fail(where + ": " + w.detail);
    });

    // 11. every basis form against every parabolic line bundle of degree -3..3
    timed(cs[10], [&] {
      const auto table = saturated_count_table(D);
      for (const auto& fz : basis.forms) {
        const auto rep = verify_cusp_reordered(D, fz, table);
        if (rep.checks.size() != 7u * 16u) cs[10].fail(where + ": " + std::to_string(rep.checks.size()) + " checks");
        for (const auto& c : rep.checks)
          if (!c.pass)
            cs[10].fail(where + ": z=" + to_string(*fz.z) + " degree " + std::to_string(c.degree) + " mask " +
                        std::to_string(c.mask));
      }
    });

    if (p == 13) q13_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  }

  if (q13_seconds >= 60.0) cs[3].fail("full run at q=13 took " + std::to_string(q13_seconds) + " s");

  bool ok = true;
  for (const auto& c : cs) {
    std::printf("%s %s (%.2f s)%s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
                c.gating ? "" : " [advisory]", c.detail.empty() ? "" : ": ", c.detail.c_str());
    if (c.gating) ok = ok && c.pass;
  }
  std::printf("q=13 run %.2f s\n", q13_seconds);
  return ok ? 0 : 1;
}

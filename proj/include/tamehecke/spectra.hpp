#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hecke_matrix.hpp"

namespace tamehecke {

using cplx = std::complex<double>;

namespace detail {

inline void require_square_family(const std::vector<HeckeMatrix>& ms) {
  for (const auto& m : ms) {
    require(m.entries.size() == static_cast<std::size_t>(m.q) * m.q, ErrorCode::non_square, "matrix is not square");
    require(m.q == ms.front().q, ErrorCode::size_mismatch, "matrices of different sizes");
  }
}

inline std::vector<mpz_class> product(const HeckeMatrix& a, const HeckeMatrix& b) {
  const std::size_t n = a.q;
  std::vector<mpz_class> r(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const long v = static_cast<long>(a.at(i, k));
      if (v == 0) continue;
      for (std::size_t j = 0; j < n; ++j) r[i * n + j] += v * static_cast<long>(b.at(k, j));
    }
  return r;
}

inline Eigen::MatrixXd to_eigen(const HeckeMatrix& h) {
  Eigen::MatrixXd m(h.q, h.q);
  for (std::size_t i = 0; i < h.q; ++i)
    for (std::size_t j = 0; j < h.q; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        static_cast<double>(h.at(i, j));
  return m;
}

}  // namespace detail

/// Index pairs (i, j), i < j, whose commutator is nonzero; computed exactly.
inline std::vector<std::pair<std::size_t, std::size_t>> commutator_failures(const std::vector<HeckeMatrix>& ms) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  if (ms.empty()) return bad;
  detail::require_square_family(ms);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (detail::product(ms[i], ms[j]) != detail::product(ms[j], ms[i])) bad.emplace_back(i, j);
  return bad;
}

inline bool commutator_check(const std::vector<HeckeMatrix>& ms) { return commutator_failures(ms).empty(); }

/// Roots of an integer polynomial (low-to-high, monic) as eigenvalues of its companion matrix.
inline std::vector<cplx> polynomial_roots(const IntPoly& p) {
  const std::size_t n = p.size() - 1;
  if (n == 0) return {};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1;
  for (std::size_t i = 0; i < n; ++i)
    c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -p[i].get_d() / p[n].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<cplx> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

struct Eigenpair {
  std::vector<cplx> vector;  // coordinates in {F_z}, largest entry scaled to 1
  std::vector<cplx> lambda;  // one per operator
  double residual = 0;       // max over operators of |Hv - lambda v|_inf / |v|_inf
};

struct SpectrumReport {
  std::vector<TorsionClass> operators;
  std::vector<Eigenpair> pairs;
  std::vector<long> combination;  // coefficients of the separating combination
  int attempts = 0;
  bool separated = true;  // false when a repeated eigenvalue was resolved as a scalar block
  double tol = 1e-8;
};

/// Joint eigenvectors of a commuting family, read off from a random integer combination.
inline SpectrumReport joint_spectrum(const std::vector<HeckeMatrix>& ms, double tol, std::uint64_t seed) {
  require(!ms.empty(), ErrorCode::degenerate_input, "empty operator family");
  require(commutator_check(ms), ErrorCode::internal_invariant, "the family does not commute");
  const std::size_t n = ms.front().q;
  std::vector<Eigen::MatrixXd> em;
  for (const auto& m : ms) em.push_back(detail::to_eigen(m));

  SpectrumReport rep;
  rep.tol = tol;
  for (const auto& m : ms) rep.operators.push_back({m.x, m.kind});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coef(-10, 10);
  const double separation = 1e-6;
  for (int attempt = 1; attempt <= 5; ++attempt) {
    rep.attempts = attempt;
    rep.combination.assign(ms.size(), 0);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < ms.size(); ++i) {
      rep.combination[i] = coef(rng);
      c += static_cast<double>(rep.combination[i]) * em[i];
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(c);
    const auto& ev = es.eigenvalues();
    double scale = 1;
    for (Eigen::Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
    bool separated = true;
    for (Eigen::Index i = 0; i < ev.size() && separated; ++i)
      for (Eigen::Index j = i + 1; j < ev.size() && separated; ++j)
        separated = std::abs(ev(i) - ev(j)) > separation * scale;

    std::vector<std::pair<cplx, Eigenpair>> found;
    double worst = 0;
    Eigen::MatrixXcd basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      Eigen::VectorXcd v = es.eigenvectors().col(k);
      Eigen::Index arg = 0;
      v.cwiseAbs().maxCoeff(&arg);
      v /= v(arg);
      basis.col(k) = v;
      Eigenpair p;
      for (Eigen::Index i = 0; i < v.size(); ++i) p.vector.push_back(v(i));
      for (const auto& m : em) {
        const Eigen::VectorXcd hv = m.cast<cplx>() * v;
        const cplx lambda = v.dot(hv) / v.dot(v);
        p.lambda.push_back(lambda);
        p.residual = std::max(p.residual, (hv - lambda * v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff());
      }
      worst = std::max(worst, p.residual);
      found.emplace_back(ev(k), std::move(p));
    }
    // A repeated eigenvalue of the combination is acceptable only when every operator is scalar
    // on that eigenspace and the eigenvectors returned for it are independent.
    if (!separated) {
      if (worst > tol) continue;
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(basis);
      const auto& sv = svd.singularValues();
      if (sv.minCoeff() < 1e-8 * sv.maxCoeff()) continue;
    }
    rep.separated = separated;
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
      if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
      return a.first.imag() < b.first.imag();
    });
    for (auto& f : found) rep.pairs.push_back(std::move(f.second));
    return rep;
  }
  throw Error(ErrorCode::degenerate_spectrum, "no separating combination after 5 attempts");
}

struct SpectralCheck {
  std::string name;
  bool pass = true;
  bool gating = true;
  double max_error = 0;
  std::string detail;
};

namespace detail {

inline std::optional<std::size_t> operator_index(const SpectrumReport& r, const TorsionClass& c) {
  for (std::size_t i = 0; i < r.operators.size(); ++i)
    if (r.operators[i] == c) return i;
  return std::nullopt;
}

}  // namespace detail

/// The function-level eigenform identities on every joint eigenvector f:
/// (i) lambda_y / lambda_y' = f_y / f_y' for y, y' off D; (ii) K10 and K01 give the same eigenvalue on D.
/// A third, non-gating check compares lambda_y with f_y / sum_z f_z, the absolute normalization
/// forced by H_inf = -1 and F_z(K01(inf)) = -1.
inline std::vector<SpectralCheck> eigen_consistency(const SpectrumReport& rep, const RamificationDivisor& D,
                                                    double tol) {
  SpectralCheck ratio{"eigenvalue_ratio_matches_coordinates", true, true, 0, ""};
  SpectralCheck kinds{"k10_k01_eigenvalues_agree", true, true, 0, ""};
  SpectralCheck absolute{"absolute_normalization", true, false, 0, ""};
  SpectralCheck residual{"residuals", true, true, 0, ""};
  const auto elems = D.field().elements();
  const double nonzero = 1e-6;
  std::size_t ratio_tests = 0;
  for (std::size_t pi = 0; pi < rep.pairs.size(); ++pi) {
    const auto& p = rep.pairs[pi];
    residual.max_error = std::max(residual.max_error, p.residual);
    cplx sum = 0;
    for (const auto& c : p.vector) sum += c;
    for (std::size_t yi = 0; yi < elems.size(); ++yi) {
      const P1Point y = P1Point::finite(elems[yi]);
      if (D.contains(y)) continue;
      const auto li = detail::operator_index(rep, {y, TorsionKind::sky});
      if (!li) continue;
      const cplx ly = p.lambda[*li], fy = p.vector[yi];
      if (std::abs(sum) > nonzero) {
        const double err = std::abs(ly - fy / sum);
        absolute.max_error = std::max(absolute.max_error, err);
      }
      for (std::size_t wi = 0; wi < elems.size(); ++wi) {
        const P1Point w = P1Point::finite(elems[wi]);
        if (D.contains(w) || wi == yi) continue;
        const auto lw = detail::operator_index(rep, {w, TorsionKind::sky});
        if (!lw) continue;
        const cplx lambda_w = p.lambda[*lw], fw = p.vector[wi];
        if (std::abs(fw) <= nonzero || std::abs(lambda_w) <= nonzero) continue;
        const cplx a = ly / lambda_w, b = fy / fw;
        const double err = std::abs(a - b) / std::max(1.0, std::abs(b));
        ++ratio_tests;
        ratio.max_error = std::max(ratio.max_error, err);
      }
    }
    for (const auto& x : D.points()) {
      const auto a = detail::operator_index(rep, {x, TorsionKind::k10});
      const auto b = detail::operator_index(rep, {x, TorsionKind::k01});
      if (!a || !b) continue;
      kinds.max_error = std::max(kinds.max_error, std::abs(p.lambda[*a] - p.lambda[*b]));
    }
  }
  ratio.pass = ratio.max_error <= tol;
  ratio.detail = std::to_string(ratio_tests) + " ratio comparisons";
  kinds.pass = kinds.max_error <= tol;
  absolute.pass = absolute.max_error <= tol;
  residual.pass = residual.max_error <= rep.tol;
  return {residual, ratio, kinds, absolute};
}

/// |root| <= 2 sqrt(q) for every root of every characteristic polynomial (roots of the squarefree
/// part, so repeated eigenvalues do not lose precision).
inline SpectralCheck weil_check(const std::vector<HeckeMatrix>& ms, std::uint32_t q, bool strict) {
  SpectralCheck c{"weil_bound", true, strict, 0, ""};
  const double bound = 2 * std::sqrt(static_cast<double>(q)) + 1e-6;
  std::size_t violations = 0;
  for (const auto& m : ms)
    for (const auto& r : polynomial_roots(squarefree_part(char_poly(m.to_rational())))) {
      c.max_error = std::max(c.max_error, std::abs(r));
      if (std::abs(r) > bound) ++violations;
    }
  c.pass = violations == 0;
  c.detail = "max |root| " + std::to_string(c.max_error) + " vs bound " + std::to_string(bound) + ", " +
             std::to_string(violations) + " roots above";
  return c;
}

/// Every joint eigenvalue of each operator is a root of its exact characteristic polynomial.
inline SpectralCheck char_poly_cross_check(const std::vector<HeckeMatrix>& ms, const SpectrumReport& rep,
                                           double tol) {
  SpectralCheck c{"eigenvalues_are_char_poly_roots", true, true, 0, ""};
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto roots = polynomial_roots(squarefree_part(char_poly(ms[i].to_rational())));
    for (const auto& p : rep.pairs) {
      double best = INFINITY;
      for (const auto& r : roots) best = std::min(best, std::abs(r - p.lambda[i]));
      c.max_error = std::max(c.max_error, best);
    }
  }
  c.pass = c.max_error <= tol;
  return c;
}

inline nlohmann::json complex_json(const cplx& z) {
  auto round = [](double v) { return std::abs(v) < 5e-13 ? 0.0 : std::round(v * 1e10) / 1e10; };
  if (std::abs(z.imag()) < 5e-13) return round(z.real());
  return nlohmann::json::array({round(z.real()), round(z.imag())});
}

inline nlohmann::json to_json_value(const SpectrumReport& rep, const std::vector<SpectralCheck>& checks) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : rep.pairs) {
    nlohmann::json lambda = nlohmann::json::object();
    for (std::size_t i = 0; i < rep.operators.size(); ++i) lambda[to_string(rep.operators[i])] = complex_json(p.lambda[i]);
    nlohmann::json vec = nlohmann::json::array();
    for (const auto& c : p.vector) vec.push_back(complex_json(c));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", p.residual);
    pairs.push_back({{"lambda", lambda}, {"vector", vec}, {"residual", std::stod(buf)}});
  }
  nlohmann::json cj = nlohmann::json::object();
  for (const auto& c : checks) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", c.max_error);
    cj[c.name] = {{"pass", c.pass}, {"gating", c.gating}, {"max_error", std::stod(buf)}, {"detail", c.detail}};
  }
  return {{"eigenpairs", pairs}, {"combination", rep.combination}, {"attempts", rep.attempts}, {"separated", rep.separated}, {"checks", cj}};
}

}  // namespace tamehecke

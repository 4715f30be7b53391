#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "suites.hpp"

namespace fs = std::filesystem;
using namespace tamehecke;

namespace {

enum Exit { ok = 0, config_error = 2, invariant_violation = 3, suite_failure = 4 };

struct Options {
  std::uint32_t p = 5, k = 1;
  std::string modulus;  // comma-separated coefficients, low to high
  std::string t = "2";
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::string out = "out";
  std::string format = "json";
  std::string suite = "all";
  bool strict = false;
  std::optional<std::int64_t> corrupt;
};

std::vector<std::uint32_t> parse_list(const std::string& s, const char* what) {
  std::vector<std::uint32_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long x = std::stol(item, &used);
      if (used != item.size() || x < 0) throw std::invalid_argument(item);
      v.push_back(static_cast<std::uint32_t>(x));
    } catch (const std::exception&) {
      throw Error(ErrorCode::degenerate_input, std::string("cannot parse ") + what + " '" + s + "'");
    }
  }
  if (v.empty()) throw Error(ErrorCode::degenerate_input, std::string("empty ") + what);
  return v;
}

// A single integer is an element code (base-p digits); a comma list gives coefficients low to high.
RamificationDivisor make_divisor(const Options& o) {
  std::optional<std::vector<std::uint32_t>> mod;
  if (!o.modulus.empty()) mod = parse_list(o.modulus, "modulus");
  const Field f = make_field(o.p, o.k, mod);
  const auto tv = parse_list(o.t, "t");
  FieldElement t;
  if (tv.size() == 1) {
    require(tv[0] < f.q(), ErrorCode::degenerate_input, "t code out of range");
    t = f.element(tv[0]);
  } else {
    require(tv.size() <= o.k, ErrorCode::degenerate_input, "t has more coefficients than the extension degree");
    std::vector<std::uint32_t> c(tv);
    for (auto v : c) require(v < o.p, ErrorCode::degenerate_input, "t coefficient out of range");
    t = f.from_coeffs(c);
  }
  if (t.is_zero() || t.is_one()) throw Error(ErrorCode::degenerate_divisor, "t must avoid 0,1");
  return RamificationDivisor(f, t);
}

std::string csv_cell(const std::string& s) {
  return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::degenerate_input, "cannot write " + path.string());
  os << text;
}

std::string csv_matrix(const HeckeMatrix& h, const Field& f) {
  std::ostringstream os;
  os << "y";
  for (const auto& z : f.elements()) os << "," << csv_cell("z=" + to_string(z));
  os << "\n";
  const auto elems = f.elements();
  for (std::size_t y = 0; y < h.q; ++y) {
    os << csv_cell(to_string(elems[y]));
    for (std::size_t z = 0; z < h.q; ++z) os << "," << h.at(y, z);
    os << "\n";
  }
  return os.str();
}

std::string csv_basis(const CuspBasis& b, const Field& f) {
  std::ostringstream os;
  os << "label";
  for (const auto& z : f.elements()) os << "," << csv_cell("z=" + to_string(z));
  os << "\n";
  for (std::size_t i = 0; i < b.labels.size(); ++i) {
    os << csv_cell(to_string(b.labels[i]));
    for (std::size_t z = 0; z < b.forms.size(); ++z) os << "," << b.value(z, i).get_str();
    os << "\n";
  }
  return os.str();
}

std::string file_tag(const HeckeMatrix& h) {
  // element codes keep names free of separators for extension fields
  const std::string x = h.x.is_infinity() ? "inf" : std::to_string(h.x.affine().code());
  return x + "_" + std::string(to_string(h.kind));
}

nlohmann::json family_json(const RamificationDivisor& D, const std::vector<HeckeMatrix>& ms) {
  nlohmann::json j;
  j["field"] = to_json_value(D.field());
  j["t"] = to_json_value(D.t());
  j["operators"] = nlohmann::json::array();
  for (const auto& m : ms) j["operators"].push_back(to_json_value(m));
  return j;
}

int run_gen(const Options& o) {
  const RamificationDivisor D = make_divisor(o);
  cli::Context ctx(D);
  ctx.seed = o.seed;
  ctx.tol = o.tol;
  ctx.strict = o.strict;
  if (o.corrupt) ctx.formula.outside_correction = *o.corrupt;
  const fs::path dir(o.out);
  fs::create_directories(dir);
  const Field& f = D.field();

  const CuspBasis& basis = ctx.cusp_basis();
  const auto& formulas = ctx.formulas();
  const auto& oracles = ctx.oracles();
  SpectrumReport rep;
  std::vector<SpectralCheck> checks;
  const auto eig = cli::suite_eigen(ctx, &rep, &checks);

  nlohmann::json bj;
  bj["field"] = to_json_value(f);
  bj["t"] = to_json_value(D.t());
  bj["labels"] = nlohmann::json::array();
  for (const auto& l : basis.labels) bj["labels"].push_back(to_json_value(l));
  bj["forms"] = nlohmann::json::array();
  for (const auto& fz : basis.forms) bj["forms"].push_back(to_json_value(fz));
  write_file(dir / "basis.json", bj.dump(2) + "\n");
  write_file(dir / "hecke_formula.json", family_json(D, formulas).dump(2) + "\n");
  write_file(dir / "hecke_oracle.json", family_json(D, oracles).dump(2) + "\n");
  write_file(dir / "spectrum.json", to_json_value(rep, checks).dump(2) + "\n");
  if (o.format == "csv") {
    write_file(dir / "basis.csv", csv_basis(basis, f));
    for (const auto& m : formulas) write_file(dir / ("hecke_formula_" + file_tag(m) + ".csv"), csv_matrix(m, f));
    for (const auto& m : oracles) write_file(dir / ("hecke_oracle_" + file_tag(m) + ".csv"), csv_matrix(m, f));
  }
  std::cout << "wrote " << dir.string() << " (q=" << f.q() << ", " << formulas.size() << " operators)\n";
  bool agree = true;
  for (std::size_t i = 0; i < formulas.size(); ++i) agree = agree && formulas[i].same_entries(oracles[i]);
  if (!agree) std::cout << "warning: formula and oracle matrices differ\n";
  return agree && eig.pass ? ok : suite_failure;
}

int run_verify(const Options& o) {
  const RamificationDivisor D = make_divisor(o);
  cli::Context ctx(D);
  ctx.seed = o.seed;
  ctx.tol = o.tol;
  ctx.strict = o.strict;
  if (o.corrupt) ctx.formula.outside_correction = *o.corrupt;
  std::vector<std::string> names;
  if (o.suite == "all")
    names = cli::suite_names();
  else
    names = {o.suite};
  bool all = true;
  std::cout << "q=" << D.q() << " t=" << to_string(D.t()) << " seed=" << o.seed << "\n";
  for (const auto& n : names) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = cli::run_suite(ctx, n);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << std::fixed << std::setprecision(3) << secs
              << "s)\n";
    std::cout.unsetf(std::ios::fixed);
    for (const auto& l : r.lines) std::cout << l << "\n";
    all = all && r.pass;
  }
  return all ? ok : suite_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hecke operators on cusp forms for tamely ramified parabolic bundles on P1 over F_q"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--p", o.p, "characteristic")->capture_default_str();
    s->add_option("--k", o.k, "extension degree")->capture_default_str();
    s->add_option("--modulus", o.modulus, "monic irreducible modulus, coefficients low to high (comma list)");
    s->add_option("--t", o.t, "fourth ramification point: element code, or coefficient list")->capture_default_str();
    s->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    s->add_option("--tol", o.tol, "eigen residual tolerance")->capture_default_str();
    s->add_flag("--strict", o.strict, "make advisory spectral checks gating");
    s->add_option("--corrupt-formula", o.corrupt, "replace the outside-D correction constant (regression hook)")
        ->group("");
  };
  // shared options and --config live on the top-level app; subcommands fall through to it
  add_common(&app);
  auto* gen = app.add_subcommand("gen", "compute basis, Hecke matrices and spectrum")->fallthrough();
  gen->add_option("--out", o.out, "output directory")->capture_default_str();
  gen->add_option("--format", o.format, "matrix output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  auto* verify = app.add_subcommand("verify", "run verification suites")->fallthrough();
  std::vector<std::string> choices = cli::suite_names();
  choices.push_back("all");
  verify->add_option("--suite", o.suite, "suite to run")->check(CLI::IsMember(choices))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  // configuration problems surface while the field and divisor are built
  try {
    make_divisor(o);
  } catch (const Error& e) {
    std::cerr << "config error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return config_error;
  }

  try {
    if (gen->parsed()) return run_gen(o);
    return run_verify(o);
  } catch (const Error& e) {
    std::cerr << "invariant violation [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return invariant_violation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invariant_violation;
  }
}

// djost: command-line front end over the diracjost C interface.
//
// Exit codes: 0 success, 1 violations or failed checks or pipeline errors,
// 2 I/O, parse and usage errors.

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "diracjost/diracjost.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Config {
  std::string profile_path;
  int grid_points = 20001;
  double newton_tol = 1e-12;
  double boundary_margin = 1e-6;
  std::size_t oracle_n = 400;
  bool oracle_n_given = false;
  double band_margin = 0.05;
  std::uint64_t seed = 42;
  std::size_t random = 0;
  std::string format;
  std::string out_path;
  bool corrupt = false;
};

bool is_input_error(dj_status s) {
  return s == DJ_ERR_IO || s == DJ_ERR_PARSE || s == DJ_ERR_MISSING_FIELD ||
         s == DJ_ERR_DIMENSION_MISMATCH;
}

int report_error(const char* what, dj_status s) {
  std::fprintf(stderr, "djost: %s: %s: %s\n", what, dj_status_name(s), dj_last_error());
  return is_input_error(s) ? kExitInput : kExitFail;
}

// Owns a C string from the library.
struct Text {
  char* p = nullptr;
  ~Text() { dj_string_free(p); }
};

struct Profile {
  dj_profile* p = nullptr;
  ~Profile() { dj_profile_destroy(p); }
};

int emit(const Config& cfg, const char* text) {
  if (cfg.out_path.empty()) {
    std::fputs(text, stdout);
    return std::fflush(stdout) == 0 ? kExitOk : kExitInput;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    std::fprintf(stderr, "djost: cannot write '%s'\n", cfg.out_path.c_str());
    return kExitInput;
  }
  return kExitOk;
}

std::optional<dj_format> parse_format(const std::string& name) {
  if (name == "json") return DJ_FORMAT_JSON;
  if (name == "csv") return DJ_FORMAT_CSV;
  if (name == "text") return DJ_FORMAT_TEXT;
  return std::nullopt;
}

dj_eig_options eig_options(const Config& cfg) {
  dj_eig_options o;
  o.grid_points = cfg.grid_points;
  o.newton_tol = cfg.newton_tol;
  o.boundary_margin = cfg.boundary_margin;
  return o;
}

int load(const Config& cfg, Profile& prof) {
  const dj_status s = dj_profile_load_file(cfg.profile_path.c_str(), &prof.p);
  if (s != DJ_OK) {
    std::fprintf(stderr, "djost: %s: %s: %s\n", cfg.profile_path.c_str(),
                 dj_status_name(s), dj_last_error());
    return kExitInput;
  }
  return kExitOk;
}

int cmd_validate(const Config& cfg) {
  Profile prof;
  if (const int rc = load(cfg, prof)) return rc;
  Text text;
  int ok = 0;
  const dj_format fmt = *parse_format(cfg.format.empty() ? "text" : cfg.format);
  if (const dj_status s = dj_profile_validate(prof.p, fmt, &ok, &text.p)) {
    return report_error("validate", s);
  }
  if (const int rc = emit(cfg, text.p)) return rc;
  return ok ? kExitOk : kExitFail;
}

int cmd_eigs(const Config& cfg) {
  Profile prof;
  if (const int rc = load(cfg, prof)) return rc;
  Text text;
  const dj_eig_options o = eig_options(cfg);
  const dj_format fmt = *parse_format(cfg.format.empty() ? "json" : cfg.format);
  const std::size_t n = cfg.oracle_n_given ? cfg.oracle_n : 0;
  if (const dj_status s = dj_spectral_report(prof.p, &o, n, fmt, &text.p)) {
    return report_error("eigs", s);
  }
  return emit(cfg, text.p);
}

int cmd_oracle(const Config& cfg) {
  Profile prof;
  if (const int rc = load(cfg, prof)) return rc;
  Text text;
  const dj_eig_options o = eig_options(cfg);
  const dj_format fmt = *parse_format(cfg.format.empty() ? "json" : cfg.format);
  if (const dj_status s =
          dj_oracle_report(prof.p, &o, cfg.oracle_n, cfg.band_margin, fmt, &text.p)) {
    return report_error("oracle", s);
  }
  return emit(cfg, text.p);
}

int cmd_band(const Config& cfg) {
  Profile prof;
  if (const int rc = load(cfg, prof)) return rc;
  Text text;
  if (const dj_status s = dj_band_csv(prof.p, cfg.oracle_n, &text.p)) {
    return report_error("band", s);
  }
  return emit(cfg, text.p);
}

int cmd_verify(const Config& cfg) {
  dj_verify_options o;
  dj_verify_options_default(&o);
  o.eig = eig_options(cfg);
  o.oracle_n = cfg.oracle_n;
  o.band_margin = cfg.band_margin;
  o.corrupt = cfg.corrupt ? 1 : 0;
  const dj_format fmt = *parse_format(cfg.format.empty() ? "text" : cfg.format);
  Text text;
  int pass = 0;
  if (cfg.random > 0) {
    if (const dj_status s = dj_verify_random(cfg.seed, cfg.random, &o, fmt, &text.p, &pass)) {
      return report_error("verify", s);
    }
  } else {
    if (cfg.profile_path.empty()) {
      std::fprintf(stderr, "djost: verify needs a profile or --random K\n");
      return kExitInput;
    }
    Profile prof;
    if (const int rc = load(cfg, prof)) return rc;
    if (const dj_status s = dj_verify_profile(prof.p, cfg.profile_path.c_str(), &o, fmt,
                                              &text.p, &pass)) {
      return report_error("verify", s);
    }
  }
  if (const int rc = emit(cfg, text.p)) return rc;
  return pass ? kExitOk : kExitFail;
}

void add_eig_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("--grid", cfg.grid_points, "Scan points per half interval")
      ->check(CLI::Range(3, 100000000));
  sub->add_option("--newton-tol", cfg.newton_tol, "Root acceptance tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--margin", cfg.boundary_margin, "Excluded margin at t = 0 and |t| = 1")
      ->check(CLI::Range(1e-300, 0.25));
}

void add_common(CLI::App* sub, Config& cfg, const std::string& formats) {
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember(CLI::detail::split(formats, ',')));
  sub->add_option("--out", cfg.out_path, "Write output to a file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete spectrum of matrix-valued discrete Dirac operators via the Jost function"};
  app.require_subcommand(1);
  Config cfg;

  auto* validate = app.add_subcommand("validate", "Check a profile for admissibility");
  validate->add_option("profile", cfg.profile_path, "Profile JSON")->required();
  add_common(validate, cfg, "json,text");

  auto* eigs = app.add_subcommand("eigs", "Eigenvalues from the zeros of det F_0");
  eigs->add_option("profile", cfg.profile_path, "Profile JSON")->required();
  add_eig_flags(eigs, cfg);
  eigs->add_option("--n", cfg.oracle_n, "Attach finite-section eigenvalues at this N")
      ->check(CLI::PositiveNumber);
  add_common(eigs, cfg, "json,csv");

  auto* oracle = app.add_subcommand("oracle", "Compare against a finite section");
  oracle->add_option("profile", cfg.profile_path, "Profile JSON")->required();
  add_eig_flags(oracle, cfg);
  oracle->add_option("--n", cfg.oracle_n, "Section length")->check(CLI::PositiveNumber);
  oracle->add_option("--band-margin", cfg.band_margin, "Eigenvalues within this of +-2 are not matched")
      ->check(CLI::PositiveNumber);
  add_common(oracle, cfg, "json,csv");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("profile", cfg.profile_path, "Profile JSON");
  add_eig_flags(verify, cfg);
  verify->add_option("--n", cfg.oracle_n, "Section length")->check(CLI::PositiveNumber);
  verify->add_option("--band-margin", cfg.band_margin, "Band margin for oracle matching")
      ->check(CLI::PositiveNumber);
  verify->add_option("--random", cfg.random, "Verify K seeded random profiles")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "Seed for --random");
  verify->add_flag("--corrupt-series", cfg.corrupt,
                   "Perturb a_{0,1} by 1e-6 before checking (negative control)");
  add_common(verify, cfg, "json,csv,text");

  auto* band = app.add_subcommand("band", "Finite-section eigenvalues tagged in/out of [-2, 2]");
  band->add_option("profile", cfg.profile_path, "Profile JSON")->required();
  band->add_option("--n", cfg.oracle_n, "Section length")->check(CLI::PositiveNumber);
  band->add_option("--out", cfg.out_path, "Write output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }
  for (auto* sub : {eigs, oracle, verify}) {
    if (sub->parsed() && sub->count("--n") > 0) cfg.oracle_n_given = true;
  }

  if (validate->parsed()) return cmd_validate(cfg);
  if (eigs->parsed()) return cmd_eigs(cfg);
  if (oracle->parsed()) return cmd_oracle(cfg);
  if (verify->parsed()) return cmd_verify(cfg);
  return cmd_band(cfg);
}

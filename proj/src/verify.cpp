#include "diracjost/verify.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "diracjost/jost.hpp"
#include "diracjost/oracle.hpp"
#include "json.hpp"

namespace dj {

namespace {

constexpr double kGolden = 0.6180339887498949;

constexpr double kFreeEvalTol = 1e-14;
constexpr double kResidualTol = 1e-11;
constexpr double kZeroPatternTol = 1e-14;
constexpr double kTransferTol = 1e-10;
constexpr double kWronskianTol = 1e-10;
constexpr double kCertificateMin = 1e-6;
constexpr double kPhaseTol = 1e-8;
constexpr double kOracleGapTol = 1e-6;

double frac(double x) { return x - std::floor(x); }

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t m, double bound) {
  ComplexMatrix x(m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      const double re = bound * (2.0 * unit_uniform(rng) - 1.0);
      const double im = bound * (2.0 * unit_uniform(rng) - 1.0);
      x(r, c) = {re, im};
    }
  ComplexMatrix h = 0.5 * (x + x.adjoint());
  for (std::size_t r = 0; r < m; ++r) h(r, r) = h(r, r).real();
  return h;
}

ComplexMatrix near(std::mt19937_64& rng, const ComplexMatrix& centre, double radius) {
  ComplexMatrix e = random_hermitian(rng, centre.dim(), 1.0);
  const double norm = mat_norm(e, NormKind::Spectral);
  if (norm > 0.0) e *= radius / norm;
  return centre + e;
}

std::size_t pick(std::mt19937_64& rng, std::size_t hi) {
  return 1 + std::min(hi - 1, static_cast<std::size_t>(unit_uniform(rng) *
                                                       static_cast<double>(hi)));
}

CheckResult make(const char* name, double value, double threshold, bool extra = true) {
  return {name, extra && value <= threshold, value, threshold, {}};
}

CheckResult check_free_case(std::size_t m) {
  const JostSeries j = compute_jost(free_profile(m));
  const ComplexMatrix id = ComplexMatrix::identity(m);
  double coeff_err = 0.0;
  for (std::size_t n = 0; n <= j.cutoff() + 1; ++n)
    for (std::size_t s = 0; s <= j.max_offset(); ++s)
      coeff_err = std::max(coeff_err, mat_norm(j.a(n, s) - (s == 1 ? id : ComplexMatrix(m))));
  for (std::size_t n = 1; n <= j.cutoff() + 2; ++n)
    for (std::size_t s = 0; s <= j.max_offset(); ++s)
      coeff_err = std::max(coeff_err,
                           mat_norm(j.b(n, s) - (s == 0 ? -kI * id : ComplexMatrix(m))));
  double eval_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const cplx z = std::polar(k % 2 ? 1.0 : 0.5, 2.0 * std::numbers::pi * frac(k * kGolden));
    for (std::size_t n = 1; n <= 4; ++n) {
      const JostValue v = eval_jost(j, n, z);
      const double scale = std::pow(std::abs(z), static_cast<double>(2 * n));
      eval_err = std::max(eval_err, mat_norm(v.F - std::pow(z, static_cast<int>(2 * n + 1)) * id) / scale);
      eval_err = std::max(eval_err, mat_norm(v.G + (kI * std::pow(z, static_cast<int>(2 * n))) * id) / scale);
    }
  }
  CheckResult r = make("free_case", eval_err, kFreeEvalTol, coeff_err == 0.0);
  char note[64];
  std::snprintf(note, sizeof note, "coefficient error %.3e", coeff_err);
  r.note = note;
  return r;
}

CheckResult check_residual(const JostSeries& j, const CoefficientProfile& p) {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const cplx z = std::polar(k % 2 ? 0.5 : 1.0, 2.0 * std::numbers::pi * frac(k * kGolden));
    worst = std::max(worst, recurrence_residual(j, p, z, p.cutoff() + 3));
  }
  return make("recurrence_residual", worst, kResidualTol);
}

CheckResult check_tail(const JostSeries& j, const CoefficientProfile& p) {
  double tail = 0.0;
  for (const cplx z : {cplx{0.5, 0.0}, std::polar(1.0, 1.0), std::polar(0.3, -2.0)}) {
    for (const SiteDeviation& d : asymptotics_check(j, z)) {
      if (d.n > p.cutoff()) tail = std::max(tail, d.deviation);
    }
  }
  double gap = 0.0;
  for (std::size_t n = 1; n <= p.cutoff(); ++n) {
    const TransferBlocks t = closed_form_T(p, n);
    gap = std::max(gap, mat_norm(t.t11 - j.a(n, 1)));
    gap = std::max(gap, mat_norm(t.t22 - kI * j.b(n, 0)));
  }
  CheckResult r = make("tail_freeness", gap, kTransferTol, tail == 0.0);
  char note[64];
  std::snprintf(note, sizeof note, "tail deviation %.3e", tail);
  r.note = note;
  return r;
}

CheckResult check_wronskian(const JostSeries& j, const CoefficientProfile& p) {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double t = (k % 2 ? -1.0 : 1.0) * (0.05 + 0.9 * frac((k + 1) * kGolden));
    worst = std::max(worst, wronskian_identity_gap(j, p, t));
  }
  return make("wronskian_gap", worst, kWronskianTol);
}

CheckResult check_simplicity(const EigenSearch& search) {
  double phase = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (const EigenvalueRecord& e : search.eigenvalues) {
    const SimplicityCertificate& c = e.certificate;
    const double mag = std::abs(c.value);
    smallest = std::min(smallest, mag);
    const double defect = mag > 0.0 && std::isfinite(mag)
                              ? std::abs(c.phase_ratio.imag()) / std::abs(c.phase_ratio)
                              : std::numeric_limits<double>::infinity();
    phase = std::max(phase, defect);
    if (e.multiplicity != 1 || !(mag > kCertificateMin) || !(c.phase_ratio.real() > 0.0)) {
      ok = false;
    }
  }
  CheckResult r = make("simplicity", phase, kPhaseTol, ok);
  char note[96];
  std::snprintf(note, sizeof note, "roots %zu, smallest |certificate| %.3e",
                search.eigenvalues.size(),
                search.eigenvalues.empty() ? 0.0 : smallest);
  r.note = note;
  return r;
}

CheckResult check_degree(const JostSeries& j, const EigenSearch& search) {
  const std::size_t bound = j.dim() * (4 * j.cutoff() + 3);
  const bool degree_ok = jost_function_degree(j) <= 4 * j.cutoff() + 3;
  CheckResult r = make("degree_bound", static_cast<double>(search.eigenvalues.size()),
                       static_cast<double>(bound), degree_ok);
  r.note = "deg F_0 = " + std::to_string(jost_function_degree(j));
  return r;
}

CheckResult check_oracle(const CoefficientProfile& p, const EigenSearch& search,
                         const VerifyOptions& opts) {
  const std::vector<double> eigs = oracle_eigs(build_finite_section(p, opts.oracle_n));
  const ComparisonReport cmp = compare_spectra(search.eigenvalues, eigs, opts.band_margin);
  double gap = 0.0;
  for (const SpectrumMatch& mt : cmp.matches) gap = std::max(gap, mt.gap);
  const bool counts = cmp.oracle_out_of_band == cmp.jost_out_of_band &&
                      cmp.unmatched_jost.empty() && cmp.unmatched_oracle.empty();
  CheckResult r = make("oracle_agreement", gap, kOracleGapTol, counts);
  r.note = "out of band: oracle " + std::to_string(cmp.oracle_out_of_band) + ", jost " +
           std::to_string(cmp.jost_out_of_band);
  return r;
}

CheckResult guarded(const char* name, const std::function<CheckResult()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    CheckResult r{name, false, std::numeric_limits<double>::infinity(), 0.0, {}};
    r.note = std::string(to_string(e.code())) + ": " + e.what();
    return r;
  }
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

}  // namespace

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

CoefficientProfile random_profile(std::mt19937_64& rng, const RandomProfileOptions& opts) {
  const std::size_t m = pick(rng, opts.max_dim);
  const std::size_t n0 = pick(rng, opts.max_cutoff);
  const ComplexMatrix id = ComplexMatrix::identity(m);
  std::vector<ComplexMatrix> a, b, p, q;
  for (std::size_t n = 0; n <= n0; ++n) {
    a.push_back(near(rng, id, opts.ab_radius * std::pow(opts.decay, static_cast<double>(n))));
  }
  for (std::size_t n = 1; n <= n0; ++n) {
    const double f = std::pow(opts.decay, static_cast<double>(n - 1));
    b.push_back(near(rng, -id, opts.ab_radius * f));
    p.push_back(random_hermitian(rng, m, opts.amplitude * f));
    q.push_back(random_hermitian(rng, m, opts.amplitude * f));
  }
  return CoefficientProfile(m, std::move(a), std::move(b), std::move(p), std::move(q));
}

std::vector<CoefficientProfile> random_suite(std::uint64_t seed, std::size_t count,
                                             const RandomProfileOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<CoefficientProfile> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_profile(rng, opts));
  return out;
}

bool ProfileVerdict::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "free_case",     "recurrence_residual", "zero_pattern", "tail_freeness",
      "wronskian_gap", "simplicity",          "degree_bound", "oracle_agreement"};
  return names;
}

ProfileVerdict verify_profile(const CoefficientProfile& p, const std::string& label,
                              const VerifyOptions& opts) {
  ProfileVerdict v;
  v.label = label;
  v.dim = p.dim();
  v.cutoff = p.cutoff();
  v.digest = profile_digest(p);

  JostSeries j = compute_jost(p);
  if (opts.corruption) {
    j = j.with_perturbed_a(opts.corruption->n, opts.corruption->s, opts.corruption->delta);
  }

  v.checks.push_back(guarded("free_case", [&] { return check_free_case(p.dim()); }));
  v.checks.push_back(guarded("recurrence_residual", [&] { return check_residual(j, p); }));
  v.checks.push_back(guarded("zero_pattern", [&] {
    return make("zero_pattern", zero_pattern_excess(j), kZeroPatternTol);
  }));
  v.checks.push_back(guarded("tail_freeness", [&] { return check_tail(j, p); }));
  v.checks.push_back(guarded("wronskian_gap", [&] { return check_wronskian(j, p); }));

  std::optional<EigenSearch> search;
  std::string search_error;
  try {
    search = find_eigenvalues(j, p, opts.eig);
    v.eigenvalue_count = search->eigenvalues.size();
  } catch (const Error& e) {
    search_error = std::string(to_string(e.code())) + ": " + e.what();
  }
  auto needs_search = [&](const char* name,
                          const std::function<CheckResult(const EigenSearch&)>& fn) {
    if (!search) {
      return CheckResult{name, false, std::numeric_limits<double>::infinity(), 0.0,
                         search_error};
    }
    return guarded(name, [&] { return fn(*search); });
  };
  v.checks.push_back(needs_search("simplicity", check_simplicity));
  v.checks.push_back(needs_search(
      "degree_bound", [&](const EigenSearch& s) { return check_degree(j, s); }));
  v.checks.push_back(needs_search(
      "oracle_agreement", [&](const EigenSearch& s) { return check_oracle(p, s, opts); }));
  return v;
}

std::size_t VerifySummary::checks_total() const {
  std::size_t n = 0;
  for (const ProfileVerdict& v : profiles) n += v.checks.size();
  return n;
}

std::size_t VerifySummary::checks_failed() const {
  std::size_t n = 0;
  for (const ProfileVerdict& v : profiles)
    for (const CheckResult& c : v.checks) n += c.pass ? 0 : 1;
  return n;
}

VerifySummary verify_random(std::uint64_t seed, std::size_t count,
                            const VerifyOptions& opts) {
  VerifySummary s;
  s.seed = seed;
  const std::vector<CoefficientProfile> suite = random_suite(seed, count);
  for (std::size_t k = 0; k < suite.size(); ++k) {
    s.profiles.push_back(verify_profile(suite[k], "random-" + std::to_string(k), opts));
  }
  return s;
}

std::string verify_to_text(const VerifySummary& s) {
  std::string out;
  char line[256];
  if (s.seed) out += "seed " + std::to_string(*s.seed) + "\n";
  for (const ProfileVerdict& v : s.profiles) {
    std::snprintf(line, sizeof line, "%s m=%zu N0=%zu eigenvalues=%zu digest=%s\n",
                  v.label.c_str(), v.dim, v.cutoff, v.eigenvalue_count,
                  hex(v.digest).c_str());
    out += line;
    for (const CheckResult& c : v.checks) {
      std::snprintf(line, sizeof line, "  %s %-20s %.3e (limit %.1e)%s%s\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.threshold,
                    c.note.empty() ? "" : "  ", c.note.c_str());
      out += line;
    }
  }
  std::snprintf(line, sizeof line, "%zu profiles, %zu checks, %zu failed\n",
                s.profiles.size(), s.checks_total(), s.checks_failed());
  out += line;
  for (const ProfileVerdict& v : s.profiles)
    for (const CheckResult& c : v.checks)
      if (!c.pass) out += "failed: " + v.label + " " + c.name + "\n";
  return out;
}

std::string verify_to_json(const VerifySummary& s) {
  using nlohmann::json;
  json doc;
  if (s.seed) doc["seed"] = *s.seed;
  json profiles = json::array();
  for (const ProfileVerdict& v : s.profiles) {
    json checks = json::array();
    for (const CheckResult& c : v.checks) {
      json jc = {{"name", c.name}, {"pass", c.pass}, {"threshold", c.threshold}};
      // JSON has no infinity; a failed evaluation reports null.
      jc["value"] = std::isfinite(c.value) ? json(c.value) : json(nullptr);
      if (!c.note.empty()) jc["note"] = c.note;
      checks.push_back(std::move(jc));
    }
    profiles.push_back({{"label", v.label},
                        {"m", v.dim},
                        {"N0", v.cutoff},
                        {"digest", hex(v.digest)},
                        {"eigenvalues", v.eigenvalue_count},
                        {"pass", v.pass()},
                        {"checks", std::move(checks)}});
  }
  doc["profiles"] = std::move(profiles);
  doc["checks_total"] = s.checks_total();
  doc["checks_failed"] = s.checks_failed();
  doc["pass"] = s.pass();
  return doc.dump(2) + "\n";
}

std::string verify_to_csv(const VerifySummary& s) {
  std::string out = "profile,m,N0,check,pass,value,threshold\n";
  char line[256];
  for (const ProfileVerdict& v : s.profiles)
    for (const CheckResult& c : v.checks) {
      std::snprintf(line, sizeof line, "%s,%zu,%zu,%s,%d,%.17g,%.17g\n", v.label.c_str(),
                    v.dim, v.cutoff, c.name.c_str(), c.pass ? 1 : 0, c.value,
                    c.threshold);
      out += line;
    }
  return out;
}

}  // namespace dj

#include "diracjost/spectrum.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "json.hpp"

namespace dj {

namespace {

constexpr double kImagTol = 1e-8;
constexpr double kDedupTol = 1e-8;

// sum_{n >= 1} (F_n* F_n + G_n* G_n) at z; explicit through the first fully
// free site, geometric closed form beyond.
ComplexMatrix jost_mass(const JostSeries& j, cplx z) {
  const std::size_t m = j.dim();
  const std::size_t last = j.cutoff() + 2;
  ComplexMatrix acc(m);
  for (std::size_t n = 1; n <= last; ++n) {
    const ComplexMatrix F = jost_F(j, n, z);
    const ComplexMatrix G = jost_G(j, n, z);
    acc += F.adjoint() * F;
    acc += G.adjoint() * G;
  }
  const double r2 = std::norm(z);
  const double r4 = r2 * r2;
  const double tail = (1.0 + r2) * std::pow(r4, static_cast<double>(last + 1)) / (1.0 - r4);
  for (std::size_t i = 0; i < m; ++i) acc(i, i) += tail;
  return acc;
}

cplx green_factor(double t) { return -kI * (1.0 - 1.0 / (t * t)); }

// Product of row norms; bounds |det| and sets the scale of its rounding error.
double hadamard(const ComplexMatrix& a) {
  double prod = 1.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double row = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) row += std::norm(a(i, k));
    prod *= std::sqrt(row);
  }
  return prod;
}

// H(z) = F_0(z) / z, so det F_0(z) = z^m det H(z) and H(0) = a_{0,1} is
// invertible. Evaluated from the matrix series directly: the scalar
// polynomial det F_0 has far larger coefficients than its values on the
// segment and loses every digit there for strong perturbations.
class DeflatedJost {
 public:
  explicit DeflatedJost(const JostSeries& j) : m_(j.dim()) {
    for (std::size_t s = 1; s <= j.max_offset(); ++s) c_.push_back(j.a(0, s));
  }

  std::pair<ComplexMatrix, ComplexMatrix> eval(cplx z) const {
    ComplexMatrix h = c_.back();
    ComplexMatrix dh(m_);
    for (std::size_t s = c_.size() - 1; s-- > 0;) {
      dh *= z;
      dh += h;
      h *= z;
      h += c_[s];
    }
    return {h, dh};
  }

  cplx det(cplx z) const { return mat_det(eval(z).first); }

  // Entrywise sum_s |c_s| |z|^s: the size of the terms that H(z) cancels.
  ComplexMatrix magnitude(cplx z) const {
    const double r = std::abs(z);
    ComplexMatrix acc(m_);
    for (std::size_t s = c_.size(); s-- > 0;) {
      for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t k = 0; k < m_; ++k)
          acc(i, k) = acc(i, k) * r + std::abs(c_[s](i, k));
    }
    return acc;
  }

  // Rounding scale for det H(z).
  double det_scale(cplx z) const { return hadamard(magnitude(z)); }

  std::size_t dim() const noexcept { return m_; }

 private:
  std::size_t m_;
  std::vector<ComplexMatrix> c_;
};

// d/dz det H = sum_i det(H with row i replaced by row i of H').
cplx det_derivative(const ComplexMatrix& h, const ComplexMatrix& dh) {
  cplx acc{};
  for (std::size_t i = 0; i < h.dim(); ++i) {
    ComplexMatrix x = h;
    for (std::size_t k = 0; k < h.dim(); ++k) x(i, k) = dh(i, k);
    acc += mat_det(x);
  }
  return acc;
}

std::optional<cplx> newton_polish(const DeflatedJost& h, cplx z) {
  int small_steps = 0;
  for (int it = 0; it < 100; ++it) {
    const auto [H, dH] = h.eval(z);
    const cplx v = mat_det(H);
    if (v == cplx{}) return z;
    const cplx dv = det_derivative(H, dH);
    if (dv == cplx{}) return std::nullopt;
    const cplx step = v / dv;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1.0) {
      return std::nullopt;
    }
    if (std::abs(step) <= 1e-15 * std::max(std::abs(z), 1e-300)) {
      if (++small_steps >= 2) return z;
    }
  }
  return z;
}

// Winding number of det H around the circle |z - c| = r. Segments whose phase
// change is not clearly below pi/3 are bisected; nullopt if det H is
// indistinguishable from zero on the contour.
std::optional<int> winding_number(const DeflatedJost& h, cplx c, double r,
                                  std::size_t samples) {
  auto value = [&](double ang) -> std::optional<cplx> {
    const cplx z = c + std::polar(r, ang);
    const cplx v = h.det(z);
    if (std::abs(v) <= 1e-13 * h.det_scale(z)) return std::nullopt;
    return v;
  };
  double total = 0.0;
  bool ok = true;
  std::function<void(double, double, cplx, cplx, int)> walk =
      [&](double a0, double a1, cplx v0, cplx v1, int depth) {
        if (!ok) return;
        const double d = std::arg(v1 / v0);
        if (std::abs(d) < std::numbers::pi / 3.0) {
          total += d;
          return;
        }
        if (depth == 0) {
          ok = false;
          return;
        }
        const double mid = 0.5 * (a0 + a1);
        const auto vm = value(mid);
        if (!vm) {
          ok = false;
          return;
        }
        walk(a0, mid, v0, *vm, depth - 1);
        walk(mid, a1, *vm, v1, depth - 1);
      };
  const double step = 2.0 * std::numbers::pi / static_cast<double>(samples);
  auto first = value(0.0);
  if (!first) return std::nullopt;
  cplx prev = *first;
  for (std::size_t k = 1; k <= samples && ok; ++k) {
    const double ang = step * static_cast<double>(k);
    const auto v = k == samples ? first : value(ang);
    if (!v) return std::nullopt;
    walk(ang - step, ang, prev, *v, 24);
    prev = *v;
  }
  if (!ok) return std::nullopt;
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

// Null vector of a numerically singular matrix: LU with complete pivoting,
// then back substitution on U with the last unknown set to 1.
std::vector<cplx> null_vector(const ComplexMatrix& a) {
  const std::size_t m = a.dim();
  ComplexMatrix u = a;
  std::vector<std::size_t> col(m);
  for (std::size_t k = 0; k < m; ++k) col[k] = k;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t pr = k, pc = k;
    for (std::size_t r = k; r < m; ++r)
      for (std::size_t c = k; c < m; ++c)
        if (std::abs(u(r, c)) > std::abs(u(pr, pc))) {
          pr = r;
          pc = c;
        }
    for (std::size_t c = 0; c < m; ++c) std::swap(u(k, c), u(pr, c));
    for (std::size_t r = 0; r < m; ++r) std::swap(u(r, k), u(r, pc));
    std::swap(col[k], col[pc]);
    if (k + 1 == m || u(k, k) == cplx{}) continue;
    for (std::size_t r = k + 1; r < m; ++r) {
      const cplx f = u(r, k) / u(k, k);
      for (std::size_t c = k; c < m; ++c) u(r, c) -= f * u(k, c);
    }
  }
  std::vector<cplx> w(m);
  w[m - 1] = 1.0;
  for (std::size_t k = m - 1; k-- > 0;) {
    cplx acc{};
    for (std::size_t c = k + 1; c < m; ++c) acc += u(k, c) * w[c];
    w[k] = u(k, k) == cplx{} ? cplx{} : -acc / u(k, k);
  }
  std::vector<cplx> v(m);
  for (std::size_t k = 0; k < m; ++k) v[col[k]] = w[k];
  const double norm = vec_norm(v);
  for (cplx& x : v) x /= norm;
  return v;
}

}  // namespace

SpectralParameter::SpectralParameter(double t) : t_(t) {
  if (!(std::abs(t) > 0.0 && std::abs(t) < 1.0)) {
    throw Error(ErrorCode::DomainError, "t must satisfy 0 < |t| < 1");
  }
}

double lambda_of_t(double t) { return SpectralParameter(t).lambda(); }

void EigenOptions::check() const {
  if (grid_points < 3) {
    throw Error(ErrorCode::InvalidArgument, "grid_points must be >= 3");
  }
  if (!(newton_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "newton_tol must be positive");
  }
  if (!(boundary_margin > 0.0 && boundary_margin < 0.25)) {
    throw Error(ErrorCode::InvalidArgument, "boundary_margin must lie in (0, 0.25)");
  }
}

Polynomial det_polynomial(const std::vector<ComplexMatrix>& f0,
                          std::size_t degree_bound) {
  if (f0.empty()) throw Error(ErrorCode::InvalidArgument, "empty matrix polynomial");
  const std::size_t m = f0.front().dim();
  const std::size_t D = m * degree_bound;
  const std::size_t K = D + 1;

  auto eval_at = [&](cplx z) {
    ComplexMatrix acc = f0.back();
    for (std::size_t s = f0.size() - 1; s-- > 0;) {
      acc *= z;
      acc += f0[s];
    }
    return acc;
  };
  std::vector<cplx> samples(K);
  double sample_scale = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) /
                       static_cast<double>(K);
    const ComplexMatrix a = eval_at(std::polar(1.0, ang));
    samples[j] = mat_det(a);
    sample_scale = std::max(sample_scale, hadamard(a));
  }
  Polynomial d;
  d.coeffs.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    cplx acc{};
    for (std::size_t j = 0; j < K; ++j) {
      const double ang = -2.0 * std::numbers::pi *
                         static_cast<double>((j * k) % K) / static_cast<double>(K);
      acc += samples[j] * std::polar(1.0, ang);
    }
    d.coeffs[k] = acc / static_cast<double>(K);
  }

  for (int h = 0; h < 10; ++h) {
    const double radius = h < 5 ? 1.0 : 0.5;
    const double ang = 2.0 * std::numbers::pi * (h + 0.37) / 10.0 + 0.11;
    const cplx z = std::polar(radius, ang);
    const ComplexMatrix a = eval_at(z);
    const double err = std::abs(d(z) - mat_det(a));
    const double scale = std::max({sample_scale, hadamard(a),
                                   std::numeric_limits<double>::min()});
    if (err > 1e-9 * scale) {
      throw Error(ErrorCode::IllConditionedInterpolation,
                  "det F_0 interpolation residual " + std::to_string(err / scale) +
                      " at held-out point");
    }
  }
  return d;
}

Polynomial det_polynomial(const JostSeries& j) {
  return det_polynomial(jost_function(j), 4 * j.cutoff() + 3);
}

int multiplicity(const Polynomial& d, double t0) {
  const cplx z0{0.0, -t0};
  const double scale = d.max_coeff();
  if (scale == 0.0) throw Error(ErrorCode::DegenerateRoot, "zero polynomial");
  const std::vector<cplx> taylor = d.taylor_at(z0);
  if (std::abs(taylor[0]) > 1e-6 * scale) {
    throw Error(ErrorCode::DomainError, "multiplicity queried away from a root");
  }
  for (std::size_t k = 1; k < taylor.size(); ++k) {
    if (std::abs(taylor[k]) > 1e-6 * scale) return static_cast<int>(k);
  }
  throw Error(ErrorCode::DegenerateRoot,
              "all derivatives vanish at the root to tolerance");
}

WronskianSides wronskian_sides(const JostSeries& j, const CoefficientProfile& p,
                               double t) {
  const SpectralParameter sp(t);
  const cplx z = sp.z();
  const ComplexMatrix A0 = coefficient_at(p, CoefficientKind::A, 0);
  const ComplexMatrix F0 = jost_F(j, 0, z);
  const ComplexMatrix G1 = jost_G(j, 1, z);
  const ComplexMatrix dF0 = jost_F_prime(j, 0, z);
  const ComplexMatrix dG1 = jost_G_prime(j, 1, z);
  WronskianSides out;
  out.lhs = dG1.adjoint() * A0 * F0 - dF0.adjoint() * A0 * G1;
  out.rhs = green_factor(t) * jost_mass(j, z);
  return out;
}

double wronskian_identity_gap(const JostSeries& j, const CoefficientProfile& p,
                              double t) {
  const WronskianSides w = wronskian_sides(j, p, t);
  return mat_norm(w.lhs - w.rhs) / std::max(1.0, mat_norm(w.rhs));
}

SimplicityCertificate simplicity_certificate(const JostSeries& j,
                                             const CoefficientProfile& p,
                                             double t0) {
  const SpectralParameter sp(t0);
  const cplx z = sp.z();
  const ComplexMatrix F0 = jost_F(j, 0, z);
  const std::vector<cplx> u = null_vector(F0);

  SimplicityCertificate c{};
  c.null_residual = vec_norm(F0 * std::span<const cplx>(u));
  if (c.null_residual > 1e-8 * std::max(1.0, mat_norm(F0))) {
    throw Error(ErrorCode::NullVectorNotFound,
                "F_0(z0) has no null vector at t = " + std::to_string(t0));
  }
  const ComplexMatrix A0 = coefficient_at(p, CoefficientKind::A, 0);
  const std::vector<cplx> left = (A0 * jost_G(j, 1, z)) * std::span<const cplx>(u);
  const std::vector<cplx> right = jost_F_prime(j, 0, z) * std::span<const cplx>(u);
  c.value = inner(left, right);

  const ComplexMatrix mass = jost_mass(j, z);
  const std::vector<cplx> mu = mass * std::span<const cplx>(u);
  const double weight = inner(mu, u).real();
  const cplx factor = kI * (1.0 - 1.0 / (t0 * t0));
  c.factored = factor * weight;
  c.relative_gap = std::abs(c.value - c.factored) / std::abs(c.factored);
  c.phase_ratio = c.value / factor;
  return c;
}

EigenSearch find_eigenvalues(const JostSeries& j, const CoefficientProfile& p,
                             const EigenOptions& opts) {
  opts.check();
  EigenSearch out;
  out.det = det_polynomial(j);
  const DeflatedJost h(j);
  const std::size_t m = j.dim();

  const double margin = opts.boundary_margin;
  const auto G = static_cast<std::size_t>(opts.grid_points);
  std::vector<double> starts;
  for (const auto& [lo, hi] : {std::pair{-1.0 + margin, -margin},
                              std::pair{margin, 1.0 - margin}}) {
    std::vector<double> mag(G);
    std::vector<double> ts(G);
    for (std::size_t k = 0; k < G; ++k) {
      ts[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(G - 1);
      mag[k] = std::abs(h.det(cplx{0.0, -ts[k]}));
    }
    for (std::size_t k = 0; k < G; ++k) {
      const bool left_ok = k == 0 || mag[k] < mag[k - 1];
      const bool right_ok = k + 1 == G || mag[k] <= mag[k + 1];
      if (left_ok && right_ok) starts.push_back(ts[k]);
    }
  }

  std::vector<double> roots;
  for (const double t_start : starts) {
    const auto polished = newton_polish(h, cplx{0.0, -t_start});
    if (!polished) {
      ++out.newton_failures;
      continue;
    }
    const cplx z = *polished;
    const double t = -z.imag();
    if (std::abs(h.det(z)) > opts.newton_tol * h.det_scale(z)) continue;
    if (std::abs(z.real()) > kImagTol) continue;
    if (!(std::abs(t) > 0.0 && std::abs(t) < 1.0)) continue;
    roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < kDedupTol; }),
              roots.end());

  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double t = roots[k];
    if (std::abs(t) < margin || std::abs(t) > 1.0 - margin) {
      out.boundary_suspects.push_back(t);
      continue;
    }
    const SpectralParameter sp(t);
    EigenvalueRecord rec;
    rec.t = t;
    rec.z = sp.z();
    rec.lambda = sp.lambda();
    const auto [H, dH] = h.eval(rec.z);
    const cplx hv = mat_det(H);
    const cplx zm = std::pow(rec.z, static_cast<int>(m));
    rec.det_residual = std::abs(zm * hv);
    rec.derivative_magnitude =
        std::abs(static_cast<double>(m) * zm / rec.z * hv + zm * det_derivative(H, dH));

    double radius = std::min({1e-5, 0.5 * std::abs(t), 0.5 * (1.0 - std::abs(t))});
    if (k > 0) radius = std::min(radius, 0.25 * (t - roots[k - 1]));
    if (k + 1 < roots.size()) radius = std::min(radius, 0.25 * (roots[k + 1] - t));
    const auto wn = winding_number(h, rec.z, radius, 32);
    rec.multiplicity = wn ? *wn : 0;

    try {
      rec.certificate = simplicity_certificate(j, p, t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NullVectorNotFound) throw;
      rec.certificate.null_residual = std::numeric_limits<double>::infinity();
      rec.certificate.relative_gap = std::numeric_limits<double>::infinity();
    }
    out.eigenvalues.push_back(rec);
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
              return a.lambda < b.lambda;
            });
  return out;
}

int disc_root_count(const JostSeries& j) {
  const DeflatedJost h(j);
  const auto wn = winding_number(h, cplx{}, 1.0, 16 * (j.max_offset() + 1));
  return wn ? *wn : -1;
}

SpectralReport spectral_report(const CoefficientProfile& p, const EigenOptions& opts) {
  const JostSeries j = compute_jost(p);
  EigenSearch search = find_eigenvalues(j, p, opts);
  SpectralReport r;
  r.eigenvalues = std::move(search.eigenvalues);
  r.boundary_suspects = std::move(search.boundary_suspects);
  r.root_count_bound = p.dim() * (4 * p.cutoff() + 3);
  r.profile_digest = profile_digest(p);
  r.disc_root_count = disc_root_count(j);
  return r;
}

std::string report_to_json(const SpectralReport& r) {
  using nlohmann::json;
  json doc;
  doc["band"] = {r.band_lo, r.band_hi};
  json eigs = json::array();
  for (const EigenvalueRecord& e : r.eigenvalues) {
    json rec;
    rec["t"] = e.t;
    rec["z"] = {e.z.real(), e.z.imag()};
    rec["lambda"] = e.lambda;
    rec["multiplicity"] = e.multiplicity;
    rec["det_residual"] = e.det_residual;
    rec["derivative_magnitude"] = e.derivative_magnitude;
    rec["certificate"] = {e.certificate.value.real(), e.certificate.value.imag()};
    rec["certificate_gap"] = e.certificate.relative_gap;
    if (e.oracle_lambda) rec["oracle_lambda"] = *e.oracle_lambda;
    if (e.oracle_gap) rec["oracle_gap"] = *e.oracle_gap;
    eigs.push_back(std::move(rec));
  }
  doc["eigenvalues"] = std::move(eigs);
  doc["boundary_suspects"] = r.boundary_suspects;
  doc["root_count_bound"] = r.root_count_bound;
  doc["disc_root_count"] = r.disc_root_count;
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016" PRIx64, r.profile_digest);
  doc["profile_digest"] = digest;
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const SpectralReport& r) {
  std::string out = "t,z_re,z_im,lambda,multiplicity,det_residual\n";
  char line[256];
  for (const EigenvalueRecord& e : r.eigenvalues) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", e.t,
                  e.z.real(), e.z.imag(), e.lambda, e.multiplicity, e.det_residual);
    out += line;
  }
  return out;
}

}  // namespace dj

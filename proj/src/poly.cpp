#include "diracjost/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dj {

std::size_t Polynomial::degree() const noexcept {
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    if (coeffs[k] != cplx{}) return k;
  }
  return 0;
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc{};
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

std::pair<cplx, cplx> Polynomial::eval_with_derivative(cplx z) const {
  cplx p{}, dp{};
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + coeffs[k];
  }
  return {p, dp};
}

std::vector<cplx> Polynomial::taylor_at(cplx z0) const {
  // Repeated synthetic division by (z - z0).
  std::vector<cplx> work = coeffs;
  std::vector<cplx> out;
  out.reserve(work.size());
  for (std::size_t len = work.size(); len > 0; --len) {
    for (std::size_t k = len - 1; k-- > 0;) work[k] += z0 * work[k + 1];
    out.push_back(work[0]);
    work.erase(work.begin());
  }
  return out;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    d.coeffs.push_back(static_cast<double>(k) * coeffs[k]);
  }
  if (d.coeffs.empty()) d.coeffs.push_back(0.0);
  return d;
}

double Polynomial::magnitude_at(cplx z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * r + std::abs(coeffs[k]);
  return acc;
}

double Polynomial::max_coeff() const {
  double best = 0.0;
  for (const cplx& c : coeffs) best = std::max(best, std::abs(c));
  return best;
}

Polynomial Polynomial::deflate_origin(std::size_t k) const {
  Polynomial out;
  if (k < coeffs.size()) out.coeffs.assign(coeffs.begin() + k, coeffs.end());
  if (out.coeffs.empty()) out.coeffs.push_back(0.0);
  return out;
}

std::optional<std::vector<cplx>> aberth_roots(const Polynomial& p, int max_iter) {
  const std::size_t n = p.degree();
  if (n == 0) return std::vector<cplx>{};
  Polynomial monic;
  monic.coeffs.assign(p.coeffs.begin(), p.coeffs.begin() + n + 1);
  const cplx lead = monic.coeffs[n];
  for (cplx& c : monic.coeffs) c /= lead;

  // Initial guesses on a circle of the Cauchy-bound radius, rotated off the
  // real axis so no guess sits on a symmetry line.
  double bound = 0.0;
  for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(monic.coeffs[k]));
  const double radius = std::min(1.0 + bound, 1e6) * 0.5 + 0.5;
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) /
                           static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius, ang);
  }

  for (int it = 0; it < max_iter; ++it) {
    double biggest_step = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto [val, der] = monic.eval_with_derivative(z[k]);
      if (val == cplx{}) continue;
      const cplx ratio = val / der;
      cplx repulsion{};
      for (std::size_t l = 0; l < n; ++l) {
        if (l != k) repulsion += 1.0 / (z[k] - z[l]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      biggest_step = std::max(biggest_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (biggest_step < 1e-14) {
      std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
      return z;
    }
  }
  return std::nullopt;
}

}  // namespace dj

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <string>

#include "diracjost/spectrum.hpp"
#include "diracjost/verify.hpp"

using namespace dj;

namespace {

const std::string kData = DJ_TEST_DATA;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

CoefficientProfile scalar_p1(double p1) {
  return CoefficientProfile(1, {ComplexMatrix{{1}}, ComplexMatrix{{1}}}, {ComplexMatrix{{-1}}},
                            {ComplexMatrix{{p1}}}, {ComplexMatrix{{0}}});
}

// Real root in (-1, 1) of p t^3 + p t + 1, by bisection; the cubic is monotone.
double cubic_root(double p) {
  double lo = -1.0, hi = 1.0;
  auto f = [p](double t) { return p * t * t * t + p * t + 1.0; };
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double row_hadamard(const ComplexMatrix& a) {
  double h = 1.0;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    double row = 0;
    for (std::size_t c = 0; c < a.dim(); ++c) row += std::norm(a(r, c));
    h *= std::sqrt(row);
  }
  return h;
}

}  // namespace

TEST_CASE("spectral parameter") {
  CHECK(lambda_of_t(0.5) == -2.5);
  CHECK(lambda_of_t(-0.5) == 2.5);
  CHECK(code_of([] { lambda_of_t(0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { lambda_of_t(1.0); }) == ErrorCode::DomainError);
  const SpectralParameter sp(0.25);
  CHECK(sp.z() == cplx{0.0, -0.25});
}

TEST_CASE("options are checked") {
  EigenOptions o;
  o.grid_points = 2;
  CHECK(code_of([&] { o.check(); }) == ErrorCode::InvalidArgument);
  o = {};
  o.newton_tol = 0;
  CHECK(code_of([&] { o.check(); }) == ErrorCode::InvalidArgument);
  o = {};
  o.boundary_margin = 0.5;
  CHECK(code_of([&] { o.check(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("free determinant polynomial") {
  const Polynomial d1 = det_polynomial(compute_jost(free_profile(1)));
  const Polynomial d3 = det_polynomial(compute_jost(free_profile(3)));
  for (std::size_t k = 0; k < d1.coeffs.size(); ++k)
    CHECK(std::abs(d1.coeffs[k] - (k == 1 ? 1.0 : 0.0)) < 1e-14);
  for (std::size_t k = 0; k < d3.coeffs.size(); ++k)
    CHECK(std::abs(d3.coeffs[k] - (k == 3 ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("multiplicity of constructed polynomials") {
  // (z + 0.5i)(z - 2)
  const Polynomial simple{{cplx{0, -1.0}, cplx{-2.0, 0.5}, 1.0}};
  CHECK(multiplicity(simple, 0.5) == 1);
  // (z + 0.5i)^2
  const Polynomial dbl{{cplx{-0.25, 0}, cplx{0, 1.0}, 1.0}};
  CHECK(multiplicity(dbl, 0.5) == 2);
  CHECK(code_of([&] { multiplicity(Polynomial{{0.0, 0.0}}, 0.5); }) ==
        ErrorCode::DegenerateRoot);
  CHECK(code_of([&] { multiplicity(simple, 0.3); }) == ErrorCode::DomainError);
}

TEST_CASE("free profile has no eigenvalues") {
  for (std::size_t m : {1u, 2u, 4u}) {
    const CoefficientProfile f = free_profile(m);
    const EigenSearch s = find_eigenvalues(compute_jost(f), f);
    CHECK(s.eigenvalues.empty());
    CHECK(s.boundary_suspects.empty());
    const SpectralReport r = spectral_report(f);
    CHECK(r.eigenvalues.empty());
    CHECK(r.band_lo == -2.0);
    CHECK(r.band_hi == 2.0);
    CHECK(r.disc_root_count == 0);
  }
}

TEST_CASE("scalar benchmark against the cubic") {
  for (double p : {3.0, -3.0}) {
    const CoefficientProfile prof = scalar_p1(p);
    const JostSeries j = compute_jost(prof);
    const EigenSearch s = find_eigenvalues(j, prof);
    REQUIRE(s.eigenvalues.size() == 1);
    const EigenvalueRecord& e = s.eigenvalues[0];
    const double t = cubic_root(p);
    CHECK(std::abs(e.t - t) < 1e-12);
    CHECK(std::abs(e.lambda - (-t - 1.0 / t)) < 1e-11);
    CHECK(e.multiplicity == 1);
    if (p > 0) {
      CHECK(e.t < 0.0);
      CHECK(e.lambda > 2.0);
      CHECK(e.lambda < 4.0);
      CHECK(e.lambda == doctest::Approx(3.583988066677814).epsilon(1e-12));
    } else {
      CHECK(e.t > 0.0);
      CHECK(e.lambda < -2.0);
      CHECK(e.lambda > -4.0);
      CHECK(e.lambda == doctest::Approx(-3.583988066677814).epsilon(1e-12));
    }
    const SimplicityCertificate& c = e.certificate;
    CHECK(std::abs(c.value) > 1e-6);
    CHECK(c.relative_gap < 1e-8);
    CHECK(c.phase_ratio.real() > 0.0);
    CHECK(std::abs(c.phase_ratio.imag()) <= 1e-8 * std::abs(c.phase_ratio));
    CHECK(multiplicity(det_polynomial(j), e.t) == 1);
    CHECK(std::abs(det_polynomial(j)(e.z)) < 1e-12);
  }
}

TEST_CASE("wronskian identity") {
  const CoefficientProfile f = free_profile(2);
  const JostSeries jf = compute_jost(f);
  const WronskianSides w = wronskian_sides(jf, f, 0.5);
  const ComplexMatrix expect = cplx{0.0, 0.25} * ComplexMatrix::identity(2);
  CHECK(mat_norm(w.lhs - expect) < 1e-13);
  CHECK(mat_norm(w.rhs - expect) < 1e-13);
  CHECK(wronskian_identity_gap(jf, f, 0.5) < 1e-13);
  for (int k = 0; k < 20; ++k) {
    const double t = (k % 2 ? -1.0 : 1.0) * (0.05 + 0.9 * std::fmod((k + 1) * 0.618034, 1.0));
    CHECK(wronskian_identity_gap(jf, f, t) < 1e-12);
    const WronskianSides ws = wronskian_sides(jf, f, t);
    CHECK(mat_norm(ws.lhs - cplx{0.0, t * t} * ComplexMatrix::identity(2)) < 1e-12);
  }
  for (const CoefficientProfile& p : random_suite(19, 10)) {
    const JostSeries j = compute_jost(p);
    for (int k = 0; k < 20; ++k) {
      const double t = (k % 2 ? -1.0 : 1.0) * (0.05 + 0.9 * std::fmod((k + 1) * 0.618034, 1.0));
      CHECK(wronskian_identity_gap(j, p, t) < 1e-10);
    }
  }
}

TEST_CASE("certificate off a root") {
  const CoefficientProfile p = scalar_p1(3.0);
  const JostSeries j = compute_jost(p);
  CHECK(code_of([&] { simplicity_certificate(j, p, 0.5); }) == ErrorCode::NullVectorNotFound);
  const CoefficientProfile f = free_profile(2);
  CHECK(code_of([&] { simplicity_certificate(compute_jost(f), f, -0.3); }) ==
        ErrorCode::NullVectorNotFound);
}

TEST_CASE("coupled 2x2 profile") {
  const CoefficientProfile p = load_profile_file(kData + "/m2_coupled.json");
  const JostSeries j = compute_jost(p);
  const EigenSearch s = find_eigenvalues(j, p);
  CHECK(s.eigenvalues.size() >= 1);
  CHECK(s.eigenvalues.size() <= p.dim() * (4 * p.cutoff() + 3));
  for (const EigenvalueRecord& e : s.eigenvalues) {
    CHECK(std::abs(e.lambda) > 2.0);
    CHECK(e.multiplicity == 1);
    CHECK(std::abs(mat_det(jost_F(j, 0, e.z))) < 1e-10);
    CHECK(e.certificate.relative_gap < 1e-8);
  }
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end(),
                       [](const auto& a, const auto& b) { return a.lambda < b.lambda; }));
}

TEST_CASE("interpolated determinant agrees with direct evaluation") {
  for (const CoefficientProfile& p : random_suite(23, 12)) {
    const JostSeries j = compute_jost(p);
    const Polynomial d = det_polynomial(j);
    CHECK(d.degree() <= p.dim() * (4 * p.cutoff() + 3));
    double scale = 0;
    for (int k = 0; k < 64; ++k)
      scale = std::max(scale, row_hadamard(jost_F(j, 0, std::polar(1.0, 2 * std::numbers::pi * k / 64))));
    for (int k = 0; k < 100; ++k) {
      const double t = (k % 2 ? -1.0 : 1.0) * (0.01 + 0.98 * std::fmod((k + 1) * 0.754877666, 1.0));
      const cplx z{0.0, -t};
      CHECK(std::abs(d(z) - mat_det(jost_F(j, 0, z))) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("disc root count agrees with polynomial roots") {
  int compared = 0;
  for (const CoefficientProfile& p : random_suite(29, 40)) {
    // the monomial basis is only trustworthy at low degree
    if (p.dim() * (4 * p.cutoff() + 3) > 40) continue;
    const JostSeries j = compute_jost(p);
    Polynomial d = det_polynomial(j).deflate_origin(p.dim());
    // interpolation leaves rounding noise above the true degree
    const double cut = 1e-12 * d.max_coeff();
    while (d.coeffs.size() > 1 && std::abs(d.coeffs.back()) < cut) d.coeffs.pop_back();
    const auto roots = aberth_roots(d);
    REQUIRE(roots.has_value());
    int inside = 0;
    bool near_circle = false;
    for (cplx r : *roots) {
      if (std::abs(r) < 1.0) ++inside;
      if (std::abs(std::abs(r) - 1.0) < 1e-6) near_circle = true;
    }
    if (near_circle) continue;
    CHECK(disc_root_count(j) == inside);
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("eigenvalues are roots of the interpolated determinant") {
  for (const CoefficientProfile& p : random_suite(31, 10)) {
    const JostSeries j = compute_jost(p);
    const Polynomial d = det_polynomial(j);
    const EigenSearch s = find_eigenvalues(j, p);
    for (const EigenvalueRecord& e : s.eigenvalues) {
      CHECK(std::abs(d(e.z)) <= 1e-8 * d.magnitude_at(e.z));
      CHECK(e.multiplicity == 1);
    }
  }
}

TEST_CASE("reports") {
  const SpectralReport r = spectral_report(scalar_p1(3.0));
  REQUIRE(r.eigenvalues.size() == 1);
  CHECK(r.root_count_bound == 7);
  CHECK(r.disc_root_count >= 1);
  const std::string csv = report_to_csv(r);
  CHECK(csv.rfind("t,z_re,z_im,lambda,multiplicity,det_residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  const std::string json = report_to_json(r);
  CHECK(json.find("\"eigenvalues\"") != std::string::npos);
  CHECK(json == report_to_json(spectral_report(scalar_p1(3.0))));
}

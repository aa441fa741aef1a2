#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "diracjost/jost.hpp"
#include "diracjost/verify.hpp"

using namespace dj;

namespace {

const std::string kData = DJ_TEST_DATA;

CoefficientProfile scalar_p1(double p1) {
  return CoefficientProfile(1, {ComplexMatrix{{1}}, ComplexMatrix{{1}}}, {ComplexMatrix{{-1}}},
                            {ComplexMatrix{{p1}}}, {ComplexMatrix{{0}}});
}

// Scalar N0 = 3 profile with decaying potentials on both components.
CoefficientProfile scalar_n0_3() {
  const ComplexMatrix one{{1}};
  return CoefficientProfile(1, {one, one, one, one}, {-one, -one, -one},
                            {ComplexMatrix{{0.8}}, ComplexMatrix{{-0.4}}, ComplexMatrix{{0.2}}},
                            {ComplexMatrix{{0.3}}, ComplexMatrix{{0.0}}, ComplexMatrix{{-0.1}}});
}

std::vector<cplx> sample_points(int count) {
  std::vector<cplx> zs;
  for (int k = 0; k < count; ++k) {
    const double r = (k % 2 == 0) ? 1.0 : 0.5;
    const double ang = 2 * std::numbers::pi * std::fmod((k + 1) * 0.6180339887498949, 1.0);
    zs.push_back(std::polar(r, ang));
  }
  return zs;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("lambda map") {
  const cplx z{0.0, -0.5};
  CHECK(std::abs(lambda_of_z(z) - cplx{-2.5, 0.0}) < 1e-15);
  CHECK(std::abs(dlambda_dz(cplx{1.0, 0.0}) - cplx{0.0, -2.0}) < 1e-15);
  CHECK(code_of([] { lambda_of_z(0.0); }) == ErrorCode::DomainError);
}

TEST_CASE("free series is exact") {
  for (std::size_t m : {1u, 2u, 4u, 8u}) {
    const JostSeries j = compute_jost(free_profile(m));
    const ComplexMatrix I = ComplexMatrix::identity(m);
    CHECK(j.max_offset() == 4);
    for (std::size_t n = 0; n <= j.cutoff() + 1; ++n)
      for (std::size_t s = 0; s <= j.max_offset(); ++s)
        CHECK(j.a(n, s) == (s == 1 ? I : ComplexMatrix::zero(m)));
    for (std::size_t n = 1; n <= j.cutoff() + 2; ++n)
      for (std::size_t s = 0; s <= j.max_offset(); ++s)
        CHECK(j.b(n, s) == (s == 0 ? -kI * I : ComplexMatrix::zero(m)));
    const std::vector<ComplexMatrix> f0 = jost_function(j);
    CHECK(jost_function_degree(j) == 1);
    CHECK(f0[1] == I);
  }
}

TEST_CASE("free evaluation examples") {
  const JostSeries j = compute_jost(free_profile(1));
  const JostValue v = eval_jost(j, 2, 0.5);
  CHECK(v.F == ComplexMatrix{{0.03125}});
  CHECK(v.G == ComplexMatrix{{cplx{0.0, -0.0625}}});
  const JostSeries j3 = compute_jost(free_profile(3));
  const JostValue u = eval_jost(j3, 1, std::polar(1.0, 0.7));
  for (std::size_t c = 0; c < 3; ++c) {
    double col = 0;
    for (std::size_t r = 0; r < 3; ++r) col += std::norm(u.F(r, c));
    CHECK(std::sqrt(col) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(code_of([&] { eval_jost(j, 1, 0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { eval_jost(j, 0, 0.5); }) == ErrorCode::IndexOutOfDomain);
}

TEST_CASE("free residual is zero to rounding") {
  const CoefficientProfile f = free_profile(2);
  const JostSeries j = compute_jost(f);
  for (cplx z : sample_points(40)) CHECK(recurrence_residual(j, f, z, 6) < 1e-14);
}

TEST_CASE("P1 = 3 scalar series") {
  const CoefficientProfile p = scalar_p1(3.0);
  const JostSeries j = compute_jost(p);
  const std::vector<ComplexMatrix> f0 = jost_function(j);
  double beyond = 0;
  for (std::size_t s = 2; s < f0.size(); ++s) beyond = std::max(beyond, mat_norm(f0[s]));
  CHECK(beyond > 0.0);
  CHECK(jost_function_degree(j) <= 7);
  CHECK((mat_norm(f0[2]) > 0 || mat_norm(f0[3]) > 0));
  CHECK(f0[0].is_zero());
  for (cplx z : sample_points(100)) CHECK(recurrence_residual(j, p, z, 4) < 1e-12);
  CHECK(zero_pattern_excess(j) < 1e-14);
}

TEST_CASE("corrupted series is detected") {
  const CoefficientProfile p = scalar_p1(3.0);
  const JostSeries bad = compute_jost(p).with_perturbed_a(0, 1, 1e-3);
  double worst = 0;
  for (cplx z : sample_points(20)) worst = std::max(worst, recurrence_residual(bad, p, z, 4));
  CHECK(worst > 1e-6);
}

TEST_CASE("unperturbed but explicit cutoff equals the free series") {
  const ComplexMatrix I2 = ComplexMatrix::identity(2);
  const ComplexMatrix Z2 = ComplexMatrix::zero(2);
  const CoefficientProfile p(2, {I2, I2, I2, I2}, {-I2, -I2, -I2}, {Z2, Z2, Z2}, {Z2, Z2, Z2});
  const JostSeries j = compute_jost(p);
  const JostSeries f = compute_jost(free_profile(2));
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t s = 0; s <= j.max_offset(); ++s)
      CHECK(j.a(n, s) == (s == 1 ? I2 : Z2));
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t s = 0; s <= j.max_offset(); ++s)
      CHECK(j.b(n, s) == (s == 0 ? -kI * I2 : Z2));
  for (cplx z : sample_points(10)) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const JostValue a = eval_jost(j, n, z);
      const JostValue b = eval_jost(f, n, z);
      CHECK(mat_norm(a.F - b.F) <= 1e-15);
      CHECK(mat_norm(a.G - b.G) <= 1e-15);
    }
  }
}

TEST_CASE("transformation blocks") {
  const CoefficientProfile f = free_profile(3);
  for (std::size_t n = 1; n <= 4; ++n) {
    const TransferBlocks t = closed_form_T(f, n);
    CHECK(t.t11 == ComplexMatrix::identity(3));
    CHECK(t.t22 == ComplexMatrix::identity(3));
    CHECK(t.t12.is_zero());
  }
  const CoefficientProfile p = load_profile_file(kData + "/m2_coupled.json");
  const TransferBlocks beyond = closed_form_T(p, 2);
  CHECK(beyond.t11 == ComplexMatrix::identity(2));
  CHECK(beyond.t22 == ComplexMatrix::identity(2));
  CHECK(beyond.t12.is_zero());

  for (const CoefficientProfile& q : random_suite(11, 10)) {
    const JostSeries j = compute_jost(q);
    for (std::size_t n = 1; n <= q.cutoff(); ++n) {
      const TransferBlocks t = closed_form_T(q, n);
      CHECK(mat_norm(t.t11 - j.a(n, 1)) <= 1e-10);
      CHECK(mat_norm(t.t22 - kI * j.b(n, 0)) <= 1e-10);
    }
  }
}

TEST_CASE("asymptotics") {
  const JostSeries jf = compute_jost(free_profile(2));
  for (const SiteDeviation& d : asymptotics_check(jf, std::polar(0.8, 1.1)))
    CHECK(d.deviation == 0.0);

  const CoefficientProfile p = scalar_n0_3();
  const JostSeries j = compute_jost(p);
  const std::vector<SiteDeviation> d = asymptotics_check(j, cplx{0.0, -0.5});
  REQUIRE(d.size() == 6);
  for (std::size_t k = 0; k + 1 < 5; ++k) CHECK(d[k + 1].deviation <= d[k].deviation);
  CHECK(d[4].deviation == 0.0);
  CHECK(d[5].deviation == 0.0);
  CHECK(d[0].deviation == doctest::Approx(0.3369).epsilon(1e-3));
  CHECK(d[1].deviation == doctest::Approx(0.2283).epsilon(1e-3));
  CHECK(d[2].deviation == doctest::Approx(0.1669).epsilon(1e-3));
  CHECK(d[3].deviation == doctest::Approx(0.1).epsilon(1e-3));

  for (const CoefficientProfile& q : random_suite(5, 10)) {
    const JostSeries jq = compute_jost(q);
    for (const SiteDeviation& s : asymptotics_check(jq, std::polar(0.7, 0.3)))
      if (s.n > q.cutoff()) CHECK(s.deviation == 0.0);
  }
}

TEST_CASE("series evaluation agrees with a direct backward sweep") {
  for (const CoefficientProfile& q : random_suite(3, 8)) {
    const JostSeries j = compute_jost(q);
    for (cplx z : {cplx{0.0, -0.4}, std::polar(0.9, 2.0), std::polar(0.5, -1.0)}) {
      const JostSweep sw = jost_sweep(q, z);
      for (std::size_t n = 0; n <= q.cutoff() + 1; ++n) {
        const ComplexMatrix F = jost_F(j, n, z);
        CHECK(mat_norm(F - sw.F[n]) <= 1e-9 * std::max(1.0, mat_norm(F)));
        const ComplexMatrix dF = jost_F_prime(j, n, z);
        CHECK(mat_norm(dF - sw.dF[n]) <= 1e-9 * std::max(1.0, mat_norm(dF)));
      }
      for (std::size_t n = 1; n <= q.cutoff() + 2; ++n) {
        const ComplexMatrix G = jost_G(j, n, z);
        CHECK(mat_norm(G - sw.G[n]) <= 1e-9 * std::max(1.0, mat_norm(G)));
        const ComplexMatrix dG = jost_G_prime(j, n, z);
        CHECK(mat_norm(dG - sw.dG[n]) <= 1e-9 * std::max(1.0, mat_norm(dG)));
      }
    }
  }
}

TEST_CASE("derivatives match central differences") {
  const CoefficientProfile p = load_profile_file(kData + "/m2_coupled.json");
  const JostSeries j = compute_jost(p);
  const cplx z = std::polar(0.6, 0.4);
  const double h = 1e-6;
  const ComplexMatrix fd = (1.0 / (2 * h)) * (jost_F(j, 0, z + h) - jost_F(j, 0, z - h));
  CHECK(mat_norm(fd - jost_F_prime(j, 0, z)) < 1e-7);
  const ComplexMatrix gd = (1.0 / (2 * h)) * (jost_G(j, 1, z + h) - jost_G(j, 1, z - h));
  CHECK(mat_norm(gd - jost_G_prime(j, 1, z)) < 1e-7);
}

TEST_CASE("invalid profile is rejected") {
  CHECK(code_of([] { compute_jost(load_profile_file(kData + "/singular_b1.json")); }) ==
        ErrorCode::InvalidProfile);
}

TEST_CASE("series json") {
  const std::string s = series_to_json(compute_jost(scalar_p1(3.0)));
  CHECK(s.find("\"N0\"") != std::string::npos);
  CHECK(s.find("\"S\":8") != std::string::npos);
  CHECK(s == series_to_json(compute_jost(scalar_p1(3.0))));
}

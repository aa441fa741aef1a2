#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "diracjost/oracle.hpp"
#include "diracjost/verify.hpp"

using namespace dj;

namespace {

const std::string kData = DJ_TEST_DATA;

CoefficientProfile scalar_p1(double p1) {
  return CoefficientProfile(1, {ComplexMatrix{{1}}, ComplexMatrix{{1}}}, {ComplexMatrix{{-1}}},
                            {ComplexMatrix{{p1}}}, {ComplexMatrix{{0}}});
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

TEST_CASE("free section assembly") {
  const FiniteSection fs = build_finite_section(free_profile(1), 2);
  REQUIRE(fs.size() == 4);
  CHECK(fs.bandwidth() == 3);
  const ComplexMatrix expect{{0, -1, 0, 1}, {-1, 0, 0, 0}, {0, 0, 0, -1}, {1, 0, -1, 0}};
  CHECK(fs.dense() == expect);
  CHECK(fs.hermitian_defect() == 0.0);
  CHECK(fs.index(2, 2, 0) == 3);
}

TEST_CASE("a diagonal perturbation changes one entry") {
  const ComplexMatrix h0 = build_finite_section(free_profile(1), 6).dense();
  const ComplexMatrix h = build_finite_section(scalar_p1(3.0), 6).dense();
  const ComplexMatrix diff = h - h0;
  for (std::size_t r = 0; r < diff.dim(); ++r)
    for (std::size_t c = 0; c < diff.dim(); ++c)
      CHECK(diff(r, c) == (r == 0 && c == 0 ? cplx{3.0} : cplx{0.0}));
}

TEST_CASE("sections of admissible profiles are Hermitian") {
  for (const CoefficientProfile& p : random_suite(37, 10)) {
    const FiniteSection fs = build_finite_section(p, p.cutoff() + 5);
    CHECK(fs.hermitian_defect() == 0.0);
    CHECK(fs.bandwidth() == 4 * p.dim() - 1);
  }
}

TEST_CASE("free section spectrum") {
  const std::vector<double> e = oracle_eigs(build_finite_section(free_profile(1), 500));
  REQUIRE(e.size() == 1000);
  CHECK(e.front() >= -2.0);
  CHECK(e.back() <= 2.0);
  CHECK(e.front() <= -1.99);
  CHECK(e.back() >= 1.99);
  for (std::size_t k = 0; k < e.size(); ++k) CHECK(e[k] + e[e.size() - 1 - k] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

  // a path with unit couplings: 2 cos(k pi / (2N + 1))
  for (std::size_t N : {3u, 10u, 50u}) {
    const std::vector<double> f = oracle_eigs(build_finite_section(free_profile(1), N));
    for (std::size_t k = 1; k <= 2 * N; ++k) {
      const double exact = 2.0 * std::cos(k * std::numbers::pi / (2.0 * N + 1.0));
      CHECK(std::abs(f[2 * N - k] - exact) < 1e-12);
    }
  }

  const std::vector<double> m3 = oracle_eigs(build_finite_section(free_profile(3), 40));
  for (std::size_t k = 0; k < m3.size(); ++k) CHECK(std::abs(m3[k] + m3[m3.size() - 1 - k]) < 1e-12);
}

TEST_CASE("banded solver agrees with the dense Jacobi solver") {
  for (const CoefficientProfile& p : random_suite(41, 6)) {
    const FiniteSection fs = build_finite_section(p, p.cutoff() + 4);
    const std::vector<double> banded = oracle_eigs(fs);
    const HermEig dense = herm_eig(fs.dense());
    REQUIRE(banded.size() == dense.values.size());
    for (std::size_t k = 0; k < banded.size(); ++k)
      CHECK(std::abs(banded[k] - dense.values[k]) < 1e-11 * std::max(1.0, fs.frobenius()));
  }
}

TEST_CASE("scalar benchmark section") {
  const std::vector<double> e = oracle_eigs(build_finite_section(scalar_p1(3.0), 400));
  std::size_t out = 0;
  for (double x : e) {
    if (x > 2.05) ++out;
    else CHECK(std::abs(x) <= 2.01);
  }
  CHECK(out == 1);
  CHECK(std::abs(e.back() - 3.583988066677814) < 1e-6);

  const SpectralReport r = spectral_report(scalar_p1(3.0));
  const ComparisonReport cmp = compare_spectra(r.eigenvalues, e);
  REQUIRE(cmp.matches.size() == 1);
  CHECK(cmp.matches[0].gap <= 1e-6);
  CHECK(cmp.unmatched_jost.empty());
  CHECK(cmp.unmatched_oracle.empty());
  CHECK(cmp.oracle_out_of_band == 1);
  CHECK(cmp.jost_out_of_band == 1);
}

TEST_CASE("isolated eigenvalue converges as the section grows") {
  const CoefficientProfile p = scalar_p1(3.0);
  const double lambda = spectral_report(p).eigenvalues.at(0).lambda;
  double prev = 1e300;
  for (std::size_t N = 3; N <= 12; ++N) {
    const double gap = std::abs(oracle_eigs(build_finite_section(p, N)).back() - lambda);
    if (prev > 1e-13) CHECK(gap <= prev);
    prev = gap;
  }
  CHECK(prev < 1e-13);
  for (std::size_t N : {100u, 200u, 400u, 800u})
    CHECK(std::abs(oracle_eigs(build_finite_section(p, N)).back() - lambda) < 1e-12);
}

TEST_CASE("truncation too small") {
  const CoefficientProfile deep = load_profile_file(kData + "/deep_n0_8.json");
  CHECK(code_of([&] { build_finite_section(deep, 3); }) == ErrorCode::TruncationTooSmall);
  CHECK(code_of([&] { build_finite_section(deep, 9); }) == ErrorCode::TruncationTooSmall);
  CHECK(build_finite_section(deep, 10).sites() == 10);
}

TEST_CASE("free comparison is empty") {
  const ComparisonReport cmp =
      compare_spectra({}, oracle_eigs(build_finite_section(free_profile(1), 500)));
  CHECK(cmp.matches.empty());
  CHECK(cmp.unmatched_jost.empty());
  CHECK(cmp.unmatched_oracle.empty());
  CHECK(cmp.oracle_out_of_band == 0);
}

TEST_CASE("random suite counts agree") {
  for (const CoefficientProfile& p : random_suite(43, 8)) {
    const SpectralReport r = spectral_report(p);
    const ComparisonReport cmp = compare_spectra(r.eigenvalues, oracle_eigs(build_finite_section(p, 400)));
    CHECK(cmp.oracle_out_of_band == cmp.matches.size());
    CHECK(cmp.unmatched_oracle.empty());
    for (const SpectrumMatch& m : cmp.matches) CHECK(m.gap <= 1e-6);
  }
}

TEST_CASE("csv output") {
  const std::vector<double> e = oracle_eigs(build_finite_section(free_profile(1), 10));
  const std::string band = band_csv(e, 10);
  std::istringstream in(band);
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,index,lambda,in_band");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "1");
  }
  CHECK(rows == 20);
  CHECK(oracle_spectrum_csv(e, 10).rfind("N,index,lambda\n", 0) == 0);

  SpectralReport r = spectral_report(scalar_p1(3.0));
  const std::vector<double> o = oracle_eigs(build_finite_section(scalar_p1(3.0), 400));
  const ComparisonReport cmp = compare_spectra(r.eigenvalues, o);
  attach_oracle(r, cmp);
  REQUIRE(r.eigenvalues[0].oracle_lambda.has_value());
  CHECK(std::abs(*r.eigenvalues[0].oracle_gap) <= 1e-6);
  CHECK(comparison_to_json(cmp, 400, o).find("\"matches\"") != std::string::npos);
}

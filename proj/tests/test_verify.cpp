#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "diracjost/verify.hpp"

using namespace dj;

namespace {

const std::string kData = DJ_TEST_DATA;

const CheckResult& find_check(const ProfileVerdict& v, const std::string& name) {
  for (const CheckResult& c : v.checks)
    if (c.name == name) return c;
  FAIL("no check named " << name);
  return v.checks.front();
}

}  // namespace

TEST_CASE("unit_uniform") {
  std::mt19937_64 a(9), b(9);
  for (int k = 0; k < 1000; ++k) {
    const double x = unit_uniform(a);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(x == unit_uniform(b));
  }
  std::mt19937_64 c(0);
  CHECK(unit_uniform(c) == static_cast<double>(std::mt19937_64(0)() >> 11) * 0x1.0p-53);
}

TEST_CASE("generator produces admissible, reproducible profiles") {
  const std::vector<CoefficientProfile> s1 = random_suite(7, 40);
  const std::vector<CoefficientProfile> s2 = random_suite(7, 40);
  CHECK(s1 == s2);
  CHECK_FALSE(s1 == random_suite(8, 40));
  bool saw_m3 = false, saw_n8 = false;
  for (const CoefficientProfile& p : s1) {
    CHECK(p.dim() >= 1);
    CHECK(p.dim() <= 3);
    CHECK(p.cutoff() >= 1);
    CHECK(p.cutoff() <= 8);
    saw_m3 = saw_m3 || p.dim() == 3;
    saw_n8 = saw_n8 || p.cutoff() == 8;
    CHECK(validate(p).ok);
    const ComplexMatrix I = ComplexMatrix::identity(p.dim());
    for (std::size_t n = 0; n <= p.cutoff(); ++n) {
      CHECK(mat_norm(p.a()[n] - I, NormKind::Spectral) < 0.5);
      CHECK(hermitian_defect(p.a()[n]) == 0.0);
    }
    for (std::size_t n = 1; n <= p.cutoff(); ++n) {
      CHECK(mat_norm(p.b()[n - 1] + I, NormKind::Spectral) < 0.5);
      CHECK(hermitian_defect(p.p()[n - 1]) == 0.0);
      CHECK(hermitian_defect(p.q()[n - 1]) == 0.0);
    }
  }
  CHECK(saw_m3);
  CHECK(saw_n8);
}

TEST_CASE("check list") {
  const std::vector<std::string> expect{"free_case",   "recurrence_residual", "zero_pattern",
                                        "tail_freeness", "wronskian_gap",     "simplicity",
                                        "degree_bound",  "oracle_agreement"};
  CHECK(check_names() == expect);
}

TEST_CASE("free and benchmark profiles pass every check") {
  for (const char* name : {"free_m1.json", "free_m2.json", "p1_plus3.json", "p1_minus3.json",
                           "m2_coupled.json"}) {
    const ProfileVerdict v = verify_profile(load_profile_file(kData + "/" + name), name);
    CHECK(v.checks.size() == 8);
    for (const CheckResult& c : v.checks) CHECK_MESSAGE(c.pass, std::string(name) << " " << c.name << " " << c.value);
    CHECK(v.pass());
  }
}

// A lone perturbation deep in the chain: the root is exact but the Jost
// solution there has mass ~ t^{4 N0}, so the certificate sits far below the
// absolute threshold.
TEST_CASE("deep perturbation: every check but simplicity passes") {
  const ProfileVerdict v = verify_profile(load_profile_file(kData + "/deep_n0_8.json"), "deep");
  for (const CheckResult& c : v.checks)
    if (c.name != "simplicity") CHECK_MESSAGE(c.pass, c.name);
  CHECK_FALSE(find_check(v, "simplicity").pass);
  CHECK(v.eigenvalue_count == 1);
}

TEST_CASE("series corruption trips the residual check") {
  VerifyOptions o;
  o.corruption = SeriesCorruption{};
  const ProfileVerdict v = verify_profile(load_profile_file(kData + "/p1_plus3.json"), "bad", o);
  CHECK_FALSE(v.pass());
  CHECK_FALSE(find_check(v, "recurrence_residual").pass);
  CHECK(find_check(v, "recurrence_residual").value > 1e-11);
}

TEST_CASE("random verification and reports") {
  const VerifySummary s = verify_random(3, 4);
  CHECK(s.pass());
  CHECK(s.profiles.size() == 4);
  CHECK(s.checks_total() == 32);
  CHECK(s.checks_failed() == 0);
  const std::string text = verify_to_text(s);
  CHECK(text.rfind("seed 3\n", 0) == 0);
  CHECK(text.find("4 profiles, 32 checks, 0 failed") != std::string::npos);
  CHECK(text == verify_to_text(verify_random(3, 4)));
  CHECK(verify_to_csv(s).rfind("profile,m,N0,check,pass,value,threshold\n", 0) == 0);
  CHECK(verify_to_json(s).find("\"checks_failed\"") != std::string::npos);
}

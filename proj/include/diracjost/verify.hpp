#pragma once

// Invariant suite run by `djost verify`, plus the seeded generator for random
// admissible profiles.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diracjost/profile.hpp"
#include "diracjost/spectrum.hpp"

namespace dj {

/// Random profile generator. Every matrix entry is drawn uniformly (real and
/// imaginary parts) and the matrix symmetrized as (X + X*)/2.
///   m in 1..max_dim, N0 in 1..max_cutoff, both uniform;
///   A_n = I + E, B_n = -I + E with E Hermitian rescaled to spectral norm
///   ab_radius * decay^k (k = n for A, n - 1 for B);
///   P_n, Q_n entries bounded by amplitude * decay^(n-1).
struct RandomProfileOptions {
  std::size_t max_dim = 3;
  std::size_t max_cutoff = 8;
  double amplitude = 2.0;
  double decay = 0.5;
  double ab_radius = 0.45;
};

/// Uniform double in [0, 1) from the top 53 bits, so the stream is the same
/// on every standard library.
double unit_uniform(std::mt19937_64& rng);

CoefficientProfile random_profile(std::mt19937_64& rng,
                                  const RandomProfileOptions& opts = {});
std::vector<CoefficientProfile> random_suite(std::uint64_t seed, std::size_t count,
                                             const RandomProfileOptions& opts = {});

/// Negative-control hook: adds delta * I to a_{n,s} of the computed series
/// before any check runs.
struct SeriesCorruption {
  std::size_t n = 0;
  std::size_t s = 1;
  double delta = 1e-6;
};

struct VerifyOptions {
  EigenOptions eig;
  std::size_t oracle_n = 400;
  double band_margin = 0.05;
  std::optional<SeriesCorruption> corruption;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // worst observed quantity
  double threshold = 0.0;  // pass iff value <= threshold (and any extra condition)
  std::string note;
};

struct ProfileVerdict {
  std::string label;
  std::size_t dim = 0;
  std::size_t cutoff = 0;
  std::uint64_t digest = 0;
  std::size_t eigenvalue_count = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
};

/// Check names, in report order.
const std::vector<std::string>& check_names();

ProfileVerdict verify_profile(const CoefficientProfile& p, const std::string& label,
                              const VerifyOptions& opts = {});

struct VerifySummary {
  std::optional<std::uint64_t> seed;
  std::vector<ProfileVerdict> profiles;

  std::size_t checks_total() const;
  std::size_t checks_failed() const;
  bool pass() const { return checks_failed() == 0; }
};

VerifySummary verify_random(std::uint64_t seed, std::size_t count,
                            const VerifyOptions& opts = {});

std::string verify_to_text(const VerifySummary& s);
std::string verify_to_json(const VerifySummary& s);
/// Header: profile,m,N0,check,pass,value,threshold
std::string verify_to_csv(const VerifySummary& s);

}  // namespace dj

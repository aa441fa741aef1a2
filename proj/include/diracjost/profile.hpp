#pragma once

// Coefficient data {A_n, B_n, P_n, Q_n} of the matrix-valued discrete Dirac
// system
//
//   A_n y_{n+1}^(2) + B_n y_n^(2) + P_n y_n^(1) = lambda y_n^(1)
//   A_{n-1} y_{n-1}^(1) + B_n y_n^(1) + Q_n y_n^(2) = lambda y_n^(2),   n >= 1
//
// with y_0^(1) = 0. Only eventually-free profiles are representable: beyond
// the cutoff N0 the coefficients are exactly A = I, B = -I, P = Q = 0.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "diracjost/matkit.hpp"

namespace dj {

enum class CoefficientKind { A, B, P, Q };

class CoefficientProfile {
 public:
  /// `a` holds A_0..A_N0; `b`, `p`, `q` hold index 1..N0 at position n-1.
  CoefficientProfile(std::size_t m, std::vector<ComplexMatrix> a,
                     std::vector<ComplexMatrix> b, std::vector<ComplexMatrix> p,
                     std::vector<ComplexMatrix> q);

  std::size_t dim() const noexcept { return m_; }
  std::size_t cutoff() const noexcept { return n0_; }

  const std::vector<ComplexMatrix>& a() const noexcept { return a_; }
  const std::vector<ComplexMatrix>& b() const noexcept { return b_; }
  const std::vector<ComplexMatrix>& p() const noexcept { return p_; }
  const std::vector<ComplexMatrix>& q() const noexcept { return q_; }

  friend bool operator==(const CoefficientProfile&,
                         const CoefficientProfile&) = default;

 private:
  std::size_t m_;
  std::size_t n0_;
  std::vector<ComplexMatrix> a_, b_, p_, q_;
};

enum class ViolationKind {
  NotHermitian,
  SingularA,
  SingularB,
  NonFinite,
};

const char* to_string(ViolationKind kind) noexcept;
const char* to_string(CoefficientKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  CoefficientKind coefficient;
  std::size_t index;
  double magnitude;  // Hermitian defect, smallest singular value, ...
};

struct ValidationReport {
  bool ok = true;
  double decay_sum = 0.0;
  std::vector<Violation> violations;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kInvertibilityTol = 1e-10;

CoefficientProfile free_profile(std::size_t m);

/// Parses the JSON profile document. Unknown keys, ragged or mis-sized
/// matrices and non-finite numbers are rejected.
CoefficientProfile load_profile(std::string_view json_text);
CoefficientProfile load_profile_file(const std::string& path);
std::string serialize_profile(const CoefficientProfile& p);

ValidationReport validate(const CoefficientProfile& p);

/// "ok" or one line per violation, e.g. "SingularB B[1] 0".
std::string validation_to_text(const ValidationReport& r);
std::string validation_to_json(const ValidationReport& r);

/// Coefficient at site n, exact free value beyond the cutoff.
ComplexMatrix coefficient_at(const CoefficientProfile& p, CoefficientKind kind,
                             std::size_t n);

/// sum_{k >= n} (||I - A_k|| + ||I + B_k|| + ||P_k|| + ||Q_k||), Frobenius.
double perturbation_tail_norm(const CoefficientProfile& p, std::size_t n);

/// sum_{n=1}^{N0} n (||I - A_n|| + ||I + B_n|| + ||P_n|| + ||Q_n||).
double decay_sum(const CoefficientProfile& p);

/// FNV-1a over the bit patterns of every stored coefficient.
std::uint64_t profile_digest(const CoefficientProfile& p);

}  // namespace dj

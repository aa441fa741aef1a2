#pragma once

// Jost solution (F_n(z), G_n(z)) of the discrete Dirac system at
// lambda = -iz - (iz)^{-1}. For an eventually-free profile every F_n, G_n is
// a matrix polynomial in z:
//
//   F_n(z) = z^{2n} sum_{s>=1} a_{n,s} z^s,     G_n(z) = z^{2n} sum_{s>=0} b_{n,s} z^s
//
// normalized so that (F_n, G_n) = (z, -i) z^{2n} I exactly once n > N0.

#include <string>
#include <utility>
#include <vector>

#include "diracjost/matkit.hpp"
#include "diracjost/profile.hpp"

namespace dj {

/// lambda(z) = -iz - (iz)^{-1} = -i (z - 1/z). DomainError at z = 0.
cplx lambda_of_z(cplx z);
/// d lambda / dz = -i (1 + z^{-2}).
cplx dlambda_dz(cplx z);

class JostSeries {
 public:
  std::size_t dim() const noexcept { return m_; }
  std::size_t cutoff() const noexcept { return n0_; }
  /// Largest stored power offset, 4 N0 + 4.
  std::size_t max_offset() const noexcept { return s_max_; }

  /// a_{n,s}, n in [0, N0+1], s in [0, S] (s = 0 is always zero).
  const ComplexMatrix& a(std::size_t n, std::size_t s) const;
  /// b_{n,s}, n in [1, N0+2], s in [0, S].
  const ComplexMatrix& b(std::size_t n, std::size_t s) const;

  /// Deliberately damaged copy, for negative controls only.
  JostSeries with_perturbed_a(std::size_t n, std::size_t s, cplx delta) const;

 private:
  friend JostSeries compute_jost(const CoefficientProfile& p);
  JostSeries(std::size_t m, std::size_t n0);

  std::size_t m_ = 0;
  std::size_t n0_ = 0;
  std::size_t s_max_ = 0;
  std::vector<std::vector<ComplexMatrix>> a_;  // [n][s]
  std::vector<std::vector<ComplexMatrix>> b_;  // [n][s], index 0 unused
};

/// Backward recursion from the free tail: for n = N0+1 down to 1,
///   b_{n,s}     = B_n^{-1} [ i a_{n,s+1} - i a_{n,s-1} - A_n b_{n+1,s-2} - P_n a_{n,s} ]
///   a_{n-1,s+2} = A_{n-1}^{-1} [ i b_{n,s+1} - i b_{n,s-1} - B_n a_{n,s} - Q_n b_{n,s} ]
/// which is the coefficient of z^{2n+s} in each equation of the system.
/// Throws InvalidProfile if the profile does not validate.
JostSeries compute_jost(const CoefficientProfile& p);

/// F_n(z); n >= 0, 0 < |z| <= 1.
ComplexMatrix jost_F(const JostSeries& j, std::size_t n, cplx z);
/// G_n(z); n >= 1, 0 < |z| <= 1.
ComplexMatrix jost_G(const JostSeries& j, std::size_t n, cplx z);
ComplexMatrix jost_F_prime(const JostSeries& j, std::size_t n, cplx z);
ComplexMatrix jost_G_prime(const JostSeries& j, std::size_t n, cplx z);

struct JostValue {
  ComplexMatrix F;
  ComplexMatrix G;
};

/// Both components at site n >= 1.
JostValue eval_jost(const JostSeries& j, std::size_t n, cplx z);

/// Coefficients of F_0(z) = sum_s a_{0,s} z^s, index s = 0..S.
std::vector<ComplexMatrix> jost_function(const JostSeries& j);

/// Largest power with a nonzero coefficient in F_0.
std::size_t jost_function_degree(const JostSeries& j);

/// max over n = 1..n_max of the Frobenius norms of the two defect matrices
///   A_n G_{n+1} + B_n G_n + P_n F_n - lambda F_n
///   A_{n-1} F_{n-1} + B_n F_n + Q_n G_n - lambda G_n
/// each divided by the sum of the norms of its terms (a backward error).
double recurrence_residual(const JostSeries& j, const CoefficientProfile& p,
                           cplx z, std::size_t n_max);

/// Largest coefficient norm past the structural zero pattern:
/// a_{n,s} with s > 4(N0-n)+3 and b_{n,s} with s > 4(N0-n)+2, n <= N0.
double zero_pattern_excess(const JostSeries& j);

/// F_n, G_n and their z-derivatives at sites 0..N0+2 from the system itself,
/// solved backward from the free values at N0+1 (F) and N0+2 (G). Index n of
/// each vector is site n; G[0] and dG[0] are left zero.
struct JostSweep {
  std::vector<ComplexMatrix> F, G, dF, dG;
};

JostSweep jost_sweep(const CoefficientProfile& p, cplx z);

struct TransferBlocks {
  ComplexMatrix t11;
  ComplexMatrix t12;
  ComplexMatrix t22;
};

/// Leading transformation blocks from the product formula
///   T_n^{22} = [ (-A_{N0} B_{N0}) ... (-A_n B_n) ]^{-1},  T_n^{11} = -B_n T_n^{22},
///   T_n^{12} = 0,
/// which must coincide with a_{n,1} and i b_{n,0}. n >= 1.
TransferBlocks closed_form_T(const CoefficientProfile& p, std::size_t n);

struct SiteDeviation {
  std::size_t n;
  double deviation;
};

/// d_n = || (F_n z^{-(2n+1)} - I ; G_n z^{-2n} + i I) || for n = 0..N0+2 (the G
/// block is omitted at n = 0). Evaluated on the coefficients, so the free tail
/// gives exactly zero.
std::vector<SiteDeviation> asymptotics_check(const JostSeries& j, cplx z);

/// {m, N0, S, a: [n][s], b: [n][s]} with b starting at site 1.
std::string series_to_json(const JostSeries& j);

}  // namespace dj

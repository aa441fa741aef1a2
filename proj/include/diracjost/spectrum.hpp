#pragma once

// Discrete spectrum from the zeros of det F_0(z) on the segment z = -it,
// t in (-1, 0) u (0, 1), where lambda = -t - 1/t is real with |lambda| > 2.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diracjost/jost.hpp"
#include "diracjost/poly.hpp"
#include "diracjost/profile.hpp"

namespace dj {

/// Root parameter t and the derived z = -it, lambda = -t - 1/t.
class SpectralParameter {
 public:
  /// Throws DomainError unless 0 < |t| < 1.
  explicit SpectralParameter(double t);

  double t() const noexcept { return t_; }
  cplx z() const noexcept { return {0.0, -t_}; }
  double lambda() const noexcept { return -t_ - 1.0 / t_; }

 private:
  double t_;
};

double lambda_of_t(double t);

struct EigenOptions {
  int grid_points = 20001;
  double newton_tol = 1e-12;
  double boundary_margin = 1e-6;

  void check() const;
};

struct SimplicityCertificate {
  cplx value;            // <A_0 G_1(z0) u, F_0'(z0) u>
  cplx factored;         // i (1 - t^{-2}) sum_n (|F_n u|^2 + |G_n u|^2)
  double relative_gap;   // |value - factored| / |factored|
  cplx phase_ratio;      // value / (i (1 - t^{-2})), real positive for a true root
  double null_residual;  // |F_0(z0) u|
};

struct EigenvalueRecord {
  double t = 0.0;
  cplx z;
  double lambda = 0.0;
  double det_residual = 0.0;          // |det F_0(z)|
  double derivative_magnitude = 0.0;  // |d/dt det F_0(-it)|
  int multiplicity = 1;               // zeros inside a small circle; 0 if undecided
  SimplicityCertificate certificate{};
  std::optional<double> oracle_lambda;
  std::optional<double> oracle_gap;
};

struct EigenSearch {
  std::vector<EigenvalueRecord> eigenvalues;  // sorted by lambda
  std::vector<double> boundary_suspects;      // roots inside the margin
  int newton_failures = 0;
  Polynomial det;                             // det F_0(z)
};

/// det F_0(z) by sampling at D+1 equispaced points on |z| = 1 and inverting
/// the (unitary) sampling map, D = m * degree_bound. Checks the result against
/// direct evaluation at held-out points on |z| = 1 and |z| = 1/2.
Polynomial det_polynomial(const std::vector<ComplexMatrix>& f0,
                          std::size_t degree_bound);
Polynomial det_polynomial(const JostSeries& j);

/// Multiplicity of the root -i t0 of d: smallest k with
/// |d^(k)(-i t0)| / k! > 1e-6 * max_j |c_j|.
int multiplicity(const Polynomial& d, double t0);

/// Scan and Newton polish run on det(F_0(z) / z) evaluated from the matrix
/// series, not on the interpolated scalar polynomial.
EigenSearch find_eigenvalues(const JostSeries& j, const CoefficientProfile& p,
                             const EigenOptions& opts = {});

struct WronskianSides {
  ComplexMatrix lhs;  // (G_1')* A_0 F_0 - (F_0')* A_0 G_1
  ComplexMatrix rhs;  // -i (1 - t^{-2}) sum_{n>=1} (F_n* F_n + G_n* G_n)
};

/// Both sides of the summed Green identity at z0 = -it.
WronskianSides wronskian_sides(const JostSeries& j, const CoefficientProfile& p,
                               double t);
/// ||lhs - rhs||_F / max(1, ||rhs||_F).
double wronskian_identity_gap(const JostSeries& j, const CoefficientProfile& p,
                              double t);

SimplicityCertificate simplicity_certificate(const JostSeries& j,
                                             const CoefficientProfile& p,
                                             double t0);

struct SpectralReport {
  double band_lo = -2.0;
  double band_hi = 2.0;
  std::vector<EigenvalueRecord> eigenvalues;
  std::vector<double> boundary_suspects;
  std::size_t root_count_bound = 0;  // m (4 N0 + 3)
  int disc_root_count = -1;          // nonzero roots of det F_0 in |z| < 1, -1 if unknown
  std::uint64_t profile_digest = 0;
};

/// Zeros of det(F_0(z) / z) in |z| < 1 by the argument principle; -1 if
/// det vanishes on the unit circle to rounding.
int disc_root_count(const JostSeries& j);

SpectralReport spectral_report(const CoefficientProfile& p,
                               const EigenOptions& opts = {});

std::string report_to_json(const SpectralReport& r);
/// Header: t,z_re,z_im,lambda,multiplicity,det_residual
std::string report_to_csv(const SpectralReport& r);

}  // namespace dj

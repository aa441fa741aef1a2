#pragma once

// Finite sections of the operator on sites 1..N, used as an independent check
// of the Jost-based spectrum. Basis order is (y_1^(1), y_1^(2), ..., y_N^(1),
// y_N^(2)), each block of size m; the far boundary is y_{N+1}^(2) = 0.

#include <string>
#include <vector>

#include "diracjost/matkit.hpp"
#include "diracjost/profile.hpp"
#include "diracjost/spectrum.hpp"

namespace dj {

/// Hermitian band matrix. Both triangles are stored so that the Hermitian
/// property of the assembled operator can be checked rather than assumed.
class FiniteSection {
 public:
  FiniteSection(std::size_t m, std::size_t sites);

  std::size_t sites() const noexcept { return sites_; }
  std::size_t block() const noexcept { return m_; }
  std::size_t size() const noexcept { return 2 * m_ * sites_; }
  /// Half bandwidth of the basis ordering: 4m - 1.
  std::size_t bandwidth() const noexcept { return kd_; }

  cplx at(std::size_t r, std::size_t c) const;
  void add(std::size_t r, std::size_t c, cplx v);

  /// Index of component `comp` (1 or 2), row `i` of site n (1-based site).
  std::size_t index(std::size_t n, int comp, std::size_t i) const {
    return ((n - 1) * 2 + static_cast<std::size_t>(comp - 1)) * m_ + i;
  }

  double hermitian_defect() const;
  double frobenius() const;
  ComplexMatrix dense() const;

  /// Lower band in LAPACK 'L' layout, column-major, ldab = kd + 1.
  std::vector<cplx> lower_band() const;

 private:
  std::size_t m_;
  std::size_t sites_;
  std::size_t kd_;
  std::vector<cplx> band_;  // (2 kd + 1) x size, entry (r, c) at [(r - c + kd) + c (2kd+1)]
};

/// Throws TruncationTooSmall unless N >= N0 + 2.
FiniteSection build_finite_section(const CoefficientProfile& p, std::size_t N);

/// All 2mN eigenvalues, ascending. Checks Hermiticity first (NotHermitian).
std::vector<double> oracle_eigs(const FiniteSection& fs);

struct SpectrumMatch {
  double lambda_jost;
  double lambda_oracle;
  double gap;
};

struct ComparisonReport {
  std::vector<SpectrumMatch> matches;
  std::vector<double> unmatched_jost;
  std::vector<double> unmatched_oracle;
  std::size_t oracle_out_of_band = 0;
  std::size_t jost_out_of_band = 0;
};

/// Pairs every oracle eigenvalue with |lambda| > 2 + band_margin to the
/// nearest out-of-band Jost eigenvalue (each Jost eigenvalue used at most once).
ComparisonReport compare_spectra(const std::vector<EigenvalueRecord>& jost,
                                 const std::vector<double>& oracle,
                                 double band_margin = 0.05);

/// Copies oracle columns into the report's eigenvalue records.
void attach_oracle(SpectralReport& report, const ComparisonReport& cmp);

/// Matches, unmatched lists, counts and the full oracle spectrum.
std::string comparison_to_json(const ComparisonReport& cmp, std::size_t N,
                               const std::vector<double>& spectrum);
/// Header: N,index,lambda
std::string oracle_spectrum_csv(const std::vector<double>& eigs, std::size_t N);
/// Header: N,index,lambda,in_band
std::string band_csv(const std::vector<double>& eigs, std::size_t N);

}  // namespace dj

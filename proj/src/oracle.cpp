#include "diracjost/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <lapacke.h>

#include "json.hpp"

namespace dj {

FiniteSection::FiniteSection(std::size_t m, std::size_t sites)
    : m_(m), sites_(sites), kd_(4 * m - 1),
      band_((2 * (4 * m - 1) + 1) * 2 * m * sites) {}

cplx FiniteSection::at(std::size_t r, std::size_t c) const {
  const std::size_t off = r > c ? r - c : c - r;
  if (off > kd_) return {};
  return band_[(r + kd_ - c) + c * (2 * kd_ + 1)];
}

void FiniteSection::add(std::size_t r, std::size_t c, cplx v) {
  const std::size_t off = r > c ? r - c : c - r;
  if (r >= size() || c >= size() || off > kd_) {
    throw Error(ErrorCode::IndexOutOfDomain, "entry outside the band");
  }
  band_[(r + kd_ - c) + c * (2 * kd_ + 1)] += v;
}

double FiniteSection::hermitian_defect() const {
  double acc = 0.0;
  for (std::size_t c = 0; c < size(); ++c) {
    const std::size_t r_hi = std::min(size() - 1, c + kd_);
    for (std::size_t r = c; r <= r_hi; ++r) {
      const double d = std::norm(at(r, c) - std::conj(at(c, r)));
      acc += r == c ? d : 2.0 * d;
    }
  }
  return std::sqrt(acc);
}

double FiniteSection::frobenius() const {
  double acc = 0.0;
  for (const cplx& z : band_) acc += std::norm(z);
  return std::sqrt(acc);
}

ComplexMatrix FiniteSection::dense() const {
  ComplexMatrix h(size());
  for (std::size_t c = 0; c < size(); ++c) {
    const std::size_t r_lo = c > kd_ ? c - kd_ : 0;
    const std::size_t r_hi = std::min(size() - 1, c + kd_);
    for (std::size_t r = r_lo; r <= r_hi; ++r) h(r, c) = at(r, c);
  }
  return h;
}

std::vector<cplx> FiniteSection::lower_band() const {
  const std::size_t ld = kd_ + 1;
  std::vector<cplx> ab(ld * size());
  for (std::size_t c = 0; c < size(); ++c) {
    const std::size_t r_hi = std::min(size() - 1, c + kd_);
    for (std::size_t r = c; r <= r_hi; ++r) ab[(r - c) + c * ld] = at(r, c);
  }
  return ab;
}

FiniteSection build_finite_section(const CoefficientProfile& p, std::size_t N) {
  if (N < p.cutoff() + 2) {
    throw Error(ErrorCode::TruncationTooSmall,
                "finite section needs N >= N0 + 2 = " +
                    std::to_string(p.cutoff() + 2) + ", got " + std::to_string(N));
  }
  const std::size_t m = p.dim();
  FiniteSection fs(m, N);
  auto put = [&](std::size_t row_site, int row_comp, std::size_t col_site,
                 int col_comp, const ComplexMatrix& blk) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k)
        if (blk(i, k) != cplx{})
          fs.add(fs.index(row_site, row_comp, i), fs.index(col_site, col_comp, k),
                 blk(i, k));
  };
  for (std::size_t n = 1; n <= N; ++n) {
    const ComplexMatrix Bn = coefficient_at(p, CoefficientKind::B, n);
    // (L y)_n^(1) = A_n y_{n+1}^(2) + B_n y_n^(2) + P_n y_n^(1)
    put(n, 1, n, 1, coefficient_at(p, CoefficientKind::P, n));
    put(n, 1, n, 2, Bn);
    if (n < N) put(n, 1, n + 1, 2, coefficient_at(p, CoefficientKind::A, n));
    // (L y)_n^(2) = A_{n-1} y_{n-1}^(1) + B_n y_n^(1) + Q_n y_n^(2)
    put(n, 2, n, 1, Bn);
    put(n, 2, n, 2, coefficient_at(p, CoefficientKind::Q, n));
    if (n > 1) put(n, 2, n - 1, 1, coefficient_at(p, CoefficientKind::A, n - 1));
  }
  return fs;
}

std::vector<double> oracle_eigs(const FiniteSection& fs) {
  if (fs.hermitian_defect() > 1e-12 * fs.frobenius()) {
    throw Error(ErrorCode::NotHermitian, "finite section is not Hermitian");
  }
  std::vector<cplx> ab = fs.lower_band();
  const auto n = static_cast<lapack_int>(fs.size());
  const auto kd = static_cast<lapack_int>(fs.bandwidth());
  std::vector<double> w(fs.size());
  const lapack_int info = LAPACKE_zhbev(LAPACK_COL_MAJOR, 'N', 'L', n, kd,
                                        reinterpret_cast<lapack_complex_double*>(ab.data()),
                                        kd + 1, w.data(), nullptr, 1);
  if (info != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "banded eigensolver failed, info = " + std::to_string(info));
  }
  return w;
}

ComparisonReport compare_spectra(const std::vector<EigenvalueRecord>& jost,
                                 const std::vector<double>& oracle,
                                 double band_margin) {
  const double edge = 2.0 + band_margin;
  ComparisonReport rep;
  std::vector<bool> used(jost.size(), false);
  for (const EigenvalueRecord& e : jost) {
    if (std::abs(e.lambda) > edge) ++rep.jost_out_of_band;
  }
  for (const double lam : oracle) {
    if (!(std::abs(lam) > edge)) continue;
    ++rep.oracle_out_of_band;
    std::size_t best = jost.size();
    double best_gap = 0.0;
    for (std::size_t k = 0; k < jost.size(); ++k) {
      if (used[k]) continue;
      const double gap = std::abs(jost[k].lambda - lam);
      if (best == jost.size() || gap < best_gap) {
        best = k;
        best_gap = gap;
      }
    }
    if (best == jost.size()) {
      rep.unmatched_oracle.push_back(lam);
      continue;
    }
    used[best] = true;
    rep.matches.push_back({jost[best].lambda, lam, best_gap});
  }
  for (std::size_t k = 0; k < jost.size(); ++k) {
    if (!used[k] && std::abs(jost[k].lambda) > edge) {
      rep.unmatched_jost.push_back(jost[k].lambda);
    }
  }
  return rep;
}

void attach_oracle(SpectralReport& report, const ComparisonReport& cmp) {
  for (EigenvalueRecord& e : report.eigenvalues) {
    for (const SpectrumMatch& mt : cmp.matches) {
      if (mt.lambda_jost == e.lambda) {
        e.oracle_lambda = mt.lambda_oracle;
        e.oracle_gap = mt.gap;
      }
    }
  }
}

std::string comparison_to_json(const ComparisonReport& cmp, std::size_t N,
                               const std::vector<double>& spectrum) {
  using nlohmann::json;
  json doc;
  doc["N"] = N;
  json matches = json::array();
  for (const SpectrumMatch& mt : cmp.matches) {
    matches.push_back({{"lambda_jost", mt.lambda_jost},
                       {"lambda_oracle", mt.lambda_oracle},
                       {"gap", mt.gap}});
  }
  doc["matches"] = std::move(matches);
  doc["unmatched_jost"] = cmp.unmatched_jost;
  doc["unmatched_oracle"] = cmp.unmatched_oracle;
  doc["oracle_out_of_band"] = cmp.oracle_out_of_band;
  doc["jost_out_of_band"] = cmp.jost_out_of_band;
  doc["spectrum"] = spectrum;
  return doc.dump(2) + "\n";
}

std::string oracle_spectrum_csv(const std::vector<double>& eigs, std::size_t N) {
  std::string out = "N,index,lambda\n";
  char line[96];
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    std::snprintf(line, sizeof line, "%zu,%zu,%.17g\n", N, k, eigs[k]);
    out += line;
  }
  return out;
}

std::string band_csv(const std::vector<double>& eigs, std::size_t N) {
  std::string out = "N,index,lambda,in_band\n";
  char line[96];
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    const bool in_band = eigs[k] >= -2.0 && eigs[k] <= 2.0;
    std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%d\n", N, k, eigs[k],
                  in_band ? 1 : 0);
    out += line;
  }
  return out;
}

}  // namespace dj

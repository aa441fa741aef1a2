#include "diracjost/jost.hpp"

#include <cmath>

#include "json.hpp"

namespace dj {

namespace {

void check_z(cplx z) {
  const double r = std::abs(z);
  if (r == 0.0 || !std::isfinite(r)) {
    throw Error(ErrorCode::DomainError, "z must be nonzero and finite");
  }
  if (r > 1.0 + 1e-12) {
    throw Error(ErrorCode::DomainError, "|z| > 1 is outside the closed unit disc");
  }
}

// sum_s c_s z^s by Horner.
ComplexMatrix horner(const std::vector<ComplexMatrix>& coeffs, cplx z) {
  ComplexMatrix acc = coeffs.back();
  for (std::size_t s = coeffs.size() - 1; s-- > 0;) {
    acc *= z;
    acc += coeffs[s];
  }
  return acc;
}

// d/dz [ z^{2n} sum_s c_s z^s ] = sum_s (2n+s) c_s z^{2n+s-1}.
ComplexMatrix horner_shifted_prime(const std::vector<ComplexMatrix>& coeffs,
                                   std::size_t n, cplx z) {
  std::vector<ComplexMatrix> d(coeffs.size(), ComplexMatrix(coeffs[0].dim()));
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    d[s] = static_cast<double>(2 * n + s) * coeffs[s];
  }
  // sum_s d_s z^{2n+s-1}: evaluate sum_s d_s z^s, then scale by z^{2n-1}.
  return std::pow(z, static_cast<int>(2 * n) - 1) * horner(d, z);
}

ComplexMatrix free_F(std::size_t m, std::size_t n, cplx z) {
  return std::pow(z, static_cast<int>(2 * n + 1)) * ComplexMatrix::identity(m);
}

ComplexMatrix free_G(std::size_t m, std::size_t n, cplx z) {
  return (-kI * std::pow(z, static_cast<int>(2 * n))) * ComplexMatrix::identity(m);
}

double relative(double defect, double size) {
  return size > 0.0 ? defect / size : defect;
}

}  // namespace

cplx lambda_of_z(cplx z) {
  if (z == 0.0) throw Error(ErrorCode::DomainError, "lambda(z) is singular at z = 0");
  return -kI * (z - 1.0 / z);
}

cplx dlambda_dz(cplx z) {
  if (z == 0.0) throw Error(ErrorCode::DomainError, "lambda'(z) is singular at z = 0");
  return -kI * (1.0 + 1.0 / (z * z));
}

JostSeries::JostSeries(std::size_t m, std::size_t n0)
    : m_(m), n0_(n0), s_max_(4 * n0 + 4) {
  a_.assign(n0 + 2, std::vector<ComplexMatrix>(s_max_ + 1, ComplexMatrix(m)));
  b_.assign(n0 + 3, std::vector<ComplexMatrix>(s_max_ + 1, ComplexMatrix(m)));
}

const ComplexMatrix& JostSeries::a(std::size_t n, std::size_t s) const {
  if (n > n0_ + 1 || s > s_max_) {
    throw Error(ErrorCode::IndexOutOfDomain, "a_{n,s} index outside stored range");
  }
  return a_[n][s];
}

const ComplexMatrix& JostSeries::b(std::size_t n, std::size_t s) const {
  if (n == 0 || n > n0_ + 2 || s > s_max_) {
    throw Error(ErrorCode::IndexOutOfDomain, "b_{n,s} index outside stored range");
  }
  return b_[n][s];
}

JostSeries JostSeries::with_perturbed_a(std::size_t n, std::size_t s,
                                        cplx delta) const {
  JostSeries out = *this;
  if (n > n0_ + 1 || s > s_max_) {
    throw Error(ErrorCode::IndexOutOfDomain, "a_{n,s} index outside stored range");
  }
  for (std::size_t i = 0; i < m_; ++i) out.a_[n][s](i, i) += delta;
  return out;
}

JostSeries compute_jost(const CoefficientProfile& p) {
  const ValidationReport rep = validate(p);
  if (!rep.ok) {
    const Violation& v = rep.violations.front();
    throw Error(ErrorCode::InvalidProfile,
                std::string("profile failed validation: ") + to_string(v.kind) +
                    " at " + to_string(v.coefficient) + "_" +
                    std::to_string(v.index));
  }
  const std::size_t m = p.dim();
  const std::size_t n0 = p.cutoff();
  JostSeries j(m, n0);
  const std::size_t S = j.s_max_;
  const ComplexMatrix id = ComplexMatrix::identity(m);

  j.a_[n0 + 1][1] = id;
  j.b_[n0 + 2][0] = -kI * id;

  // Index helpers returning the zero matrix outside the stored window.
  const ComplexMatrix zero(m);
  auto a_at = [&](std::size_t n, long s) -> const ComplexMatrix& {
    return (s < 0 || s > static_cast<long>(S)) ? zero : j.a_[n][s];
  };
  auto b_at = [&](std::size_t n, long s) -> const ComplexMatrix& {
    return (s < 0 || s > static_cast<long>(S)) ? zero : j.b_[n][s];
  };

  for (std::size_t n = n0 + 1; n >= 1; --n) {
    const ComplexMatrix An = coefficient_at(p, CoefficientKind::A, n);
    const ComplexMatrix Bn = coefficient_at(p, CoefficientKind::B, n);
    const ComplexMatrix Pn = coefficient_at(p, CoefficientKind::P, n);
    const ComplexMatrix Qn = coefficient_at(p, CoefficientKind::Q, n);
    const ComplexMatrix Bn_inv = mat_inverse(Bn);
    const ComplexMatrix Aprev_inv =
        mat_inverse(coefficient_at(p, CoefficientKind::A, n - 1));

    for (long s = 0; s <= static_cast<long>(S); ++s) {
      ComplexMatrix rhs = kI * a_at(n, s + 1);
      rhs -= kI * a_at(n, s - 1);
      rhs -= An * b_at(n + 1, s - 2);
      rhs -= Pn * a_at(n, s);
      j.b_[n][s] = Bn_inv * rhs;
    }
    for (long s = -1; s + 2 <= static_cast<long>(S); ++s) {
      ComplexMatrix rhs = kI * b_at(n, s + 1);
      rhs -= kI * b_at(n, s - 1);
      rhs -= Bn * a_at(n, s);
      rhs -= Qn * b_at(n, s);
      j.a_[n - 1][s + 2] = Aprev_inv * rhs;
    }
  }
  return j;
}

ComplexMatrix jost_F(const JostSeries& j, std::size_t n, cplx z) {
  check_z(z);
  if (n > j.cutoff() + 1) return free_F(j.dim(), n, z);
  std::vector<ComplexMatrix> c;
  c.reserve(j.max_offset() + 1);
  for (std::size_t s = 0; s <= j.max_offset(); ++s) c.push_back(j.a(n, s));
  return std::pow(z, static_cast<int>(2 * n)) * horner(c, z);
}

ComplexMatrix jost_G(const JostSeries& j, std::size_t n, cplx z) {
  check_z(z);
  if (n == 0) throw Error(ErrorCode::IndexOutOfDomain, "G_n is defined for n >= 1");
  if (n > j.cutoff() + 2) return free_G(j.dim(), n, z);
  std::vector<ComplexMatrix> c;
  c.reserve(j.max_offset() + 1);
  for (std::size_t s = 0; s <= j.max_offset(); ++s) c.push_back(j.b(n, s));
  return std::pow(z, static_cast<int>(2 * n)) * horner(c, z);
}

ComplexMatrix jost_F_prime(const JostSeries& j, std::size_t n, cplx z) {
  check_z(z);
  if (n > j.cutoff() + 1) {
    return (static_cast<double>(2 * n + 1) * std::pow(z, static_cast<int>(2 * n))) *
           ComplexMatrix::identity(j.dim());
  }
  std::vector<ComplexMatrix> c;
  for (std::size_t s = 0; s <= j.max_offset(); ++s) c.push_back(j.a(n, s));
  return horner_shifted_prime(c, n, z);
}

ComplexMatrix jost_G_prime(const JostSeries& j, std::size_t n, cplx z) {
  check_z(z);
  if (n == 0) throw Error(ErrorCode::IndexOutOfDomain, "G_n is defined for n >= 1");
  if (n > j.cutoff() + 2) {
    return (-kI * static_cast<double>(2 * n) *
            std::pow(z, static_cast<int>(2 * n) - 1)) *
           ComplexMatrix::identity(j.dim());
  }
  std::vector<ComplexMatrix> c;
  for (std::size_t s = 0; s <= j.max_offset(); ++s) c.push_back(j.b(n, s));
  return horner_shifted_prime(c, n, z);
}

JostValue eval_jost(const JostSeries& j, std::size_t n, cplx z) {
  if (n == 0) throw Error(ErrorCode::IndexOutOfDomain, "G_n is defined for n >= 1");
  return {jost_F(j, n, z), jost_G(j, n, z)};
}

std::vector<ComplexMatrix> jost_function(const JostSeries& j) {
  std::vector<ComplexMatrix> c;
  c.reserve(j.max_offset() + 1);
  for (std::size_t s = 0; s <= j.max_offset(); ++s) c.push_back(j.a(0, s));
  return c;
}

std::size_t jost_function_degree(const JostSeries& j) {
  for (std::size_t s = j.max_offset(); s > 0; --s) {
    if (!j.a(0, s).is_zero()) return s;
  }
  return 0;
}

double recurrence_residual(const JostSeries& j, const CoefficientProfile& p,
                           cplx z, std::size_t n_max) {
  check_z(z);
  const cplx lam = lambda_of_z(z);
  double worst = 0.0;
  ComplexMatrix F_prev = jost_F(j, 0, z);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const ComplexMatrix Fn = jost_F(j, n, z);
    const ComplexMatrix Gn = jost_G(j, n, z);
    const ComplexMatrix Gnext = jost_G(j, n + 1, z);
    const ComplexMatrix An = coefficient_at(p, CoefficientKind::A, n);
    const ComplexMatrix Aprev = coefficient_at(p, CoefficientKind::A, n - 1);
    const ComplexMatrix Bn = coefficient_at(p, CoefficientKind::B, n);
    const ComplexMatrix Pn = coefficient_at(p, CoefficientKind::P, n);
    const ComplexMatrix Qn = coefficient_at(p, CoefficientKind::Q, n);

    const ComplexMatrix d1 = An * Gnext + Bn * Gn + Pn * Fn - lam * Fn;
    const ComplexMatrix d2 = Aprev * F_prev + Bn * Fn + Qn * Gn - lam * Gn;
    const double s1 = mat_norm(An) * mat_norm(Gnext) + mat_norm(Bn) * mat_norm(Gn) +
                      (mat_norm(Pn) + std::abs(lam)) * mat_norm(Fn);
    const double s2 = mat_norm(Aprev) * mat_norm(F_prev) + mat_norm(Bn) * mat_norm(Fn) +
                      (mat_norm(Qn) + std::abs(lam)) * mat_norm(Gn);
    worst = std::max({worst, relative(mat_norm(d1), s1), relative(mat_norm(d2), s2)});
    F_prev = Fn;
  }
  return worst;
}

double zero_pattern_excess(const JostSeries& j) {
  double worst = 0.0;
  const long n0 = static_cast<long>(j.cutoff());
  for (long n = 0; n <= n0; ++n) {
    const long a_bound = 4 * (n0 - n) + 3;
    const long b_bound = 4 * (n0 - n) + 2;
    for (long s = 0; s <= static_cast<long>(j.max_offset()); ++s) {
      if (s > a_bound) worst = std::max(worst, mat_norm(j.a(n, s)));
      if (n >= 1 && s > b_bound) worst = std::max(worst, mat_norm(j.b(n, s)));
    }
  }
  return worst;
}

JostSweep jost_sweep(const CoefficientProfile& p, cplx z) {
  check_z(z);
  const std::size_t m = p.dim();
  const std::size_t top = p.cutoff() + 2;
  const cplx lam = lambda_of_z(z);
  const cplx dlam = dlambda_dz(z);
  const ComplexMatrix I = ComplexMatrix::identity(m);
  JostSweep w;
  w.F.assign(top + 1, ComplexMatrix(m));
  w.G = w.dF = w.dG = w.F;
  for (std::size_t n : {top - 1, top}) {
    w.F[n] = free_F(m, n, z);
    w.dF[n] = (static_cast<double>(2 * n + 1) * std::pow(z, static_cast<int>(2 * n))) * I;
  }
  w.G[top] = free_G(m, top, z);
  w.dG[top] = (-kI * static_cast<double>(2 * top) *
               std::pow(z, static_cast<int>(2 * top) - 1)) * I;
  for (std::size_t n = top - 1; n >= 1; --n) {
    const ComplexMatrix An = coefficient_at(p, CoefficientKind::A, n);
    const ComplexMatrix Bn = coefficient_at(p, CoefficientKind::B, n);
    const ComplexMatrix Pn = coefficient_at(p, CoefficientKind::P, n);
    const ComplexMatrix Qn = coefficient_at(p, CoefficientKind::Q, n);
    const ComplexMatrix Am = coefficient_at(p, CoefficientKind::A, n - 1);
    // B_n G_n = (lambda - P_n) F_n - A_n G_{n+1}
    w.G[n] = mat_solve(Bn, lam * w.F[n] - Pn * w.F[n] - An * w.G[n + 1]);
    w.dG[n] = mat_solve(Bn, dlam * w.F[n] + lam * w.dF[n] - Pn * w.dF[n] -
                                An * w.dG[n + 1]);
    // A_{n-1} F_{n-1} = (lambda - Q_n) G_n - B_n F_n
    w.F[n - 1] = mat_solve(Am, lam * w.G[n] - Qn * w.G[n] - Bn * w.F[n]);
    w.dF[n - 1] = mat_solve(Am, dlam * w.G[n] + lam * w.dG[n] - Qn * w.dG[n] -
                                    Bn * w.dF[n]);
  }
  return w;
}

TransferBlocks closed_form_T(const CoefficientProfile& p, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::IndexOutOfDomain, "T_n is defined for n >= 1");
  const std::size_t m = p.dim();
  if (n > p.cutoff()) {
    return {ComplexMatrix::identity(m), ComplexMatrix::zero(m),
            ComplexMatrix::identity(m)};
  }
  ComplexMatrix prod = ComplexMatrix::identity(m);
  for (std::size_t k = n; k <= p.cutoff(); ++k) {
    prod = -(coefficient_at(p, CoefficientKind::A, k) *
             coefficient_at(p, CoefficientKind::B, k)) *
           prod;
  }
  ComplexMatrix t22 = mat_inverse(prod);
  ComplexMatrix t11 = -(coefficient_at(p, CoefficientKind::B, n) * t22);
  return {std::move(t11), ComplexMatrix::zero(m), std::move(t22)};
}

std::vector<SiteDeviation> asymptotics_check(const JostSeries& j, cplx z) {
  check_z(z);
  const std::size_t m = j.dim();
  const ComplexMatrix id = ComplexMatrix::identity(m);
  std::vector<SiteDeviation> out;
  for (std::size_t n = 0; n <= j.cutoff() + 2; ++n) {
    double sq = 0.0;
    if (n <= j.cutoff() + 1) {
      // F_n z^{-(2n+1)} - I = sum_s (a_{n,s} - delta_{s,1} I) z^{s-1}
      std::vector<ComplexMatrix> c;
      for (std::size_t s = 1; s <= j.max_offset(); ++s) {
        c.push_back(s == 1 ? j.a(n, s) - id : j.a(n, s));
      }
      sq += std::pow(mat_norm(horner(c, z)), 2);
    }
    if (n >= 1) {
      // G_n z^{-2n} + i I = sum_s (b_{n,s} + i delta_{s,0} I) z^s
      std::vector<ComplexMatrix> c;
      for (std::size_t s = 0; s <= j.max_offset(); ++s) {
        c.push_back(s == 0 ? j.b(n, s) + kI * id : j.b(n, s));
      }
      sq += std::pow(mat_norm(horner(c, z)), 2);
    }
    out.push_back({n, std::sqrt(sq)});
  }
  return out;
}

std::string series_to_json(const JostSeries& j) {
  using nlohmann::json;
  auto mat = [](const ComplexMatrix& x) {
    json rows = json::array();
    for (std::size_t r = 0; r < x.dim(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < x.dim(); ++c) {
        row.push_back({x(r, c).real(), x(r, c).imag()});
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json doc;
  doc["m"] = j.dim();
  doc["N0"] = j.cutoff();
  doc["S"] = j.max_offset();
  json a = json::array();
  for (std::size_t n = 0; n <= j.cutoff() + 1; ++n) {
    json per = json::array();
    for (std::size_t s = 0; s <= j.max_offset(); ++s) per.push_back(mat(j.a(n, s)));
    a.push_back(std::move(per));
  }
  json b = json::array();
  for (std::size_t n = 1; n <= j.cutoff() + 2; ++n) {
    json per = json::array();
    for (std::size_t s = 0; s <= j.max_offset(); ++s) per.push_back(mat(j.b(n, s)));
    b.push_back(std::move(per));
  }
  doc["a"] = std::move(a);
  doc["b"] = std::move(b);
  doc["b_first_site"] = 1;
  return doc.dump();
}

}  // namespace dj

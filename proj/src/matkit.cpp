#include "diracjost/matkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dj {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* what) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.dim()) + "x" +
                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                    "x" + std::to_string(b.dim()));
  }
}

// Gauss-Jordan on [a | rhs]; returns false if a pivot is exactly zero.
bool gauss_jordan(ComplexMatrix a, ComplexMatrix& rhs) {
  const std::size_t n = a.dim();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (double v = std::abs(a(r, col)); v > best) {
        best = v;
        piv = r;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(rhs(piv, c), rhs(col, c));
      }
    }
    const cplx inv_p = 1.0 / a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) *= inv_p;
      rhs(col, c) *= inv_p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = a(r, col);
      if (f == cplx{}) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        rhs(r, c) -= f * rhs(col, c);
      }
    }
  }
  return true;
}

double max_eigenvalue_of_gram(const ComplexMatrix& a) {
  const HermEig e = herm_eig(a.adjoint() * a);
  return std::max(e.values.back(), 0.0);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim_ * dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix data has " + std::to_string(data_.size()) +
                    " entries, expected " + std::to_string(dim_ * dim_));
  }
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "matrix literal is not square");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

bool ComplexMatrix::is_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool ComplexMatrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return z == cplx{}; });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "add");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "sub");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "mul");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx f = a(r, k);
      if (f == cplx{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += f * b(k, c);
    }
  }
  return out;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (v.size() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  }
  std::vector<cplx> out(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r) {
    cplx acc{};
    for (std::size_t c = 0; c < a.dim(); ++c) acc += a(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

ComplexMatrix mat_arith(const ComplexMatrix& a, const ComplexMatrix& b,
                        ArithOp op, cplx scale) {
  switch (op) {
    case ArithOp::Add:
      return a + b;
    case ArithOp::Sub:
      return a - b;
    case ArithOp::Mul:
      return a * b;
    case ArithOp::Scale:
      return scale * a;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown arithmetic op");
}

double mat_norm(const ComplexMatrix& a, NormKind kind) {
  if (a.empty()) return 0.0;
  if (kind == NormKind::Frobenius) {
    double acc = 0.0;
    for (const cplx& z : a.data()) acc += std::norm(z);
    return std::sqrt(acc);
  }
  if (a.is_zero()) return 0.0;
  return std::sqrt(max_eigenvalue_of_gram(a));
}

cplx mat_det(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  ComplexMatrix lu = a;
  cplx det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (double v = std::abs(lu(r, col)); v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu(piv, c), lu(col, c));
      det = -det;
    }
    const cplx p = lu(col, col);
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = lu(r, col) / p;
      if (f == cplx{}) continue;
      for (std::size_t c = col + 1; c < n; ++c) lu(r, c) -= f * lu(col, c);
    }
  }
  return det;
}

double min_singular_value(const ComplexMatrix& a) {
  ComplexMatrix inv = ComplexMatrix::identity(a.dim());
  if (!gauss_jordan(a, inv) || !inv.is_finite()) return 0.0;
  const double inv_norm = mat_norm(inv, NormKind::Spectral);
  return inv_norm > 0.0 ? 1.0 / inv_norm : 0.0;
}

ComplexMatrix mat_inverse(const ComplexMatrix& a) {
  const double scale = mat_norm(a);
  ComplexMatrix inv = ComplexMatrix::identity(a.dim());
  if (scale == 0.0 || !gauss_jordan(a, inv) || !inv.is_finite()) {
    throw Error(ErrorCode::SingularMatrix, "matrix is singular");
  }
  const double smin = 1.0 / mat_norm(inv, NormKind::Spectral);
  if (!(smin > 1e-12 * scale)) {
    throw Error(ErrorCode::SingularMatrix,
                "smallest singular value " + std::to_string(smin) +
                    " below threshold");
  }
  return inv;
}

ComplexMatrix mat_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "solve");
  return mat_inverse(a) * b;
}

double hermitian_defect(const ComplexMatrix& a) {
  return mat_norm(a - a.adjoint());
}

HermEig herm_eig(const ComplexMatrix& input) {
  const std::size_t n = input.dim();
  const double scale = mat_norm(input);
  if (hermitian_defect(input) > 1e-10 * scale) {
    throw Error(ErrorCode::NotHermitian, "herm_eig: input is not Hermitian");
  }
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double tiny = std::numeric_limits<double>::min();
  double prev_off = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) <= 1e-16 * scale || off <= tiny) break;
    // stagnation at roundoff level
    if (off >= prev_off && std::sqrt(2.0 * off) <= 1e-12 * scale) break;
    prev_off = off;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= tiny) continue;
        const cplx e = a(p, q) / r;  // unit phase
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx ebar = std::conj(e);

        // A <- A G with G = [[c, s], [-s ebar, c ebar]] on columns (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * ebar * akq;
          a(k, q) = s * akp + c * ebar * akq;
        }
        // A <- G* A on rows (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - s * ebar * vkq;
          v(k, q) = s * vkp + c * ebar * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  HermEig out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

double vec_norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  cplx acc{};
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * std::conj(y[k]);
  return acc;
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::IndexOutOfDomain: return "IndexOutOfDomain";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::IllConditionedInterpolation: return "IllConditionedInterpolation";
    case ErrorCode::DegenerateRoot: return "DegenerateRoot";
    case ErrorCode::NullVectorNotFound: return "NullVectorNotFound";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace dj

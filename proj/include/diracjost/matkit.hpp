#pragma once

// Dense complex m x m matrices. Everything in the library is built from these;
// sizes are small (m <= ~32), so storage is a flat row-major vector and all
// algorithms are plain O(m^3) loops.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "diracjost/error.hpp"

namespace dj {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<cplx> row_major);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const cplx> diag);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  bool is_finite() const noexcept;
  bool is_zero() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);

/// Matrix-vector product.
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v);

enum class ArithOp { Add, Sub, Mul, Scale };

/// Single entry point for the four arithmetic operations; `scale` is only
/// read for ArithOp::Scale (and `b` is ignored there).
ComplexMatrix mat_arith(const ComplexMatrix& a, const ComplexMatrix& b,
                        ArithOp op, cplx scale = 1.0);

enum class NormKind { Frobenius, Spectral };

double mat_norm(const ComplexMatrix& a, NormKind kind = NormKind::Frobenius);

/// Determinant by LU with partial pivoting.
cplx mat_det(const ComplexMatrix& a);

/// Smallest singular value, from the Hermitian eigensolver applied to a*a.
double min_singular_value(const ComplexMatrix& a);

/// Inverse via Gauss-Jordan with partial pivoting. Throws SingularMatrix when
/// the smallest singular value is <= 1e-12 * ||a||_F (or a is zero).
ComplexMatrix mat_inverse(const ComplexMatrix& a);

/// Solve a * x = b for a matrix right-hand side.
ComplexMatrix mat_solve(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermEig {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Cyclic complex Jacobi. Sweep order is fixed (p < q, row-major), so the
/// output is a deterministic function of the input bits.
HermEig herm_eig(const ComplexMatrix& a);

double hermitian_defect(const ComplexMatrix& a);

double vec_norm(std::span<const cplx> v);
/// <x, y> = sum_k x_k conj(y_k), linear in the first slot.
cplx inner(std::span<const cplx> x, std::span<const cplx> y);

}  // namespace dj

#pragma once

#include <optional>
#include <vector>

#include "diracjost/matkit.hpp"

namespace dj {

/// Scalar polynomial sum_k c_k z^k.
struct Polynomial {
  std::vector<cplx> coeffs;

  std::size_t degree() const noexcept;
  cplx operator()(cplx z) const;
  /// Value and first derivative in one Horner pass.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;
  /// Taylor coefficients at z0: out[k] = p^(k)(z0) / k!.
  std::vector<cplx> taylor_at(cplx z0) const;
  Polynomial derivative() const;
  /// sum_k |c_k| |z|^k, the natural size of a rounding error in p(z).
  double magnitude_at(cplx z) const;
  double max_coeff() const;
  /// Drop the lowest `k` coefficients (divide by z^k).
  Polynomial deflate_origin(std::size_t k) const;
};

/// All roots by Aberth-Ehrlich simultaneous iteration; nullopt if the
/// iteration has not settled after `max_iter` rounds.
std::optional<std::vector<cplx>> aberth_roots(const Polynomial& p,
                                              int max_iter = 500);

}  // namespace dj

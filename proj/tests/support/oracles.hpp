#pragma once

// Independent reference computations used to check the library.

#include <array>
#include <cmath>

#include "ptsym/types.hpp"

namespace ptsym::testing {

/// sum_{k < terms} (z A)^k / k!
inline Matrix taylor_exponential(const Matrix& a, cplx z, int terms) {
  const Eigen::Index n = a.rows();
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < terms; ++k) {
    term = (term * (z * a) / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

/// Largest singular value by power iteration on A^dagger A.
inline double power_iteration_norm(const Matrix& a, int iterations = 2000) {
  const Matrix g = a.adjoint() * a;
  Vector v = Vector::Ones(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += cplx(0.01 * static_cast<double>(i), 0.003);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = g * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    lambda = nw;
    v = w / nw;
  }
  return std::sqrt(lambda);
}

/// Roots of lambda^2 - tr(A) lambda + det(A) for a 2x2 A.
inline std::array<cplx, 2> quadratic_eigenvalues(const Matrix& a) {
  const cplx tr = a(0, 0) + a(1, 1);
  const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

/// Unnormalized U rho U^dagger with U from the Taylor oracle.
inline Matrix taylor_evolution(const Matrix& rho, const Matrix& h, double t, int terms = 80) {
  const Matrix u = taylor_exponential(h, cplx(0.0, -t), terms);
  return u * rho * u.adjoint();
}

}  // namespace ptsym::testing

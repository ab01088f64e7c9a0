#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ptsym/canonical.hpp"
#include "ptsym/dynamics.hpp"
#include "ptsym/linalg.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

/// Linearly independent unit vectors, not necessarily orthogonal.
class FreeBasis {
 public:
  /// Columns are normalized; throws if they are numerically dependent.
  static FreeBasis from_columns(const Matrix& columns, double lin_tol = 1e-10) {
    require_square(columns, "FreeBasis");
    require_finite(columns, "FreeBasis");
    Matrix c = columns;
    for (Eigen::Index i = 0; i < c.cols(); ++i) {
      const double nv = c.col(i).norm();
      if (nv == 0.0) throw Error(ErrorKind::InvalidInput, "FreeBasis: zero basis vector");
      c.col(i) /= nv;
    }
    Eigen::JacobiSVD<Matrix> svd(c);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > lin_tol)) {
      throw Error(ErrorKind::IllConditioned, "FreeBasis: basis vectors are linearly dependent");
    }
    return FreeBasis(std::move(c));
  }

  static FreeBasis computational(Eigen::Index d) { return FreeBasis(Matrix::Identity(d, d)); }

  const Matrix& matrix() const { return c_; }
  Eigen::Index dim() const { return c_.rows(); }
  Vector vector(Eigen::Index i) const { return c_.col(i); }

  bool is_orthonormal(double tol) const {
    return (c_.adjoint() * c_ - Matrix::Identity(dim(), dim())).norm() <= tol;
  }

 private:
  explicit FreeBasis(Matrix c) : c_(std::move(c)) {}
  Matrix c_;
};

struct FreeDecomposition {
  std::vector<double> weights;
  double residual = 0.0;  // largest off-diagonal coefficient modulus
};

struct FreeStateCheck {
  bool free = false;
  FreeDecomposition decomposition;
};

/// Dual-frame test: with C the basis matrix, R = C^{-1} rho C^{-dagger} must
/// be diagonal with nonnegative entries. For a full basis the decomposition is
/// unique, so the test is exact up to tol.
inline FreeStateCheck is_superposition_free(const Matrix& rho, const FreeBasis& basis, double tol = 1e-9) {
  require_density_matrix(rho);
  require_same_dim(rho.rows(), basis.dim(), "is_superposition_free");
  const Matrix inv = checked_inverse(basis.matrix(), "is_superposition_free: basis");
  const Matrix r = inv * rho * inv.adjoint();
  FreeStateCheck out;
  bool nonneg = true;
  double off = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    out.decomposition.weights.push_back(r(i, i).real());
    nonneg = nonneg && r(i, i).real() >= -tol && std::abs(r(i, i).imag()) <= tol;
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      if (i != j) off = std::max(off, std::abs(r(i, j)));
    }
  }
  out.decomposition.residual = off;
  out.free = nonneg && off <= tol;
  return out;
}

/// Special case of is_superposition_free for an orthonormal basis.
inline FreeStateCheck is_incoherent(const Matrix& rho, const FreeBasis& orthobasis, double tol = 1e-9) {
  if (!orthobasis.is_orthonormal(std::max(tol, 1e-12))) {
    throw Error(ErrorKind::Precondition, "is_incoherent: basis is not orthonormal");
  }
  return is_superposition_free(rho, orthobasis, tol);
}

struct KrausCheck {
  bool free = false;
  double worst_defect = 0.0;  // max over basis vectors of the best parallelism defect
};

/// K is free iff every K c_i is negligible or parallel to some c_j, with the
/// phase- and scale-insensitive defect 1 - |<c_j, K c_i>| / (|c_j| |K c_i|).
inline KrausCheck is_free_kraus(const Matrix& k, const FreeBasis& basis, double tol = 1e-8) {
  require_square(k, "is_free_kraus");
  require_same_dim(k.rows(), basis.dim(), "is_free_kraus");
  KrausCheck out;
  out.free = true;
  const Matrix& c = basis.matrix();
  for (Eigen::Index i = 0; i < c.cols(); ++i) {
    const Vector w = k * c.col(i);
    const double wn = w.norm();
    if (wn <= tol) continue;
    double best = 1.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const double cos = std::abs(c.col(j).dot(w)) / (c.col(j).norm() * wn);
      best = std::min(best, 1.0 - cos);
    }
    best = std::max(best, 0.0);
    out.worst_defect = std::max(out.worst_defect, best);
    if (best > tol) out.free = false;
  }
  return out;
}

/// F = sqrt(I - K^dagger K), so that F^dagger F + K^dagger K = I.
inline Matrix kraus_completion(const Matrix& k) {
  require_square(k, "kraus_completion");
  const Matrix id = Matrix::Identity(k.rows(), k.cols());
  return psd_square_root(hermitian_part(id - k.adjoint() * k));
}

struct FreeEvolutionCheck {
  bool passed = false;  // free and trace-nonincreasing at every grid point
  bool free = true;
  bool trace_nonincreasing = true;
  double worst_defect = 0.0;
  double max_contraction = 0.0;  // max over t of lambda_max(c^2 U^dagger U)
};

/// Checks that c U(t) is a free, trace-nonincreasing Kraus operator for the
/// eigenbasis of an unbroken H at every grid point.
inline FreeEvolutionCheck verify_free_evolution(const Matrix& h, const PTPair& pair, double c,
                                                const TimeGrid& grid, double tol = 1e-8,
                                                const Tolerances& tols = {}) {
  const auto decomp = pt_canonical_form(h, pair, tols);
  if (!decomp.spectral_class().unbroken()) {
    throw Error(ErrorKind::BrokenHamiltonian,
                "verify_free_evolution: free-operation property requires unbroken H");
  }
  const FreeBasis basis = FreeBasis::from_columns(decomp.psi);
  FreeEvolutionCheck out;
  for (double t : grid.points()) {
    const Matrix ku = c * propagator(h, t);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(ku.adjoint() * ku), Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    out.max_contraction = std::max(out.max_contraction, top);
    if (top > 1.0 + tol) out.trace_nonincreasing = false;
    const auto kc = is_free_kraus(ku, basis, tol);
    out.worst_defect = std::max(out.worst_defect, kc.worst_defect);
    out.free = out.free && kc.free;
  }
  out.passed = out.free && out.trace_nonincreasing;
  return out;
}

}  // namespace ptsym

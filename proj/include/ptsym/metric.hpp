#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ptsym/canonical.hpp"
#include "ptsym/linalg.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

/// One +1/-1 per real-eigenvalue block, in block order.
struct SignCharacteristic {
  std::vector<int> epsilons;

  static SignCharacteristic all_positive(const CanonicalDecomposition& d) {
    return {std::vector<int>(d.real_block_count(), 1)};
  }
};

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  bool operator==(const Inertia&) const = default;
};

/// Signature of a Hermitian matrix; |eigenvalue| <= rel_tol * |A| counts as zero.
inline Inertia inertia(const Matrix& a, double rel_tol = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  const auto& w = es.eigenvalues();
  const double cut = rel_tol * w.cwiseAbs().maxCoeff();
  Inertia in;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > cut) ++in.positive;
    else if (w(i) < -cut) ++in.negative;
    else ++in.zero;
  }
  return in;
}

/// Hermitian invertible eta with H^dagger eta = eta H, built as
/// eta = Psi^{-dagger} S Psi^{-1}.
struct MetricOperator {
  Matrix eta;
  Matrix s;  // the block sign/reversal matrix Psi^dagger eta Psi
  SignCharacteristic signs;
  bool positive_definite = false;
  double intertwining_residual = 0.0;
  std::shared_ptr<const CanonicalDecomposition> source_decomposition;
};

/// k x k reversal (anti-identity) matrix.
inline Matrix reversal_matrix(Eigen::Index k) {
  Matrix s = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) s(i, k - 1 - i) = 1.0;
  return s;
}

/// S assembled from reversal blocks: S_{2n} for a conjugate pair of order n,
/// eps * S_n for a real block of order n.
inline Matrix sign_matrix(const CanonicalDecomposition& d, const SignCharacteristic& signs) {
  if (signs.epsilons.size() != d.real_block_count()) {
    throw Error(ErrorKind::InvalidInput,
                "sign characteristic has " + std::to_string(signs.epsilons.size()) +
                    " entries, decomposition has " + std::to_string(d.real_block_count()) +
                    " real blocks");
  }
  const Eigen::Index n = d.dim();
  Matrix s = Matrix::Zero(n, n);
  std::size_t real_idx = 0;
  for (const auto& b : d.blocks) {
    const Eigen::Index w = b.width();
    if (b.is_real()) {
      const int eps = signs.epsilons[real_idx++];
      if (eps != 1 && eps != -1) {
        throw Error(ErrorKind::InvalidInput, "sign characteristic entries must be +1 or -1");
      }
      s.block(b.offset, b.offset, w, w) = static_cast<double>(eps) * reversal_matrix(w);
    } else {
      s.block(b.offset, b.offset, w, w) = reversal_matrix(w);
    }
  }
  return s;
}

inline bool is_positive_definite(const Matrix& eta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(eta), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 1e-12 * operator_norm(eta);
}

inline bool is_positive_definite(const MetricOperator& metric) {
  return is_positive_definite(metric.eta);
}

/// |H^dagger eta - eta H|; the caller applies the tolerance.
inline double verify_metric(const Matrix& h, const Matrix& eta) {
  require_square(h, "verify_metric");
  require_same_dim(h.rows(), eta.rows(), "verify_metric");
  require_same_dim(eta.rows(), eta.cols(), "verify_metric");
  return operator_norm(h.adjoint() * eta - eta * h);
}

inline MetricOperator build_metric(const CanonicalDecomposition& decomp,
                                   const SignCharacteristic& signs, double met_tol = 1e-8) {
  MetricOperator out;
  out.s = sign_matrix(decomp, signs);
  const Matrix psi_inv = checked_inverse(decomp.psi, "build_metric: Psi");
  out.eta = hermitian_part(psi_inv.adjoint() * out.s * psi_inv);
  out.signs = signs;
  out.positive_definite = is_positive_definite(out.eta);
  out.source_decomposition = std::make_shared<const CanonicalDecomposition>(decomp);

  const Matrix h = decomp.psi * decomp.j * psi_inv;
  out.intertwining_residual = verify_metric(h, out.eta);
  const double eta_norm = operator_norm(out.eta);
  if (out.intertwining_residual > met_tol * eta_norm * norm_scale(h)) {
    throw IllConditionedError("build_metric: H^dagger eta != eta H", out.intertwining_residual);
  }
  return out;
}

inline MetricOperator build_metric(const CanonicalDecomposition& decomp) {
  return build_metric(decomp, SignCharacteristic::all_positive(decomp));
}

/// <phi1, eta phi2>.
inline cplx eta_inner(const Vector& phi1, const Vector& phi2, const Matrix& eta) {
  require_same_dim(phi1.size(), eta.rows(), "eta_inner");
  require_same_dim(phi2.size(), eta.cols(), "eta_inner");
  return phi1.dot(eta * phi2);
}

/// Tr(eta rho).
inline cplx eta_trace(const Matrix& rho, const Matrix& eta) {
  require_same_dim(rho.rows(), eta.cols(), "eta_trace");
  require_same_dim(rho.cols(), eta.rows(), "eta_trace");
  return (eta * rho).trace();
}

/// rho = sum_ij R_ij |psi_i><psi_j|, i.e. R = Psi^{-1} rho Psi^{-dagger}.
struct CoefficientMatrix {
  Matrix r;

  cplx operator()(Eigen::Index i, Eigen::Index j) const { return r(i, j); }
};

inline CoefficientMatrix coefficients_in_basis(const Matrix& rho, const Matrix& basis) {
  require_same_dim(rho.rows(), basis.rows(), "basis_coefficients");
  require_same_dim(rho.cols(), basis.rows(), "basis_coefficients");
  const Matrix inv = checked_inverse(basis, "basis_coefficients: Psi");
  return {inv * rho * inv.adjoint()};
}

inline CoefficientMatrix basis_coefficients(const Matrix& rho, const CanonicalDecomposition& decomp) {
  return coefficients_in_basis(rho, decomp.psi);
}

}  // namespace ptsym

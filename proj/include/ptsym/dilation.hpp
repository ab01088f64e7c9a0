#pragma once

#include <string>
#include <vector>

#include "ptsym/canonical.hpp"
#include "ptsym/dynamics.hpp"
#include "ptsym/linalg.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

inline constexpr double kDilationSlack = 0.99;

struct DilationResult {
  double c = 1.0;
  Matrix v;  // 2d x 2d unitary
  double unitarity_residual = 0.0;  // |V^dagger V - I|
  double contraction_margin = 0.0;  // lambda_min(I - c^2 U^dagger U)
};

/// c = slack / (|Psi| |Psi^{-1}|), so c |U(t)| <= slack for every real t.
inline double uniform_bound(const CanonicalDecomposition& decomp, double slack = kDilationSlack) {
  if (!decomp.spectral_class().unbroken()) {
    throw Error(ErrorKind::BrokenHamiltonian, "uniform_bound: evolution of a broken H is unbounded");
  }
  const Matrix psi_inv = checked_inverse(decomp.psi, "uniform_bound: Psi");
  return slack / (operator_norm(decomp.psi) * operator_norm(psi_inv));
}

/// Unitary completion of the contraction cU by its defect operators:
///   V = [[cU, sqrt(I - c^2 U U^dagger)], [sqrt(I - c^2 U^dagger U), -c U^dagger]].
inline DilationResult halmos_dilation(const Matrix& u, double c) {
  require_square(u, "halmos_dilation");
  require_finite(u, "halmos_dilation");
  const Eigen::Index d = u.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix cu = c * u;
  const Matrix defect_right = hermitian_part(id - cu.adjoint() * cu);
  const Matrix defect_left = hermitian_part(id - cu * cu.adjoint());

  Eigen::SelfAdjointEigenSolver<Matrix> es(defect_right, Eigen::EigenvaluesOnly);
  const double margin = es.eigenvalues().minCoeff();
  if (margin < -1e-10) {
    throw Error(ErrorKind::Precondition,
                "halmos_dilation: c U is not a contraction (eigenvalue " + std::to_string(margin) +
                    " of I - c^2 U^dagger U)");
  }

  DilationResult out;
  out.c = c;
  out.contraction_margin = margin;
  out.v.resize(2 * d, 2 * d);
  out.v.topLeftCorner(d, d) = cu;
  out.v.topRightCorner(d, d) = psd_square_root(defect_left);
  out.v.bottomLeftCorner(d, d) = psd_square_root(defect_right);
  out.v.bottomRightCorner(d, d) = -cu.adjoint();
  out.unitarity_residual =
      operator_norm(out.v.adjoint() * out.v - Matrix::Identity(2 * d, 2 * d));
  return out;
}

struct EmbeddedEvolution {
  double c = 0.0;
  double max_deviation = 0.0;  // trace distance, post-selected vs direct
  double max_unitarity_residual = 0.0;
  std::vector<double> times;
  std::vector<double> success_probability;  // c^2 Tr[U rho U^dagger]
};

/// Runs rho (+) 0 through V(t), post-selects the first block and compares
/// with U rho U^dagger / Tr[U rho U^dagger] at each grid point.
inline EmbeddedEvolution embedded_evolution_check(const Matrix& h, const PTPair& pair, const Matrix& rho,
                                                  const TimeGrid& grid, const Tolerances& tol = {}) {
  require_density_matrix(rho);
  require_same_dim(rho.rows(), h.rows(), "embedded_evolution_check");
  const auto decomp = pt_canonical_form(h, pair, tol);
  EmbeddedEvolution out;
  out.c = uniform_bound(decomp);
  const Eigen::Index d = h.rows();
  Matrix big = Matrix::Zero(2 * d, 2 * d);
  big.topLeftCorner(d, d) = rho;

  for (double t : grid.points()) {
    const Matrix u = propagator(h, t);
    const auto dil = halmos_dilation(u, out.c);
    const Matrix top = (dil.v * big * dil.v.adjoint()).topLeftCorner(d, d);
    const double p = top.trace().real();
    if (p < 1e-12) {
      throw Error(ErrorKind::DegeneratePostSelection,
                  "embedded_evolution_check: post-selection probability below 1e-12");
    }
    const Matrix direct = normalize_density(u * rho * u.adjoint());
    out.max_deviation = std::max(out.max_deviation, trace_distance(top / p, direct));
    out.max_unitarity_residual = std::max(out.max_unitarity_residual, dil.unitarity_residual);
    out.times.push_back(t);
    out.success_probability.push_back(p);
  }
  return out;
}

}  // namespace ptsym

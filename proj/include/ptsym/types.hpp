#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "ptsym/error.hpp"

namespace ptsym {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Tolerances shared across modules. Every field must be positive.
struct Tolerances {
  double cluster_tol = 1e-8;  // relative eigenvalue clustering radius
  double rank_tol = 1e-10;    // singular-value threshold relative to sigma_max
  double val_tol = 1e-10;     // P/T algebra validation
  double sym_tol = 1e-10;     // PT-symmetry residual, relative to max(1, |H|)
  double can_tol = 1e-8;      // canonical-form residuals
  double met_tol = 1e-8;      // metric intertwining residual
  double crit_tol = 1e-6;     // cos(alpha) floor near the exceptional point
  double p_tol = 1e-9;        // free-state weight nonnegativity
  double free_tol = 1e-8;     // Kraus parallelism defect

  void validate() const {
    for (double v : {cluster_tol, rank_tol, val_tol, sym_tol, can_tol, met_tol,
                     crit_tol, p_tol, free_tol}) {
      if (!(v > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "all tolerances must be positive");
      }
    }
  }
};

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

inline void require_finite(const Matrix& a, const char* what) {
  if (a.size() == 0) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entries");
  }
}

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::Dimension, std::string(what) + ": matrix is not square (" +
                                          std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()) + ")");
  }
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::Dimension, std::string(what) + ": dimension mismatch (" +
                                          std::to_string(a) + " vs " + std::to_string(b) +
                                          ")");
  }
}

}  // namespace ptsym

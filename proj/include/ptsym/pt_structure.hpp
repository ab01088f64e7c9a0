#pragma once

#include <string>
#include <vector>

#include "ptsym/linalg.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

/// Linear involution P (P^2 = I).
class ParityOperator {
 public:
  const Matrix& matrix() const { return p_; }

 private:
  explicit ParityOperator(Matrix p) : p_(std::move(p)) {}
  Matrix p_;
  friend class PTPair;
};

/// Antilinear time reversal v -> T conj(v), stored as the matrix T only.
class TimeReversalOperator {
 public:
  const Matrix& matrix() const { return t_; }
  Vector apply(const Vector& v) const { return t_ * v.conjugate(); }

 private:
  explicit TimeReversalOperator(Matrix t) : t_(std::move(t)) {}
  Matrix t_;
  friend class PTPair;
};

struct PTViolation {
  std::string identity;  // e.g. "P^2 = I"
  double residual = 0.0;
};

/// Thrown by validate_pt_pair; lists every violated identity.
class PTValidationError : public Error {
 public:
  explicit PTValidationError(std::vector<PTViolation> violations)
      : Error(ErrorKind::Validation, describe(violations)), violations_(std::move(violations)) {}

  const std::vector<PTViolation>& violations() const noexcept { return violations_; }

 private:
  static std::string describe(const std::vector<PTViolation>& vs) {
    std::string msg = "invalid PT pair:";
    for (const auto& v : vs) msg += " [" + v.identity + " residual " + std::to_string(v.residual) + "]";
    return msg;
  }
  std::vector<PTViolation> violations_;
};

/// A validated (P, T) pair. The composite PT acts as v -> (P T) conj(v).
class PTPair {
 public:
  const ParityOperator& parity() const { return parity_; }
  const TimeReversalOperator& time_reversal() const { return time_reversal_; }
  /// The matrix P*T; conjugation is applied at call time.
  const Matrix& pt_matrix() const { return pt_; }
  Eigen::Index dim() const { return pt_.rows(); }

  friend PTPair validate_pt_pair(const Matrix& p, const Matrix& t, double val_tol);

 private:
  PTPair(Matrix p, Matrix t)
      : parity_(std::move(p)), time_reversal_(std::move(t)),
        pt_(parity_.matrix() * time_reversal_.matrix()) {}

  ParityOperator parity_;
  TimeReversalOperator time_reversal_;
  Matrix pt_;
};

/// Checks P^2 = I, T conj(T) = I, P T = T conj(P) and (PT) conj(PT) = I.
/// Residuals are spectral norms; any above val_tol is reported.
inline PTPair validate_pt_pair(const Matrix& p, const Matrix& t, double val_tol = 1e-10) {
  require_square(p, "validate_pt_pair: P");
  require_square(t, "validate_pt_pair: T");
  require_same_dim(p.rows(), t.rows(), "validate_pt_pair");
  require_finite(p, "validate_pt_pair: P");
  require_finite(t, "validate_pt_pair: T");
  if (!(val_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "validate_pt_pair: val_tol must be positive");

  const Eigen::Index n = p.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix pt = p * t;
  std::vector<PTViolation> bad;
  auto check = [&](const char* name, const Matrix& r) {
    const double res = operator_norm(r);
    if (!(res <= val_tol)) bad.push_back({name, res});
  };
  check("P^2 = I", p * p - id);
  check("T conj(T) = I", t * t.conjugate() - id);
  check("P T = T conj(P)", pt - t * p.conjugate());
  check("(PT) conj(PT) = I", pt * pt.conjugate() - id);
  if (!bad.empty()) throw PTValidationError(std::move(bad));
  return PTPair(p, t);
}

/// (PT) conj(v).
inline Vector apply_antilinear(const PTPair& pair, const Vector& v) {
  require_same_dim(pair.dim(), v.size(), "apply_antilinear");
  return pair.pt_matrix() * v.conjugate();
}

/// Column-wise antilinear action on a matrix: (PT) conj(X).
inline Matrix apply_antilinear(const PTPair& pair, const Matrix& x) {
  require_same_dim(pair.dim(), x.rows(), "apply_antilinear");
  return pair.pt_matrix() * x.conjugate();
}

struct SymmetryCheck {
  bool symmetric = false;
  double residual = 0.0;  // |H (PT) - (PT) conj(H)|
};

/// H commutes with the antilinear PT iff H (PT) = (PT) conj(H).
inline SymmetryCheck is_pt_symmetric(const Matrix& h, const PTPair& pair, double tol = 1e-10) {
  require_square(h, "is_pt_symmetric");
  require_same_dim(h.rows(), pair.dim(), "is_pt_symmetric");
  require_finite(h, "is_pt_symmetric");
  const Matrix& m = pair.pt_matrix();
  const double res = operator_norm(h * m - m * h.conjugate());
  return {res <= tol * norm_scale(h), res};
}

}  // namespace ptsym

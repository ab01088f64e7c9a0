#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ptsym/canonical.hpp"
#include "ptsym/linalg.hpp"
#include "ptsym/metric.hpp"
#include "ptsym/pt_structure.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

/// H = [[r e^{i theta}, s], [s, r e^{-i theta}]].
struct BenderParams {
  double r = 1.0;
  double s = 1.0;
  double theta = 0.0;

  void validate() const {
    if (!std::isfinite(r) || !std::isfinite(s) || !std::isfinite(theta)) {
      throw Error(ErrorKind::InvalidInput, "BenderParams: non-finite parameter");
    }
    if (r < 0.0) throw Error(ErrorKind::InvalidInput, "BenderParams: r must be nonnegative");
    if (!(theta > -std::numbers::pi && theta <= std::numbers::pi)) {
      throw Error(ErrorKind::InvalidInput, "BenderParams: theta must lie in (-pi, pi]");
    }
    if (r == 0.0 && s == 0.0) throw Error(ErrorKind::InvalidInput, "BenderParams: r and s both zero");
  }

  /// s^2 - r^2 sin^2(theta); its sign decides the phase.
  double discriminant() const {
    const double rs = r * std::sin(theta);
    return s * s - rs * rs;
  }
};

struct BenderModel {
  Matrix h;
  PTPair pair;  // P = sigma_x, T = I
};

inline Matrix pauli_x() {
  Matrix p(2, 2);
  p << 0.0, 1.0, 1.0, 0.0;
  return p;
}

inline BenderModel bender_hamiltonian(const BenderParams& p) {
  p.validate();
  Matrix h(2, 2);
  h << p.r * std::polar(1.0, p.theta), p.s, p.s, p.r * std::polar(1.0, -p.theta);
  return {h, validate_pt_pair(pauli_x(), Matrix::Identity(2, 2))};
}

/// Closed-form classification from the sign of s^2 - r^2 sin^2(theta); a
/// zero discriminant with r sin(theta) = 0 means H = r cos(theta) I, which is
/// diagonal.
inline SpectralClass bender_classify(const BenderParams& p, double tol = 1e-12) {
  p.validate();
  const double disc = p.discriminant();
  const double band = tol * std::max({1.0, p.r * p.r, p.s * p.s});
  const double centre = p.r * std::cos(p.theta);
  SpectralClass sc;
  if (disc > band || (std::abs(disc) <= band && std::abs(p.r * std::sin(p.theta)) <= band)) {
    const double root = std::sqrt(std::max(disc, 0.0));
    sc.tag = SpectralClass::Tag::Unbroken;
    sc.detail = {Block{centre - root, 1, BlockKind::RealSimple, 0},
                 Block{centre + root, 1, BlockKind::RealSimple, 1}};
  } else if (disc < -band) {
    sc.tag = SpectralClass::Tag::Broken;
    sc.detail = {Block{cplx(centre, std::sqrt(-disc)), 1, BlockKind::ComplexConjugatePair, 0}};
  } else {
    sc.tag = SpectralClass::Tag::Broken;
    sc.detail = {Block{centre, 2, BlockKind::RealJordan, 0}};
  }
  return sc;
}

inline std::string bender_phase_label(const SpectralClass& sc) {
  if (sc.unbroken()) return "Unbroken";
  return sc.count(BlockKind::RealJordan) > 0 ? "EP" : "ComplexPair";
}

/// Unbroken-regime eigenstates parametrized by sin(alpha) = (r/s) sin(theta).
struct BenderEigensystem {
  double alpha = 0.0;
  double lambda_plus = 0.0;   // r cos(theta) + s cos(alpha)
  double lambda_minus = 0.0;  // r cos(theta) - s cos(alpha)
  Vector e_plus_raw;          // (e^{i a/2}, e^{-i a/2}) / sqrt 2
  Vector e_minus_raw;         // (i e^{-i a/2}, -i e^{i a/2}) / sqrt 2
  Vector e_plus;              // raw / sqrt(cos alpha), eta-normalized
  Vector e_minus;
  double eigen_residual = 0.0;  // max |H E - lambda E| over the raw states
  CanonicalDecomposition decomposition;  // Psi = eta-normalized states
  MetricOperator eta;
};

inline Vector bender_state_plus(double alpha) {
  Vector v(2);
  v << std::polar(1.0, alpha / 2), std::polar(1.0, -alpha / 2);
  return v / std::sqrt(2.0);
}

inline Vector bender_state_minus(double alpha) {
  Vector v(2);
  v << kI * std::polar(1.0, -alpha / 2), -kI * std::polar(1.0, alpha / 2);
  return v / std::sqrt(2.0);
}

inline void require_off_critical(double alpha, double crit_tol) {
  if (!(std::cos(alpha) > crit_tol)) {
    throw Error(ErrorKind::CriticalPoint,
                "cos(alpha) = " + std::to_string(std::cos(alpha)) + " is at or below crit_tol");
  }
}

inline BenderEigensystem bender_eigensystem(const BenderParams& p, double crit_tol = 1e-6) {
  const auto model = bender_hamiltonian(p);
  if (p.s == 0.0) throw Error(ErrorKind::Precondition, "bender_eigensystem: s must be nonzero");
  const double ratio = p.r * std::sin(p.theta) / p.s;
  if (std::abs(ratio) > 1.0) {
    throw Error(ErrorKind::BrokenHamiltonian,
                "bender_eigensystem: |r sin(theta) / s| > 1, eigenstates are not of real-alpha form");
  }
  BenderEigensystem es;
  es.alpha = std::asin(ratio);
  require_off_critical(es.alpha, crit_tol);
  const double ca = std::cos(es.alpha);
  es.lambda_plus = p.r * std::cos(p.theta) + p.s * ca;
  es.lambda_minus = p.r * std::cos(p.theta) - p.s * ca;
  es.e_plus_raw = bender_state_plus(es.alpha);
  es.e_minus_raw = bender_state_minus(es.alpha);
  es.e_plus = es.e_plus_raw / std::sqrt(ca);
  es.e_minus = es.e_minus_raw / std::sqrt(ca);
  es.eigen_residual = std::max((model.h * es.e_plus_raw - es.lambda_plus * es.e_plus_raw).norm(),
                               (model.h * es.e_minus_raw - es.lambda_minus * es.e_minus_raw).norm());
  if (es.eigen_residual > 1e-10 * norm_scale(model.h)) {
    throw IllConditionedError("bender_eigensystem: eigen-residual above tolerance", es.eigen_residual);
  }

  // Both states are PT-self-conjugate, so they form a canonical basis with
  // J real diagonal and K = I; columns ascend by eigenvalue.
  auto& d = es.decomposition;
  const bool plus_first = es.lambda_plus <= es.lambda_minus;
  d.psi.resize(2, 2);
  d.psi.col(0) = plus_first ? es.e_plus : es.e_minus;
  d.psi.col(1) = plus_first ? es.e_minus : es.e_plus;
  const double l0 = plus_first ? es.lambda_plus : es.lambda_minus;
  const double l1 = plus_first ? es.lambda_minus : es.lambda_plus;
  d.j = Matrix::Zero(2, 2);
  d.j(0, 0) = l0;
  d.j(1, 1) = l1;
  d.k = Matrix::Identity(2, 2);
  d.blocks = {Block{l0, 1, BlockKind::RealSimple, 0}, Block{l1, 1, BlockKind::RealSimple, 1}};
  const Matrix psi_inv = checked_inverse(d.psi, "bender_eigensystem: Psi");
  d.similarity_residual = operator_norm(psi_inv * model.h * d.psi - d.j);
  d.k_residual = operator_norm(model.pair.pt_matrix() * d.psi.conjugate() - d.psi * d.k);
  d.psi_condition = condition_number(d.psi);
  es.eta = build_metric(d, SignCharacteristic{{1, 1}});
  return es;
}

struct ExpansionCoefficients {
  cplx c1;
  cplx c2;
};

/// Coefficients of (x, y) in the eta-normalized basis E_+(alpha), E_-(alpha).
inline ExpansionCoefficients expansion_coefficients(cplx x, cplx y, double alpha, double crit_tol = 1e-6) {
  require_off_critical(alpha, crit_tol);
  const double amp = std::sqrt(2.0 * std::cos(alpha));
  const cplx denom = std::polar(1.0, alpha) + std::polar(1.0, -alpha);
  const cplx h = std::polar(1.0, alpha / 2);
  const cplx hc = std::conj(h);
  return {amp * (x * h + y * hc) / denom, -kI * amp * (x * hc - y * h) / denom};
}

/// (|x|^2 + |y|^2 + i (x conj(y) - y conj(x)) sin(alpha)) / cos(alpha).
inline double s0_eta(cplx x, cplx y, double alpha, double crit_tol = 1e-6) {
  require_off_critical(alpha, crit_tol);
  const cplx cross = kI * (x * std::conj(y) - y * std::conj(x));
  return (std::norm(x) + std::norm(y) + cross.real() * std::sin(alpha)) / std::cos(alpha);
}

struct StokesVector {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

/// S3 = i (Ex conj(Ey) - Ey conj(Ex)), so (1, i)/sqrt 2 has S3 = +1.
inline StokesVector stokes_vector(cplx ex, cplx ey) {
  if (!std::isfinite(std::abs(ex)) || !std::isfinite(std::abs(ey))) {
    throw Error(ErrorKind::InvalidInput, "stokes_vector: non-finite field");
  }
  const cplx cross = ex * std::conj(ey);
  return {std::norm(ex) + std::norm(ey), std::norm(ex) - std::norm(ey), 2.0 * cross.real(),
          (kI * (cross - std::conj(cross))).real()};
}

struct SweepRow {
  double theta = 0.0;
  SpectralClass phase;
  std::string label;  // Unbroken, EP or ComplexPair
  std::optional<double> alpha;
  std::optional<double> s0;
  std::optional<double> s0_times_cos_alpha;
  std::optional<double> eigvec_overlap;  // |<E~+|E~->|, standard inner product
  std::string note;
};

struct Probe {
  cplx x{1.0, 0.0};
  cplx y{0.0, 0.0};
};

inline SweepRow sweep_row(double r, double s, double theta, const Probe& probe, double crit_tol) {
  SweepRow row;
  row.theta = theta;
  double wrapped = std::remainder(theta, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped = std::numbers::pi;
  const BenderParams p{r, s, wrapped};
  row.phase = bender_classify(p);
  row.label = bender_phase_label(row.phase);
  const double ratio = r * std::sin(theta) / s;
  if (std::abs(ratio) > 1.0 + 1e-12) {
    row.note = "broken regime: alpha undefined";
    return row;
  }
  const double alpha = std::asin(std::clamp(ratio, -1.0, 1.0));
  row.alpha = alpha;
  row.eigvec_overlap = std::abs(bender_state_plus(alpha).dot(bender_state_minus(alpha)));
  try {
    const double v = s0_eta(probe.x, probe.y, alpha, crit_tol);
    row.s0 = v;
    row.s0_times_cos_alpha = v * std::cos(alpha);
  } catch (const Error& e) {
    row.note = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return row;
}

/// One row per theta, sorted by theta. Per-row failures land in `note`.
inline std::vector<SweepRow> critical_sweep(double r, double s, std::vector<double> thetas,
                                            const Probe& probe = {}, double crit_tol = 1e-6) {
  if (s == 0.0) throw Error(ErrorKind::Precondition, "critical_sweep: s must be nonzero");
  BenderParams{r, s, 0.0}.validate();
  std::sort(thetas.begin(), thetas.end());
  std::vector<SweepRow> rows;
  rows.reserve(thetas.size());
  for (double theta : thetas) rows.push_back(sweep_row(r, s, theta, probe, crit_tol));
  return rows;
}

}  // namespace ptsym

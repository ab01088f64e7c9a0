#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ptsym/canonical.hpp"
#include "ptsym/linalg.hpp"
#include "ptsym/metric.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

/// Uniform time samples (hbar = 1). A single-point grid sits at t_start.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int num_points)
      : t_start_(t_start), t_end_(t_end), num_points_(num_points) {
    if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
      throw Error(ErrorKind::InvalidInput, "TimeGrid: non-finite bounds");
    }
    if (num_points < 1) throw Error(ErrorKind::InvalidInput, "TimeGrid: need at least one point");
    if (num_points >= 2 && !(t_end > t_start)) {
      throw Error(ErrorKind::InvalidInput, "TimeGrid: t_end must exceed t_start");
    }
  }

  static TimeGrid standard() { return {0.0, 10.0, 201}; }

  double t_start() const { return t_start_; }
  double t_end() const { return num_points_ == 1 ? t_start_ : t_end_; }
  int size() const { return num_points_; }

  double at(int i) const {
    if (num_points_ == 1) return t_start_;
    return t_start_ + (t_end_ - t_start_) * static_cast<double>(i) / (num_points_ - 1);
  }

  std::vector<double> points() const {
    std::vector<double> out(static_cast<std::size_t>(num_points_));
    for (int i = 0; i < num_points_; ++i) out[static_cast<std::size_t>(i)] = at(i);
    return out;
  }

 private:
  double t_start_;
  double t_end_;
  int num_points_;
};

/// U(t) = e^{-itH}.
inline Matrix propagator(const Matrix& h, double t) { return matrix_exponential(h, cplx(0.0, -t)); }

/// Hermitian, PSD and unit trace, each within tol.
inline void require_density_matrix(const Matrix& rho, double tol = 1e-10) {
  require_square(rho, "density matrix");
  require_finite(rho, "density matrix");
  if ((rho - rho.adjoint()).norm() > tol * std::max(1.0, rho.norm())) {
    throw Error(ErrorKind::Precondition, "density matrix is not Hermitian");
  }
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorKind::Precondition, "density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorKind::Precondition, "density matrix is not positive semidefinite");
  }
}

/// U(t) rho U(t)^dagger, deliberately not renormalized.
inline Matrix evolve_density(const Matrix& rho, const Matrix& h, double t) {
  require_density_matrix(rho);
  require_square(h, "evolve_density");
  require_same_dim(rho.rows(), h.rows(), "evolve_density");
  const Matrix u = propagator(h, t);
  return u * rho * u.adjoint();
}

/// Same conjugation without the density-matrix precondition; used for
/// already-evolved (unnormalized) operators.
inline Matrix conjugate_by_propagator(const Matrix& x, const Matrix& h, double t) {
  const Matrix u = propagator(h, t);
  return u * x * u.adjoint();
}

inline Matrix normalize_density(const Matrix& rho) {
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-12) {
    throw Error(ErrorKind::DegeneratePostSelection, "normalize_density: trace below 1e-12");
  }
  return rho / tr;
}

/// Time series of one conserved quantity.
struct TrackedInvariant {
  std::string name;
  std::vector<cplx> values;
  double drift = 0.0;  // max |value(t) - value(t_0)| over the usable horizon
};

struct InvariantReport {
  std::vector<double> times;
  std::vector<CoefficientMatrix> coefficient_series;
  std::vector<cplx> eta_trace_series;
  SpectralClass case_tag;
  std::vector<TrackedInvariant> invariants;  // eta_trace first, then per-block quantities
  double eta_trace_drift = 0.0;
  bool overflow_risk = false;
  double usable_horizon = 0.0;  // drift is computed over |t| * |H| <= 30 in broken cases
  CanonicalDecomposition decomposition;
  MetricOperator metric;

  const TrackedInvariant* find(const std::string& name) const {
    for (const auto& inv : invariants) {
      if (inv.name == name) return &inv;
    }
    return nullptr;
  }
};

namespace detail {

inline std::string coeff_name(Eigen::Index i, Eigen::Index j, Eigen::Index dim) {
  if (dim < 10) return "R" + std::to_string(i + 1) + std::to_string(j + 1);
  return "R" + std::to_string(i + 1) + "," + std::to_string(j + 1);
}

// Quantities conserved block by block: a real simple block keeps R_ii; a
// simple conjugate pair keeps both off-diagonal couplings; any other block
// keeps its eta-trace contribution Tr(S_B R_BB).
struct InvariantProbe {
  std::string name;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> entries;  // summed
  bool block_trace = false;
  Block block;
};

inline std::vector<InvariantProbe> invariant_probes(const CanonicalDecomposition& d) {
  std::vector<InvariantProbe> out;
  const Eigen::Index n = d.dim();
  for (const auto& b : d.blocks) {
    const Eigen::Index o = b.offset;
    if (b.kind == BlockKind::RealSimple) {
      out.push_back({coeff_name(o, o, n), {{o, o}}, false, b});
    } else if (b.kind == BlockKind::ComplexConjugatePair && b.order == 1) {
      out.push_back({coeff_name(o, o + 1, n), {{o, o + 1}}, false, b});
      out.push_back({coeff_name(o + 1, o, n), {{o + 1, o}}, false, b});
    } else if (b.kind == BlockKind::RealJordan && b.order == 2) {
      out.push_back({coeff_name(o, o + 1, n) + "+" + coeff_name(o + 1, o, n),
                     {{o, o + 1}, {o + 1, o}}, false, b});
    } else {
      out.push_back({"Tr(S R)[" + std::to_string(o + 1) + ":" + std::to_string(o + b.width()) + "]",
                     {}, true, b});
    }
  }
  return out;
}

inline cplx evaluate_probe(const InvariantProbe& p, const Matrix& r, const Matrix& s) {
  if (p.block_trace) {
    const Eigen::Index o = p.block.offset, w = p.block.width();
    return (s.block(o, o, w, w) * r.block(o, o, w, w)).trace();
  }
  cplx v = 0.0;
  for (auto [i, j] : p.entries) v += r(i, j);
  return v;
}

}  // namespace detail

/// Evolves rho over the grid and tracks the conserved quantities of the
/// detected canonical structure together with Tr(eta rho(t)).
inline InvariantReport invariant_report(const Matrix& h, const PTPair& pair, const Matrix& rho,
                                        const TimeGrid& grid,
                                        std::optional<SignCharacteristic> signs = std::nullopt,
                                        const Tolerances& tol = {}) {
  require_density_matrix(rho);
  require_same_dim(rho.rows(), h.rows(), "invariant_report");
  InvariantReport rep;
  rep.decomposition = pt_canonical_form(h, pair, tol);
  rep.case_tag = rep.decomposition.spectral_class();
  rep.metric = build_metric(rep.decomposition,
                            signs ? *signs : SignCharacteristic::all_positive(rep.decomposition),
                            tol.met_tol);

  const double hnorm = operator_norm(h);
  const double t_extent = std::max(std::abs(grid.t_start()), std::abs(grid.t_end()));
  rep.usable_horizon = t_extent;
  if (!rep.case_tag.unbroken() && t_extent * hnorm > 30.0) {
    rep.overflow_risk = true;
    rep.usable_horizon = 30.0 / hnorm;
  }

  const auto probes = detail::invariant_probes(rep.decomposition);
  rep.invariants.push_back({"eta_trace", {}, 0.0});
  for (const auto& p : probes) rep.invariants.push_back({p.name, {}, 0.0});

  const Matrix psi_inv = checked_inverse(rep.decomposition.psi, "invariant_report: Psi");
  rep.times = grid.points();
  for (double t : rep.times) {
    const Matrix rho_t = conjugate_by_propagator(rho, h, t);
    CoefficientMatrix r{psi_inv * rho_t * psi_inv.adjoint()};
    const cplx tr = eta_trace(rho_t, rep.metric.eta);
    rep.eta_trace_series.push_back(tr);
    rep.invariants[0].values.push_back(tr);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      rep.invariants[k + 1].values.push_back(detail::evaluate_probe(probes[k], r.r, rep.metric.s));
    }
    rep.coefficient_series.push_back(std::move(r));
  }
  for (auto& inv : rep.invariants) {
    double drift = 0.0;
    for (std::size_t i = 0; i < inv.values.size(); ++i) {
      if (std::abs(rep.times[i]) > rep.usable_horizon) continue;
      drift = std::max(drift, std::abs(inv.values[i] - inv.values.front()));
    }
    inv.drift = drift;
  }
  rep.eta_trace_drift = rep.invariants[0].drift;
  return rep;
}

}  // namespace ptsym

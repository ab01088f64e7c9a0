#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptsym/error.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

// ---------------------------------------------------------------------------
// Norms and small helpers

/// Largest singular value.
inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) throw Error(ErrorKind::InvalidInput, "operator_norm: empty matrix");
  if (!a.allFinite()) throw Error(ErrorKind::InvalidInput, "operator_norm: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double norm_scale(const Matrix& a) { return std::max(1.0, operator_norm(a)); }

inline Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) / 2.0; }

inline bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

/// Inverse with an explicit singularity check on sigma_min / sigma_max.
inline Matrix checked_inverse(const Matrix& a, const char* what, double rel_tol = 1e-12) {
  require_square(a, what);
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin <= rel_tol * smax) {
    throw IllConditionedError(std::string(what) + ": matrix is numerically singular",
                              smax > 0.0 ? smin / smax : 0.0);
  }
  return a.partialPivLu().inverse();
}

inline double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

/// Half the trace norm of a - b, for Hermitian arguments.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// Matrix exponential

namespace detail {

// Degree-13 Pade coefficients for exp (Higham 2005).
inline constexpr double kPade13[] = {64764752532480000.0,
                                     32382376266240000.0,
                                     7771770303897600.0,
                                     1187353796428800.0,
                                     129060195264000.0,
                                     10559470521600.0,
                                     670442572800.0,
                                     33522128640.0,
                                     1323241920.0,
                                     40840800.0,
                                     960960.0,
                                     16380.0,
                                     182.0,
                                     1.0};
inline constexpr double kTheta13 = 5.371920351148152;

}  // namespace detail

/// e^{z A} by scaling and squaring with a fixed degree-13 Pade approximant.
inline Matrix matrix_exponential(const Matrix& a, cplx z) {
  require_square(a, "matrix_exponential");
  require_finite(a, "matrix_exponential");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::InvalidInput, "matrix_exponential: non-finite scalar");
  }
  const Eigen::Index n = a.rows();
  Matrix b = z * a;
  const double norm1 = b.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > detail::kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / detail::kTheta13)));
    b /= std::ldexp(1.0, squarings);
  }

  const auto& c = detail::kPade13;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix b2 = b * b;
  const Matrix b4 = b2 * b2;
  const Matrix b6 = b4 * b2;
  const Matrix u_inner = b6 * (c[13] * b6 + c[11] * b4 + c[9] * b2) + c[7] * b6 + c[5] * b4 +
                         c[3] * b2 + c[1] * id;
  const Matrix u = b * u_inner;
  const Matrix v = b6 * (c[12] * b6 + c[10] * b4 + c[8] * b2) + c[6] * b6 + c[4] * b4 +
                   c[2] * b2 + c[0] * id;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = (r * r).eval();
  return r;
}

// ---------------------------------------------------------------------------
// PSD square root

inline Matrix psd_square_root(const Matrix& a) {
  require_square(a, "psd_square_root");
  require_finite(a, "psd_square_root");
  const double scale = norm_scale(a);
  if ((a - a.adjoint()).norm() > 1e-10 * scale) {
    throw Error(ErrorKind::InvalidInput, "psd_square_root: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  Eigen::VectorXd w = es.eigenvalues();
  if (w.minCoeff() < -1e-12 * scale) {
    throw Error(ErrorKind::NotPsd, "psd_square_root: negative eigenvalue " +
                                       std::to_string(w.minCoeff()));
  }
  w = w.cwiseMax(0.0).cwiseSqrt();
  const Matrix& q = es.eigenvectors();
  return q * w.cast<cplx>().asDiagonal() * q.adjoint();
}

// ---------------------------------------------------------------------------
// Numerical rank and null spaces

struct NullSpace {
  Matrix basis;  // orthonormal columns
  Eigen::Index rank = 0;
};

/// Orthonormal basis of the numerical null space; singular values at or
/// below rank_tol * max(sigma_max, reference) count as zero. A reference
/// magnitude keeps a matrix that is zero up to rounding from being read as
/// full rank.
inline NullSpace null_space(const Matrix& a, double rank_tol, double reference = 0.0) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? rank_tol * std::max(sv(0), reference) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut && sv(i) > 0.0) ++rank;
  }
  const Eigen::Index n = a.cols();
  return {svd.matrixV().rightCols(n - rank), rank};
}

// ---------------------------------------------------------------------------
// Eigenstructure with Jordan chains

/// One eigenvalue cluster. Each chain lists the eigenvector first, then the
/// generalized vectors: A c_0 = mu c_0, A c_j = mu c_j + c_{j-1}.
struct EigenCluster {
  cplx eigenvalue;
  int algebraic = 0;
  int geometric = 0;
  std::vector<std::vector<Vector>> chains;
  std::vector<cplx> members;  // raw eigenvalues merged into this cluster
  bool merged_beyond_tol = false;  // needed the defect-aware merge
};

struct EigenStructure {
  std::vector<EigenCluster> clusters;
  double residual = 0.0;  // |A Psi - Psi J| for the assembled basis

  std::vector<cplx> eigenvalues() const {
    std::vector<cplx> out;
    for (const auto& c : clusters) out.push_back(c.eigenvalue);
    return out;
  }
  std::vector<int> multiplicities() const {
    std::vector<int> out;
    for (const auto& c : clusters) out.push_back(c.algebraic);
    return out;
  }
  std::vector<int> geometric_multiplicities() const {
    std::vector<int> out;
    for (const auto& c : clusters) out.push_back(c.geometric);
    return out;
  }
  Eigen::Index dimension() const {
    Eigen::Index d = 0;
    for (const auto& c : clusters) d += c.algebraic;
    return d;
  }

  /// Chains as columns, cluster by cluster.
  Matrix basis() const {
    const Eigen::Index n = dimension();
    Matrix psi(n, n);
    Eigen::Index col = 0;
    for (const auto& c : clusters) {
      for (const auto& chain : c.chains) {
        for (const auto& v : chain) psi.col(col++) = v;
      }
    }
    return psi;
  }

  /// Jordan matrix matching basis().
  Matrix jordan() const {
    const Eigen::Index n = dimension();
    Matrix j = Matrix::Zero(n, n);
    Eigen::Index col = 0;
    for (const auto& c : clusters) {
      for (const auto& chain : c.chains) {
        for (std::size_t k = 0; k < chain.size(); ++k) {
          j(col, col) = c.eigenvalue;
          if (k > 0) j(col - 1, col) = 1.0;
          ++col;
        }
      }
    }
    return j;
  }
};

struct ClusterOptions {
  double cluster_tol = 1e-8;
  double rank_tol = 1e-10;
};

/// Produces candidate top-of-chain vectors from an orthonormal basis of
/// ker N^k. The default returns the basis columns.
using ChainCandidateFn = std::function<std::vector<Vector>(const Matrix& kernel_basis)>;

namespace detail {

inline Matrix matrix_power(const Matrix& n, int k) {
  Matrix p = Matrix::Identity(n.rows(), n.cols());
  for (int i = 0; i < k; ++i) p = (p * n).eval();
  return p;
}

/// Kernels of N^k for k = 1..p, stopping once dim ker N^p >= m. Ranks of
/// N^k are judged against scale^k, with scale = max(1, |A|) of the matrix
/// that N was shifted from.
inline std::vector<NullSpace> kernel_ladder(const Matrix& nil, int m, double rank_tol, double scale) {
  std::vector<NullSpace> ladder;
  Matrix power = Matrix::Identity(nil.rows(), nil.cols());
  for (int k = 1; k <= m; ++k) {
    power = (power * nil).eval();
    ladder.push_back(null_space(power, rank_tol, std::pow(scale, k)));
    if (ladder.back().basis.cols() >= m) break;
  }
  return ladder;
}

// Residual norm of v after projection onto the orthogonal complement of span(w).
inline Vector complement_part(const Matrix& w_orth, const Vector& v) {
  if (w_orth.cols() == 0) return v;
  return v - w_orth * (w_orth.adjoint() * v);
}

inline Matrix orthonormalize(const Matrix& w) {
  if (w.cols() == 0) return w;
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-12 * std::max(1.0, sv(0))) ++r;
  }
  return svd.matrixU().leftCols(r);
}

}  // namespace detail

/// Jordan chains of A at eigenvalue mu with algebraic multiplicity m.
/// Chain tops at each level are chosen greedily from `candidates` to be as far
/// as possible from the span already accounted for. Throws IllConditionedError
/// when the kernel ladder or the selection does not close at m.
inline std::vector<std::vector<Vector>> jordan_chains(const Matrix& a, cplx mu, int m,
                                                      double rank_tol,
                                                      const ChainCandidateFn& candidates = {}) {
  const Eigen::Index n = a.rows();
  const Matrix nil = a - mu * Matrix::Identity(n, n);
  const auto ladder = detail::kernel_ladder(nil, m, rank_tol, norm_scale(a));
  const auto top_dim = ladder.back().basis.cols();
  if (top_dim != m) {
    throw IllConditionedError("jordan_chains: generalized eigenspace has dimension " +
                                  std::to_string(top_dim) + ", expected " + std::to_string(m),
                              static_cast<double>(std::abs(top_dim - m)));
  }
  const int p = static_cast<int>(ladder.size());
  std::vector<int> dims(p + 2, 0);
  for (int k = 1; k <= p; ++k) dims[k] = static_cast<int>(ladder[k - 1].basis.cols());
  dims[p + 1] = dims[p];
  for (int k = 1; k <= p; ++k) {
    if (dims[k] <= dims[k - 1]) {
      throw IllConditionedError("jordan_chains: kernel ladder does not increase",
                                static_cast<double>(dims[k]));
    }
  }
  // at_least[k]: number of chains of length >= k.
  std::vector<int> at_least(p + 2, 0);
  for (int k = 1; k <= p; ++k) at_least[k] = dims[k] - dims[k - 1];
  for (int k = 1; k < p; ++k) {
    if (at_least[k] < at_least[k + 1]) {
      throw IllConditionedError("jordan_chains: inconsistent Weyr characteristic", 0.0);
    }
  }

  std::vector<std::vector<Vector>> chains;
  constexpr double kSelectFloor = 1e-6;
  for (int k = p; k >= 1; --k) {
    const int need = at_least[k] - at_least[k + 1];
    if (need == 0) continue;
    const Matrix& kernel = ladder[k - 1].basis;
    Matrix span(n, 0);
    if (k >= 2) span = ladder[k - 2].basis;
    for (const auto& chain : chains) {
      // element at level k of a longer chain is N^{L-k} top
      const std::size_t len = chain.size();
      span.conservativeResize(Eigen::NoChange, span.cols() + 1);
      span.col(span.cols() - 1) = chain[len - static_cast<std::size_t>(k)];
    }
    std::vector<Vector> pool;
    if (candidates) {
      pool = candidates(kernel);
    } else {
      for (Eigen::Index c = 0; c < kernel.cols(); ++c) pool.push_back(kernel.col(c));
    }
    for (int pick = 0; pick < need; ++pick) {
      const Matrix w_orth = detail::orthonormalize(span);
      double best = -1.0;
      std::size_t best_idx = 0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const double nv = pool[i].norm();
        if (nv == 0.0) continue;
        const double rel = detail::complement_part(w_orth, pool[i]).norm() / nv;
        if (rel > best) {
          best = rel;
          best_idx = i;
        }
      }
      if (best < kSelectFloor) {
        throw IllConditionedError("jordan_chains: no admissible chain top", best);
      }
      Vector top = pool[best_idx] / pool[best_idx].norm();
      std::vector<Vector> chain(static_cast<std::size_t>(k));
      chain[static_cast<std::size_t>(k) - 1] = top;
      for (int j = k - 2; j >= 0; --j) {
        chain[static_cast<std::size_t>(j)] = nil * chain[static_cast<std::size_t>(j) + 1];
      }
      span.conservativeResize(Eigen::NoChange, span.cols() + 1);
      span.col(span.cols() - 1) = top;
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

namespace detail {

struct RawCluster {
  std::vector<cplx> members;
  bool loose = false;
  cplx centroid() const {
    cplx s = 0.0;
    for (auto z : members) s += z;
    return s / static_cast<double>(members.size());
  }
};

inline std::vector<RawCluster> cluster_eigenvalues(const Matrix& a,
                                                   const Eigen::VectorXcd& raw,
                                                   const ClusterOptions& opt, double scale) {
  const double tight = opt.cluster_tol * scale;
  const Eigen::Index n = a.rows();

  // Tight pass: single linkage at cluster_tol.
  std::vector<RawCluster> pending;
  for (Eigen::Index i = 0; i < raw.size(); ++i) pending.push_back({{raw(i)}, false});
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < pending.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < pending.size() && !merged; ++j) {
        if (std::abs(pending[i].centroid() - pending[j].centroid()) <= tight) {
          pending[i].members.insert(pending[i].members.end(), pending[j].members.begin(),
                                    pending[j].members.end());
          pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }

  // An order-k Jordan block splits under rounding into k eigenvalues on a
  // circle of radius ~ tol^{1/k}. Working down from k = n, a single-linkage
  // component of exactly k eigenvalues at that radius is merged when A - mu I
  // has a k-dimensional generalized eigenspace at the centroid mu.
  std::vector<RawCluster> out;
  for (Eigen::Index k = n; k >= 2; --k) {
    const double radius = 2.0 * scale * std::pow(opt.cluster_tol, 1.0 / static_cast<double>(k));
    const std::size_t count = pending.size();
    std::vector<std::size_t> label(count);
    for (std::size_t i = 0; i < count; ++i) label[i] = i;
    auto root = [&](std::size_t i) {
      while (label[i] != i) i = label[i] = label[label[i]];
      return i;
    };
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        if (std::abs(pending[i].centroid() - pending[j].centroid()) <= radius) label[root(j)] = root(i);
      }
    }
    std::vector<std::vector<std::size_t>> groups(count);
    for (std::size_t i = 0; i < count; ++i) groups[root(i)].push_back(i);

    std::vector<bool> taken(count, false);
    for (const auto& g : groups) {
      if (g.size() < 2) continue;
      RawCluster merged{{}, true};
      for (auto i : g) merged.members.insert(merged.members.end(), pending[i].members.begin(), pending[i].members.end());
      if (static_cast<Eigen::Index>(merged.members.size()) != k) continue;
      const Matrix nil = a - merged.centroid() * Matrix::Identity(n, n);
      const auto k1 = null_space(nil, opt.rank_tol, scale).basis.cols();
      const auto km = null_space(matrix_power(nil, static_cast<int>(k)), opt.rank_tol,
                                 std::pow(scale, static_cast<double>(k))).basis.cols();
      if (k1 < 1 || km != k) continue;
      for (auto i : g) taken[i] = true;
      out.push_back(std::move(merged));
    }
    std::vector<RawCluster> rest;
    for (std::size_t i = 0; i < count; ++i) {
      if (!taken[i]) rest.push_back(std::move(pending[i]));
    }
    pending = std::move(rest);
  }
  for (auto& c : pending) out.push_back(std::move(c));
  return out;
}

}  // namespace detail

/// Clustered eigenvalues with Jordan chains. Chains are scaled so each
/// eigenvector has unit norm; the cluster eigenvalue is the centroid of its
/// raw members.
inline EigenStructure eigen_decompose(const Matrix& a, const ClusterOptions& opt = {}) {
  require_square(a, "eigen_decompose");
  require_finite(a, "eigen_decompose");
  if (!(opt.cluster_tol > 0.0) || !(opt.rank_tol > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "eigen_decompose: tolerances must be positive");
  }
  const double scale = norm_scale(a);
  Eigen::ComplexEigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw IllConditionedError("eigen_decompose: eigenvalue iteration failed", 0.0);
  }
  auto raw = detail::cluster_eigenvalues(a, solver.eigenvalues(), opt, scale);
  std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) {
    const cplx cx = x.centroid(), cy = y.centroid();
    if (cx.real() != cy.real()) return cx.real() < cy.real();
    return cx.imag() < cy.imag();
  });

  EigenStructure out;
  for (const auto& rc : raw) {
    EigenCluster c;
    c.eigenvalue = rc.centroid();
    c.members = rc.members;
    c.algebraic = static_cast<int>(rc.members.size());
    c.merged_beyond_tol = rc.loose;
    c.chains = jordan_chains(a, c.eigenvalue, c.algebraic, opt.rank_tol);
    c.geometric = static_cast<int>(c.chains.size());
    for (auto& chain : c.chains) {
      const double s = chain.front().norm();
      for (auto& v : chain) v /= s;
    }
    std::sort(c.chains.begin(), c.chains.end(),
              [](const auto& x, const auto& y) { return x.size() < y.size(); });
    out.clusters.push_back(std::move(c));
  }
  const Matrix psi = out.basis();
  out.residual = operator_norm(a * psi - psi * out.jordan());
  return out;
}

}  // namespace ptsym

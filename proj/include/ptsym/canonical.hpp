#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ptsym/linalg.hpp"
#include "ptsym/pt_structure.hpp"
#include "ptsym/types.hpp"

namespace ptsym {

enum class BlockKind { RealSimple, RealJordan, ComplexConjugatePair };

constexpr std::string_view to_string(BlockKind k) {
  switch (k) {
    case BlockKind::RealSimple: return "RealSimple";
    case BlockKind::RealJordan: return "RealJordan";
    case BlockKind::ComplexConjugatePair: return "ComplexConjugatePair";
  }
  return "unknown";
}

/// One block of the canonical form. A conjugate pair of order n occupies 2n
/// columns: the chain for `eigenvalue` (Im > 0) followed by its PT image for
/// the conjugate eigenvalue.
struct Block {
  cplx eigenvalue;
  int order = 1;
  BlockKind kind = BlockKind::RealSimple;
  Eigen::Index offset = 0;

  Eigen::Index width() const { return kind == BlockKind::ComplexConjugatePair ? 2 * order : order; }
  bool is_real() const { return kind != BlockKind::ComplexConjugatePair; }
};

struct SpectralClass {
  enum class Tag { Unbroken, Broken };
  Tag tag = Tag::Unbroken;
  std::vector<Block> detail;

  bool unbroken() const { return tag == Tag::Unbroken; }
  std::size_t count(BlockKind k) const {
    return static_cast<std::size_t>(
        std::count_if(detail.begin(), detail.end(), [k](const Block& b) { return b.kind == k; }));
  }
};

constexpr std::string_view to_string(SpectralClass::Tag t) {
  return t == SpectralClass::Tag::Unbroken ? "Unbroken" : "Broken";
}

/// Psi^{-1} H Psi = J and (PT) conj(Psi) = Psi K.
struct CanonicalDecomposition {
  Matrix psi;
  Matrix j;
  Matrix k;
  std::vector<Block> blocks;
  double similarity_residual = 0.0;  // |Psi^{-1} H Psi - J|
  double k_residual = 0.0;           // |(PT) conj(Psi) - Psi K|
  double psi_condition = 1.0;
  bool near_exceptional = false;  // a Jordan block was found, or a cluster needed the defect-aware merge
  std::vector<std::string> warnings;

  Eigen::Index dim() const { return psi.rows(); }
  std::size_t real_block_count() const {
    return static_cast<std::size_t>(
        std::count_if(blocks.begin(), blocks.end(), [](const Block& b) { return b.is_real(); }));
  }
  SpectralClass spectral_class() const {
    SpectralClass sc;
    sc.detail = blocks;
    const bool all_simple = std::all_of(blocks.begin(), blocks.end(), [](const Block& b) {
      return b.kind == BlockKind::RealSimple;
    });
    sc.tag = all_simple ? SpectralClass::Tag::Unbroken : SpectralClass::Tag::Broken;
    return sc;
  }
};

namespace detail {

/// Eigenvalue cluster after snapping near-real centroids onto the real axis.
/// Only the Im > 0 member of a conjugate pair is kept; the partner is rebuilt
/// from its PT image.
struct ClassifiedCluster {
  cplx eigenvalue;
  int multiplicity = 0;
  bool real = true;
  bool loose = false;
};

inline void require_pt_symmetric(const Matrix& h, const PTPair& pair, const Tolerances& tol) {
  const auto sym = is_pt_symmetric(h, pair, tol.sym_tol);
  if (!sym.symmetric) {
    throw Error(ErrorKind::NotPtSymmetric,
                "Hamiltonian is not PT-symmetric (residual " + std::to_string(sym.residual) + ")");
  }
}

inline std::vector<ClassifiedCluster> classified_clusters(const Matrix& h, const Tolerances& tol) {
  const double scale = norm_scale(h);
  Eigen::ComplexEigenSolver<Matrix> solver(h, false);
  if (solver.info() != Eigen::Success) {
    throw IllConditionedError("eigenvalue iteration failed", 0.0);
  }
  const auto raw = cluster_eigenvalues(h, solver.eigenvalues(), {tol.cluster_tol, tol.rank_tol}, scale);
  const double snap = tol.cluster_tol * scale;

  std::vector<ClassifiedCluster> upper, lower, real;
  for (const auto& rc : raw) {
    const cplx mu = rc.centroid();
    const int m = static_cast<int>(rc.members.size());
    if (std::abs(mu.imag()) <= snap) {
      real.push_back({cplx(mu.real(), 0.0), m, true, rc.loose});
    } else if (mu.imag() > 0) {
      upper.push_back({mu, m, false, rc.loose});
    } else {
      lower.push_back({mu, m, false, rc.loose});
    }
  }
  // Every Im > 0 cluster needs a conjugate partner of equal multiplicity.
  std::vector<bool> used(lower.size(), false);
  for (const auto& u : upper) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = lower.size();
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (used[i] || lower[i].multiplicity != u.multiplicity) continue;
      const double d = std::abs(lower[i].eigenvalue - std::conj(u.eigenvalue));
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    const double radius =
        scale * std::pow(tol.cluster_tol, 1.0 / static_cast<double>(2 * u.multiplicity));
    if (bi == lower.size() || best > std::max(radius, 1e3 * snap)) {
      throw IllConditionedError("spectrum is not closed under complex conjugation", best);
    }
    used[bi] = true;
  }
  if (std::count(used.begin(), used.end(), false) != 0) {
    throw IllConditionedError("spectrum is not closed under complex conjugation", 0.0);
  }
  std::vector<ClassifiedCluster> out = upper;
  out.insert(out.end(), real.begin(), real.end());
  return out;
}

/// Jordan block orders at mu from the kernel ladder of (H - mu I)^k.
inline std::vector<int> block_orders(const Matrix& h, cplx mu, int m, double rank_tol) {
  const Matrix nil = h - mu * Matrix::Identity(h.rows(), h.cols());
  const auto ladder = kernel_ladder(nil, m, rank_tol, norm_scale(h));
  if (ladder.back().basis.cols() != m) {
    throw IllConditionedError("generalized eigenspace dimension mismatch",
                              static_cast<double>(ladder.back().basis.cols()));
  }
  const int p = static_cast<int>(ladder.size());
  std::vector<int> dims(p + 2, 0);
  for (int k = 1; k <= p; ++k) dims[k] = static_cast<int>(ladder[k - 1].basis.cols());
  dims[p + 1] = dims[p];
  std::vector<int> orders;
  for (int k = p; k >= 1; --k) {
    const int at_least_k = dims[k] - dims[k - 1];
    const int at_least_k1 = k < p ? dims[k + 1] - dims[k] : 0;
    for (int c = 0; c < at_least_k - at_least_k1; ++c) orders.push_back(k);
  }
  std::sort(orders.begin(), orders.end());
  return orders;
}

inline bool block_less(const Block& a, const Block& b) {
  if (a.is_real() != b.is_real()) return !a.is_real();
  if (a.eigenvalue.real() != b.eigenvalue.real()) return a.eigenvalue.real() < b.eigenvalue.real();
  if (a.eigenvalue.imag() != b.eigenvalue.imag()) return a.eigenvalue.imag() < b.eigenvalue.imag();
  return a.order < b.order;
}

inline void sort_blocks(std::vector<Block>& blocks) {
  std::stable_sort(blocks.begin(), blocks.end(), block_less);
}

// Index of the first entry that is not negligible relative to the vector norm.
inline Eigen::Index leading_index(const Vector& v) {
  const double cut = 1e-8 * v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) return i;
  }
  return 0;
}

}  // namespace detail

/// Spectral classification: Unbroken iff every block is RealSimple.
/// Eigenvalues with |Im| <= cluster_tol * max(1, |H|) are treated as real.
inline SpectralClass classify_spectrum(const Matrix& h, const PTPair& pair, const Tolerances& tol = {}) {
  require_square(h, "classify_spectrum");
  require_same_dim(h.rows(), pair.dim(), "classify_spectrum");
  require_finite(h, "classify_spectrum");
  detail::require_pt_symmetric(h, pair, tol);

  SpectralClass sc;
  for (const auto& c : detail::classified_clusters(h, tol)) {
    for (int order : detail::block_orders(h, c.eigenvalue, c.multiplicity, tol.rank_tol)) {
      Block b;
      b.eigenvalue = c.eigenvalue;
      b.order = order;
      b.kind = !c.real ? BlockKind::ComplexConjugatePair
                       : (order == 1 ? BlockKind::RealSimple : BlockKind::RealJordan);
      sc.detail.push_back(b);
    }
  }
  detail::sort_blocks(sc.detail);
  bool unbroken = true;
  Eigen::Index offset = 0;
  for (auto& b : sc.detail) {
    b.offset = offset;
    offset += b.width();
    unbroken = unbroken && b.kind == BlockKind::RealSimple;
  }
  sc.tag = unbroken ? SpectralClass::Tag::Unbroken : SpectralClass::Tag::Broken;
  return sc;
}

/// Structured canonical form. Real-eigenvalue chains are PT-self-conjugate,
/// each complex chain is paired with its PT image. Every chain is scaled so
/// its eigenvector has unit norm; real chains get the sign that makes the
/// leading entry's real part positive, complex chains the phase that makes
/// it positive real.
inline CanonicalDecomposition pt_canonical_form(const Matrix& h, const PTPair& pair,
                                                const Tolerances& tol = {}) {
  require_square(h, "pt_canonical_form");
  require_same_dim(h.rows(), pair.dim(), "pt_canonical_form");
  require_finite(h, "pt_canonical_form");
  detail::require_pt_symmetric(h, pair, tol);

  const Eigen::Index n = h.rows();
  const Matrix& m = pair.pt_matrix();
  auto antilinear = [&m](const Vector& v) -> Vector { return m * v.conjugate(); };

  // Self-conjugate candidates u + PT u and i (u - PT u) span any PT-invariant subspace.
  const ChainCandidateFn self_conjugate = [&](const Matrix& kernel) {
    std::vector<Vector> pool;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      const Vector u = kernel.col(c);
      const Vector w = antilinear(u);
      const Vector plus = u + w;
      const Vector minus = kI * (u - w);
      if (plus.norm() > 1e-6) pool.push_back(plus);
      if (minus.norm() > 1e-6) pool.push_back(minus);
    }
    return pool;
  };

  struct PendingBlock {
    Block block;
    std::vector<Vector> chain;  // first half for pairs
  };
  std::vector<PendingBlock> pending;
  bool near_ep = false;

  for (const auto& c : detail::classified_clusters(h, tol)) {
    auto chains = c.real ? jordan_chains(h, c.eigenvalue, c.multiplicity, tol.rank_tol, self_conjugate)
                         : jordan_chains(h, c.eigenvalue, c.multiplicity, tol.rank_tol);
    near_ep = near_ep || c.loose ||
              std::any_of(chains.begin(), chains.end(), [](const auto& ch) { return ch.size() > 1; });
    for (auto& chain : chains) {
      const Vector& eigvec = chain.front();
      const cplx lead = eigvec(detail::leading_index(eigvec));
      cplx factor = 1.0 / eigvec.norm();
      if (c.real) {
        const bool flip = std::abs(lead.real()) > 1e-12 * std::abs(lead) ? lead.real() < 0
                                                                          : lead.imag() < 0;
        if (flip) factor = -factor;
      } else {
        factor *= std::conj(lead) / std::abs(lead);
      }
      for (auto& v : chain) v *= factor;

      Block b;
      b.eigenvalue = c.eigenvalue;
      b.order = static_cast<int>(chain.size());
      b.kind = !c.real ? BlockKind::ComplexConjugatePair
                       : (b.order == 1 ? BlockKind::RealSimple : BlockKind::RealJordan);
      pending.push_back({b, std::move(chain)});
    }
  }
  std::stable_sort(pending.begin(), pending.end(), [](const PendingBlock& a, const PendingBlock& b) {
    return detail::block_less(a.block, b.block);
  });

  CanonicalDecomposition out;
  out.psi = Matrix::Zero(n, n);
  out.j = Matrix::Zero(n, n);
  out.k = Matrix::Zero(n, n);
  Eigen::Index col = 0;
  for (auto& pb : pending) {
    Block b = pb.block;
    b.offset = col;
    const Eigen::Index len = b.order;
    auto place = [&](const std::vector<Vector>& chain, cplx lambda, Eigen::Index at) {
      for (Eigen::Index i = 0; i < len; ++i) {
        out.psi.col(at + i) = chain[static_cast<std::size_t>(i)];
        out.j(at + i, at + i) = lambda;
        if (i > 0) out.j(at + i - 1, at + i) = 1.0;
      }
    };
    place(pb.chain, b.eigenvalue, col);
    if (b.kind == BlockKind::ComplexConjugatePair) {
      std::vector<Vector> image;
      for (const auto& v : pb.chain) image.push_back(antilinear(v));
      place(image, std::conj(b.eigenvalue), col + len);
      // S_2 (x) I_n
      for (Eigen::Index i = 0; i < len; ++i) {
        out.k(col + i, col + len + i) = 1.0;
        out.k(col + len + i, col + i) = 1.0;
      }
    } else {
      for (Eigen::Index i = 0; i < len; ++i) out.k(col + i, col + i) = 1.0;
    }
    col += b.width();
    out.blocks.push_back(b);
  }

  const Matrix psi_inv = checked_inverse(out.psi, "pt_canonical_form: Psi");
  out.similarity_residual = operator_norm(psi_inv * h * out.psi - out.j);
  out.k_residual = operator_norm(m * out.psi.conjugate() - out.psi * out.k);
  out.psi_condition = condition_number(out.psi);
  out.near_exceptional = near_ep;
  if (near_ep) {
    out.warnings.push_back("exceptional point detected at rank_tol; result is tolerance dependent, "
                           "cond(Psi) = " + std::to_string(out.psi_condition));
  }
  const double psi_norm = operator_norm(out.psi);
  if (out.similarity_residual > tol.can_tol * norm_scale(h)) {
    throw IllConditionedError("pt_canonical_form: similarity residual above tolerance",
                              out.similarity_residual);
  }
  if (out.k_residual > tol.can_tol * std::max(1.0, psi_norm)) {
    throw IllConditionedError("pt_canonical_form: PT relation residual above tolerance",
                              out.k_residual);
  }
  return out;
}

}  // namespace ptsym

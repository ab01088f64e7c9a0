#pragma once

// Seeded generators for property tests. A random PT-symmetric instance is
// built backwards from its canonical data: pick J0 and K0, a random
// invertible Psi0, then H = Psi0 J0 Psi0^{-1} and PT = Psi0 K0 conj(Psi0)^{-1}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ptsym/ptsym.hpp"

namespace ptsym::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }
  cplx gaussian() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

  Vector gaussian_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Matrix gaussian_matrix(Eigen::Index n) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = gaussian();
    return m;
  }

  Matrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }

  Matrix hermitian(Eigen::Index n) { return hermitian_part(gaussian_matrix(n)); }

  // Random density matrix of the given rank (rank 1 gives a pure state).
  Matrix density(Eigen::Index n, Eigen::Index rank = 0) {
    if (rank <= 0) rank = integer(1, static_cast<int>(n));
    Matrix g(n, rank);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = gaussian();
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

enum class Mix {
  Unbroken,     // real simple spectrum
  ComplexPair,  // at least one conjugate pair, no Jordan blocks
  Exceptional,  // at least one real Jordan block of order 2 or 3
  Broken,       // ComplexPair or Exceptional
  Any,
};

struct BlockSpec {
  BlockKind kind;
  int order;
  cplx eigenvalue;
};

struct Instance {
  Matrix h;
  Matrix p;
  Matrix t;
  Matrix psi0;
  Matrix j0;
  Matrix k0;
  std::vector<BlockSpec> blocks;

  PTPair pair() const { return validate_pt_pair(p, t, 1e-9); }
  bool unbroken() const {
    return std::all_of(blocks.begin(), blocks.end(), [](const BlockSpec& b) { return b.kind == BlockKind::RealSimple; });
  }
  Eigen::Index dim() const { return h.rows(); }
};

namespace detail {

inline std::vector<BlockSpec> draw_layout(Rng& rng, int d, Mix mix) {
  std::vector<BlockSpec> blocks;
  int left = d;
  auto push = [&](BlockKind kind, int order) {
    blocks.push_back({kind, order, 0.0});
    left -= kind == BlockKind::ComplexConjugatePair ? 2 * order : order;
  };
  if (mix == Mix::Broken) mix = (d >= 2 && rng.coin()) ? Mix::ComplexPair : Mix::Exceptional;
  if (mix == Mix::ComplexPair && d >= 2) push(BlockKind::ComplexConjugatePair, 1);
  if (mix == Mix::Exceptional && d >= 2) push(BlockKind::RealJordan, std::min(left, rng.integer(2, 3)));
  while (left > 0) {
    if (mix == Mix::Unbroken) {
      push(BlockKind::RealSimple, 1);
      continue;
    }
    const int pick = rng.integer(0, 3);
    if (mix == Mix::Any && pick == 0 && left >= 2) {
      push(BlockKind::RealJordan, std::min(left, rng.integer(2, 3)));
    } else if ((mix == Mix::Any || mix == Mix::ComplexPair) && pick == 1 && left >= 2) {
      push(BlockKind::ComplexConjugatePair, (left >= 4 && rng.integer(0, 4) == 0) ? 2 : 1);
    } else if (mix == Mix::Exceptional && pick == 1 && left >= 2) {
      push(BlockKind::ComplexConjugatePair, 1);
    } else {
      push(BlockKind::RealSimple, 1);
    }
  }
  // Distinct, well separated real parts.
  std::vector<double> slots;
  for (int i = 0; i < 2 * d + 2; ++i) slots.push_back(-2.0 + 0.45 * i);
  std::shuffle(slots.begin(), slots.end(), rng.engine());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double re = slots[i] + rng.uniform(-0.1, 0.1);
    blocks[i].eigenvalue = blocks[i].kind == BlockKind::ComplexConjugatePair ? cplx(re, rng.uniform(0.05, 0.3)) : cplx(re, 0.0);
  }
  return blocks;
}

}  // namespace detail

/// Random PT-symmetric H of dimension d with a known canonical layout.
inline Instance random_instance(Rng& rng, int d, Mix mix = Mix::Any) {
  Instance in;
  in.blocks = detail::draw_layout(rng, d, mix);
  in.j0 = Matrix::Zero(d, d);
  in.k0 = Matrix::Zero(d, d);
  Eigen::VectorXd p0 = Eigen::VectorXd::Ones(d);
  Eigen::Index at = 0;
  for (const auto& b : in.blocks) {
    const double parity = rng.coin() ? 1.0 : -1.0;
    auto jordan = [&](cplx lambda, Eigen::Index off) {
      for (int i = 0; i < b.order; ++i) {
        in.j0(off + i, off + i) = lambda;
        if (i > 0) in.j0(off + i - 1, off + i) = 1.0;
      }
    };
    if (b.kind == BlockKind::ComplexConjugatePair) {
      jordan(b.eigenvalue, at);
      jordan(std::conj(b.eigenvalue), at + b.order);
      for (int i = 0; i < b.order; ++i) {
        in.k0(at + i, at + b.order + i) = 1.0;
        in.k0(at + b.order + i, at + i) = 1.0;
      }
      p0.segment(at, 2 * b.order).setConstant(parity);
      at += 2 * b.order;
    } else {
      jordan(b.eigenvalue, at);
      for (int i = 0; i < b.order; ++i) in.k0(at + i, at + i) = 1.0;
      p0.segment(at, b.order).setConstant(parity);
      at += b.order;
    }
  }
  // Psi0 near the identity keeps the instance well conditioned.
  in.psi0 = Matrix::Identity(d, d) + (0.35 / std::sqrt(static_cast<double>(d))) * rng.gaussian_matrix(d);
  const Matrix psi0_inv = in.psi0.inverse();
  const Matrix conj_inv = in.psi0.conjugate().inverse();
  in.h = in.psi0 * in.j0 * psi0_inv;
  const Matrix pt = in.psi0 * in.k0 * conj_inv;
  in.p = in.psi0 * p0.cast<cplx>().asDiagonal() * psi0_inv;
  in.t = in.p * pt;
  return in;
}

inline int random_dim(Rng& rng, int lo, int hi) { return rng.integer(lo, hi); }

}  // namespace ptsym::testing

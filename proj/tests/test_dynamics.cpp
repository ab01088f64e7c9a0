#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ptsym/bender.hpp"
#include "ptsym/dynamics.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace ptsym;
using ptsym::testing::Mix;
using ptsym::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

const TrackedInvariant& find(const InvariantReport& rep, const std::string& name) {
  for (const auto& inv : rep.invariants) {
    if (inv.name == name) return inv;
  }
  throw std::runtime_error("no invariant " + name);
}

}  // namespace

TEST(TimeGrid, StandardGrid) {
  const auto g = TimeGrid::standard();
  EXPECT_EQ(g.size(), 201);
  EXPECT_DOUBLE_EQ(g.at(0), 0.0);
  EXPECT_DOUBLE_EQ(g.at(200), 10.0);
  EXPECT_DOUBLE_EQ(g.at(100), 5.0);
}

TEST(TimeGrid, SinglePointAndValidation) {
  const TimeGrid one(2.5, 7.0, 1);
  EXPECT_EQ(one.points(), std::vector<double>{2.5});
  EXPECT_THROW(TimeGrid(0.0, 1.0, 0), Error);
  EXPECT_THROW(TimeGrid(1.0, 0.0, 5), Error);
}

TEST(Propagator, ZeroTimeAndHermitianCase) {
  Rng rng(51);
  const Matrix h = rng.hermitian(4);
  EXPECT_LT((propagator(h, 0.0) - Matrix::Identity(4, 4)).norm(), 1e-15);
  const Matrix u = propagator(h, 3.7);
  EXPECT_LT(operator_norm(u.adjoint() * u - Matrix::Identity(4, 4)), 1e-10);
}

TEST(Propagator, JordanBlockClosedForm) {
  const cplx a(0.4, 0.0);
  Matrix j = Matrix::Zero(2, 2);
  j(0, 0) = j(1, 1) = a;
  j(0, 1) = 1.0;
  const double t = 2.5;
  Matrix expected(2, 2);
  expected << 1.0, cplx(0.0, -t), 0.0, 1.0;
  expected *= std::exp(cplx(0.0, -t) * a);
  EXPECT_LT((propagator(j, t) - expected).norm(), 1e-13);
}

TEST(EvolveDensity, BasicProperties) {
  Rng rng(52);
  const Matrix h = rng.hermitian(3);
  const Matrix rho = rng.density(3);
  EXPECT_LT((evolve_density(rho, h, 0.0) - rho).norm(), 1e-15);
  EXPECT_NEAR(evolve_density(rho, h, 4.0).trace().real(), 1.0, 1e-10);
}

TEST(EvolveDensity, MatchesTaylorOracleAtShortTimes) {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const auto in = ptsym::testing::random_instance(rng, rng.integer(2, 5));
    const Matrix rho = rng.density(in.dim());
    const double t = rng.uniform(0.0, 1.0);
    const Matrix oracle = ptsym::testing::taylor_evolution(rho, in.h, t);
    EXPECT_LT(operator_norm(evolve_density(rho, in.h, t) - oracle), 1e-10 * std::max(1.0, operator_norm(oracle)));
  }
}

TEST(EvolveDensity, GroupProperty) {
  Rng rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const auto in = ptsym::testing::random_instance(rng, rng.integer(2, 5));
    const Matrix rho = rng.density(in.dim());
    const double s = rng.uniform(0.0, 3.0), t = rng.uniform(0.0, 3.0);
    // the intermediate state is not normalized, so compose the propagators directly
    const Matrix u = propagator(in.h, t) * propagator(in.h, s);
    const Matrix two_step = u * rho * u.adjoint();
    const Matrix one_step = evolve_density(rho, in.h, s + t);
    EXPECT_LT(operator_norm(two_step - one_step), 1e-9 * std::max(1.0, operator_norm(one_step)));
  }
}

TEST(EvolveDensity, ComplexPairGrowthRate) {
  const auto model = bender_hamiltonian({1.0, 0.5, kPi / 2});
  const auto d = pt_canonical_form(model.h, model.pair);
  const Vector psi1 = d.psi.col(0);
  const Matrix rho = psi1 * psi1.adjoint();
  const double b = d.j(0, 0).imag();
  for (double t : {0.5, 1.0, 2.0}) {
    const Matrix r = basis_coefficients(evolve_density(rho, model.h, t), d).r;
    EXPECT_NEAR(r(0, 0).real(), std::exp(2.0 * b * t), 1e-10 * std::exp(2.0 * b * t));
  }
}

TEST(RequireDensityMatrix, RejectsInvalidStates) {
  Matrix bad = Matrix::Identity(2, 2);
  EXPECT_THROW(require_density_matrix(bad), Error);  // trace 2
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(require_density_matrix(neg), Error);
  Matrix nh = 0.5 * Matrix::Identity(2, 2);
  nh(0, 1) = 0.1;
  EXPECT_THROW(require_density_matrix(nh), Error);
}

TEST(NormalizeDensity, DegenerateTraceThrows) {
  try {
    normalize_density(Matrix::Zero(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegeneratePostSelection);
  }
}

TEST(InvariantReport, UnbrokenBenderConservesDiagonal) {
  const auto model = bender_hamiltonian({1.0, 1.0, kPi / 6});
  Rng rng(55);
  const Matrix rho = rng.density(2, 1);
  const auto rep = invariant_report(model.h, model.pair, rho, TimeGrid::standard());
  EXPECT_TRUE(rep.case_tag.unbroken());
  EXPECT_LE(find(rep, "R11").drift, 1e-8);
  EXPECT_LE(find(rep, "R22").drift, 1e-8);
  EXPECT_LE(rep.eta_trace_drift, 1e-8);
  EXPECT_FALSE(rep.overflow_risk);
  const auto& r0 = rep.coefficient_series.front().r;
  EXPECT_LT(std::abs(rep.eta_trace_series.front() - (r0(0, 0) + r0(1, 1))), 1e-12);
}

TEST(InvariantReport, BrokenBenderConservesOffDiagonal) {
  const auto model = bender_hamiltonian({1.0, 0.5, kPi / 2});
  Rng rng(56);
  const Matrix rho = rng.density(2);
  const auto rep = invariant_report(model.h, model.pair, rho, TimeGrid::standard());
  EXPECT_FALSE(rep.case_tag.unbroken());
  EXPECT_LE(find(rep, "R12").drift, 1e-8);
  EXPECT_LE(find(rep, "R21").drift, 1e-8);
  EXPECT_LE(rep.eta_trace_drift, 1e-8);
}

TEST(InvariantReport, ExceptionalPointLinearDrift) {
  // With J = [[0,1],[0,0]], e^{-iJt} = I - i t N, so
  // R12(t) = R12 - i t R22 and R21(t) = R21 + i t R22 while R22 stays fixed.
  const auto model = bender_hamiltonian({1.0, 1.0, kPi / 2});
  const auto d = pt_canonical_form(model.h, model.pair);
  const Vector psi2 = d.psi.col(1) / d.psi.col(1).norm();
  const Matrix rho = psi2 * psi2.adjoint();
  const auto rep = invariant_report(model.h, model.pair, rho, TimeGrid::standard());
  EXPECT_LE(find(rep, "R12+R21").drift, 1e-8);
  const Matrix& r0 = rep.coefficient_series.front().r;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double t = rep.times[i];
    const Matrix& r = rep.coefficient_series[i].r;
    EXPECT_LT(std::abs(r(0, 1) - (r0(0, 1) - kI * t * r0(1, 1))), 1e-8 * std::max(1.0, t));
    EXPECT_LT(std::abs(r(1, 0) - (r0(1, 0) + kI * t * r0(1, 1))), 1e-8 * std::max(1.0, t));
    EXPECT_LT(std::abs(r(1, 1) - r0(1, 1)), 1e-8);
  }
  // rho = |psi2><psi2| with unit-norm psi2 has R22 = 1/|psi2|^2 in the canonical basis, R12 = R21 = 0
  EXPECT_LT(std::abs(r0(0, 1)) + std::abs(r0(1, 0)), 1e-8);
}

TEST(InvariantReport, UniversalConservationOnRandomInstances) {
  Rng rng(57);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = ptsym::testing::random_instance(rng, rng.integer(2, 6), static_cast<Mix>(trial % 5));
    const Matrix rho = rng.density(in.dim());
    const auto rep = invariant_report(in.h, in.pair(), rho, TimeGrid::standard());
    double drift = 0.0;
    for (const auto& v : rep.eta_trace_series) drift = std::max(drift, std::abs(v - rep.eta_trace_series.front()));
    EXPECT_LE(drift, 1e-8) << trial;
    for (const auto& inv : rep.invariants) EXPECT_LE(inv.drift, 1e-8) << trial << " " << inv.name;
  }
}

TEST(InvariantReport, SinglePointGrid) {
  const auto model = bender_hamiltonian({1.0, 1.0, kPi / 6});
  Rng rng(58);
  const auto rep = invariant_report(model.h, model.pair, rng.density(2), TimeGrid(0.0, 10.0, 1));
  EXPECT_EQ(rep.times.size(), 1u);
  EXPECT_EQ(rep.eta_trace_drift, 0.0);
}

TEST(InvariantReport, FlagsOverflowRiskForLongBrokenRuns) {
  const auto model = bender_hamiltonian({1.0, 0.5, kPi / 2});
  Rng rng(59);
  const auto rep = invariant_report(model.h, model.pair, rng.density(2), TimeGrid(0.0, 100.0, 11));
  EXPECT_TRUE(rep.overflow_risk);
  EXPECT_LT(rep.usable_horizon, 100.0);
}

TEST(InvariantReport, CustomSignsStillConserve) {
  const auto model = bender_hamiltonian({1.0, 1.0, kPi / 6});
  Rng rng(60);
  const auto rep =
      invariant_report(model.h, model.pair, rng.density(2), TimeGrid::standard(), SignCharacteristic{{-1, 1}});
  EXPECT_FALSE(rep.metric.positive_definite);
  EXPECT_LE(rep.eta_trace_drift, 1e-8);
}

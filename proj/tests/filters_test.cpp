// Copyright 2026 The qprojfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qpf/projection_filter.hpp"
#include "qpf/quantum_filter.hpp"
#include "qpf/random.hpp"
#include "test_support.hpp"

namespace qpf {
namespace {

using testing::diag;
using testing::max_abs_diff;

constexpr double kStep = 5.0 / 2048;

SystemModel four_level_model(double offdiag = 0.3) {
  return SystemModel(ComplexMatrix::Zero(4, 4), testing::four_level_coupling(offdiag));
}

Chart four_level_chart() {
  return Chart(testing::diagonal_projectors(4), testing::four_level_rho0());
}

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

RealVector random_theta(int m, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-bound, bound);
  RealVector th(m);
  for (int i = 0; i < m; ++i) th[i] = d(rng);
  return th;
}

double max_diff(const RealVector& a, const RealVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Generic non-diagonal setting: rotated commuting chart, random H and L, so
// the diffusion coefficient has a nonzero Jacobian.
struct GenericSetup {
  Chart chart;
  SystemModel model;
};

GenericSetup generic_setup(std::mt19937_64& rng) {
  const ComplexMatrix u = testing::random_matrix(3, rng).householderQr().householderQ();
  Chart chart({u * diag({1, 0, 0}) * u.adjoint(), u * diag({0, 1, 0}) * u.adjoint(),
               u * diag({0, 0, 1}) * u.adjoint()},
              testing::random_density(3, rng));
  SystemModel model(testing::random_hermitian(3, rng), 0.5 * testing::random_matrix(3, rng));
  return {std::move(chart), std::move(model)};
}

RealMatrix finite_difference_jacobian(const Chart& chart, const SystemModel& model,
                                      const RealVector& th) {
  const double eps = 1e-5;
  const int m = static_cast<int>(th.size());
  RealMatrix out(m, m);
  for (int q = 0; q < m; ++q) {
    const RealVector e = RealVector::Unit(m, q);
    const RealVector gp = baseline_coefficients(chart, ThetaPoint(th + eps * e), model).g;
    const RealVector gm = baseline_coefficients(chart, ThetaPoint(th - eps * e), model).g;
    out.col(q) = (gp - gm) / (2 * eps);
  }
  return out;
}

TEST(ObservationIncrement, Examples) {
  const SystemModel fl = four_level_model();
  const DensityState rho0(testing::four_level_rho0());
  EXPECT_NEAR(observation_increment(rho0, fl, 0.37, 0.01), 0.37, 1e-15);
  const DensityState ground(testing::unit(4, 0, 0));
  EXPECT_NEAR(observation_increment(ground, four_level_model(0.0), 0.1, 0.01), 0.12, 1e-15);
  ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  skew(1, 0) = -1.0;
  const SystemModel sk(ComplexMatrix::Zero(2, 2), skew);
  EXPECT_NEAR(observation_increment(DensityState(diag({0.3, 0.7})), sk, -0.2, 0.01), -0.2, 1e-15);
}

// Term-by-term Euler-Maruyama oracle with innovation form.
ComplexMatrix euler_oracle(const ComplexMatrix& rho, const SystemModel& m, double dy, double dt) {
  const testing::Naive h = testing::from_eigen(m.hamiltonian());
  const testing::Naive l = testing::from_eigen(m.coupling());
  const ComplexMatrix drift =
      testing::to_eigen(testing::naive_adjoint_lindblad(h, l, testing::from_eigen(rho)));
  const ComplexMatrix& L = m.coupling();
  const double mean = (rho * (L + L.adjoint())).trace().real();
  ComplexMatrix out = rho + drift * dt + (L * rho + rho * L.adjoint() - mean * rho) * (dy - mean * dt);
  out = (out + out.adjoint()) / 2.0;
  return out / out.trace().real();
}

TEST(SmeStep, TrivialModelAndEigenstate) {
  std::mt19937_64 rng(31);
  const ComplexMatrix rho = testing::random_density(3, rng);
  const SystemModel zero(ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3));
  EXPECT_LT(max_abs_diff(sme_ito_step(DensityState(rho), zero, 0.3, 0.01).matrix(), rho), 1e-15);
  // Pure eigenstate of self-adjoint L: innovation and drift both vanish.
  const SystemModel sa = four_level_model(0.0);
  const ComplexMatrix pure = testing::unit(4, 2, 2);
  EXPECT_LT(max_abs_diff(sme_ito_step(DensityState(pure), sa, 0.7, 0.01).matrix(), pure), 1e-15);
}

TEST(SmeStep, EulerMaruyamaMatchesTermwiseOracle) {
  const SystemModel m = four_level_model();
  const ComplexMatrix rho0 = testing::four_level_rho0();
  EXPECT_LT(max_abs_diff(sme_euler_maruyama_step(rho0, m, 0.0, kStep), euler_oracle(rho0, m, 0.0, kStep)),
            1e-15);
  std::mt19937_64 rng(32);
  const SystemModel g(testing::random_hermitian(3, rng), testing::random_matrix(3, rng));
  const ComplexMatrix r = testing::random_density(3, rng);
  EXPECT_LT(max_abs_diff(sme_euler_maruyama_step(r, g, 0.05, kStep), euler_oracle(r, g, 0.05, kStep)),
            1e-14);
}

TEST(SmeStep, KrausFormAgreesWithEulerToHigherOrder) {
  // With dY^2 = dt the Kraus map equals Euler-Maruyama up to O(dt^1.5).
  std::mt19937_64 rng(33);
  const SystemModel g(testing::random_hermitian(3, rng), testing::random_matrix(3, rng));
  const ComplexMatrix r = testing::random_density(3, rng);
  double previous = 0.0;
  for (int level = 0; level < 4; ++level) {
    const double dt = 1e-2 / (1 << (2 * level));
    const double dy = std::sqrt(dt);
    const double err = max_abs_diff(sme_ito_step(DensityState(r), g, dy, dt).matrix(),
                                    euler_oracle(r, g, dy, dt));
    EXPECT_LT(err, 20.0 * std::pow(dt, 1.5));
    if (level > 0) {
      EXPECT_GT(previous / err, 4.0);  // dt / 4 gives >= 8x ideally
    }
    previous = err;
  }
}

TEST(SmeStep, PreservesDensityInvariantsAlongPaths) {
  const SystemModel m = four_level_model();
  for (std::uint32_t path = 0; path < 5; ++path) {
    const auto dw = NoiseStream(3, StreamKind::Validation, path).wiener_increments(2048, kStep);
    const SmeTrajectory traj = integrate_sme(m, DensityState(testing::four_level_rho0()), dw, kStep);
    ASSERT_EQ(traj.states.size(), dw.size() + 1);
    ASSERT_EQ(traj.observations.size(), dw.size());
    EXPECT_GE(traj.min_eigenvalue, -1e-8);
    EXPECT_LT(traj.max_trace_defect, 1e-12);
    for (const auto& s : traj.states) EXPECT_LT(hermiticity_defect(s), 1e-12);
  }
}

TEST(SmeStep, GivenRecordReproducesSelfGeneratedRun) {
  const SystemModel m = four_level_model();
  const auto dw = NoiseStream(4, StreamKind::Validation, 0).wiener_increments(256, kStep);
  const DensityState rho0(testing::four_level_rho0());
  const SmeTrajectory a = integrate_sme(m, rho0, dw, kStep);
  const SmeTrajectory b = integrate_sme_given_record(m, rho0, a.observations, kStep);
  EXPECT_EQ(a.states.back(), b.states.back());
}

TEST(LinearStep, HeunOracleWithoutCoupling) {
  std::mt19937_64 rng(34);
  const ComplexMatrix h = testing::random_hermitian(3, rng);
  const SystemModel m(h, ComplexMatrix::Zero(3, 3));
  const ComplexMatrix r = testing::random_density(3, rng);
  const Complex i{0, 1};
  const double dt = 0.01;
  const ComplexMatrix k1 = -i * (h * r - r * h);
  const ComplexMatrix p = r + dt * k1;
  const ComplexMatrix k2 = -i * (h * p - p * h);
  const ComplexMatrix expected = r + 0.5 * dt * (k1 + k2);
  EXPECT_LT(max_abs_diff(linear_stratonovich_step(UnnormalizedState(r), m, 0.4, dt).matrix(), expected),
            1e-15);
}

TEST(LinearStep, IdentityCouplingClosedForm) {
  // L = I: d rho = -2 rho dt + 2 rho o dY, so rho_t = rho_0 exp(2 Y_t - 2 t).
  const SystemModel m(ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2));
  const ComplexMatrix r0 = diag({0.25, 0.75});
  const double dt = 1e-3, dy = 0.02;
  const double a = 2 * dy - 2 * dt;
  const ComplexMatrix one = linear_stratonovich_step(UnnormalizedState(r0), m, dy, dt).matrix();
  EXPECT_LT(max_abs_diff(one, r0 * (1 + a + a * a / 2)), 1e-15);
  EXPECT_LT(max_abs_diff(one, r0 * std::exp(a)), std::pow(std::abs(a), 3));
  double previous = 0.0;
  for (int level = 0; level < 3; ++level) {
    const std::size_t n = 256u << level;
    const auto dw = NoiseStream(8, StreamKind::Validation, 0).wiener_increments(256, 1.0 / 256);
    std::vector<double> fine;
    for (double w : dw)
      for (std::size_t s = 0; s < (n / 256); ++s) fine.push_back(w / static_cast<double>(n / 256));
    const auto traj = integrate_linear_filter(m, r0, fine, 1.0 / n);
    double y = 0.0;
    for (double w : dw) y += w;
    const double err = max_abs_diff(traj.back(), r0 * std::exp(2 * y - 2));
    if (level > 0) {
      EXPECT_LT(err, previous);
    }
    previous = err;
  }
}

TEST(Coefficients, FourLevelOriginOracles) {
  const Chart chart = four_level_chart();
  const SystemModel m = four_level_model();
  const ThetaPoint origin = ThetaPoint::origin(4);
  const RealVector g = vec({2, -2, 2, -2});
  const CoefficientSet na = new_coefficients_abstract(chart, origin, m);
  const CoefficientSet nc = new_coefficients_coordinates(chart, origin, m);
  const CoefficientSet it = ito_coefficients(chart, origin, m);
  const CoefficientSet old = baseline_coefficients(chart, origin, m);
  for (const auto* c : {&na, &nc, &it, &old}) EXPECT_LT(max_diff(c->g, g), 1e-14);
  EXPECT_LT(max_diff(na.f, vec({-2.09, -2, -2, -1.97})), 1e-13);
  EXPECT_LT(max_diff(nc.f, na.f), 1e-13);
  EXPECT_LT(max_diff(it.f, vec({-2.09, -2, -2, -1.97})), 1e-13);
  EXPECT_LT(max_diff(it.gamma, vec({-0.26125, -0.25, -0.75, -0.73875})), 1e-14);
  EXPECT_LT(max_diff(old.f, vec({-2.09, -2, -2, -2})), 1e-13);
  const ChartPoint pt = evaluate_chart(chart, origin);
  const double pops[4] = {0.125, 0.125, 0.375, 0.375};
  for (int j = 0; j < 4; ++j) {
    RealMatrix expected = RealMatrix::Zero(4, 4);
    expected(j, j) = pops[j];
    EXPECT_LT((delta_matrix(chart, pt, j) - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Coefficients, BaselineGapTracksPopulationRatio) {
  const Chart chart = four_level_chart();
  const SystemModel m = four_level_model();
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const ThetaPoint th(random_theta(4, 2.0, rng));
    const ComplexMatrix rho = chart_state(chart, th).matrix();
    const RealVector gap =
        new_coefficients_abstract(chart, th, m).f - baseline_coefficients(chart, th, m).f;
    const RealVector expected = vec({0, 0, 0, 0.09 * rho(0, 0).real() / rho(3, 3).real()});
    EXPECT_LT(max_diff(gap, expected), 1e-12 * (1.0 + expected.norm()));
  }
}

TEST(Coefficients, ZeroModelVanishes) {
  const Chart chart = four_level_chart();
  const SystemModel zero(ComplexMatrix::Zero(4, 4), ComplexMatrix::Zero(4, 4));
  std::mt19937_64 rng(36);
  const ThetaPoint th(random_theta(4, 2.0, rng));
  for (const CoefficientSet& c :
       {new_coefficients_abstract(chart, th, zero), new_coefficients_coordinates(chart, th, zero),
        ito_coefficients(chart, th, zero), baseline_coefficients(chart, th, zero)}) {
    EXPECT_LT(c.f.norm(), 1e-15);
    EXPECT_LT(c.g.norm(), 1e-15);
  }
}

TEST(Coefficients, DiffusionAgreesAcrossVariantsAndRoutes) {
  std::mt19937_64 rng(37);
  const Chart chart = four_level_chart();
  const SystemModel m = four_level_model();
  for (int trial = 0; trial < 100; ++trial) {
    const ThetaPoint th(random_theta(4, 2.0, rng));
    const RealVector g = new_coefficients_abstract(chart, th, m).g;
    EXPECT_LT(max_diff(new_coefficients_coordinates(chart, th, m).g, g), 1e-9 * g.norm());
    EXPECT_LT(max_diff(ito_coefficients(chart, th, m).g, g), 1e-12);
    EXPECT_LT(max_diff(baseline_coefficients(chart, th, m).g, g), 1e-12);
  }
}

TEST(Coefficients, DiffusionJacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 10; ++trial) {
    const GenericSetup s = generic_setup(rng);
    const RealVector th = random_theta(3, 1.0, rng);
    const ChartPoint pt = evaluate_chart(s.chart, ThetaPoint(th));
    const RealVector g = diffusion_coefficient(s.chart, pt, s.model);
    const RealMatrix jac = diffusion_jacobian(s.chart, pt, s.model, g);
    const RealMatrix fd = finite_difference_jacobian(s.chart, s.model, th);
    EXPECT_LT((jac - fd).norm(), 1e-6 * (1.0 + jac.norm()));
  }
}

TEST(Coefficients, ItoConversionWithHamiltonian) {
  // fbar = f + (J g)/2 with J(p, q) = d g_p / d theta_q.
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 20; ++trial) {
    const GenericSetup s = generic_setup(rng);
    const RealVector th = random_theta(3, 1.0, rng);
    const ThetaPoint pt(th);
    const CoefficientSet f = new_coefficients_abstract(s.chart, pt, s.model);
    const CoefficientSet fbar = ito_coefficients(s.chart, pt, s.model);
    const RealMatrix jac = finite_difference_jacobian(s.chart, s.model, th);
    const RealVector expected = f.f + 0.5 * jac * f.g;
    EXPECT_LT(max_diff(fbar.f, expected), 1e-6 * (1.0 + expected.norm()));
  }
}

TEST(Coefficients, ItoDriftMatchesTraceOracle) {
  std::mt19937_64 rng(40);
  const GenericSetup s = generic_setup(rng);
  const ThetaPoint th(random_theta(3, 1.0, rng));
  const ComplexMatrix rho = chart_state(s.chart, th).matrix();
  const RealVector g = diffusion_coefficient(s.chart, evaluate_chart(s.chart, th), s.model);
  RealVector gamma(3);
  RealMatrix r(3, 3);
  for (int j = 0; j < 3; ++j) {
    const ComplexMatrix& aj = s.chart.generator(j);
    const ComplexMatrix lj = testing::to_eigen(testing::naive_lindblad(
        testing::from_eigen(s.model.hamiltonian()), testing::from_eigen(s.model.coupling()),
        testing::from_eigen(aj)));
    double quad = 0.0;
    for (int p = 0; p < 3; ++p) {
      r(p, j) = (rho * s.chart.generator(p) * aj).trace().real();
      for (int q = 0; q < 3; ++q)
        quad += g[p] * g[q] * (rho * s.chart.generator(p) * s.chart.generator(q) * aj).trace().real();
    }
    gamma[j] = (rho * lj).trace().real() - 0.5 * quad;
  }
  const CoefficientSet it = ito_coefficients(s.chart, th, s.model);
  EXPECT_LT(max_diff(it.gamma, gamma), 1e-12 * (1.0 + gamma.norm()));
  EXPECT_LT(max_diff(it.f, r.ldlt().solve(gamma)), 1e-9 * (1.0 + it.f.norm()));
}

TEST(Coefficients, AbstractDriftSatisfiesNormalEquations) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const GenericSetup s = generic_setup(rng);
    const DriftDiscrepancy d = drift_discrepancy(s.chart, ThetaPoint(random_theta(3, 1.0, rng)), s.model);
    EXPECT_LT(d.normal_equation_residual, 1e-9);
  }
}

TEST(Coefficients, CoordinateRouteGapIsTheJacobianTerm) {
  // f_coordinate - f_abstract = R^{-1} (J g) + (J g) / 2.
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const GenericSetup s = generic_setup(rng);
    const RealVector th = random_theta(3, 1.0, rng);
    const ChartPoint pt = evaluate_chart(s.chart, ThetaPoint(th));
    const RealVector fa = new_coefficients_abstract(s.chart, pt, s.model).f;
    const RealVector fc = new_coefficients_coordinates(s.chart, pt, s.model).f;
    const RealVector g = diffusion_coefficient(s.chart, pt, s.model);
    const RealVector jg = diffusion_jacobian(s.chart, pt, s.model, g) * g;
    const RealVector expected = pt.fisher.solve(jg) + 0.5 * jg;
    EXPECT_LT(max_diff(fc - fa, expected), 1e-9 * (1.0 + expected.norm()));
  }
}

TEST(Coefficients, DiagonalCouplingReducesToBaseline) {
  const Chart chart = four_level_chart();
  std::mt19937_64 rng(43);
  const SystemModel m(ComplexMatrix::Zero(4, 4), diag({0.5, -1.5, 2.0, 0.25}));
  for (int trial = 0; trial < 20; ++trial) {
    const ThetaPoint th(random_theta(4, 2.0, rng));
    ASSERT_LE(first_order_residual(chart, evaluate_chart(chart, th), m), 1e-12);
    EXPECT_LT(max_diff(new_coefficients_abstract(chart, th, m).f, baseline_coefficients(chart, th, m).f),
              1e-9);
  }
}

TEST(SpectralDecomposition, GroupsAndReconstructs) {
  const SpectralData sd = spectral_decomposition(diag({1, -1, 1, -1}));
  ASSERT_EQ(sd.count(), 2);
  EXPECT_EQ(sd.eigenvalues, (std::vector<double>{1.0, -1.0}));
  EXPECT_LT(max_abs_diff(sd.projectors[0], diag({1, 0, 1, 0})), 1e-12);
  EXPECT_LT(max_abs_diff(sd.projectors[1], diag({0, 1, 0, 1})), 1e-12);

  std::mt19937_64 rng(44);
  const ComplexMatrix u = testing::random_matrix(4, rng).householderQr().householderQ();
  const ComplexMatrix l = u * diag({0.0, 2.0, 2.0, -0.5}) * u.adjoint();
  const SpectralData s = spectral_decomposition(l);
  ASSERT_EQ(s.count(), 2);  // zero eigenvalue discarded
  ComplexMatrix rebuilt = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < s.count(); ++i) {
    const ComplexMatrix& p = s.projectors[static_cast<std::size_t>(i)];
    rebuilt += s.eigenvalues[static_cast<std::size_t>(i)] * p;
    EXPECT_LT(max_abs_diff(p * p, p), 1e-10);
    for (int j = 0; j < i; ++j) EXPECT_LT((p * s.projectors[static_cast<std::size_t>(j)]).norm(), 1e-10);
  }
  EXPECT_LT(max_abs_diff(rebuilt, l), 1e-10);
  try {
    spectral_decomposition(testing::four_level_coupling());
    FAIL() << "expected NotSelfAdjoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSelfAdjoint);
  }
}

TEST(SpectralClosedForm, SelfAdjointFourLevel) {
  const SystemModel m = four_level_model(0.0);
  const SpectralData sd = spectral_decomposition(m.coupling());
  const Chart chart = spectral_chart(sd, testing::four_level_rho0());
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const ThetaPoint th(random_theta(2, 2.0, rng));
    const CoefficientSet c = corollary42_coefficients(sd, chart, th, m);
    EXPECT_LT(max_diff(c.g, vec({2, -2})), 1e-14);
    EXPECT_LT(max_diff(c.f, vec({-2, -2})), 1e-12);
    EXPECT_LT(max_diff(c.xi, vec({1, 1})), 1e-15);
  }
}

TEST(SpectralClosedForm, MatchesAbstractRouteWithHamiltonian) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix u = testing::random_matrix(4, rng).householderQr().householderQ();
    const SystemModel m(testing::random_hermitian(4, rng), u * diag({1.5, -0.5, -0.5, 0.75}) * u.adjoint());
    const SpectralData sd = spectral_decomposition(m.coupling());
    ASSERT_EQ(sd.count(), 3);
    const Chart chart = spectral_chart(sd, testing::random_density(4, rng));
    const ThetaPoint th(random_theta(3, 1.5, rng));
    const ChartPoint pt = evaluate_chart(chart, th);
    const CoefficientSet c = corollary42_coefficients(sd, chart, pt, m);
    const CoefficientSet a = new_coefficients_abstract(chart, pt, m);
    const CoefficientSet b = baseline_coefficients(chart, pt, m);
    EXPECT_LT(max_diff(c.g, 2.0 * vec({sd.eigenvalues[0], sd.eigenvalues[1], sd.eigenvalues[2]})),
              1e-10);
    EXPECT_LT(max_diff(c.f, a.f), 1e-10 * (1.0 + a.f.norm()));
    EXPECT_LT(max_diff(b.f, a.f), 1e-10 * (1.0 + a.f.norm()));
    EXPECT_LE(first_order_residual(chart, pt, m), 1e-10);
  }
}

TEST(ProjectionFilter, ZeroModelStaysAtOrigin) {
  const Chart chart = four_level_chart();
  const SystemModel zero(ComplexMatrix::Zero(4, 4), ComplexMatrix::Zero(4, 4));
  const auto dy = NoiseStream(1, StreamKind::Validation, 0).wiener_increments(64, kStep);
  for (Variant v : {Variant::NewStratonovich, Variant::NewIto, Variant::Baseline}) {
    const FilterTrajectory t = integrate_projection_filter(chart, zero, v, dy, kStep);
    ASSERT_EQ(t.theta.size(), dy.size() + 1);
    ASSERT_EQ(t.times.size(), t.theta.size());
    for (const auto& th : t.theta) EXPECT_EQ(th.norm(), 0.0);
  }
}

TEST(ProjectionFilter, SelfAdjointCaseNewEqualsBaseline) {
  const SystemModel m = four_level_model(0.0);
  const SpectralData sd = spectral_decomposition(m.coupling());
  const Chart chart = spectral_chart(sd, testing::four_level_rho0());
  const auto dw = NoiseStream(2, StreamKind::Validation, 0).wiener_increments(2048, kStep);
  const SmeTrajectory truth = integrate_sme(m, DensityState(chart.base_state()), dw, kStep);
  const auto a = integrate_projection_filter(chart, m, Variant::NewStratonovich, truth.observations, kStep);
  const auto b = integrate_projection_filter(chart, m, Variant::Baseline, truth.observations, kStep);
  const auto c = integrate_projection_filter(chart, m, Variant::Corollary42, truth.observations, kStep);
  for (std::size_t j = 0; j < a.theta.size(); ++j) {
    EXPECT_LT(max_diff(a.theta[j], b.theta[j]), 1e-12);
    EXPECT_LT(max_diff(a.theta[j], c.theta[j]), 1e-12);
  }
}

TEST(ProjectionFilter, OverflowReportsFailureTime) {
  const Chart chart = four_level_chart();
  const std::vector<double> dy(20, 10.0);
  try {
    integrate_projection_filter(chart, four_level_model(), Variant::Baseline, dy, kStep);
    FAIL() << "expected OverflowGuard";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverflowGuard);
    EXPECT_NE(std::string(e.what()).find("t="), std::string::npos) << e.what();
  }
}

TEST(ProjectionFilter, StateDimensionIsFourAgainstFifteen) {
  const Chart chart = four_level_chart();
  EXPECT_EQ(chart.dim_m(), 4);
  EXPECT_EQ(chart.dim_n() * chart.dim_n() - 1, 15);
  const auto dy = NoiseStream(1, StreamKind::Validation, 1).wiener_increments(8, kStep);
  const auto t = integrate_projection_filter(chart, four_level_model(), Variant::NewStratonovich, dy, kStep);
  for (const auto& th : t.theta) EXPECT_EQ(th.size(), 4);
}

TEST(Variants, NamesRoundTrip) {
  for (Variant v : {Variant::NewStratonovich, Variant::NewIto, Variant::Baseline, Variant::Corollary42}) {
    EXPECT_EQ(parse_variant(short_name(v)), v);
  }
  EXPECT_FALSE(parse_variant("bogus").has_value());
}

}  // namespace
}  // namespace qpf

#include <gtest/gtest.h>

#include <cmath>

#include "qssmm/errors.hpp"
#include "qssmm/experiments.hpp"

using namespace qssmm;

namespace {

SweepSpec small_sweep() {
  SweepSpec s;
  s.cells = 20;
  s.epsilons = {1e-1, 1e-2, 1e-3};
  return s;
}

}  // namespace

TEST(FitOrder, SyntheticSlopes) {
  const std::vector<double> eps{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> lin, quad;
  for (double e : eps) {
    lin.push_back(3.0 * e);
    quad.push_back(e * e);
  }
  EXPECT_NEAR(*fit_convergence_order(eps, lin), 1.0, 1e-12);
  EXPECT_NEAR(*fit_convergence_order(eps, quad), 2.0, 1e-12);
}

TEST(FitOrder, NeedsThreeUsablePoints) {
  const std::vector<double> eps{1.0, 1e-1, 1e-2};
  EXPECT_FALSE(fit_convergence_order(eps, std::vector<double>{1.0, 0.1, 1e-14}));
  EXPECT_FALSE(fit_convergence_order(std::vector<double>{1.0}, std::vector<double>{1.0}));
  EXPECT_TRUE(fit_convergence_order(eps, std::vector<double>{1.0, 0.1, 0.01}));
}

TEST(FitOrder, ExcludesNoiseFloor) {
  const std::vector<double> eps{1.0, 1e-1, 1e-2, 1e-3};
  const std::vector<double> err{2.0, 0.2, 0.02, 1e-15};
  EXPECT_NEAR(*fit_convergence_order(eps, err), 1.0, 1e-12);
}

TEST(SweepSpec, RejectsInconsistentPairs) {
  SweepSpec s;
  s.reduced_kind = ModelKind::ReducedRevBigDelta;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.reduced_kind = ModelKind::ReducedIrrevSmallDelta;  // d_c != d_e
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.epsilons = {1.0, -1e-3};
  EXPECT_THROW(s.validate(), ConfigError);
}

// Zero diffusion, constant on-manifold data and a tiny epsilon: the full and
// reduced models describe the same dynamics up to O(eps).
TEST(RunComparison, CoincidingModels) {
  SweepSpec s;
  s.cells = 4;
  s.reduced_kind = ModelKind::ReducedIrrevSmallDelta;
  s.diffusion = {0.0, 0.0, 0.0, 0.0};
  s.initial.s_low = s.initial.s_high = 1.0;
  s.initial.c_amplitude = 0.0;
  s.initial.c_offset = 1.0 / 3.0;
  s.initial.y_amplitude = 0.0;
  s.initial.bump_amplitude = 0.0;
  s.initial.y_offset = 1.0;
  const auto rec = run_comparison(s, 1e-12);
  ASSERT_TRUE(rec.ok) << rec.diagnostic;
  EXPECT_LE(rec.err_s, 1e-10);
  EXPECT_LE(rec.err_cstar, 1e-10);
  EXPECT_LE(rec.err_ystar, 1e-10);
}

TEST(RunComparison, VisibleDiscrepancyShrinks) {
  const SweepSpec s;
  const auto reduced = run_reduced(s);
  const auto big = run_comparison(s, 1.0, &reduced);
  const auto small = run_comparison(s, 1e-4, &reduced);
  ASSERT_TRUE(big.ok && small.ok);
  EXPECT_GT(big.err_ystar, 10.0 * small.err_ystar);
  EXPECT_GT(big.err_s, 10.0 * small.err_s);
}

TEST(RunComparison, FailureIsRecorded) {
  SweepSpec s = small_sweep();
  s.integrator.max_steps = 3;
  const auto rec = run_comparison(s, 1e-2);
  EXPECT_FALSE(rec.ok);
  EXPECT_FALSE(rec.diagnostic.empty());
}

TEST(Monitors, PureDiffusionConservesSums) {
  const Grid1D g(1.0, 30);
  ModelSpec spec{ModelKind::FullScaledRev, {0, 0, 0, 0}, {1.0, 1.0, 2.0, 0.5}, 1e-2};
  MethodOfLinesSystem sys(spec, g);
  InitialConditionSpec ic;
  ic.p_value = 0.3;
  IntegratorConfig cfg;
  cfg.store_all_steps = true;
  const auto traj = integrate(sys, sys.pack(build_initial_profiles(ic, g, true)), 0.005, cfg);
  const auto rep = monitor_invariants(traj, sys);
  EXPECT_LE(rep.y_sum_drift, 1e-12);
  ASSERT_TRUE(rep.mass_drift);
  EXPECT_LE(*rep.mass_drift, 1e-12);
  EXPECT_FALSE(rep.manifold_distance);
  EXPECT_GE(rep.min_component, -1e-12);
}

TEST(Sweep, ThreadedMatchesSerial) {
  const auto a = run_sweep(small_sweep(), 1);
  const auto b = run_sweep(small_sweep(), 3);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].epsilon, b.records[i].epsilon);
    EXPECT_EQ(a.records[i].err_s, b.records[i].err_s);
    EXPECT_EQ(a.records[i].err_ystar, b.records[i].err_ystar);
  }
  EXPECT_TRUE(a.slope_cstar.has_value());
}

TEST(Sweep, ReversibleReportsProductError) {
  SweepSpec s = small_sweep();
  s.full_kind = ModelKind::FullScaledRev;
  s.reduced_kind = ModelKind::ReducedRevBigDelta;
  s.rates.k_m2 = 1.0;
  s.diffusion.d_p = 1.0;
  s.initial.p_value = 0.2;
  const auto rep = run_sweep(s, 1);
  for (const auto& r : rep.records) {
    ASSERT_TRUE(r.ok) << r.diagnostic;
    ASSERT_TRUE(r.err_p);
    ASSERT_TRUE(r.monitors.mass_drift);
    EXPECT_LE(*r.monitors.mass_drift, 1e-8);
  }
  EXPECT_TRUE(rep.slope_p.has_value());
}

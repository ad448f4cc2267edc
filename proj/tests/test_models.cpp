#include <gtest/gtest.h>

#include <random>

#include "qssmm/errors.hpp"
#include "qssmm/models.hpp"

using namespace qssmm;

namespace {

const DiscreteLaplacian kLap1(Grid1D(1.0, 1));

ModelSpec spec(ModelKind kind, std::optional<double> eps = std::nullopt, double km2 = 0.0) {
  ModelSpec s{kind, {}, {}, eps};
  s.rates.k_m2 = km2;
  return s;
}

FullState full1(double s, double c, double y) { return {{s}, {c}, {y}, {}}; }
FullState full1(double s, double c, double y, double p) { return {{s}, {c}, {y}, {p}}; }

}  // namespace

TEST(FullScaledIrrev, OnManifoldPoint) {
  for (double eps : {1.0, 1e-2, 1e-4}) {
    const auto d = rhs_full_scaled_irrev(full1(1, 1.0 / 3.0, 1), spec(ModelKind::FullScaledIrrev, eps), kLap1);
    EXPECT_NEAR(d.s[0], -1.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.c_star[0], 0.0, 1e-15 / eps);
    EXPECT_EQ(d.y_star[0], 0.0);
  }
}

TEST(FullScaledIrrev, DirectSubstitution) {
  const auto d = rhs_full_scaled_irrev(full1(1, 0, 1), spec(ModelKind::FullScaledIrrev, 0.1), kLap1);
  EXPECT_DOUBLE_EQ(d.s[0], -1.0);
  EXPECT_DOUBLE_EQ(d.c_star[0], 10.0);
  EXPECT_EQ(d.y_star[0], 0.0);
}

TEST(FullScaledIrrev, ConstantFieldsMatchSingleCell) {
  const DiscreteLaplacian lap2(Grid1D(1.0, 2));
  const FullState st{{0.8, 0.8}, {0.2, 0.2}, {0.9, 0.9}, {}};
  const auto m = spec(ModelKind::FullScaledIrrev, 0.05);
  const auto d2 = rhs_full_scaled_irrev(st, m, lap2);
  const auto d1 = rhs_full_scaled_irrev(full1(0.8, 0.2, 0.9), m, kLap1);
  for (int a = 0; a < 2; ++a) {
    EXPECT_EQ(d2.s[a], d1.s[0]);
    EXPECT_EQ(d2.c_star[a], d1.c_star[0]);
    EXPECT_EQ(d2.y_star[a], d1.y_star[0]);
  }
}

TEST(FullScaledIrrev, Errors) {
  EXPECT_THROW(rhs_full_scaled_irrev({{1, 1}, {0}, {1}, {}}, spec(ModelKind::FullScaledIrrev, 0.1),
                                     kLap1),
               DimensionError);
  EXPECT_THROW(spec(ModelKind::FullScaledIrrev, 0.0).validate(), ConfigError);
  EXPECT_THROW(spec(ModelKind::FullScaledIrrev, -1.0).validate(), ConfigError);
  EXPECT_THROW(spec(ModelKind::FullScaledIrrev).validate(), ConfigError);
  EXPECT_THROW(spec(ModelKind::ReducedIrrevBigDelta, 0.1).validate(), ConfigError);
  EXPECT_THROW(spec(ModelKind::ReducedIrrevBigDelta, std::nullopt, 1.0).validate(), ConfigError);
}

TEST(FullScaledRev, OnManifold) {
  const auto d = rhs_full_scaled_rev(full1(1, 0.5, 1, 1), spec(ModelKind::FullScaledRev, 1e-3, 1.0), kLap1);
  EXPECT_NEAR(d.c_star[0], 0.0, 1e-12);
}

TEST(FullScaledRev, Substitution) {
  const auto d = rhs_full_scaled_rev(full1(1, 0, 1, 0), spec(ModelKind::FullScaledRev, 1.0, 1.0), kLap1);
  EXPECT_DOUBLE_EQ(d.s[0], -1.0);
  EXPECT_DOUBLE_EQ(d.c_star[0], 1.0);
  EXPECT_EQ(d.y_star[0], 0.0);
  EXPECT_EQ(d.p[0], 0.0);
}

TEST(FullScaledRev, SpecializesToIrreversible) {
  const DiscreteLaplacian lap(Grid1D(1.0, 5));
  const FullState irr{{0.1, 0.5, 1.2, 1.5, 0.9}, {0.1, 0.2, 0.3, 0.1, 0.0},
                      {0.6, 0.7, 0.9, 1.1, 0.8}, {}};
  FullState rev = irr;
  rev.p = {0.3, 0.1, 0.0, 0.2, 0.4};
  ModelSpec mi = spec(ModelKind::FullScaledIrrev, 0.01);
  ModelSpec mr = spec(ModelKind::FullScaledRev, 0.01);
  mr.diffusion.d_p = 0.5;
  const auto di = rhs_full_scaled_irrev(irr, mi, lap);
  const auto dr = rhs_full_scaled_rev(rev, mr, lap);
  EXPECT_EQ(di.s, dr.s);
  EXPECT_EQ(di.c_star, dr.c_star);
  EXPECT_EQ(di.y_star, dr.y_star);
  // Decoupled p equation: k2 c* + diffusion.
  const Field lp = apply_laplacian(lap, rev.p);
  for (int a = 0; a < 5; ++a) EXPECT_NEAR(dr.p[a], irr.c_star[a] + 0.5 * lp[a], 1e-14);
}

TEST(SlowManifold, Values) {
  const RateConstants r;
  EXPECT_DOUBLE_EQ(slow_manifold_c({1}, {1}, {}, r)[0], 1.0 / 3.0);
  EXPECT_EQ(slow_manifold_c({0}, {0.7}, {}, r)[0], 0.0);
  RateConstants rr;
  rr.k_m2 = 1.0;
  EXPECT_DOUBLE_EQ(slow_manifold_c({1}, {1}, {1}, rr)[0], 0.5);
}

TEST(SlowManifold, ConfinedBetweenZeroAndY) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  RateConstants r{0.7, 1.3, 0.4, 2.0};
  for (int i = 0; i < 1000; ++i) {
    const double s = u(rng), y = u(rng), p = u(rng);
    const double c = slow_manifold_c({s}, {y}, {p}, r)[0];
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, y);
  }
}

TEST(ReducedIrrev, SingleCell) {
  const auto d = rhs_reduced_irrev({{1}, {1}, {}}, spec(ModelKind::ReducedIrrevBigDelta), kLap1);
  EXPECT_DOUBLE_EQ(d.s[0], -1.0 / 3.0);
  EXPECT_EQ(d.y_star[0], 0.0);
}

TEST(ReducedIrrev, ConstantFieldsOnlyReaction) {
  const DiscreteLaplacian lap(Grid1D(1.0, 4));
  const ReducedState st{Field(4, 0.6), Field(4, 1.4), {}};
  for (auto kind : {ModelKind::ReducedIrrevBigDelta, ModelKind::ReducedIrrevSmallDelta}) {
    const auto d = rhs_reduced_irrev(st, spec(kind), lap);
    for (int a = 0; a < 4; ++a) {
      EXPECT_EQ(d.y_star[a], 0.0);
      EXPECT_DOUBLE_EQ(d.s[a], -0.6 * 1.4 / 2.6);
    }
  }
}

// Hand-assembled closed form at N = 3 with rho = 1.
TEST(ReducedIrrev, DeltaCouplingByHand) {
  const DiscreteLaplacian lap(Grid1D(3.0, 3));
  const ReducedState st{{0.5, 1.0, 2.0}, {1.0, 2.0, 1.0}, {}};
  const auto d = rhs_reduced_irrev(st, spec(ModelKind::ReducedIrrevBigDelta), lap);
  const auto ds = rhs_reduced_irrev(st, spec(ModelKind::ReducedIrrevSmallDelta), lap);
  const double cm[3] = {0.5 * 1.0 / 2.5, 1.0 * 2.0 / 3.0, 2.0 * 1.0 / 4.0};
  const double dcm[3] = {cm[1] - cm[0], cm[0] - 2 * cm[1] + cm[2], cm[1] - cm[2]};
  const double dy[3] = {1.0, -2.0, 1.0};
  const double ds_lap[3] = {0.5, 0.5, -1.0};
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(d.s[a], ds_lap[a] - cm[a], 1e-15);  // k1 k2 s y / den = cm here
    EXPECT_NEAR(d.y_star[a], dy[a] + dcm[a], 1e-15);
    EXPECT_NEAR(ds.y_star[a], dy[a], 1e-15);
    EXPECT_EQ(ds.s[a], d.s[a]);
  }
}

TEST(ReducedRev, DetailedBalanceAndForward) {
  const auto m = spec(ModelKind::ReducedRevBigDelta, std::nullopt, 1.0);
  const auto d = rhs_reduced_rev({{1}, {1}, {1}}, m, kLap1);
  EXPECT_EQ(d.s[0], 0.0);
  EXPECT_EQ(d.p[0], 0.0);
  EXPECT_EQ(d.y_star[0], 0.0);
  const auto f = rhs_reduced_rev({{1}, {1}, {0}}, m, kLap1);
  EXPECT_DOUBLE_EQ(f.s[0], -1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.p[0], 1.0 / 3.0);
}

TEST(ReducedRev, DetailedBalanceLocus) {
  RateConstants r{2.0, 0.5, 1.5, 3.0};
  ModelSpec m{ModelKind::ReducedRevSmallDelta, r, {}, std::nullopt};
  // k1 k2 s = k_m1 k_m2 p  ->  p = 2 s
  const auto d = rhs_reduced_rev({{0.7}, {1.1}, {1.4}}, m, kLap1);
  EXPECT_EQ(d.s[0], 0.0);
}

TEST(ReducedRev, SpecializesToIrreversible) {
  const DiscreteLaplacian lap(Grid1D(1.0, 6));
  const ReducedState irr{{0.1, 0.4, 0.9, 1.5, 1.2, 0.3}, {0.5, 0.7, 1.0, 0.8, 0.6, 0.9}, {}};
  ReducedState rev = irr;
  rev.p = {0.2, 0.2, 0.5, 0.1, 0.0, 0.3};
  const auto di = rhs_reduced_irrev(irr, spec(ModelKind::ReducedIrrevBigDelta), lap);
  const auto dr = rhs_reduced_rev(rev, spec(ModelKind::ReducedRevBigDelta), lap);
  for (int a = 0; a < 6; ++a) {
    EXPECT_DOUBLE_EQ(dr.s[a], di.s[a]);
    EXPECT_DOUBLE_EQ(dr.y_star[a], di.y_star[a]);
  }
}

TEST(ReducedRev, NegativeTransientsAreClamped) {
  const auto m = spec(ModelKind::ReducedRevBigDelta, std::nullopt, 1.0);
  const auto d = rhs_reduced_rev({{-1e-9}, {1}, {-1e-9}}, m, kLap1);
  EXPECT_EQ(d.s[0], 0.0);
  EXPECT_TRUE(std::isfinite(d.p[0]));
}

TEST(SlowComplex, Examples) {
  const RateConstants r;
  const DiffusionConstants d;
  const DiscreteLaplacian lap2(Grid1D(1.0, 2));
  RateConstants rr;
  rr.k_m2 = 1.0;
  const auto a = rhs_slow_complex_formation({{1, 1}, {1, 1}, {1, 1}}, rr, d, lap2);
  EXPECT_EQ(a.s[0], 0.0);
  const auto b = rhs_slow_complex_formation({{2}, {1}, {0}}, r, d, kLap1);
  EXPECT_DOUBLE_EQ(b.s[0], -1.0);
  EXPECT_DOUBLE_EQ(b.p[0], 1.0);
  EXPECT_EQ(b.e[0], 0.0);
  const auto c = rhs_slow_complex_formation({{1, 3}, {0, 0}, {0, 0}}, r, d, lap2);
  EXPECT_DOUBLE_EQ(c.s[0], 8.0);  // pure diffusion: (3 - 1) / 0.25
  RateConstants bad{1.0, 0.0, 0.0, 0.0};
  EXPECT_THROW(rhs_slow_complex_formation({{1}, {1}, {1}}, bad, d, kLap1), ConfigError);
}

TEST(Homogeneous, Reductions) {
  const RateConstants r;
  EXPECT_DOUBLE_EQ(rhs_homogeneous_reduced_irrev(1.0, 1.0, r), -1.0 / 3.0);
  RateConstants rr{1.0, 1.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(rhs_homogeneous_reduced_rev(0.8, 0.8, 1.3, rr),
                   -1.0 * 0.8 * 1.3 / (0.8 + 2.0));
  EXPECT_EQ(rhs_homogeneous_reduced_rev(0.5, 1.0, 1.0, rr), 0.0);
  const auto f = rhs_homogeneous_full_irrev(1.0, 0.0, 1.0, 0.1, r);
  EXPECT_DOUBLE_EQ(f[0], -1.0);
  EXPECT_DOUBLE_EQ(f[1], 1.0);
}

TEST(ProjectInitialValues, Examples) {
  const RateConstants r;
  const auto id = project_initial_values(full1(1, 1.0 / 3.0, 1), r);
  EXPECT_EQ(id.reduced.s[0], 1.0);
  EXPECT_EQ(id.reduced.y_star[0], 1.0);
  EXPECT_DOUBLE_EQ(id.c_star[0], 1.0 / 3.0);
  const auto off = project_initial_values(full1(1, 0.9, 1), r);
  EXPECT_EQ(off.reduced.s[0], 1.0);
  EXPECT_EQ(off.reduced.y_star[0], 1.0);
  EXPECT_DOUBLE_EQ(off.c_star[0], 1.0 / 3.0);
  RateConstants rr;
  rr.k_m2 = 1.0;
  const auto rev = project_initial_values(full1(1, 0.0, 1, 1), rr);
  EXPECT_DOUBLE_EQ(rev.c_star[0], 0.5);
  EXPECT_EQ(rev.reduced.p[0], 1.0);
}

TEST(ModelKind, NamesRoundTrip) {
  for (int k = 0; k <= static_cast<int>(ModelKind::HomogeneousReducedRev); ++k) {
    const auto kind = static_cast<ModelKind>(k);
    EXPECT_EQ(parse_model_kind(to_string(kind)), kind);
  }
  EXPECT_FALSE(parse_model_kind("nope"));
}

TEST(RateConstants, Validation) {
  EXPECT_THROW((RateConstants{-1, 1, 1, 0}.validate()), ConfigError);
  EXPECT_NO_THROW((RateConstants{0, 0, 0, 0}.validate()));
  EXPECT_THROW((RateConstants{0, 1, 1, 0}.validate_for_manifold()), ConfigError);
  EXPECT_THROW((RateConstants{1, 0, 0, 0}.validate_for_manifold()), ConfigError);
  EXPECT_THROW((DiffusionConstants{1, -1, 1, 0}.validate()), ConfigError);
  EXPECT_EQ((DiffusionConstants{1, 1, 2, 0}.delta()), 1.0);
}

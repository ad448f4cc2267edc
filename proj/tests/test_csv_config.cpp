#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "qssmm/config.hpp"
#include "qssmm/csv.hpp"
#include "qssmm/errors.hpp"

using namespace qssmm;

TEST(Csv, SeventeenDigitRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CsvTable t;
  t.preamble = {"model=x"};
  t.header = {"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    t.rows.push_back({u(rng) * std::pow(10.0, i % 40 - 20), 0.1 * i, -0.0});
  }
  t.rows.push_back({5e-324, 1.7976931348623157e308, 1.0 / 3.0});
  t.trailer = {"slope=1"};
  const auto back = parse_csv(to_csv(t));
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.preamble, t.preamble);
  EXPECT_EQ(back.trailer, t.trailer);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_EQ(std::memcmp(&back.rows[i][j], &t.rows[i][j], sizeof(double)), 0);
}

TEST(Csv, FormatAndDialect) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(NAN), "nan");
  const CsvTable t{{}, {"x"}, {{1.0}}, {}};
  EXPECT_EQ(to_csv(t), "x\n1\n");
  EXPECT_THROW(parse_double("1.0x"), ConfigError);
  EXPECT_THROW(parse_csv("a,b\n1\n"), ConfigError);
  EXPECT_TRUE(std::isnan(parse_double("nan")));
}

TEST(Config, MinimalUsesReferenceDefaults) {
  const auto c = parse_config("model: full_scaled_irrev\n");
  EXPECT_EQ(c.model, ModelKind::FullScaledIrrev);
  EXPECT_EQ(c.length, 1.0);
  EXPECT_EQ(c.cells, 100u);
  EXPECT_EQ(c.final_time, 0.005);
  EXPECT_EQ(c.rates.k1, 1.0);
  EXPECT_EQ(c.rates.k_m1, 1.0);
  EXPECT_EQ(c.rates.k2, 1.0);
  EXPECT_EQ(c.diffusion.d_s, 1.0);
  EXPECT_EQ(c.diffusion.d_e, 1.0);
  EXPECT_EQ(c.diffusion.d_c, 2.0);
  EXPECT_EQ(c.integrator.abs_tol, 1e-14);
  EXPECT_EQ(c.integrator.rel_tol, 1e-10);
  EXPECT_EQ(c.reduced_partner(), ModelKind::ReducedIrrevBigDelta);
}

TEST(Config, CheckedInDefaultMatchesReferenceSetup) {
  const auto c = load_config(std::string(QSSMM_CONFIG_DIR) + "/reference.yaml");
  const auto d = parse_config("model: full_scaled_irrev\n");
  EXPECT_EQ(c.length, d.length);
  EXPECT_EQ(c.cells, d.cells);
  EXPECT_EQ(c.final_time, d.final_time);
  EXPECT_EQ(c.diffusion.d_c, 2.0);
  EXPECT_EQ(c.diffusion.delta(), 1.0);
  EXPECT_EQ(c.epsilons, (std::vector<double>{1.0, 1e-1, 1e-2, 1e-3, 1e-4}));
  EXPECT_EQ(c.reduced_partner(), ModelKind::ReducedIrrevBigDelta);
  const auto eq = load_config(std::string(QSSMM_CONFIG_DIR) + "/equal_diffusion.yaml");
  EXPECT_EQ(eq.diffusion.delta(), 0.0);
  EXPECT_EQ(eq.reduced_partner(), ModelKind::ReducedIrrevSmallDelta);
  EXPECT_NO_THROW(load_config(std::string(QSSMM_CONFIG_DIR) + "/reversible.yaml").sweep_spec());
}

TEST(Config, MissingModelNamesField) {
  try {
    parse_config("grid:\n  cells: 4\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "model");
    EXPECT_NE(std::string(e.what()).find("model"), std::string::npos);
  }
}

TEST(Config, UnknownKeyHasLine) {
  try {
    parse_config("model: full_scaled_irrev\nrates:\n  k1: 1\n  k3: 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "rates.k3");
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Config, InvalidValues) {
  EXPECT_THROW(parse_config("model: nonsense\n"), ConfigError);
  EXPECT_THROW(parse_config("model: full_scaled_irrev\nrates: {k1: -1}\n"), ConfigError);
  EXPECT_THROW(parse_config("model: full_scaled_irrev\ngrid: {cells: 0}\n"), ConfigError);
  EXPECT_THROW(parse_config("model: full_scaled_irrev\nepsilon: abc\n"), ConfigError);
  EXPECT_THROW(parse_config("model: full_scaled_irrev\nsnapshots: [1.0]\n"), ConfigError);
  EXPECT_THROW(parse_config("model: [unterminated\n"), ConfigError);
  try {
    parse_config("model: full_scaled_irrev\nintegrator:\n  rel_tol: 2.0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "integrator.rel_tol");
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Config, FullModelNeedsEpsilonForSimulation) {
  const auto c = parse_config("model: full_scaled_irrev\n");
  EXPECT_THROW(c.model_spec(), ConfigError);
  const auto d = parse_config("model: full_scaled_irrev\nepsilon: 0.01\n");
  EXPECT_EQ(d.model_spec().eps(), 0.01);
}

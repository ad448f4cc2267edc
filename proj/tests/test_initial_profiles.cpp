#include <gtest/gtest.h>

#include "qssmm/errors.hpp"
#include "qssmm/initial_profiles.hpp"

using namespace qssmm;

TEST(InitialProfiles, ConstantLimit) {
  InitialConditionSpec ic;
  ic.s_low = ic.s_high = 0.8;
  ic.c_amplitude = 0.0;
  ic.c_offset = 0.2;
  ic.y_amplitude = 0.0;
  ic.y_offset = 0.9;
  ic.bump_amplitude = 0.0;
  const auto st = build_initial_profiles(ic, Grid1D(1.0, 10), false);
  for (std::size_t a = 0; a < 10; ++a) {
    EXPECT_EQ(st.s[a], 0.8);
    EXPECT_EQ(st.c_star[a], 0.2);
    EXPECT_EQ(st.y_star[a], 0.9);
  }
  EXPECT_TRUE(st.p.empty());
}

TEST(InitialProfiles, StepSplitsCellsInHalf) {
  const auto st = build_initial_profiles({}, Grid1D(1.0, 100), false);
  for (std::size_t a = 0; a < 50; ++a) EXPECT_EQ(st.s[a], 0.5);
  for (std::size_t a = 50; a < 100; ++a) EXPECT_EQ(st.s[a], 1.5);
}

TEST(InitialProfiles, DefaultShape) {
  const Grid1D g(1.0, 100);
  const auto st = build_initial_profiles({}, g, true);
  ASSERT_EQ(st.p.size(), 100u);
  for (std::size_t a = 0; a < 100; ++a) {
    EXPECT_GE(st.c_star[a], 0.0);
    EXPECT_GE(st.y_star[a], st.c_star[a]);
    EXPECT_EQ(st.p[a], 0.0);
  }
  // Cosine peaks at both ends, bump near x = 0.7.
  EXPECT_GT(st.c_star[0], st.c_star[50]);
  const auto peak = std::max_element(st.y_star.begin() + 55, st.y_star.end()) - st.y_star.begin();
  EXPECT_NEAR(g.center(static_cast<std::size_t>(peak)), 0.7, 0.03);
}

TEST(InitialProfiles, RejectsEnzymeBelowComplex) {
  InitialConditionSpec ic;
  ic.c_amplitude = 2.0;
  ic.y_amplitude = 0.0;
  ic.y_offset = 0.1;
  EXPECT_THROW(build_initial_profiles(ic, Grid1D(1.0, 20), false), ConfigError);
}

TEST(InitialProfiles, ClipsNegativeComplex) {
  InitialConditionSpec ic;
  ic.c_offset = -0.2;
  const auto st = build_initial_profiles(ic, Grid1D(1.0, 40), false);
  for (double c : st.c_star) EXPECT_GE(c, 0.0);
  EXPECT_EQ(st.c_star[20], 0.0);
}

#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "qssmm/grid.hpp"
#include "qssmm/simd/kernels.hpp"

using namespace qssmm;
using namespace qssmm::simd;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

class KernelEquivalence : public ::testing::Test {
protected:
  void SetUp() override {
    if (!supported(Isa::Avx2)) GTEST_SKIP() << "AVX2 table not available";
  }
  const KernelTable& ref = scalar_kernels();
  const KernelTable& vec() { return kernels_for(Isa::Avx2); }
};

}  // namespace

TEST(Dispatch, ScalarAlwaysAvailable) {
  EXPECT_TRUE(supported(Isa::Scalar));
  EXPECT_EQ(kernels_for(Isa::Scalar).isa, Isa::Scalar);
  EXPECT_EQ(isa_name(Isa::Avx2), "avx2");
  const auto before = active().isa;
  set_active(Isa::Scalar);
  EXPECT_EQ(active().isa, Isa::Scalar);
  set_active(before);
}

TEST_F(KernelEquivalence, Laplacian) {
  std::mt19937_64 rng(1);
  // Lengths around the vector width and its tails.
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 100u, 1001u}) {
    const auto f = random_vec(n, rng, -2.0, 2.0);
    auto a = random_vec(n, rng, -1.0, 1.0);
    auto b = a;
    ref.laplacian_accumulate(f.data(), a.data(), n, 12.5);
    vec().laplacian_accumulate(f.data(), b.data(), n, 12.5);
    EXPECT_TRUE(bitwise_equal(a, b)) << "n=" << n;
  }
}

TEST_F(KernelEquivalence, FullReaction) {
  std::mt19937_64 rng(2);
  const ReactionRates r{1.3, 0.7, 2.1, 0.4};
  for (std::size_t n : {1u, 3u, 4u, 6u, 13u, 100u}) {
    const auto s = random_vec(n, rng, 0.0, 2.0);
    const auto c = random_vec(n, rng, 0.0, 1.0);
    const auto y = random_vec(n, rng, 0.0, 2.0);
    const auto p = random_vec(n, rng, 0.0, 1.0);
    for (bool rev : {false, true}) {
      std::vector<double> rs1(n), mu1(n), rp1(n), rs2(n), mu2(n), rp2(n);
      ref.full_reaction(r, s.data(), c.data(), y.data(), rev ? p.data() : nullptr, rs1.data(),
                        mu1.data(), rev ? rp1.data() : nullptr, n);
      vec().full_reaction(r, s.data(), c.data(), y.data(), rev ? p.data() : nullptr, rs2.data(),
                          mu2.data(), rev ? rp2.data() : nullptr, n);
      EXPECT_TRUE(bitwise_equal(rs1, rs2));
      EXPECT_TRUE(bitwise_equal(mu1, mu2));
      EXPECT_TRUE(bitwise_equal(rp1, rp2));
    }
  }
}

TEST_F(KernelEquivalence, ManifoldWithNegativeInputs) {
  std::mt19937_64 rng(3);
  const ReactionRates r{1.0, 1.0, 1.0, 0.5};
  for (std::size_t n : {1u, 4u, 5u, 17u, 100u}) {
    const auto s = random_vec(n, rng, -0.5, 2.0);
    const auto y = random_vec(n, rng, -0.5, 2.0);
    const auto p = random_vec(n, rng, -0.5, 1.0);
    for (bool rev : {false, true}) {
      std::vector<double> c1(n), q1(n), c2(n), q2(n);
      ref.manifold(r, s.data(), y.data(), rev ? p.data() : nullptr, c1.data(), q1.data(), n);
      vec().manifold(r, s.data(), y.data(), rev ? p.data() : nullptr, c2.data(), q2.data(), n);
      EXPECT_TRUE(bitwise_equal(c1, c2));
      EXPECT_TRUE(bitwise_equal(q1, q2));
    }
  }
}

TEST_F(KernelEquivalence, LaplacianThroughDispatch) {
  const Grid1D g(1.0, 37);
  const DiscreteLaplacian lap(g);
  std::mt19937_64 rng(4);
  const auto f = random_vec(37, rng, 0.0, 1.0);
  const auto before = active().isa;
  set_active(Isa::Scalar);
  const auto a = apply_laplacian(lap, f);
  set_active(Isa::Avx2);
  const auto b = apply_laplacian(lap, f);
  set_active(before);
  EXPECT_TRUE(bitwise_equal(a, b));
}

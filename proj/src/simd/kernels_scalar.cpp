#include "qssmm/simd/kernels.hpp"

namespace qssmm::simd {
namespace {

// (0 > x) ? 0 : x, matching _mm256_max_pd(0, x) for NaN and -0.
inline double clamp_nonnegative(double x) noexcept { return (0.0 > x) ? 0.0 : x; }

void laplacian_accumulate(const double* f, double* out, std::size_t n, double scale) {
  if (n < 2) return;
  out[0] += scale * (f[1] - f[0]);
  for (std::size_t a = 1; a + 1 < n; ++a) {
    out[a] += scale * ((f[a + 1] - f[a]) - (f[a] - f[a - 1]));
  }
  out[n - 1] += scale * (-(f[n - 1] - f[n - 2]));
}

void full_reaction(const ReactionRates& r, const double* s, const double* c, const double* y,
                   const double* p, double* rs, double* mu, double* rp, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double k1s = r.k1 * s[i];
    const double kp = p ? r.k_m2 * p[i] : 0.0;
    const double ci = c[i];
    const double yi = y[i];
    rs[i] = (k1s + r.k_m1) * ci - k1s * yi;
    mu[i] = (k1s + kp) * yi - (((k1s + r.k_m1) + r.k2) + kp) * ci;
    if (rp) rp[i] = (r.k2 + kp) * ci - kp * yi;
  }
}

void manifold(const ReactionRates& r, const double* s, const double* y, const double* p,
              double* cman, double* quotient, std::size_t n) {
  const double k1k2 = r.k1 * r.k2;
  const double km1km2 = r.k_m1 * r.k_m2;
  for (std::size_t i = 0; i < n; ++i) {
    const double si = clamp_nonnegative(s[i]);
    const double yi = clamp_nonnegative(y[i]);
    const double pi = p ? clamp_nonnegative(p[i]) : 0.0;
    const double k1s = r.k1 * si;
    const double kp = r.k_m2 * pi;
    const double den = ((k1s + r.k_m1) + r.k2) + kp;
    if (cman) cman[i] = ((k1s + kp) * yi) / den;
    if (quotient) quotient[i] = ((k1k2 * si - km1km2 * pi) * yi) / den;
  }
}

constexpr KernelTable kScalarTable{Isa::Scalar, &laplacian_accumulate, &full_reaction, &manifold};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

}  // namespace qssmm::simd

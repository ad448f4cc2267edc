// Compiled with -mavx2 only. Nothing in this file may be an inline function
// shared with other translation units.
#include <immintrin.h>

#include "tables.hpp"

namespace qssmm::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

inline double clamp_tail(double x) noexcept { return (0.0 > x) ? 0.0 : x; }

void laplacian_accumulate_avx2(const double* f, double* out, std::size_t n, double scale) {
  if (n < 2) return;
  out[0] += scale * (f[1] - f[0]);
  const __m256d vscale = _mm256_set1_pd(scale);
  std::size_t a = 1;
  for (; a + kLanes < n; a += kLanes) {
    const __m256d left = _mm256_loadu_pd(f + a - 1);
    const __m256d mid = _mm256_loadu_pd(f + a);
    const __m256d right = _mm256_loadu_pd(f + a + 1);
    const __m256d flux = _mm256_sub_pd(_mm256_sub_pd(right, mid), _mm256_sub_pd(mid, left));
    _mm256_storeu_pd(out + a, _mm256_add_pd(_mm256_loadu_pd(out + a), _mm256_mul_pd(vscale, flux)));
  }
  for (; a + 1 < n; ++a) {
    out[a] += scale * ((f[a + 1] - f[a]) - (f[a] - f[a - 1]));
  }
  out[n - 1] += scale * (-(f[n - 1] - f[n - 2]));
}

void full_reaction_avx2(const ReactionRates& r, const double* s, const double* c, const double* y,
                        const double* p, double* rs, double* mu, double* rp, std::size_t n) {
  const __m256d k1 = _mm256_set1_pd(r.k1);
  const __m256d km1 = _mm256_set1_pd(r.k_m1);
  const __m256d k2 = _mm256_set1_pd(r.k2);
  const __m256d km2 = _mm256_set1_pd(r.k_m2);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d k1s = _mm256_mul_pd(k1, _mm256_loadu_pd(s + i));
    const __m256d kp = p ? _mm256_mul_pd(km2, _mm256_loadu_pd(p + i)) : zero;
    const __m256d ci = _mm256_loadu_pd(c + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    const __m256d k1s_km1 = _mm256_add_pd(k1s, km1);
    _mm256_storeu_pd(rs + i, _mm256_sub_pd(_mm256_mul_pd(k1s_km1, ci), _mm256_mul_pd(k1s, yi)));
    const __m256d rate = _mm256_add_pd(_mm256_add_pd(k1s_km1, k2), kp);
    _mm256_storeu_pd(mu + i, _mm256_sub_pd(_mm256_mul_pd(_mm256_add_pd(k1s, kp), yi),
                                           _mm256_mul_pd(rate, ci)));
    if (rp) {
      _mm256_storeu_pd(rp + i, _mm256_sub_pd(_mm256_mul_pd(_mm256_add_pd(k2, kp), ci),
                                             _mm256_mul_pd(kp, yi)));
    }
  }
  for (; i < n; ++i) {
    const double k1s = r.k1 * s[i];
    const double kp = p ? r.k_m2 * p[i] : 0.0;
    const double ci = c[i];
    const double yi = y[i];
    rs[i] = (k1s + r.k_m1) * ci - k1s * yi;
    mu[i] = (k1s + kp) * yi - (((k1s + r.k_m1) + r.k2) + kp) * ci;
    if (rp) rp[i] = (r.k2 + kp) * ci - kp * yi;
  }
}

void manifold_avx2(const ReactionRates& r, const double* s, const double* y, const double* p,
                   double* cman, double* quotient, std::size_t n) {
  const double k1k2 = r.k1 * r.k2;
  const double km1km2 = r.k_m1 * r.k_m2;
  const __m256d k1 = _mm256_set1_pd(r.k1);
  const __m256d km1 = _mm256_set1_pd(r.k_m1);
  const __m256d k2 = _mm256_set1_pd(r.k2);
  const __m256d km2 = _mm256_set1_pd(r.k_m2);
  const __m256d vk1k2 = _mm256_set1_pd(k1k2);
  const __m256d vkm1km2 = _mm256_set1_pd(km1km2);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d si = _mm256_max_pd(zero, _mm256_loadu_pd(s + i));
    const __m256d yi = _mm256_max_pd(zero, _mm256_loadu_pd(y + i));
    const __m256d pi = p ? _mm256_max_pd(zero, _mm256_loadu_pd(p + i)) : zero;
    const __m256d k1s = _mm256_mul_pd(k1, si);
    const __m256d kp = _mm256_mul_pd(km2, pi);
    const __m256d den = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(k1s, km1), k2), kp);
    if (cman) {
      _mm256_storeu_pd(cman + i, _mm256_div_pd(_mm256_mul_pd(_mm256_add_pd(k1s, kp), yi), den));
    }
    if (quotient) {
      const __m256d num = _mm256_sub_pd(_mm256_mul_pd(vk1k2, si), _mm256_mul_pd(vkm1km2, pi));
      _mm256_storeu_pd(quotient + i, _mm256_div_pd(_mm256_mul_pd(num, yi), den));
    }
  }
  for (; i < n; ++i) {
    const double si = clamp_tail(s[i]);
    const double yi = clamp_tail(y[i]);
    const double pi = p ? clamp_tail(p[i]) : 0.0;
    const double k1s = r.k1 * si;
    const double kp = r.k_m2 * pi;
    const double den = ((k1s + r.k_m1) + r.k2) + kp;
    if (cman) cman[i] = ((k1s + kp) * yi) / den;
    if (quotient) quotient[i] = ((k1k2 * si - km1km2 * pi) * yi) / den;
  }
}

constexpr KernelTable kAvx2Table{Isa::Avx2, &laplacian_accumulate_avx2, &full_reaction_avx2,
                                 &manifold_avx2};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2Table; }

}  // namespace qssmm::simd::detail

#pragma once

// Data-parallel inner loops with one scalar reference table and optional
// vector tables chosen at runtime. All tables produce bit-identical results:
// operations are issued in the same order and the library is built without
// floating-point contraction.

#include <cstddef>
#include <string_view>

namespace qssmm::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Plain rate constants for the kernels (validated upstream).
struct ReactionRates {
  double k1;
  double k_m1;
  double k2;
  double k_m2;
};

struct KernelTable {
  Isa isa;

  /// out[a] += scale * ((f[a+1] - f[a]) - (f[a] - f[a-1])) with Neumann ghosts.
  void (*laplacian_accumulate)(const double* f, double* out, std::size_t n, double scale);

  /// Mass-action terms of the scaled full system, per cell:
  ///   rs = (k1 s + k_m1) c - k1 s y
  ///   mu = (k1 s + k_m2 p) y - (k1 s + k_m1 + k2 + k_m2 p) c
  ///   rp = (k2 + k_m2 p) c - k_m2 p y
  /// `p` and `rp` may be null (irreversible; p treated as 0).
  void (*full_reaction)(const ReactionRates& r, const double* s, const double* c,
                        const double* y, const double* p, double* rs, double* mu,
                        double* rp, std::size_t n);

  /// Slow-manifold quantities with s, y, p clamped at zero:
  ///   den  = k1 s + k_m1 + k2 + k_m2 p
  ///   cman = (k1 s + k_m2 p) y / den
  ///   q    = (k1 k2 s - k_m1 k_m2 p) y / den
  /// `p` may be null. Either output may be null.
  void (*manifold)(const ReactionRates& r, const double* s, const double* y, const double* p,
                   double* cman, double* quotient, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// True when the table was compiled in and the CPU can run it.
bool supported(Isa isa) noexcept;

/// Table for a specific ISA; throws std::invalid_argument if unsupported.
const KernelTable& kernels_for(Isa isa);

/// Best table for this CPU, unless overridden with set_active().
const KernelTable& active() noexcept;

/// Force a table (tests, benchmarking). Throws if unsupported.
void set_active(Isa isa);

}  // namespace qssmm::simd

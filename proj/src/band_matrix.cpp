#include "qssmm/band_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qssmm/errors.hpp"

namespace qssmm {

BandMatrix::BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), ld_(2 * lower + upper + 1), data_(ld_ * n, 0.0) {}

void BandMatrix::set_zero() noexcept { std::fill(data_.begin(), data_.end(), 0.0); }

void BandMatrix::scale(double factor) noexcept {
  for (double& v : data_) v *= factor;
}

void BandMatrix::add_to_diagonal(double value) noexcept {
  for (std::size_t i = 0; i < n_; ++i) (*this)(i, i) += value;
}

void BandMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw DimensionError("BandMatrix::multiply: expected vectors of length " + std::to_string(n_));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i > kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    double sum = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) sum += (*this)(i, j) * x[j];
    y[i] = sum;
  }
}

bool BandLU::factorize(const BandMatrix& a) {
  lu_ = a;
  const std::size_t n = lu_.n_;
  const std::size_t kl = lu_.kl_;
  const std::size_t ku = lu_.ku_;
  const std::size_t kv = kl + ku;
  const std::size_t ld = lu_.ld_;
  double* ab = lu_.data_.data();
  auto elem = [&](std::size_t row, std::size_t col) -> double& { return ab[row + col * ld]; };

  pivots_.assign(n, 0);
  ok_ = false;

  // Rows above the original band hold fill-in from row interchanges.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < kl; ++r) elem(r, j) = 0.0;
  }

  std::size_t ju = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t km = std::min(kl, n - 1 - j);

    std::size_t jp = 0;
    double best = std::abs(elem(kv, j));
    for (std::size_t r = 1; r <= km; ++r) {
      const double v = std::abs(elem(kv + r, j));
      if (v > best) {
        best = v;
        jp = r;
      }
    }
    pivots_[j] = j + jp;
    if (elem(kv + jp, j) == 0.0 || !std::isfinite(elem(kv + jp, j))) return false;

    ju = std::max(ju, std::min(j + ku + jp, n - 1));

    if (jp != 0) {
      // Swap rows j and j + jp over columns j..ju.
      for (std::size_t c = j; c <= ju; ++c) {
        std::swap(elem(kv + jp + j - c, c), elem(kv + j - c, c));
      }
    }
    if (km > 0) {
      const double inv = 1.0 / elem(kv, j);
      for (std::size_t r = 1; r <= km; ++r) elem(kv + r, j) *= inv;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const double u = elem(kv + j - c, c);
        if (u == 0.0) continue;
        for (std::size_t r = 1; r <= km; ++r) {
          elem(kv + j + r - c, c) -= elem(kv + r, j) * u;
        }
      }
    }
  }
  ok_ = true;
  return true;
}

void BandLU::solve(std::span<double> b) const {
  if (!ok_) throw NumericalError("BandLU::solve called without a valid factorization");
  const std::size_t n = lu_.n_;
  if (b.size() != n) {
    throw DimensionError("BandLU::solve: expected right-hand side of length " + std::to_string(n));
  }
  const std::size_t kl = lu_.kl_;
  const std::size_t kv = kl + lu_.ku_;
  const std::size_t ld = lu_.ld_;
  const double* ab = lu_.data_.data();
  auto elem = [&](std::size_t row, std::size_t col) { return ab[row + col * ld]; };

  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t lm = std::min(kl, n - 1 - j);
    const std::size_t l = pivots_[j];
    if (l != j) std::swap(b[l], b[j]);
    const double bj = b[j];
    for (std::size_t r = 1; r <= lm; ++r) b[j + r] -= elem(kv + r, j) * bj;
  }
  for (std::size_t j = n; j-- > 0;) {
    b[j] /= elem(kv, j);
    const double bj = b[j];
    const std::size_t i0 = j > kv ? j - kv : 0;
    for (std::size_t i = i0; i < j; ++i) b[i] -= elem(kv + i - j, j) * bj;
  }
}

}  // namespace qssmm

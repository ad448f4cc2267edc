#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qssmm {

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
///
/// Storage follows the LAPACK general-band layout with `lower` extra rows on
/// top so the same buffer can hold an LU factorization with partial pivoting:
/// entry (i, j) lives at data[(lower + upper + i - j) + j * ld].
class BandMatrix {
public:
  BandMatrix() = default;
  BandMatrix(std::size_t n, std::size_t lower, std::size_t upper);

  std::size_t size() const noexcept { return n_; }
  std::size_t lower() const noexcept { return kl_; }
  std::size_t upper() const noexcept { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const noexcept {
    return i < n_ && j < n_ && i <= j + kl_ && j <= i + ku_;
  }

  /// Entry (i, j); must be inside the band.
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[(kl_ + ku_ + i - j) + j * ld_];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[(kl_ + ku_ + i - j) + j * ld_];
  }
  /// Entry (i, j), zero outside the band.
  double at(std::size_t i, std::size_t j) const noexcept { return in_band(i, j) ? (*this)(i, j) : 0.0; }

  void set_zero() noexcept;
  void scale(double factor) noexcept;
  void add_to_diagonal(double value) noexcept;

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;

private:
  friend class BandLU;
  std::size_t n_ = 0;
  std::size_t kl_ = 0;
  std::size_t ku_ = 0;
  std::size_t ld_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting of a BandMatrix (dgbtf2/dgbtrs).
class BandLU {
public:
  /// Factorizes a copy of `a`. Returns false if a zero pivot is met; the
  /// object is then unusable until the next successful factorize().
  [[nodiscard]] bool factorize(const BandMatrix& a);

  bool ok() const noexcept { return ok_; }
  std::size_t size() const noexcept { return lu_.size(); }

  /// Solves A x = b in place.
  void solve(std::span<double> b) const;

private:
  BandMatrix lu_;
  std::vector<std::size_t> pivots_;
  bool ok_ = false;
};

}  // namespace qssmm

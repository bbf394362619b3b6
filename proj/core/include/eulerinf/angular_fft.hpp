#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>

namespace eulerinf {

/// Batched real <-> half-complex transforms in the angular variable.
///
/// Layout is one contiguous row per radius: `modes` holds n_alpha/2+1
/// coefficients, `values` holds n_alpha samples at theta_m = 2 pi m / n_alpha.
/// Conventions match the field representation
///   f(theta) = c_0 + 2 Re sum_{j>=1} c_j e^{i j theta},
/// so `to_physical` takes c_j directly and `to_modes` returns c_j.
class AngularFft {
 public:
  AngularFft(std::size_t n_alpha, std::size_t batch);
  ~AngularFft();
  AngularFft(const AngularFft&) = delete;
  AngularFft& operator=(const AngularFft&) = delete;
  AngularFft(AngularFft&& other) noexcept;
  AngularFft& operator=(AngularFft&& other) noexcept;

  std::size_t n_alpha() const { return n_alpha_; }
  std::size_t n_modes() const { return n_alpha_ / 2 + 1; }
  std::size_t batch() const { return batch_; }

  /// `modes` is used as scratch and left unspecified.
  void to_physical(std::span<std::complex<double>> modes, std::span<double> values) const;
  /// `values` is preserved.
  void to_modes(std::span<const double> values, std::span<std::complex<double>> modes) const;

 private:
  void release();

  std::size_t n_alpha_ = 0;
  std::size_t batch_ = 0;
  void* backward_ = nullptr;
  void* forward_ = nullptr;
};

/// FFTW's planner is not re-entrant; every plan creation/destruction in the
/// library takes this lock.
std::mutex& fftw_planner_mutex();

/// Smallest even size >= n whose only prime factors are 2, 3 and 5.
std::size_t smooth_fft_size(std::size_t n);

}  // namespace eulerinf

#include "eulerinf/angular_fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace eulerinf {
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t smooth_fft_size(std::size_t n) {
  std::size_t m = std::max<std::size_t>(n, 2);
  if (m % 2) ++m;
  for (;; m += 2) {
    std::size_t q = m;
    for (std::size_t p : {2u, 3u, 5u}) {
      while (q % p == 0) q /= p;
    }
    if (q == 1) return m;
  }
}

AngularFft::AngularFft(std::size_t n_alpha, std::size_t batch) : n_alpha_(n_alpha), batch_(batch) {
  if (n_alpha < 2 || n_alpha % 2 || batch == 0) {
    throw std::invalid_argument("angular transform needs an even size and a nonempty batch");
  }
  const int n = static_cast<int>(n_alpha);
  const int nm = static_cast<int>(n_modes());
  const int howmany = static_cast<int>(batch);
  std::vector<fftw_complex> c(static_cast<std::size_t>(nm) * batch);
  std::vector<double> r(n_alpha * batch);
  std::lock_guard lock(fftw_planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  backward_ = fftw_plan_many_dft_c2r(1, &n, howmany, c.data(), nullptr, 1, nm, r.data(), nullptr,
                                     1, n, flags);
  forward_ = fftw_plan_many_dft_r2c(1, &n, howmany, r.data(), nullptr, 1, n, c.data(), nullptr, 1,
                                    nm, flags);
  if (!backward_ || !forward_) throw std::runtime_error("FFTW planning failed");
}

AngularFft::~AngularFft() { release(); }

AngularFft::AngularFft(AngularFft&& other) noexcept
    : n_alpha_(other.n_alpha_), batch_(other.batch_), backward_(other.backward_),
      forward_(other.forward_) {
  other.backward_ = other.forward_ = nullptr;
}

AngularFft& AngularFft::operator=(AngularFft&& other) noexcept {
  if (this != &other) {
    release();
    n_alpha_ = other.n_alpha_;
    batch_ = other.batch_;
    backward_ = other.backward_;
    forward_ = other.forward_;
    other.backward_ = other.forward_ = nullptr;
  }
  return *this;
}

void AngularFft::release() {
  if (!backward_ && !forward_) return;
  std::lock_guard lock(fftw_planner_mutex());
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  backward_ = forward_ = nullptr;
}

void AngularFft::to_physical(std::span<std::complex<double>> modes, std::span<double> values) const {
  if (modes.size() < n_modes() * batch_ || values.size() < n_alpha_ * batch_) {
    throw std::invalid_argument("angular transform buffer too small");
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_),
                       reinterpret_cast<fftw_complex*>(modes.data()), values.data());
}

void AngularFft::to_modes(std::span<const double> values, std::span<std::complex<double>> modes) const {
  if (modes.size() < n_modes() * batch_ || values.size() < n_alpha_ * batch_) {
    throw std::invalid_argument("angular transform buffer too small");
  }
  // r2c with FFTW_ESTIMATE does not touch its input, but the API is non-const.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(modes.data()));
  const double scale = 1.0 / static_cast<double>(n_alpha_);
  for (std::size_t i = 0; i < n_modes() * batch_; ++i) modes[i] *= scale;
}

}  // namespace eulerinf

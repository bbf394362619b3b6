#include "eulerinf/polar_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "eulerinf/angular_fft.hpp"

namespace eulerinf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::shared_ptr<const AngularFft> fft_for(std::size_t m, std::size_t batch) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const AngularFft>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{m, batch}];
  if (!slot) slot = std::make_shared<const AngularFft>(m, batch);
  return slot;
}

double pchip_slope(double da, double db) {
  if (da * db <= 0.0) return 0.0;
  return 2.0 * da * db / (da + db);
}

double pchip_end_slope(double d0, double d1) {
  double d = 0.5 * (3.0 * d0 - d1);
  if (d * d0 <= 0.0) return 0.0;
  if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
  return d;
}

// Monotone cubic on unit-spaced data y[0..n), evaluated in interval i at t in [0,1].
template <class Get>
double pchip(Get y, std::size_t n, std::size_t i, double t) {
  const double y0 = y(i);
  const double y1 = y(i + 1);
  const double d = y1 - y0;
  double m0, m1;
  if (n < 3) {
    m0 = m1 = d;
  } else {
    m0 = i == 0 ? pchip_end_slope(d, y(2) - y(1)) : pchip_slope(y0 - y(i - 1), d);
    m1 = i + 2 >= n ? pchip_end_slope(d, y(i) - y(i - 1)) : pchip_slope(d, y(i + 2) - y1);
  }
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * m1;
}

std::size_t check_radius(const RadialGrid& g, double r, double& t) {
  if (r > g.r_max() * (1.0 + 1e-14)) throw std::domain_error("radius beyond r_max");
  const std::size_t i = g.locate(r);
  t = std::clamp(g.index_of(std::min(r, g.r_max())) - static_cast<double>(i), 0.0, 1.0);
  return i;
}

void require_compatible(const PolarField& a, const PolarField& b) {
  if (a.grid_ptr() != b.grid_ptr()) {
    if (!a.grid_ptr() || !b.grid_ptr() || a.n_r() != b.n_r() ||
        !std::equal(a.grid().nodes().begin(), a.grid().nodes().end(), b.grid().nodes().begin())) {
      throw std::invalid_argument("fields live on different radial grids");
    }
  }
}

}  // namespace

PolarField::PolarField(GridPtr grid, int k_max, std::optional<int> symmetry)
    : grid_(std::move(grid)), k_max_(k_max), symmetry_(symmetry) {
  if (!grid_) throw std::invalid_argument("field needs a grid");
  if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
  if (symmetry_ && *symmetry_ < 1) throw std::invalid_argument("symmetry must be positive");
  if (k_max % stride() != 0) throw std::invalid_argument("k_max must be a multiple of the symmetry");
  coeffs_.assign(rows() * n_r(), cplx{});
}

std::optional<std::size_t> PolarField::row_of(int k) const {
  if (k < 0 || k > k_max_ || k % stride() != 0) return std::nullopt;
  return static_cast<std::size_t>(k / stride());
}

cplx PolarField::mode(int k, std::size_t i) const {
  const auto j = row_of(k);
  return j ? coeffs_[*j * n_r() + i] : cplx{};
}

bool PolarField::same_layout(const PolarField& other) const {
  return grid_ == other.grid_ && k_max_ == other.k_max_ && stride() == other.stride();
}

bool PolarField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
}

double interpolate(const RadialGrid& grid, std::span<const double> values, double r) {
  if (r < grid.r_min()) return 0.0;
  double t;
  const std::size_t i = check_radius(grid, r, t);
  return pchip([&](std::size_t j) { return values[j]; }, grid.size(), i, t);
}

std::vector<cplx> modes_at(const PolarField& field, double r, Interp interp) {
  std::vector<cplx> out(field.rows());
  const RadialGrid& g = field.grid();
  if (r < g.r_min()) return out;
  double t;
  const std::size_t i = check_radius(g, r, t);
  const std::size_t n = g.size();
  if (interp == Interp::smooth && n >= 6) {
    const std::size_t first = std::min(i >= 2 ? i - 2 : 0, n - 6);
    const double x = static_cast<double>(i - first) + t;
    std::array<double, 6> l;
    for (std::size_t m = 0; m < 6; ++m) {
      double v = 1.0;
      for (std::size_t q = 0; q < 6; ++q)
        if (q != m) v *= (x - static_cast<double>(q)) / (static_cast<double>(m) - static_cast<double>(q));
      l[m] = v;
    }
    for (std::size_t j = 0; j < field.rows(); ++j) {
      const auto row = field.row(j);
      cplx acc = 0.0;
      for (std::size_t m = 0; m < 6; ++m) acc += l[m] * row[first + m];
      out[j] = acc;
    }
    return out;
  }
  for (std::size_t j = 0; j < field.rows(); ++j) {
    const auto row = field.row(j);
    const double re = pchip([&](std::size_t q) { return row[q].real(); }, n, i, t);
    const double im = pchip([&](std::size_t q) { return row[q].imag(); }, n, i, t);
    out[j] = {re, im};
  }
  return out;
}

double synthesize(const PolarField& field, double r, double alpha, Interp interp) {
  const auto c = modes_at(field, r, interp);
  double v = c[0].real();
  for (std::size_t j = 1; j < c.size(); ++j) {
    const double k = field.wavenumber(j);
    v += 2.0 * (c[j] * std::polar(1.0, k * alpha)).real();
  }
  return v;
}

std::vector<double> synthesize(const PolarField& field, std::span<const PolarPoint> points,
                               Interp interp) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(synthesize(field, p.r, p.alpha, interp));
  return out;
}

std::size_t default_samples(const PolarField& field, std::size_t refine) {
  const std::size_t j = field.rows() - 1;
  return smooth_fft_size(std::max<std::size_t>(refine * (2 * j + 2), 4));
}

std::vector<double> to_physical(const PolarField& field, std::size_t m) {
  const std::size_t n = field.n_r();
  const std::size_t rows = field.rows();
  if (m < 2 * rows) throw std::invalid_argument("too few angular samples for the stored modes");
  const auto fft = fft_for(m, n);
  const std::size_t nm = fft->n_modes();
  std::vector<cplx> buf(nm * n, cplx{});
  for (std::size_t j = 0; j < rows; ++j) {
    const auto row = field.row(j);
    for (std::size_t i = 0; i < n; ++i) buf[i * nm + j] = row[i];
  }
  for (std::size_t i = 0; i < n; ++i) buf[i * nm] = buf[i * nm].real();
  std::vector<double> out(m * n);
  fft->to_physical(buf, out);
  return out;
}

void from_physical(PolarField& field, std::span<const double> samples, std::size_t m) {
  const std::size_t n = field.n_r();
  const std::size_t rows = field.rows();
  if (m < 2 * rows) throw std::invalid_argument("too few angular samples for the stored modes");
  const auto fft = fft_for(m, n);
  const std::size_t nm = fft->n_modes();
  std::vector<cplx> buf(nm * n);
  fft->to_modes(samples, buf);
  for (std::size_t j = 0; j < rows; ++j) {
    auto row = field.row(j);
    for (std::size_t i = 0; i < n; ++i) row[i] = buf[i * nm + j];
  }
}

PolarField analyze(GridPtr grid, std::span<const double> samples, std::size_t n_alpha, int k_max,
                   std::optional<int> symmetry) {
  if (n_alpha < 2 * static_cast<std::size_t>(k_max) + 2) {
    throw std::invalid_argument("angular resolution too low for k_max: modes would alias");
  }
  if (n_alpha % 2) throw std::invalid_argument("angular sample count must be even");
  PolarField out(std::move(grid), k_max, symmetry);
  const std::size_t n = out.n_r();
  if (samples.size() != n * n_alpha) throw std::invalid_argument("sample array has wrong size");
  const auto fft = fft_for(n_alpha, n);
  const std::size_t nm = fft->n_modes();
  std::vector<cplx> buf(nm * n);
  fft->to_modes(samples, buf);
  for (std::size_t j = 0; j < out.rows(); ++j) {
    auto row = out.row(j);
    const auto k = static_cast<std::size_t>(out.wavenumber(j));
    for (std::size_t i = 0; i < n; ++i) row[i] = buf[i * nm + k];
  }
  for (std::size_t i = 0; i < n; ++i) out.row(0)[i] = out.row(0)[i].real();
  return out;
}

PolarField angular_average(const PolarField& field) {
  PolarField out(field.grid_ptr(), field.k_max(), field.symmetry());
  std::copy(field.row(0).begin(), field.row(0).end(), out.row(0).begin());
  return out;
}

std::vector<double> radial_envelope(const PolarField& field) {
  const std::size_t m = default_samples(field, 4);
  const auto v = to_physical(field, m);
  std::vector<double> env(field.n_r());
  for (std::size_t i = 0; i < env.size(); ++i) {
    double mx = 0.0;
    for (std::size_t q = 0; q < m; ++q) mx = std::max(mx, std::abs(v[i * m + q]));
    env[i] = mx;
  }
  return env;
}

namespace {

// One radial node of the series in the reduced angle theta:
//   f(theta) = c_0 + 2 Re sum_j c_j e^{i j theta}
struct AngularSeries {
  std::vector<cplx> c;

  // derivative order 0, 1, 2
  double eval(double theta, int order = 0) const {
    double acc = order == 0 ? c[0].real() : 0.0;
    for (std::size_t j = 1; j < c.size(); ++j) {
      const double jj = static_cast<double>(j);
      cplx term = c[j] * std::polar(1.0, jj * theta);
      if (order == 1) term *= cplx(0.0, jj);
      if (order == 2) term *= -jj * jj;
      acc += 2.0 * term.real();
    }
    return acc;
  }
  // antiderivative
  double integral(double theta) const {
    double acc = c[0].real() * theta;
    for (std::size_t j = 1; j < c.size(); ++j) {
      const double jj = static_cast<double>(j);
      acc += 2.0 * (c[j] * std::polar(1.0, jj * theta) / cplx(0.0, jj)).real();
    }
    return acc;
  }
};

AngularSeries series_at(const PolarField& field, std::size_t i) {
  AngularSeries s;
  s.c.resize(field.rows());
  for (std::size_t j = 0; j < field.rows(); ++j) s.c[j] = field.row(j)[i];
  return s;
}

// int_0^{2 pi} |f| dtheta, exact up to root accuracy; roots are bracketed by
// the samples v (m of them on the period).
double abs_integral(const AngularSeries& s, std::span<const double> v) {
  const std::size_t m = v.size();
  std::vector<double> roots;
  const double h = kTwoPi / static_cast<double>(m);
  for (std::size_t q = 0; q < m; ++q) {
    const double a = v[q];
    const double b = v[(q + 1) % m];
    if (a == 0.0) {
      roots.push_back(h * static_cast<double>(q));
      continue;
    }
    if (a * b >= 0.0) continue;
    const double lo = h * static_cast<double>(q);
    boost::uintmax_t iters = 60;
    auto [x0, x1] = boost::math::tools::toms748_solve([&](double x) { return s.eval(x); }, lo, lo + h, a, b,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
    roots.push_back(0.5 * (x0 + x1));
  }
  const double full = s.integral(kTwoPi) - s.integral(0.0);
  if (roots.empty()) return std::abs(full);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < roots.size(); ++k) acc += std::abs(s.integral(roots[k + 1]) - s.integral(roots[k]));
  acc += std::abs(s.integral(roots.front() + kTwoPi) - s.integral(roots.back()));
  return acc;
}

// max |f| by Newton on f' from the best sample.
double abs_max(const AngularSeries& s, std::span<const double> v) {
  const std::size_t m = v.size();
  const double h = kTwoPi / static_cast<double>(m);
  std::size_t best = 0;
  for (std::size_t q = 1; q < m; ++q) {
    if (std::abs(v[q]) > std::abs(v[best])) best = q;
  }
  const double start = h * static_cast<double>(best);
  double x = start;
  double out = std::abs(v[best]);
  for (int it = 0; it < 20; ++it) {
    const double d2 = s.eval(x, 2);
    if (d2 == 0.0) break;
    const double step = s.eval(x, 1) / d2;
    x -= step;
    if (std::abs(x - start) > h) return out;
    if (std::abs(step) < 1e-15) break;
  }
  return std::max(out, std::abs(s.eval(x)));
}

}  // namespace

double lp_norm(const PolarField& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  if (p == 2.0) return std::sqrt(kTwoPi * mode_energy(field));
  const std::size_t m = default_samples(field, 4);
  const auto v = to_physical(field, m);
  const std::size_t n = field.n_r();
  if (std::isinf(p)) {
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::span<const double> vi(v.data() + i * m, m);
      if (std::all_of(vi.begin(), vi.end(), [](double x) { return x == 0.0; })) continue;
      mx = std::max(mx, field.rows() == 1 ? std::abs(vi[0]) : abs_max(series_at(field, i), vi));
    }
    return mx;
  }
  const auto w = field.grid().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> vi(v.data() + i * m, m);
    double row = 0.0;
    if (p == 1.0) {
      if (std::any_of(vi.begin(), vi.end(), [](double x) { return x != 0.0; })) row = abs_integral(series_at(field, i), vi);
    } else {
      for (double x : vi) row += std::pow(std::abs(x), p);
      row *= kTwoPi / static_cast<double>(m);
    }
    acc += w[i] * row;
  }
  return std::pow(acc, 1.0 / p);
}

double mode_energy(const PolarField& field) {
  const auto w = field.grid().weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < field.rows(); ++j) {
    const double c = j == 0 ? 1.0 : 2.0;
    const auto row = field.row(j);
    for (std::size_t i = 0; i < row.size(); ++i) acc += c * w[i] * std::norm(row[i]);
  }
  return acc;
}

std::optional<std::pair<double, double>> support_annulus(const PolarField& field,
                                                         double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("support threshold must be positive");
  const auto env = radial_envelope(field);
  std::optional<std::size_t> lo, hi;
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (env[i] > threshold) {
      if (!lo) lo = i;
      hi = i;
    }
  }
  if (!lo) return std::nullopt;
  return std::pair{field.grid().node(*lo), field.grid().node(*hi)};
}

PolarField rotate(const PolarField& field, double c) {
  PolarField out = field;
  for (std::size_t j = 1; j < out.rows(); ++j) {
    const cplx ph = std::polar(1.0, -static_cast<double>(out.wavenumber(j)) * c);
    for (auto& v : out.row(j)) v *= ph;
  }
  return out;
}

PolarField with_k_max(const PolarField& field, int k_max) {
  const int s = field.stride();
  PolarField out(field.grid_ptr(), k_max - k_max % s, field.symmetry());
  const std::size_t rows = std::min(out.rows(), field.rows());
  for (std::size_t j = 0; j < rows; ++j) std::copy(field.row(j).begin(), field.row(j).end(), out.row(j).begin());
  return out;
}

PolarField with_symmetry(const PolarField& field, std::optional<int> symmetry) {
  const int s = symmetry.value_or(1);
  PolarField out(field.grid_ptr(), field.k_max() - field.k_max() % s, symmetry);
  for (std::size_t j = 0; j < out.rows(); ++j) {
    const auto src = field.row_of(out.wavenumber(j));
    if (src) std::copy(field.row(*src).begin(), field.row(*src).end(), out.row(j).begin());
  }
  return out;
}

namespace {

PolarField combine(const PolarField& a, const PolarField& b, double sb) {
  require_compatible(a, b);
  std::optional<int> sym;
  if (a.symmetry() && b.symmetry()) {
    const int g = std::gcd(*a.symmetry(), *b.symmetry());
    if (g > 1) sym = g;
  }
  const int k_max = std::max(a.k_max(), b.k_max());
  PolarField out(a.grid_ptr(), k_max - k_max % sym.value_or(1), sym);
  for (std::size_t j = 0; j < out.rows(); ++j) {
    const int k = out.wavenumber(j);
    auto dst = out.row(j);
    if (auto ra = a.row_of(k)) {
      const auto src = a.row(*ra);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    if (auto rb = b.row_of(k)) {
      const auto src = b.row(*rb);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += sb * src[i];
    }
  }
  return out;
}

}  // namespace

PolarField operator+(const PolarField& a, const PolarField& b) { return combine(a, b, 1.0); }
PolarField operator-(const PolarField& a, const PolarField& b) { return combine(a, b, -1.0); }

PolarField operator*(double s, const PolarField& a) {
  PolarField out = a;
  out *= s;
  return out;
}

PolarField& operator+=(PolarField& a, const PolarField& b) {
  if (a.same_layout(b)) {
    auto dst = a.coeffs();
    const auto src = b.coeffs();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    return a;
  }
  a = a + b;
  return a;
}

PolarField& operator*=(PolarField& a, double s) {
  for (auto& c : a.coeffs()) c *= s;
  return a;
}

namespace {

template <class T>
void fd4(const RadialGrid& grid, std::span<const T> y, std::span<T> d) {
  const std::size_t n = grid.size();
  if (y.size() != n || d.size() != n) throw std::invalid_argument("derivative size mismatch");
  constexpr double c = 1.0 / 12.0;
  d[0] = c * (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]);
  d[1] = c * (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = c * (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]);
  }
  d[n - 2] = -c * (-3.0 * y[n - 1] - 10.0 * y[n - 2] + 18.0 * y[n - 3] - 6.0 * y[n - 4] + y[n - 5]);
  d[n - 1] = -c * (-25.0 * y[n - 1] + 48.0 * y[n - 2] - 36.0 * y[n - 3] + 16.0 * y[n - 4] -
                   3.0 * y[n - 5]);
  for (std::size_t i = 0; i < n; ++i) d[i] /= grid.jacobian(i);
}

}  // namespace

void radial_derivative(const RadialGrid& grid, std::span<const cplx> in, std::span<cplx> out) {
  fd4<cplx>(grid, in, out);
}

void radial_derivative(const RadialGrid& grid, std::span<const double> in, std::span<double> out) {
  fd4<double>(grid, in, out);
}

PolarField radial_derivative(const PolarField& field) {
  PolarField out(field.grid_ptr(), field.k_max(), field.symmetry());
  for (std::size_t j = 0; j < field.rows(); ++j) radial_derivative(field.grid(), field.row(j), out.row(j));
  return out;
}

}  // namespace eulerinf

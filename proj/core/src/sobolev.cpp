#include "eulerinf/sobolev.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "eulerinf/angular_fft.hpp"
#include "eulerinf/bessel.hpp"
#include "eulerinf/stats.hpp"

namespace eulerinf {
namespace {

constexpr double kPi = std::numbers::pi;

struct Rule {
  std::vector<double> x, w;  // on [0, 1]
};

const Rule& gauss01(std::size_t order) {
  static std::mutex mu;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Rule r;
  gauss_legendre(order, r.x, r.w);
  for (std::size_t i = 0; i < order; ++i) {
    r.x[i] = 0.5 * (r.x[i] + 1.0);
    r.w[i] *= 0.5;
  }
  return cache.emplace(order, std::move(r)).first->second;
}

// int_0^{pi/4} cos(t)^p dt
double cos_power_integral(double p) {
  const Rule& g = gauss01(24);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * std::pow(std::cos(0.25 * kPi * g.x[i]), p);
  return 0.25 * kPi * acc;
}

// int over the square [-a, a]^2 of |x|^p, p > -2
double origin_cell(double a, double p) {
  return 8.0 * std::pow(a, p + 2.0) / (p + 2.0) * cos_power_integral(-(p + 2.0));
}

// int of a weight over the cell [cx - a, cx + a] x [cy - a, cy + a] by
// recursive subdivision; used next to the weight's singularity at 0.
template <class W>
double cell_integral(W w, double cx, double cy, double a, int depth) {
  if (depth == 0) {
    const Rule& g = gauss01(4);
    double acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        acc += g.w[i] * g.w[j] * w(cx - a + 2.0 * a * g.x[i], cy - a + 2.0 * a * g.x[j]);
    return 4.0 * a * a * acc;
  }
  const double h = 0.5 * a;
  return cell_integral(w, cx - h, cy - h, h, depth - 1) + cell_integral(w, cx + h, cy - h, h, depth - 1) +
         cell_integral(w, cx - h, cy + h, h, depth - 1) + cell_integral(w, cx + h, cy + h, h, depth - 1);
}

// ---------------------------------------------------------------- hankel

struct Piece {
  std::size_t i0, i1;  // node range, intervals [i0, i1)
  double a, b;
};

std::vector<Piece> split_pieces(const RadialGrid& g, std::span<const cplx> c) {
  double mx = 0.0;
  for (auto z : c) mx = std::max(mx, std::abs(z));
  std::vector<Piece> out;
  if (mx == 0.0) return out;
  const double thr = 1e-13 * mx;
  const std::size_t n = c.size();
  constexpr std::size_t kGap = 8, kPad = 3;
  std::size_t i = 0;
  while (i < n) {
    if (std::abs(c[i]) <= thr) {
      ++i;
      continue;
    }
    std::size_t lo = i, hi = i, last = i;
    for (std::size_t q = i + 1; q < n; ++q) {
      if (std::abs(c[q]) > thr) {
        last = q;
      } else if (q - last > kGap) {
        break;
      }
    }
    hi = last;
    lo = lo >= kPad ? lo - kPad : 0;
    hi = std::min(n - 1, hi + kPad);
    if (hi == lo) hi = std::min(n - 1, lo + 1);
    out.push_back({lo, hi, g.node(lo), g.node(hi)});
    i = last + 1;
  }
  // padding may make neighbours overlap: merge
  std::vector<Piece> merged;
  for (const auto& p : out) {
    if (!merged.empty() && p.i0 <= merged.back().i1) {
      merged.back().i1 = std::max(merged.back().i1, p.i1);
      merged.back().b = g.node(merged.back().i1);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

class HankelEval {
 public:
  HankelEval(const RadialGrid& g, std::span<const cplx> c, int k) : g_(g), c_(c), k_(k), jbuf_(k + 1) {}

  cplx operator()(const Piece& p, double rho) {
    const Rule& g8 = gauss01(8);
    const Rule& g4 = gauss01(4);
    cplx acc = 0.0;
    for (std::size_t i = p.i0; i < p.i1; ++i) {
      const auto& iv = g_.interval(i);
      const double a = g_.node(i), b = g_.node(i + 1);
      // cubic data times a Bessel factor that is nearly polynomial on the interval
      const Rule& gr = rho * (b - a) < 0.3 ? g4 : g8;
      const auto nsub = static_cast<std::size_t>(std::max(1.0, std::ceil(rho * (b - a) / 3.0)));
      const double hs = (b - a) / static_cast<double>(nsub);
      double xs[4];
      for (std::size_t m = 0; m < 4; ++m) xs[m] = g_.node(iv.first + m);
      for (std::size_t q = 0; q < nsub; ++q) {
        for (std::size_t t = 0; t < gr.x.size(); ++t) {
          const double s = a + hs * (static_cast<double>(q) + gr.x[t]);
          cplx cs = 0.0;
          for (std::size_t m = 0; m < 4; ++m) {
            double l = 1.0;
            for (std::size_t u = 0; u < 4; ++u)
              if (u != m) l *= (s - xs[u]) / (xs[m] - xs[u]);
            cs += l * c_[iv.first + m];
          }
          bessel_j_array(k_, rho * s, jbuf_);
          acc += hs * gr.w[t] * cs * jbuf_[k_] * s;
        }
      }
    }
    return acc;
  }

 private:
  const RadialGrid& g_;
  std::span<const cplx> c_;
  int k_;
  std::vector<double> jbuf_;
};

struct SpectralWeight {
  double s;
  bool homogeneous;
  double operator()(double rho) const {
    return homogeneous ? std::pow(rho, 2.0 * s + 1.0) : std::pow(1.0 + rho * rho, s) * rho;
  }
};

struct RhoIntegral {
  double value = 0.0;
  double rho_end = 0.0;
  bool converged = true;
};

// int_0^inf w(rho) G(rho) d rho over panels of width dr. With `fixed_end`
// the integral stops there; otherwise it runs until the panel contributions
// have been negligible for a while.
template <class G>
RhoIntegral rho_integral(G gfun, const SpectralWeight& w, double dr, double rho_min_stop, double tol,
                         std::optional<double> fixed_end, double rho_cap = INFINITY) {
  RhoIntegral out;
  const Rule& g8 = gauss01(8);
  // first panel: rho = dr u^{1/(2s+2)} absorbs rho^{2s+1}
  double first = 0.0;
  if (w.homogeneous) {
    const double e = 2.0 * w.s + 2.0;
    const Rule& g16 = gauss01(16);
    for (std::size_t i = 0; i < g16.x.size(); ++i) {
      const double rho = dr * std::pow(g16.x[i], 1.0 / e);
      first += g16.w[i] * gfun(rho);
    }
    first *= std::pow(dr, e) / e;
  } else {
    for (std::size_t i = 0; i < g8.x.size(); ++i) {
      const double rho = dr * g8.x[i];
      first += dr * g8.w[i] * w(rho) * gfun(rho);
    }
  }
  double total = first;
  // Spectra of compactly supported bumps beat between the two edges and
  // have deep minima, so the stop test looks back over [rho/2, rho] rather
  // than a fixed number of panels.
  constexpr std::size_t kMinWindow = 8;
  constexpr std::size_t kMaxPanels = 400000;
  std::vector<double> cum{0.0, std::abs(first)};  // cumulative |panel| sums
  std::size_t p = 1;
  for (;; ++p) {
    const double lo = dr * static_cast<double>(p);
    if (fixed_end && lo >= *fixed_end) break;
    double part = 0.0;
    for (std::size_t i = 0; i < g8.x.size(); ++i) {
      const double rho = lo + dr * g8.x[i];
      part += dr * g8.w[i] * w(rho) * gfun(rho);
    }
    total += part;
    cum.push_back(cum.back() + std::abs(part));
    const std::size_t back = std::max(kMinWindow, (p + 1) / 2);
    const double recent = cum.back() - cum[p + 1 > back ? p + 1 - back : 0];
    if (!fixed_end && p >= 16 && lo >= rho_min_stop && recent <= tol * std::abs(total)) break;
    if (!fixed_end && p >= 16 && lo >= rho_min_stop && total == 0.0 && recent == 0.0) break;
    if (lo >= rho_cap || p >= kMaxPanels) {
      out.converged = false;
      break;
    }
  }
  out.value = total;
  out.rho_end = dr * static_cast<double>(p + 1);
  return out;
}

double hankel_norm_squared(const PolarField& field, const SobolevSpec& spec) {
  const RadialGrid& g = field.grid();
  const SpectralWeight w{spec.s, spec.homogeneous};
  double total = 0.0;
  for (std::size_t j = 0; j < field.rows(); ++j) {
    const auto row = field.row(j);
    const int k = field.wavenumber(j);
    const auto pieces = split_pieces(g, row);
    if (pieces.empty()) continue;
    HankelEval h(g, row, k);
    std::vector<RhoIntegral> self(pieces.size());
    double row_total = 0.0;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      const Piece& pc = pieces[p];
      const double dr = kPi / pc.b;
      const double stop = (k + 30.0) / pc.b + 60.0 / (pc.b - pc.a);
      // past the grid Nyquist frequency the spectrum is interpolation artefact
      const double cap = std::max(stop, kPi / g.spacing_at((pc.i0 + pc.i1) / 2));
      self[p] = rho_integral([&](double rho) { return std::norm(h(pc, rho)); }, w, dr, stop, spec.rel_tol,
                             std::nullopt, cap);
      row_total += self[p].value;
    }
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      for (std::size_t q = p + 1; q < pieces.size(); ++q) {
        const double bmax = std::max(pieces[p].b, pieces[q].b);
        const double end = std::min(self[p].rho_end, self[q].rho_end);
        const auto cross = rho_integral(
            [&](double rho) { return 2.0 * (h(pieces[p], rho) * std::conj(h(pieces[q], rho))).real(); }, w,
            kPi / bmax, 0.0, spec.rel_tol, end);
        row_total += cross.value;
      }
    }
    total += (k == 0 ? 1.0 : 2.0) * row_total;
  }
  return 2.0 * kPi * total;
}

// ---------------------------------------------------------------- lattices

struct Box {
  double x0, y0, side;
};

Box bounding_box(std::span<const PlanarPiece> pieces) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& p : pieces) {
    xmin = std::min(xmin, p.cx - p.radius);
    xmax = std::max(xmax, p.cx + p.radius);
    ymin = std::min(ymin, p.cy - p.radius);
    ymax = std::max(ymax, p.cy + p.radius);
  }
  const double side = std::max(xmax - xmin, ymax - ymin);
  return {0.5 * (xmin + xmax) - 0.5 * side, 0.5 * (ymin + ymax) - 0.5 * side, side};
}

double eval_pieces(std::span<const PlanarPiece> pieces, double x, double y) {
  double v = 0.0;
  for (const auto& p : pieces) {
    const double dx = x - p.cx, dy = y - p.cy;
    if (dx * dx + dy * dy <= p.radius * p.radius) v += p.f(x, y);
  }
  return v;
}

double cartesian_norm_squared(std::span<const PlanarPiece> pieces, const SobolevSpec& spec) {
  const Box box = bounding_box(pieces);
  const double diam = box.side;
  if (!(diam > 0.0)) return 0.0;
  double rmin = INFINITY;
  for (const auto& p : pieces) rmin = std::min(rmin, p.radius);
  double h = spec.lattice_h > 0.0 ? spec.lattice_h : 2.0 * rmin / 128.0;
  const double half = std::max(spec.box_half_width, 4.0 * diam);
  const auto n = smooth_fft_size(static_cast<std::size_t>(std::ceil(2.0 * half / h)));
  h = 2.0 * half / static_cast<double>(n);
  const double xc = box.x0 + 0.5 * diam, yc = box.y0 + 0.5 * diam;
  const std::size_t nc = n / 2 + 1;
  double* in = fftw_alloc_real(n * n);
  fftw_complex* out = fftw_alloc_complex(n * nc);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_2d(static_cast<int>(n), static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  // cell-centred lattice: no sample sits on a piece centre, where polar
  // fields are cut off below r_min
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xc - half + h * (static_cast<double>(i) + 0.5);
    for (std::size_t j = 0; j < n; ++j)
      in[i * n + j] = eval_pieces(pieces, x, yc - half + h * (static_cast<double>(j) + 0.5));
  }
  fftw_execute(plan);
  const double dxi = 2.0 * kPi / (static_cast<double>(n) * h);
  const double a = 0.5 * dxi;
  const double s = spec.s;
  auto weight = [&](double kx, double ky) {
    const double q = kx * kx + ky * ky;
    return spec.homogeneous ? std::pow(q, s) : std::pow(1.0 + q, s);
  };
  // Laplacian of the weight, for the midpoint-plus-correction cell rule
  auto weight_lap = [&](double kx, double ky) {
    const double q = kx * kx + ky * ky;
    return spec.homogeneous ? 4.0 * s * s * std::pow(q, s - 1.0)
                            : 4.0 * s * std::pow(1.0 + q, s - 2.0) * (1.0 + s * q);
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const long ii = i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
    for (std::size_t j = 0; j < nc; ++j) {
      const long jj = static_cast<long>(j);
      const double kx = dxi * static_cast<double>(ii), ky = dxi * static_cast<double>(jj);
      double wcell;
      if (spec.homogeneous && ii == 0 && jj == 0) {
        wcell = origin_cell(a, 2.0 * s);
      } else if (std::max(std::labs(ii), std::labs(jj)) <= 3) {
        wcell = cell_integral(weight, kx, ky, a, 4);
      } else {
        wcell = 4.0 * a * a * (weight(kx, ky) + a * a / 6.0 * weight_lap(kx, ky));
      }
      const double mult = (j == 0 || (n % 2 == 0 && j == n / 2)) ? 1.0 : 2.0;
      const double re = out[i * nc + j][0], im = out[i * nc + j][1];
      acc += mult * wcell * (re * re + im * im);
    }
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return acc * h * h * h * h / (4.0 * kPi * kPi);
}

// int int |f(x) - f(y)|^2 / |x - y|^{2+2s} by lattice sums over displacements.
double slobodeckij_raw(std::span<const PlanarPiece> pieces, double s, std::size_t n) {
  const Box box = bounding_box(pieces);
  if (!(box.side > 0.0)) return 0.0;
  const double h = box.side / static_cast<double>(n - 1);
  std::vector<double> f(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      f[i * n + j] = eval_pieces(pieces, box.x0 + h * static_cast<double>(i), box.y0 + h * static_cast<double>(j));
  double n2 = 0.0;
  for (double v : f) n2 += v * v;
  n2 *= h * h;
  double grad2 = 0.0;
  auto at = [&](long i, long j) {
    if (i < 0 || j < 0 || i >= static_cast<long>(n) || j >= static_cast<long>(n)) return 0.0;
    return f[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
  };
  const long ln = static_cast<long>(n);
  for (long i = 0; i < ln; ++i)
    for (long j = 0; j < ln; ++j) {
      const double gx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
      const double gy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
      grad2 += gx * gx + gy * gy;
    }
  grad2 *= h * h;
  const double a = 0.5 * h;
  const double p = -2.0 - 2.0 * s;
  double acc = 0.5 * grad2 * origin_cell(a, -2.0 * s);
  for (long da = 0; da < ln; ++da) {
    for (long db = -(ln - 1); db < ln; ++db) {
      if (da == 0 && db <= 0) continue;  // use d ~ -d symmetry
      double ac = 0.0;
      for (long i = 0; i + da < ln; ++i) {
        const long j0 = std::max(0L, -db), j1 = std::min(ln, ln - db);
        const double* row = &f[static_cast<std::size_t>(i) * n];
        const double* shifted = &f[static_cast<std::size_t>(i + da) * n];
        for (long j = j0; j < j1; ++j) ac += row[j] * shifted[j + db];
      }
      const double d_val = 2.0 * n2 - 2.0 * h * h * ac;
      const double x = h * static_cast<double>(da), y = h * static_cast<double>(db);
      const double r2 = x * x + y * y;
      double contrib;
      if (std::max(da, std::labs(db)) <= 2) {
        auto wq = [&](double u, double v) { return std::pow(u * u + v * v, -s); };
        contrib = d_val / r2 * cell_integral(wq, x, y, a, 4);
      } else {
        const double w0 = std::pow(r2, 0.5 * p);
        const double lap = p * p * std::pow(r2, 0.5 * p - 1.0);
        contrib = d_val * 4.0 * a * a * (w0 + a * a / 6.0 * lap);
      }
      acc += 2.0 * contrib;
    }
  }
  // beyond the overlap square the difference quotient numerator is 2 ||f||^2
  const double big = (static_cast<double>(n) - 0.5) * h;
  acc += 2.0 * n2 * 8.0 * std::pow(big, -2.0 * s) / (2.0 * s) * cos_power_integral(2.0 * s);
  return acc;
}

}  // namespace

std::string to_string(SobolevMethod m) {
  switch (m) {
    case SobolevMethod::hankel: return "hankel";
    case SobolevMethod::cartesian: return "cartesian";
    case SobolevMethod::slobodeckij: return "slobodeckij";
  }
  return "hankel";
}

SobolevMethod method_from_string(const std::string& s) {
  if (s == "hankel") return SobolevMethod::hankel;
  if (s == "cartesian") return SobolevMethod::cartesian;
  if (s == "slobodeckij") return SobolevMethod::slobodeckij;
  throw std::invalid_argument("unknown Sobolev method '" + s + "'");
}

void validate(const SobolevSpec& spec) {
  if (!(spec.s > -1.0 && spec.s <= 1.0)) throw std::invalid_argument("Sobolev order must lie in (-1, 1]");
  if (spec.method == SobolevMethod::slobodeckij && !(spec.s > 0.0 && spec.s < 1.0))
    throw std::invalid_argument("the Slobodeckij form needs s in (0, 1)");
  if (spec.method == SobolevMethod::slobodeckij && spec.slob_points < 8)
    throw std::invalid_argument("too few Slobodeckij lattice points");
}

PlanarPiece planar(const PolarField& field, double cx, double cy, double threshold) {
  PlanarPiece p;
  const double winf = lp_norm(field, INFINITY);
  const auto ann = winf > 0.0 ? support_annulus(field, threshold * winf) : std::nullopt;
  p.radius = ann ? std::min(field.grid().r_max(), ann->second * (1.0 + 1e-12)) : 0.0;
  p.cx = cx;
  p.cy = cy;
  auto shared = std::make_shared<PolarField>(field);
  const double rmax = field.grid().r_max();
  p.f = [shared, cx, cy, rmax](double x, double y) {
    const double r = std::hypot(x - cx, y - cy);
    if (r > rmax) return 0.0;
    return synthesize(*shared, r, std::atan2(y - cy, x - cx), Interp::smooth);
  };
  return p;
}

cplx hankel_transform(const RadialGrid& grid, std::span<const cplx> c, int k, double rho) {
  HankelEval h(grid, c, k);
  Piece whole{0, grid.size() - 1, grid.r_min(), grid.r_max()};
  return h(whole, rho);
}

double norm_squared(const PolarField& field, const SobolevSpec& spec) {
  validate(spec);
  if (field.is_zero()) return 0.0;
  switch (spec.method) {
    case SobolevMethod::hankel: return hankel_norm_squared(field, spec);
    case SobolevMethod::cartesian:
    case SobolevMethod::slobodeckij: {
      const PlanarPiece p = planar(field);
      const double v = norm(std::span<const PlanarPiece>(&p, 1), spec);
      return v * v;
    }
  }
  return 0.0;
}

double norm(const PolarField& field, const SobolevSpec& spec) {
  return std::sqrt(std::max(0.0, norm_squared(field, spec)));
}

double slobodeckij_constant(double s) {
  return std::pow(4.0, s) * std::tgamma(1.0 + s) / (2.0 * kPi * std::abs(std::tgamma(-s)));
}

double slobodeckij_constant_calibrated(double s, std::size_t points) {
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({s, points}); it != cache.end()) return it->second;
  }
  PlanarPiece gauss;
  gauss.radius = 7.0;
  gauss.f = [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); };
  const double raw = slobodeckij_raw(std::span<const PlanarPiece>(&gauss, 1), s, points);
  const double c = kPi * std::tgamma(1.0 + s) / raw;
  std::lock_guard lock(mu);
  cache[{s, points}] = c;
  return c;
}

double norm(std::span<const PlanarPiece> pieces, const SobolevSpec& spec) {
  validate(spec);
  switch (spec.method) {
    case SobolevMethod::cartesian:
      return std::sqrt(std::max(0.0, cartesian_norm_squared(pieces, spec)));
    case SobolevMethod::slobodeckij: {
      const double raw = slobodeckij_raw(pieces, spec.s, spec.slob_points);
      const double c = slobodeckij_constant_calibrated(spec.s, spec.slob_points);
      double v = c * raw;
      if (!spec.homogeneous) {
        // add the L^2 part from the same lattice
        SobolevSpec l2 = spec;
        l2.method = SobolevMethod::cartesian;
        l2.s = 0.0;
        l2.homogeneous = true;
        v += cartesian_norm_squared(pieces, l2);
      }
      return std::sqrt(std::max(0.0, v));
    }
    case SobolevMethod::hankel:
      throw std::invalid_argument("translated pieces need the cartesian or slobodeckij method");
  }
  return 0.0;
}

NegNormTable neg_norm_scan(const RadialProfile& g, const std::function<double(double)>& phase,
                           std::span<const double> k_list, int n, double eta,
                           const std::function<double(double)>& phase_err) {
  NegNormTable table;
  if (g.empty()) {
    for (double k : k_list) table.rows.push_back({k, 0.0});
    return table;
  }
  const auto [lo, hi] = g.hull();
  const double r0 = 0.97 * lo, r1 = 1.03 * hi;
  const double kmax = *std::max_element(k_list.begin(), k_list.end());
  // resolve the phase K f(r): at most 0.15 rad per node
  double slope = 0.0;
  for (int q = 0; q <= 200; ++q) {
    const double r = r0 + (r1 - r0) * q / 200.0, e = 1e-6 * r;
    slope = std::max(slope, std::abs(phase(r + e) - phase(r - e)) / (2.0 * e) * r);
  }
  const double du = std::min(std::log(r1 / r0) / 400.0, 0.15 / std::max(kmax * slope, 1e-30));
  auto grid = make_log_grid(r0, r1, static_cast<std::size_t>(std::ceil(std::log(r1 / r0) / du)) + 1);
  SobolevSpec spec;
  spec.s = -eta;
  std::vector<double> xs, ys;
  for (double k : k_list) {
    PolarField f(grid, n, n);
    auto row = f.row(1);
    for (std::size_t i = 0; i < f.n_r(); ++i) {
      const double r = grid->node(i);
      const double th = k * phase(r) - (phase_err ? phase_err(r) : 0.0);
      row[i] = 0.5 * g(r) * std::polar(1.0, -th);
    }
    const double v = norm(f, spec);
    table.rows.push_back({k, v});
    if (v > 0.0 && k > 0.0) {
      xs.push_back(std::log(k));
      ys.push_back(std::log(v));
    }
  }
  if (auto fit = ols(xs, ys)) table.slope = fit->slope;
  return table;
}

InterpolationCheck interpolation_check(const PolarField& field, double q, double r, double s) {
  if (!(q < r && r < s)) throw std::invalid_argument("interpolation needs q < r < s");
  SobolevSpec spec;
  auto nrm = [&](double t) {
    spec.s = t;
    return norm(field, spec);
  };
  const double theta = (r - q) / (s - q);
  InterpolationCheck c;
  c.lhs = nrm(r);
  c.rhs = std::pow(nrm(s), theta) * std::pow(nrm(q), 1.0 - theta);
  c.holds = c.lhs <= (1.0 + 1e-3) * c.rhs;
  return c;
}

SuperadditivityCheck superadditivity_check(std::span<const PlanarPiece> pieces, const SobolevSpec& spec) {
  SuperadditivityCheck out;
  out.min_distance = INFINITY;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const double d = std::hypot(pieces[i].cx - pieces[j].cx, pieces[i].cy - pieces[j].cy) -
                       pieces[i].radius - pieces[j].radius;
      if (!(d > 0.0)) throw std::invalid_argument("pieces do not have disjoint supports");
      out.min_distance = std::min(out.min_distance, d);
    }
  out.whole = norm(pieces, spec);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double v = norm(pieces.subspan(i, 1), spec);
    out.sum_of_norms += v;
    out.sum_of_squares += v * v;
  }
  out.margin = out.whole - out.sum_of_norms;
  out.relative_margin = out.sum_of_norms > 0.0 ? out.margin / out.sum_of_norms : 0.0;
  out.cross_terms = out.whole * out.whole - out.sum_of_squares;
  return out;
}

}  // namespace eulerinf

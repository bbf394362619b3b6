#include "eulerinf/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eulerinf/pseudosolution.hpp"

namespace eulerinf {

InflationReport inflation_measure(const TrajectoryRecord& rec, const InflationParams& p, double beta_prime) {
  const auto it = std::find(rec.hs_orders.begin(), rec.hs_orders.end(), beta_prime);
  if (it == rec.hs_orders.end()) throw std::invalid_argument("record has no monitor at the requested order");
  if (rec.rows.empty()) throw std::invalid_argument("empty trajectory record");
  const auto col = static_cast<std::size_t>(it - rec.hs_orders.begin());
  const std::string est_name = "pseudo_hs_est_" + order_label(beta_prime);

  InflationReport out;
  out.beta_prime = beta_prime;
  const double l2_0 = rec.rows.front().osc_l2;
  const double scale = p.n * std::pow(p.lambda, 2.0 - p.beta);
  for (const auto& row : rec.rows) {
    out.t.push_back(row.t);
    out.measured.push_back(row.hs.at(col));
    double pred = row.osc_l2 * std::pow(row.osc_wavenumber, beta_prime);
    for (const auto& [name, v] : row.extra) {
      if (name == est_name) pred = v;
    }
    out.predicted.push_back(pred);
    out.asymptotic.push_back(l2_0 * std::pow(scale * row.t, beta_prime));
  }

  const double m0 = out.measured.front();
  out.growth_factor = m0 > 0.0 ? out.measured.back() / m0 : 1.0;
  for (std::size_t k = 2; k < out.measured.size(); ++k) {
    if (!(out.measured[k] > out.measured[k - 1])) {
      out.monotone_after_transient = false;
      out.first_decrease = k;
      break;
    }
  }
  bool any = false;
  for (std::size_t k = 0; k < out.t.size(); ++k) {
    if (!(out.t[k] > 0.0) || !(out.measured[k] > 0.0)) continue;
    const double r = out.predicted[k] / out.measured[k];
    out.min_ratio = any ? std::min(out.min_ratio, r) : r;
    out.max_ratio = any ? std::max(out.max_ratio, r) : r;
    any = true;
  }
  return out;
}

}  // namespace eulerinf

#include "gsample/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsample {

std::optional<double> scaling_ratio(double theta_s, double theta_a, double offset) {
  const double a = theta_a + offset;
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(theta_s)) return std::nullopt;
  return (theta_s + offset) / a;
}

double rmse(std::span<const double> samples, double truth) {
  if (samples.empty()) throw std::invalid_argument("rmse of an empty list");
  double sum = 0;
  for (double s : samples) sum += (s - truth) * (s - truth);
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

double jsd(const Distribution& p, const Distribution& q, LogBase base) {
  for (const auto* d : {&p, &q})
    if (std::abs(d->total() - 1.0) > 1e-6)
      throw std::invalid_argument("distribution is not normalized (mass " +
                                  std::to_string(d->total()) + ")");
  const auto a = align(p, q);
  const double norm = base == LogBase::two ? std::log(2.0) : 1.0;
  double div = 0;
  for (std::size_t i = 0; i < a.support.size(); ++i) {
    const double pi = a.p[i], qi = a.q[i];
    const double mi = 0.5 * (pi + qi);
    double term_p = 0, term_q = 0;
    if (pi > 0) term_p = pi * std::log(pi / mi);
    if (qi > 0) term_q = qi * std::log(qi / mi);
    div += 0.5 * term_p + 0.5 * term_q;
  }
  div /= norm;
  return std::sqrt(std::max(div, 0.0));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double s = 0;
  for (double v : values) s += (v - mu) * (v - mu);
  return std::sqrt(s / static_cast<double>(values.size() - 1));
}

ConfidenceInterval confidence_interval_95(std::span<const double> values) {
  ConfidenceInterval ci;
  ci.mean = mean(values);
  if (values.size() >= 2)
    ci.half_width = 1.96 * stddev(values) / std::sqrt(static_cast<double>(values.size()));
  return ci;
}

}  // namespace gsample

#pragma once

#include <optional>
#include <span>

#include "gsample/distribution.hpp"

namespace gsample {

/// theta_s / theta_a after adding `offset` to both (offset 1 maps
/// assortativity from [-1, 1] to [0, 2]). nullopt when the shifted
/// theta_a is 0.
std::optional<double> scaling_ratio(double theta_s, double theta_a, double offset = 0.0);

/// sqrt(mean((theta_s - truth)^2)). Throws std::invalid_argument when empty.
double rmse(std::span<const double> samples, double truth);

enum class LogBase { two, natural };

/// Jensen-Shannon distance: the square root of the Jensen-Shannon
/// divergence, over the union of both supports. With base-2 logarithms the
/// result lies in [0, 1]. Throws std::invalid_argument when either input's
/// mass differs from 1 by more than 1e-6.
double jsd(const Distribution& p, const Distribution& q, LogBase base = LogBase::two);

struct ConfidenceInterval {
  double mean = 0;
  std::optional<double> half_width;  ///< nullopt with fewer than two values
};

/// mean +- 1.96 * s / sqrt(k) with the sample standard deviation s.
ConfidenceInterval confidence_interval_95(std::span<const double> values);

double mean(std::span<const double> values);
/// Sample standard deviation (k - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> values);

}  // namespace gsample

#include "gsample/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace gsample {

namespace {

void check_support(const std::vector<double>& support) {
  if (std::adjacent_find(support.begin(), support.end(),
                         [](double a, double b) { return !(a < b); }) != support.end())
    throw std::invalid_argument("distribution support must be strictly increasing");
}

}  // namespace

Distribution Distribution::from_counts(std::vector<double> support,
                                       std::span<const std::uint64_t> counts) {
  if (support.size() != counts.size())
    throw std::invalid_argument("support and counts differ in length");
  check_support(support);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("distribution has no mass");
  Distribution d;
  d.support_ = std::move(support);
  d.pmf_.reserve(counts.size());
  for (auto c : counts) d.pmf_.push_back(static_cast<double>(c) / static_cast<double>(total));
  return d;
}

Distribution Distribution::from_pmf(std::vector<double> support, std::vector<double> pmf) {
  if (support.size() != pmf.size())
    throw std::invalid_argument("support and pmf differ in length");
  check_support(support);
  for (double w : pmf)
    if (!(w >= 0.0)) throw std::invalid_argument("negative probability mass");
  Distribution d;
  d.support_ = std::move(support);
  d.pmf_ = std::move(pmf);
  return d;
}

double Distribution::total() const {
  double s = 0;
  for (double w : pmf_) s += w;
  return s;
}

std::vector<double> Distribution::ecdf() const {
  std::vector<double> out(pmf_.size());
  double acc = 0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    acc += pmf_[i];
    out[i] = std::min(acc, 1.0);
  }
  // Absorb rounding in the prefix sums so a normalized pmf ends at exactly 1.
  if (!out.empty() && std::abs(out.back() - 1.0) < 1e-9) out.back() = 1.0;
  return out;
}

double Distribution::at(double x) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), x);
  if (it == support_.end() || *it != x) return 0.0;
  return pmf_[static_cast<std::size_t>(it - support_.begin())];
}

void Distribution::write_csv(std::ostream& out) const {
  out << "support,pmf,ecdf\n";
  const auto cdf = ecdf();
  char buf[96];
  for (std::size_t i = 0; i < support_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.17g,%.17g\n", support_[i], pmf_[i], cdf[i]);
    out << buf;
  }
}

AlignedPair align(const Distribution& p, const Distribution& q) {
  AlignedPair out;
  const auto& sp = p.support();
  const auto& sq = q.support();
  std::size_t i = 0, j = 0;
  while (i < sp.size() || j < sq.size()) {
    if (j == sq.size() || (i < sp.size() && sp[i] < sq[j])) {
      out.support.push_back(sp[i]);
      out.p.push_back(p.pmf()[i++]);
      out.q.push_back(0.0);
    } else if (i == sp.size() || sq[j] < sp[i]) {
      out.support.push_back(sq[j]);
      out.p.push_back(0.0);
      out.q.push_back(q.pmf()[j++]);
    } else {
      out.support.push_back(sp[i]);
      out.p.push_back(p.pmf()[i++]);
      out.q.push_back(q.pmf()[j++]);
    }
  }
  return out;
}

Distribution average(std::span<const Distribution> dists) {
  if (dists.empty()) throw std::invalid_argument("nothing to average");
  std::map<double, double> acc;
  for (const auto& d : dists)
    for (std::size_t i = 0; i < d.size(); ++i) acc[d.support()[i]] += d.pmf()[i];
  std::vector<double> support, pmf;
  for (auto [x, w] : acc) {
    support.push_back(x);
    pmf.push_back(w / static_cast<double>(dists.size()));
  }
  return Distribution::from_pmf(std::move(support), std::move(pmf));
}

}  // namespace gsample

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace gsample {

/// Probability mass function over an ordered, discrete support.
///
/// Supports are integer degrees, integer hop counts, or the left edges of the
/// 100 clustering-coefficient bins. Two distributions are compared after
/// aligning their supports (union, missing entries weigh 0).
class Distribution {
 public:
  Distribution() = default;

  /// support strictly increasing; counts must not all be zero.
  static Distribution from_counts(std::vector<double> support,
                                  std::span<const std::uint64_t> counts);

  /// Takes weights as given; throws if the support is not strictly increasing
  /// or a weight is negative. Normalization is not enforced here.
  static Distribution from_pmf(std::vector<double> support, std::vector<double> pmf);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& pmf() const { return pmf_; }
  std::size_t size() const { return support_.size(); }
  bool empty() const { return support_.empty(); }
  double total() const;

  /// Prefix sums of the pmf; the last entry is 1 for a normalized pmf.
  std::vector<double> ecdf() const;

  /// Weight at x (0 when x is not in the support).
  double at(double x) const;

  /// "support,pmf,ecdf" CSV with a header line.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> support_;
  std::vector<double> pmf_;
};

/// Both pmfs re-expressed over the union of their supports.
struct AlignedPair {
  std::vector<double> support;
  std::vector<double> p;
  std::vector<double> q;
};
AlignedPair align(const Distribution& p, const Distribution& q);

/// Mean of several pmfs over the union support.
Distribution average(std::span<const Distribution> dists);

}  // namespace gsample

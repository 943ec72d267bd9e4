#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rjd {

/// A finite weighted sample on the line, kept sorted by point.
///
/// Weights are normalized to sum to 1 on construction. Points are usually
/// states of the process (hence nonnegative) but any finite reals are
/// accepted so that translated copies remain representable.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> points);
  EmpiricalDistribution(std::vector<double> points, std::vector<double> weights);

  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool uniform() const { return uniform_; }

  double mean() const;

  /// Copy with every point shifted by c.
  EmpiricalDistribution translated(double c) const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  bool uniform_ = true;
};

}  // namespace rjd

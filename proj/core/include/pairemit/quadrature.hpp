#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pairemit {

/// n-point Gauss-Legendre rule on [-1, 1]. Nodes are ascending; the rule is
/// open, so no node ever sits on an interval endpoint.
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t points);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Nodes mapped affinely onto [a, b].
  std::vector<double> nodes_on(double a, double b) const;

  double integrate(const std::function<double(double)>& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct AdaptiveOptions {
  double relative_tolerance = 1e-8;
  double absolute_tolerance = 0.0;
  std::size_t max_panels = 4000;
};

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Globally adaptive bisection: each panel is integrated with `rule` and with
/// the rule applied to its two halves; the panel with the largest difference
/// is split until the summed difference meets the tolerance. `breakpoints`
/// must be ascending and hold at least the two interval ends.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const GaussLegendre& rule,
                                  const AdaptiveOptions& options = {});

}  // namespace pairemit

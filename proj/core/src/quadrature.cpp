#include "pairemit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <tuple>
#include <utility>

#include "pairemit/errors.hpp"

namespace pairemit {

GaussLegendre::GaussLegendre(std::size_t points) : nodes_(points), weights_(points) {
  if (points == 0) {
    throw DomainError("Gauss-Legendre rule needs at least one node");
  }
  const std::size_t n = points;
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p_prev = 1.0;
      double p = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p_next = ((2.0 * kk - 1.0) * x * p - (kk - 1.0) * p_prev) / kk;
        p_prev = p;
        p = p_next;
      }
      derivative = static_cast<double>(n) * (x * p - p_prev) / (x * x - 1.0);
      const double step = p / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    nodes_[n / 2] = 0.0;
  }
}

std::vector<double> GaussLegendre::nodes_on(double a, double b) const {
  std::vector<double> out(nodes_.size());
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::transform(nodes_.begin(), nodes_.end(), out.begin(),
                 [&](double x) { return mid + half * x; });
  return out;
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a,
                                double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    sum += weights_[i] * f(mid + half * nodes_[i]);
  }
  return half * sum;
}

namespace {

struct Panel {
  double a;
  double b;
  double coarse;
  double left;
  double right;

  double refined() const { return left + right; }
  double error() const { return std::abs(refined() - coarse); }
  bool operator<(const Panel& other) const { return error() < other.error(); }
};

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const GaussLegendre& rule,
                                  const AdaptiveOptions& options) {
  if (breakpoints.size() < 2 || !std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw DomainError("adaptive quadrature needs at least two ascending breakpoints");
  }

  AdaptiveResult result;
  const auto make_panel = [&](double a, double b, double coarse) {
    const double m = 0.5 * (a + b);
    Panel panel{a, b, coarse, rule.integrate(f, a, m), rule.integrate(f, m, b)};
    result.evaluations += 2 * rule.size();
    return panel;
  };

  std::priority_queue<Panel> queue;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (b <= a) {
      continue;
    }
    const double coarse = rule.integrate(f, a, b);
    result.evaluations += rule.size();
    queue.push(make_panel(a, b, coarse));
  }

  const auto totals = [&queue] {
    // priority_queue has no iteration; copy is cheap at the panel counts used.
    auto copy = queue;
    double value = 0.0;
    double error = 0.0;
    while (!copy.empty()) {
      value += copy.top().refined();
      error += copy.top().error();
      copy.pop();
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  while (!queue.empty()) {
    const double target =
        std::max(options.absolute_tolerance, options.relative_tolerance * std::abs(value));
    if (error <= target) {
      result.converged = true;
      break;
    }
    if (queue.size() >= options.max_panels) {
      break;
    }
    const Panel worst = queue.top();
    queue.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      break;
    }
    Panel left = make_panel(worst.a, m, worst.left);
    Panel right = make_panel(m, worst.b, worst.right);
    value += left.refined() + right.refined() - worst.refined();
    error += left.error() + right.error() - worst.error();
    queue.push(left);
    queue.push(right);
  }

  std::tie(value, error) = totals();
  result.value = value;
  result.error_estimate = error;
  result.panels = queue.size();
  if (!result.converged) {
    const double target =
        std::max(options.absolute_tolerance, options.relative_tolerance * std::abs(value));
    result.converged = error <= target;
  }
  return result;
}

}  // namespace pairemit

#include "gaussbell/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gaussbell::numerics {

namespace {

GaussRule build_rule(int n) {
  // Newton iteration on P_n from the Chebyshev-like initial guesses.
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[idx] = 0.5 * (x + 1.0);
    rule.weights[idx] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre_unit(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<GaussRule>(build_rule(n))).first;
  }
  return *it->second;
}

std::vector<double> graded_breakpoints(double edge_width) {
  const double w = std::clamp(edge_width, 1e-12, 0.25);
  std::vector<double> left{0.0};
  for (double x = w; x < 0.5 - 1e-12; x *= 2.0) left.push_back(x);
  std::vector<double> out = left;
  out.push_back(0.5);
  for (auto it = left.rbegin(); it != left.rend(); ++it) out.push_back(1.0 - *it);
  return out;
}

double composite_gauss(const std::function<double(double)>& f,
                       const std::vector<double>& breakpoints, int n) {
  const GaussRule& rule = gauss_legendre_unit(n);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double lo = breakpoints[k];
    const double h = breakpoints[k + 1] - lo;
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      panel += rule.weights[i] * f(lo + h * rule.nodes[i]);
    }
    total += h * panel;
  }
  return total;
}

double periodic_gaussian(double x, double b, double period) {
  constexpr double cut = 40.0;
  if (b * period * period >= std::numbers::pi) {
    const double k0 = std::round(-x / period);
    const int kmax = static_cast<int>(std::ceil(std::sqrt(cut / b) / period)) + 1;
    double sum = 0.0;
    for (int k = -kmax; k <= kmax; ++k) {
      const double y = x + period * (k0 + k);
      sum += std::exp(-b * y * y);
    }
    return sum;
  }
  const double q = std::numbers::pi * std::numbers::pi / (b * period * period);
  const int jmax = static_cast<int>(std::ceil(std::sqrt(cut / q))) + 1;
  const double omega = 2.0 * std::numbers::pi / period;
  double sum = 1.0;
  for (int j = 1; j <= jmax; ++j) {
    sum += 2.0 * std::exp(-q * j * j) * std::cos(omega * j * x);
  }
  return sum * std::sqrt(std::numbers::pi / b) / period;
}

double periodic_gaussian_bound(double b, double period) {
  return 1.0 + std::sqrt(std::numbers::pi / b) / period;
}

double erf_pair(double a, double z, long d) {
  if (d == 0) return 2.0 * std::erf(a * z);
  const double ad = static_cast<double>(d < 0 ? -d : d);
  return std::erfc(a * (ad - z)) - std::erfc(a * (ad + z));
}

double erfc_tail_bound(double a, long e0) {
  const double x = a * static_cast<double>(e0);
  return std::erfc(x) + std::exp(-x * x) / (a * std::sqrt(std::numbers::pi));
}

}  // namespace gaussbell::numerics

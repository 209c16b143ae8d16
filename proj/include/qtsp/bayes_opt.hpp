#pragma once

// Box-constrained black-box minimization on [0,1]^d with a Gaussian-process
// surrogate (squared-exponential kernel) and expected improvement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "qtsp/error.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

struct BoOptions {
  std::uint64_t budget = 60;
  std::uint64_t initial = 10;  // random design points before the surrogate is used
  std::uint64_t seed = 0;
  bool random_search = false;  // skip the surrogate entirely
  std::uint64_t candidates = 2000;
};

struct BoEntry {
  std::vector<double> x; // unit-box coordinates
  double y = 0.0;
};

struct BoResult {
  std::vector<BoEntry> trace;
  std::size_t best = 0;
};

class GaussianProcess {
public:
  /// Fits the standardized targets, choosing length scale and noise by
  /// maximum marginal likelihood over a small grid.
  GaussianProcess(const std::vector<std::vector<double>>& xs, const std::vector<double>& ys) : xs_(xs) {
    const auto n = Eigen::Index(ys.size());
    mean_ = 0.0;
    for (double y : ys) mean_ += y;
    mean_ /= double(n);
    double var = 0.0;
    for (double y : ys) var += (y - mean_) * (y - mean_);
    sd_ = var > 0.0 ? std::sqrt(var / double(n)) : 1.0;
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = (ys[std::size_t(i)] - mean_) / sd_;

    const double d = xs.empty() ? 1.0 : double(xs[0].size());
    double best_ll = -std::numeric_limits<double>::infinity();
    for (double ls : {0.1, 0.2, 0.35, 0.5, 0.8, 1.2}) {
      for (double noise : {1e-6, 1e-3, 1e-2, 1e-1}) {
        const double l = ls * std::sqrt(d);
        Eigen::MatrixXd k(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(xs[std::size_t(i)], xs[std::size_t(j)], l);
        k.diagonal().array() += noise;
        Eigen::LLT<Eigen::MatrixXd> llt(k);
        if (llt.info() != Eigen::Success) continue;
        const Eigen::VectorXd alpha = llt.solve(y);
        const double ll = -0.5 * y.dot(alpha) - llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        if (ll > best_ll) {
          best_ll = ll;
          length_ = l;
          noise_ = noise;
          llt_ = llt;
          alpha_ = alpha;
        }
      }
    }
    if (!std::isfinite(best_ll)) throw BackendFailure("GP fit failed for every hyperparameter setting");
  }

  /// Posterior mean and standard deviation in original units.
  std::pair<double, double> predict(std::span<const double> x) const {
    const auto n = Eigen::Index(xs_.size());
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i) ks(i) = kernel(xs_[std::size_t(i)], x, length_);
    const double mu = ks.dot(alpha_);
    const Eigen::VectorXd v = llt_.matrixL().solve(ks);
    const double var = std::max(1.0 - v.squaredNorm(), 1e-12);
    return {mean_ + sd_ * mu, sd_ * std::sqrt(var)};
  }

  double length_scale() const { return length_; }
  double noise() const { return noise_; }

private:
  static double kernel(std::span<const double> a, std::span<const double> b, double l) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-0.5 * s / (l * l));
  }

  std::vector<std::vector<double>> xs_;
  double mean_ = 0.0, sd_ = 1.0, length_ = 1.0, noise_ = 1e-6;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

/// EI for minimization.
inline double expected_improvement(double mu, double sigma, double best, double xi = 0.01) {
  if (sigma <= 0.0) return std::max(best - mu - xi, 0.0);
  const double z = (best - mu - xi) / sigma;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return (best - mu - xi) * cdf + sigma * pdf;
}

/// Minimizes f over [0,1]^dim with exactly `budget` evaluations. The
/// acquisition is maximized over uniform candidates plus Gaussian
/// perturbations of the best observed points.
inline BoResult bo_minimize(const std::function<double(std::span<const double>)>& f, std::size_t dim,
                            const BoOptions& o) {
  if (dim == 0) throw InvalidArgument("dimension must be positive");
  if (o.budget < 1) throw InvalidArgument("budget must be >= 1");
  Rng rng = make_rng(o.seed, 0);
  BoResult r;
  auto record = [&](std::vector<double> x) {
    const double y = f(x);
    if (!std::isfinite(y)) throw BackendFailure("objective returned a non-finite value");
    r.trace.push_back({std::move(x), y});
    if (y < r.trace[r.best].y) r.best = r.trace.size() - 1;
  };
  auto random_point = [&] {
    std::vector<double> x(dim);
    for (auto& v : x) v = uniform01(rng);
    return x;
  };

  const std::uint64_t initial = o.random_search ? o.budget : std::min(o.budget, std::max<std::uint64_t>(o.initial, 2));
  for (std::uint64_t i = 0; i < initial; ++i) record(random_point());

  while (r.trace.size() < o.budget) {
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& e : r.trace) xs.push_back(e.x), ys.push_back(e.y);
    const GaussianProcess gp(xs, ys);
    const double incumbent = r.trace[r.best].y;

    std::vector<std::size_t> order(r.trace.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.trace[a].y < r.trace[b].y; });
    const std::size_t elite = std::min<std::size_t>(5, order.size());

    std::vector<double> best_x;
    double best_ei = -1.0;
    for (std::uint64_t c = 0; c < o.candidates; ++c) {
      std::vector<double> x;
      if (c % 2 == 0) {
        x = random_point();
      } else {
        x = r.trace[order[c / 2 % elite]].x;
        const double sigma = c % 4 == 1 ? 0.05 : 0.15;
        for (auto& v : x) v = std::clamp(v + sigma * normal01(rng), 0.0, 1.0);
      }
      const auto [mu, sd] = gp.predict(x);
      const double ei = expected_improvement(mu, sd, incumbent);
      if (ei > best_ei) best_ei = ei, best_x = std::move(x);
    }
    record(std::move(best_x));
  }
  return r;
}

} // namespace qtsp

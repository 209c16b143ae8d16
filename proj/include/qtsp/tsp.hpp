#pragma once

#include "qtsp/error.hpp"
#include "qtsp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qtsp {

/// Symmetric TSP instance over `n` cities with a full row-major distance matrix.
class TspInstance {
public:
  TspInstance(std::vector<std::vector<double>> distances, std::string label = {},
              std::optional<std::uint64_t> seed = std::nullopt)
      : label_(std::move(label)), seed_(seed) {
    n_ = distances.size();
    if (n_ < 3) {
      throw InvalidInstance("TSP instance needs at least 3 cities, got " + std::to_string(n_));
    }
    d_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (distances[i].size() != n_) {
        throw InvalidInstance("distance matrix row " + std::to_string(i) + " has length " +
                              std::to_string(distances[i].size()) + ", expected " +
                              std::to_string(n_));
      }
      for (std::size_t j = 0; j < n_; ++j) {
        d_[i * n_ + j] = distances[i][j];
      }
    }
    validate();
  }

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  const std::string& label() const noexcept { return label_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  double max_distance() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (i != j) best = std::max(best, (*this)(i, j));
      }
    }
    return best;
  }

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
    }
    return out;
  }

  friend bool operator==(const TspInstance&, const TspInstance&) = default;

private:
  void validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*this)(i, i) != 0.0) {
        throw InvalidInstance("distance matrix diagonal must be zero (row " + std::to_string(i) + ")");
      }
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double a = (*this)(i, j);
        const double b = (*this)(j, i);
        if (!std::isfinite(a) || a <= 0.0) {
          throw InvalidInstance("off-diagonal distances must be finite and positive");
        }
        if (a != b) {
          throw InvalidInstance("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<double> d_;
  std::string label_;
  std::optional<std::uint64_t> seed_;
};

/// Closed tour as a visiting order; city 0 is always first.
struct Tour {
  std::vector<int> order;

  std::size_t size() const noexcept { return order.size(); }
  friend bool operator==(const Tour&, const Tour&) = default;
  friend auto operator<=>(const Tour&, const Tour&) = default;
};

inline void validate_tour(const Tour& tour, std::size_t n) {
  if (tour.order.size() != n) {
    throw InvalidTour("tour has " + std::to_string(tour.order.size()) + " cities, instance has " +
                      std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (int city : tour.order) {
    if (city < 0 || static_cast<std::size_t>(city) >= n || seen[city]) {
      throw InvalidTour("tour is not a permutation of 0.." + std::to_string(n - 1));
    }
    seen[city] = true;
  }
  if (tour.order.front() != 0) throw InvalidTour("tour must start at city 0");
}

/// Cities uniform in the unit square, Euclidean distances times `scale`.
inline TspInstance generate_instance(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  if (n < 3) throw InvalidInstance("TSP instance needs at least 3 cities, got " + std::to_string(n));
  if (!(scale > 0.0)) throw InvalidInstance("distance scale must be positive");
  Rng rng = make_rng(seed, 0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& [x, y] : pts) {
    x = uniform01(rng);
    y = uniform01(rng);
  }
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second) * scale;
      d[i][j] = d[j][i] = v;
    }
  }
  return TspInstance(std::move(d), "euclid-n" + std::to_string(n) + "-s" + std::to_string(seed), seed);
}

inline double tour_cost(const TspInstance& inst, const Tour& tour) {
  validate_tour(tour, inst.n());
  const std::size_t n = inst.n();
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += inst(tour.order[j], tour.order[(j + 1) % n]);
  }
  return total;
}

struct TourOptimum {
  Tour best;
  double min_cost = 0.0;
  Tour worst;
  double max_cost = 0.0;
  std::size_t tours_enumerated = 0;
};

inline constexpr std::size_t kBruteForceMaxCities = 12;

/// Exhaustive search over all (n-1)! tours with city 0 first. Ties keep the
/// lexicographically smallest permutation.
inline TourOptimum brute_force_optimum(const TspInstance& inst) {
  const std::size_t n = inst.n();
  if (n > kBruteForceMaxCities) {
    throw CapacityExceeded("brute-force enumeration is limited to n <= " +
                           std::to_string(kBruteForceMaxCities) + " cities, got " + std::to_string(n));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  TourOptimum out;
  out.min_cost = std::numeric_limits<double>::infinity();
  out.max_cost = -std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t j = 0; j < n; ++j) c += inst(perm[j], perm[(j + 1) % n]);
    if (c < out.min_cost) {
      out.min_cost = c;
      out.best.order = perm;
    }
    if (c > out.max_cost) {
      out.max_cost = c;
      out.worst.order = perm;
    }
    ++out.tours_enumerated;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return out;
}

// JSON: {"n": int, "D": [[...]], "label": str, "seed": int|null}
inline nlohmann::json to_json(const TspInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.n();
  j["D"] = inst.matrix();
  j["label"] = inst.label();
  j["seed"] = inst.seed() ? nlohmann::json(*inst.seed()) : nlohmann::json(nullptr);
  return j;
}

inline TspInstance instance_from_json(const nlohmann::json& j) {
  try {
    auto d = j.at("D").get<std::vector<std::vector<double>>>();
    if (j.contains("n") && j.at("n").get<std::size_t>() != d.size()) {
      throw InvalidInstance("field n disagrees with the distance matrix size");
    }
    std::optional<std::uint64_t> seed;
    if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();
    return TspInstance(std::move(d), j.value("label", std::string{}), seed);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("malformed instance JSON: ") + e.what());
  }
}

} // namespace qtsp

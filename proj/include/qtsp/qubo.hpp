#pragma once

#include "qtsp/error.hpp"
#include "qtsp/tsp.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qtsp {

/// Assignment of the binary variables; index k follows the problem's variable map.
using Bits = std::vector<std::uint8_t>;

inline std::string to_string(const Bits& b) {
  std::string s(b.size(), '0');
  for (std::size_t k = 0; k < b.size(); ++k) s[k] = b[k] ? '1' : '0';
  return s;
}

inline Bits bits_from_string(std::string_view s) {
  Bits b(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] != '0' && s[k] != '1') throw InvalidArgument("bitstring may only contain '0' and '1'");
    b[k] = s[k] == '1';
  }
  return b;
}

/// Bits of basis-state index `idx` with index 0 as the most significant bit.
inline Bits bits_from_index(std::uint64_t idx, std::size_t m) {
  Bits b(m);
  for (std::size_t k = 0; k < m; ++k) b[k] = (idx >> (m - 1 - k)) & 1U;
  return b;
}

/// Square matrix storing only the strict upper triangle in use.
class UpperTriangular {
public:
  UpperTriangular() = default;
  explicit UpperTriangular(std::size_t m) : m_(m), v_(m * m, 0.0) {}

  std::size_t size() const noexcept { return m_; }

  double get(std::size_t a, std::size_t b) const {
    if (a == b) return 0.0;
    if (a > b) std::swap(a, b);
    return v_[a * m_ + b];
  }
  void add(std::size_t a, std::size_t b, double value) {
    if (a == b) throw InvalidArgument("quadratic term needs two distinct variables");
    if (a > b) std::swap(a, b);
    v_[a * m_ + b] += value;
  }

  template <class F>
  void for_each_nonzero(F&& f) const {
    for (std::size_t a = 0; a < m_; ++a) {
      for (std::size_t b = a + 1; b < m_; ++b) {
        const double q = v_[a * m_ + b];
        if (q != 0.0) f(a, b, q);
      }
    }
  }

  friend bool operator==(const UpperTriangular&, const UpperTriangular&) = default;

private:
  std::size_t m_ = 0;
  std::vector<double> v_;
};

/// (city, time) pair of a reduced-encoding variable; both in 1..n-1.
struct CityTime {
  int city = 0;
  int time = 0;
  friend bool operator==(const CityTime&, const CityTime&) = default;
};

/// Reduced one-hot TSP variable map: city 0 is pinned to time 0, leaving
/// (n-1)^2 variables indexed city-major, k = (city-1)*(n-1) + (time-1).
class VariableMap {
public:
  VariableMap() = default;
  explicit VariableMap(std::size_t n) : n_(n) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return (n_ - 1) * (n_ - 1); }

  std::size_t index(int city, int time) const {
    if (city < 1 || time < 1 || static_cast<std::size_t>(city) >= n_ || static_cast<std::size_t>(time) >= n_) {
      throw InvalidArgument("city/time pair outside the reduced encoding");
    }
    return static_cast<std::size_t>(city - 1) * (n_ - 1) + static_cast<std::size_t>(time - 1);
  }
  CityTime at(std::size_t k) const {
    if (k >= size()) throw InvalidArgument("variable index out of range");
    return {static_cast<int>(k / (n_ - 1)) + 1, static_cast<int>(k % (n_ - 1)) + 1};
  }

private:
  std::size_t n_ = 0;
};

/// E(b) = offset + linear . b + sum_{k<l} Q_kl b_k b_l
struct QuboProblem {
  UpperTriangular quadratic;
  std::vector<double> linear;
  double offset = 0.0;
  std::size_t n = 0; // originating city count; 0 when not built from a TSP
  double penalty = 0.0;

  std::size_t size() const noexcept { return linear.size(); }
  VariableMap var_map() const { return VariableMap(n); }
};

/// E(s) = offset + h . s + sum_{k<l} J_kl s_k s_l with bit 1 <-> s = -1.
struct IsingProblem {
  std::vector<double> h;
  UpperTriangular coupling;
  double offset = 0.0;

  std::size_t size() const noexcept { return h.size(); }
};

inline QuboProblem make_qubo(std::size_t m) {
  QuboProblem q;
  q.quadratic = UpperTriangular(m);
  q.linear.assign(m, 0.0);
  return q;
}

/// P = 2 n max D; large enough that the QUBO minimum is a valid tour.
inline double default_penalty(const TspInstance& inst) {
  return 2.0 * static_cast<double>(inst.n()) * inst.max_distance();
}

/// Lower penalty used for annealing. Dropping a city saves at most 2 maxD of
/// path and costs 2P, so P > maxD keeps feasible states lowest; 1.5 adds margin.
/// Smaller P lowers the barriers single-flip samplers must cross.
inline double tight_penalty(const TspInstance& inst) { return 1.5 * inst.max_distance(); }

/// Path length plus P times the squared one-hot violations of every row and
/// column, with city 0 substituted at time 0 so only (n-1)^2 variables remain.
inline QuboProblem encode_tsp(const TspInstance& inst, double penalty) {
  if (!(penalty > 0.0)) throw InvalidArgument("penalty must be positive");
  const std::size_t n = inst.n();
  const VariableMap vm(n);
  QuboProblem q = make_qubo(vm.size());
  q.n = n;
  q.penalty = penalty;
  const int last = static_cast<int>(n) - 1;

  // Legs out of and back into city 0 become linear terms.
  for (int c = 1; c <= last; ++c) {
    q.linear[vm.index(c, 1)] += inst(0, c);
    q.linear[vm.index(c, last)] += inst(c, 0);
  }
  for (int t = 1; t < last; ++t) {
    for (int a = 1; a <= last; ++a) {
      for (int b = 1; b <= last; ++b) {
        if (a != b) q.quadratic.add(vm.index(a, t), vm.index(b, t + 1), inst(a, b));
      }
    }
  }

  // (1 - sum x)^2 = 1 - sum x + 2 sum_{pairs} x x  for binary x.
  for (int g = 1; g <= last; ++g) {
    q.offset += 2.0 * penalty; // row g and column g
    for (int u = 1; u <= last; ++u) {
      q.linear[vm.index(g, u)] -= penalty;
      q.linear[vm.index(u, g)] -= penalty;
      for (int w = u + 1; w <= last; ++w) {
        q.quadratic.add(vm.index(g, u), vm.index(g, w), 2.0 * penalty);
        q.quadratic.add(vm.index(u, g), vm.index(w, g), 2.0 * penalty);
      }
    }
  }
  return q;
}

inline double qubo_energy(const QuboProblem& q, const Bits& b) {
  if (b.size() != q.size()) {
    throw SizeMismatch("bitstring has " + std::to_string(b.size()) + " bits, QUBO has " +
                       std::to_string(q.size()) + " variables");
  }
  double e = q.offset;
  const std::size_t m = q.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (!b[k]) continue;
    e += q.linear[k];
    for (std::size_t l = k + 1; l < m; ++l) {
      if (b[l]) e += q.quadratic.get(k, l);
    }
  }
  return e;
}

inline double ising_energy(const IsingProblem& p, const Bits& b) {
  if (b.size() != p.size()) {
    throw SizeMismatch("bitstring has " + std::to_string(b.size()) + " bits, Ising problem has " +
                       std::to_string(p.size()) + " spins");
  }
  const std::size_t m = p.size();
  auto spin = [&](std::size_t k) { return b[k] ? -1.0 : 1.0; };
  double e = p.offset;
  for (std::size_t k = 0; k < m; ++k) {
    e += p.h[k] * spin(k);
    for (std::size_t l = k + 1; l < m; ++l) e += p.coupling.get(k, l) * spin(k) * spin(l);
  }
  return e;
}

/// Spin map x = (1 - s)/2.
inline IsingProblem qubo_to_ising(const QuboProblem& q) {
  const std::size_t m = q.size();
  IsingProblem p;
  p.h.assign(m, 0.0);
  p.coupling = UpperTriangular(m);
  p.offset = q.offset;
  for (std::size_t k = 0; k < m; ++k) {
    p.offset += q.linear[k] / 2.0;
    p.h[k] -= q.linear[k] / 2.0;
  }
  q.quadratic.for_each_nonzero([&](std::size_t a, std::size_t b, double v) {
    p.offset += v / 4.0;
    p.h[a] -= v / 4.0;
    p.h[b] -= v / 4.0;
    p.coupling.add(a, b, v / 4.0);
  });
  return p;
}

/// Outcome of decoding a bitstring; `tour` is set iff the assignment is feasible.
struct DecodeResult {
  std::optional<Tour> tour;
  int violations = 0; // rows plus columns of the full n x n grid that are not one-hot

  bool feasible() const noexcept { return tour.has_value(); }
};

inline DecodeResult decode(const Bits& b, std::size_t n) {
  if (n < 3) throw InvalidArgument("decode needs n >= 3");
  const VariableMap vm(n);
  if (b.size() != vm.size()) {
    throw SizeMismatch("bitstring has " + std::to_string(b.size()) + " bits, expected (n-1)^2 = " +
                       std::to_string(vm.size()));
  }
  // Full grid with the eliminated city-0 row and time-0 column restored.
  std::vector<int> row(n, 0), col(n, 0);
  std::vector<int> city_at(n, -1);
  row[0] = col[0] = 1;
  city_at[0] = 0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!b[k]) continue;
    const auto [c, t] = vm.at(k);
    ++row[c];
    ++col[t];
    city_at[t] = c;
  }
  DecodeResult out;
  for (std::size_t g = 0; g < n; ++g) {
    out.violations += (row[g] != 1) + (col[g] != 1);
  }
  if (out.violations == 0) out.tour = Tour{std::move(city_at)};
  return out;
}

inline bool is_feasible(const Bits& b, std::size_t n) { return decode(b, n).feasible(); }

/// Bits for a tour under the reduced encoding (inverse of decode).
inline Bits encode_tour(const Tour& tour, std::size_t n) {
  validate_tour(tour, n);
  const VariableMap vm(n);
  Bits b(vm.size(), 0);
  for (std::size_t t = 1; t < n; ++t) b[vm.index(tour.order[t], static_cast<int>(t))] = 1;
  return b;
}

// {"m", "offset", "linear": [...], "quadratic": [[k1, k2, val], ...]}
inline nlohmann::json to_json(const QuboProblem& q) {
  nlohmann::json j;
  j["m"] = q.size();
  j["offset"] = q.offset;
  j["linear"] = q.linear;
  auto quad = nlohmann::json::array();
  q.quadratic.for_each_nonzero([&](std::size_t a, std::size_t b, double v) {
    quad.push_back(nlohmann::json::array({a, b, v}));
  });
  j["quadratic"] = std::move(quad);
  if (q.n) j["n"] = q.n;
  if (q.penalty > 0.0) j["penalty"] = q.penalty;
  return j;
}

inline QuboProblem qubo_from_json(const nlohmann::json& j) {
  try {
    const auto m = j.at("m").get<std::size_t>();
    QuboProblem q = make_qubo(m);
    q.offset = j.at("offset").get<double>();
    q.linear = j.at("linear").get<std::vector<double>>();
    if (q.linear.size() != m) throw SizeMismatch("linear term count disagrees with m");
    for (const auto& t : j.at("quadratic")) {
      const auto a = t.at(0).get<std::size_t>();
      const auto b = t.at(1).get<std::size_t>();
      if (a >= m || b >= m) throw InvalidArgument("quadratic index out of range");
      q.quadratic.add(a, b, t.at(2).get<double>());
    }
    q.n = j.value("n", std::size_t{0});
    q.penalty = j.value("penalty", 0.0);
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed QUBO JSON: ") + e.what());
  }
}

} // namespace qtsp

#pragma once

// Analytic minor-embedding size estimate for a complete logical graph on a
// unit-cell hardware graph. Not an embedding search.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtsp/error.hpp"

namespace qtsp {

struct TopologySpec {
  std::string name;
  std::uint64_t shore = 4; // kappa: native unit-cell width
  std::uint64_t qubit_budget = 0;
  std::uint64_t coupler_budget = 0;
  double inflation = 1.0; // alpha: heuristic overhead factor

  void validate() const {
    if (shore < 1) throw InvalidArgument("shore must be >= 1");
    if (qubit_budget < 1 || coupler_budget < 1) throw InvalidArgument("topology budgets must be positive");
    if (!(inflation > 0.0) || !std::isfinite(inflation)) throw InvalidArgument("inflation must be positive");
  }
};

inline TopologySpec topology_preset(const std::string& name) {
  if (name == "advantage2") return {"advantage2", 4, 5627, 40279, 1.0};
  if (name == "advantage") return {"advantage", 4, 5000, 40000, 1.0};
  throw InvalidArgument("unknown topology preset '" + name + "' (advantage2, advantage)");
}

struct EmbeddingEstimate {
  std::uint64_t logical_vars = 0;
  std::uint64_t chain_length = 0;
  std::uint64_t physical_qubits = 0;
  std::uint64_t coupler_usage = 0;
  bool fits = false;
};

inline EmbeddingEstimate estimate_embedding(std::uint64_t v, const TopologySpec& t) {
  t.validate();
  if (v < 1) throw InvalidArgument("need at least one logical variable");
  EmbeddingEstimate e;
  e.logical_vars = v;
  e.chain_length = (v + t.shore - 1) / t.shore + 1;
  // Small epsilon so alpha * integer products that are exact do not round up.
  e.physical_qubits = static_cast<std::uint64_t>(std::ceil(t.inflation * double(v * e.chain_length) - 1e-9));
  e.coupler_usage = v * (v - 1) / 2 + v * (e.chain_length - 1);
  e.fits = e.physical_qubits <= t.qubit_budget && e.coupler_usage <= t.coupler_budget;
  return e;
}

struct EmbeddingRow {
  std::uint64_t n = 0;
  EmbeddingEstimate est;
};

/// One row per city count, with v = (n-1)^2 logical variables.
inline std::vector<EmbeddingRow> tsp_embedding_curve(std::uint64_t n_lo, std::uint64_t n_hi, const TopologySpec& t) {
  if (n_lo < 2 || n_hi < n_lo) throw InvalidArgument("need 2 <= n_lo <= n_hi");
  std::vector<EmbeddingRow> rows;
  for (std::uint64_t n = n_lo; n <= n_hi; ++n) rows.push_back({n, estimate_embedding((n - 1) * (n - 1), t)});
  return rows;
}

/// Largest n in the curve that fits; 0 if none does.
inline std::uint64_t largest_fitting(const std::vector<EmbeddingRow>& rows) {
  std::uint64_t best = 0;
  for (const auto& r : rows) {
    if (r.est.fits) best = r.n;
  }
  return best;
}

inline std::string embedding_csv(const std::vector<EmbeddingRow>& rows) {
  std::ostringstream os;
  os << "n,logical_vars,chain_length,physical_qubits,coupler_usage,fits\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.est.logical_vars << ',' << r.est.chain_length << ',' << r.est.physical_qubits << ','
       << r.est.coupler_usage << ',' << (r.est.fits ? "true" : "false") << '\n';
  }
  return os.str();
}

struct InflationWindow {
  double lo = 0.0; // exclusive
  double hi = 0.0; // inclusive
  double chosen = 0.0;
};

/// Range of alpha for which n_cap fits on the topology and n_cap + 1 does not,
/// keeping the shore fixed. The midpoint is returned as the calibrated value.
inline InflationWindow calibrate_inflation(std::uint64_t n_cap, const TopologySpec& t) {
  TopologySpec base = t;
  base.inflation = 1.0;
  base.validate();
  if (n_cap < 2) throw InvalidArgument("cap must be >= 2");
  const auto fit = estimate_embedding((n_cap - 1) * (n_cap - 1), base);
  const auto over = estimate_embedding(n_cap * n_cap, base);
  if (fit.coupler_usage > t.coupler_budget) {
    throw InvalidArgument("n=" + std::to_string(n_cap) + " exceeds the coupler budget for any inflation");
  }
  InflationWindow w;
  w.hi = double(t.qubit_budget) / double(fit.physical_qubits);
  w.lo = over.coupler_usage > t.coupler_budget ? 0.0 : double(t.qubit_budget) / double(over.physical_qubits);
  if (!(w.lo < w.hi)) {
    throw InvalidArgument("no inflation makes n=" + std::to_string(n_cap) + " the largest fitting size");
  }
  w.chosen = 0.5 * (w.lo + w.hi);
  return w;
}

inline nlohmann::json to_json(const EmbeddingEstimate& e) {
  return {{"logical_vars", e.logical_vars},     {"chain_length", e.chain_length},
          {"physical_qubits", e.physical_qubits}, {"coupler_usage", e.coupler_usage},
          {"fits", e.fits}};
}

inline nlohmann::json to_json(const TopologySpec& t) {
  return {{"name", t.name},
          {"shore", t.shore},
          {"qubit_budget", t.qubit_budget},
          {"coupler_budget", t.coupler_budget},
          {"inflation", t.inflation}};
}

} // namespace qtsp

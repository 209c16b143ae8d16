#pragma once

// Variational quantum adiabatic algorithm: Bayesian optimization of the
// 10-point pulse against the sampled QUBO energy of the final state.

#include <cstdint>
#include <vector>

#include "qtsp/bayes_opt.hpp"
#include "qtsp/qubo.hpp"
#include "qtsp/rydberg.hpp"
#include "qtsp/samples.hpp"

namespace qtsp {

struct VqaaOptions {
  std::uint64_t budget = 60;
  std::uint64_t shots = 500;
  std::uint64_t initial = 10;
  bool random_search = false;
  std::uint64_t seed = 0;
  double duration_ns = 4000.0;
};

struct VqaaTraceEntry {
  PulseSchedule pulse;
  double cost = 0.0;
};

struct VqaaResult {
  PulseSchedule best;
  double best_cost = 0.0;
  SampleSet samples; // fresh shots at the best pulse
  std::vector<VqaaTraceEntry> trace;
};

/// Unit box coordinate -> physical pulse within the parameter bounds.
inline PulseSchedule pulse_from_unit(std::span<const double> u, const RydbergParams& p, double duration_ns) {
  std::vector<double> v(10);
  for (std::size_t i = 0; i < 5; ++i) v[i] = std::clamp(u[i], 0.0, 1.0) * p.omega_max;
  for (std::size_t i = 5; i < 10; ++i) v[i] = p.delta_min + std::clamp(u[i], 0.0, 1.0) * (p.delta_max - p.delta_min);
  return PulseSchedule::from_vector(v, duration_ns);
}

/// Evaluation k samples with RNG stream k + 1 of the seed.
inline VqaaResult vqaa_optimize(const QuboProblem& q, const AtomRegister& reg, const RydbergParams& p,
                                const VqaaOptions& o) {
  p.validate();
  reg.validate(p);
  if (reg.size() != q.size()) throw SizeMismatch("register size does not match QUBO variable count");
  if (o.budget < 10) throw InvalidArgument("VQAA budget must be >= 10");
  if (o.shots < 1) throw InvalidArgument("shots must be >= 1");

  VqaaResult r;
  std::uint64_t k = 0;
  auto objective = [&](std::span<const double> u) {
    const auto pulse = pulse_from_unit(u, p, o.duration_ns);
    pulse.validate(p);
    const auto psi = evolve(reg, pulse, p);
    const double cost = expectation_diag(sample_final(psi, o.shots, stream_seed(o.seed, ++k)), q);
    r.trace.push_back({pulse, cost});
    return cost;
  };
  const auto bo = bo_minimize(objective, 10,
                              {.budget = o.budget, .initial = o.initial, .seed = o.seed, .random_search = o.random_search});
  r.best = r.trace[bo.best].pulse;
  r.best_cost = r.trace[bo.best].cost;
  r.samples = sample_final(evolve(reg, r.best, p), o.shots, stream_seed(o.seed, 0xF1A1ULL << 32));
  return r;
}

} // namespace qtsp

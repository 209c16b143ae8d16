#pragma once

// Metropolis simulated annealing over an Ising problem. Stands in for an
// annealing QPU: a black-box sampler with a num_reads contract.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qtsp/error.hpp"
#include "qtsp/qubo.hpp"
#include "qtsp/rng.hpp"
#include "qtsp/samples.hpp"

namespace qtsp {

struct AnnealParams {
  std::uint64_t num_reads = 100;
  std::uint64_t sweeps = 500;
  double beta_start = 0.1;
  double beta_end = 10.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_reads < 1) throw InvalidArgument("num_reads must be >= 1");
    if (sweeps < 1) throw InvalidArgument("sweeps must be >= 1");
    if (!(beta_start > 0.0) || !(beta_end > beta_start) || !std::isfinite(beta_end)) {
      throw InvalidArgument("need beta_end > beta_start > 0");
    }
  }
};

/// Mean absolute nonzero coupling (fields if there are none); temperatures are measured in this unit.
inline double ising_energy_scale(const IsingProblem& p) {
  double sum = 0.0;
  std::size_t count = 0;
  p.coupling.for_each_nonzero([&](std::size_t, std::size_t, double j) { sum += std::abs(j); ++count; });
  if (count == 0) {
    for (double v : p.h) {
      if (v != 0.0) { sum += std::abs(v); ++count; }
    }
  }
  return count ? sum / double(count) : 1.0;
}

namespace detail {

struct DenseCouplings {
  std::size_t m = 0;
  std::vector<double> j; // symmetric m x m, zero diagonal
  std::vector<std::vector<std::size_t>> neighbors;

  explicit DenseCouplings(const IsingProblem& p) : m(p.size()), j(m * m, 0.0), neighbors(m) {
    p.coupling.for_each_nonzero([&](std::size_t a, std::size_t b, double v) {
      j[a * m + b] = v;
      j[b * m + a] = v;
      neighbors[a].push_back(b);
      neighbors[b].push_back(a);
    });
  }
};

/// One anneal from a uniformly random spin state. Spin -1 maps to bit 1.
inline Bits anneal_once(const IsingProblem& p, const DenseCouplings& dc, const AnnealParams& ap, double scale,
                        Rng& rng) {
  const std::size_t m = dc.m;
  std::vector<int> s(m);
  for (auto& v : s) v = uniform01(rng) < 0.5 ? -1 : 1;
  std::vector<double> field(p.h);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b : dc.neighbors[a]) field[a] += dc.j[a * m + b] * s[b];
  }

  const double ratio = ap.sweeps > 1 ? std::pow(ap.beta_end / ap.beta_start, 1.0 / double(ap.sweeps - 1)) : 1.0;
  double beta = ap.beta_start;
  for (std::uint64_t sweep = 0; sweep < ap.sweeps; ++sweep) {
    const double b_eff = (ap.sweeps == 1 ? ap.beta_end : beta) / scale;
    for (std::size_t a = 0; a < m; ++a) {
      const double delta = -2.0 * s[a] * field[a];
      if (delta <= 0.0 || uniform01(rng) < std::exp(-b_eff * delta)) {
        s[a] = -s[a];
        const double step = 2.0 * s[a];
        for (std::size_t b : dc.neighbors[a]) field[b] += dc.j[b * m + a] * step;
      }
    }
    beta *= ratio;
  }
  Bits out(m);
  for (std::size_t a = 0; a < m; ++a) out[a] = s[a] < 0 ? 1 : 0;
  return out;
}

} // namespace detail

/// Final state of every read, in read order. Read r uses RNG stream (seed, r),
/// so the first k reads of a larger run equal a k-read run.
inline std::vector<Bits> sa_reads(const IsingProblem& p, const AnnealParams& ap) {
  ap.validate();
  if (p.size() == 0) throw InvalidArgument("empty Ising problem");
  const detail::DenseCouplings dc(p);
  const double scale = ising_energy_scale(p);
  std::vector<Bits> reads;
  reads.reserve(ap.num_reads);
  for (std::uint64_t r = 0; r < ap.num_reads; ++r) {
    Rng rng = make_rng(ap.seed, r);
    reads.push_back(detail::anneal_once(p, dc, ap, scale, rng));
  }
  return reads;
}

inline SampleSet sa_sample(const IsingProblem& p, const AnnealParams& ap) {
  SampleSet out(p.size());
  for (const auto& b : sa_reads(p, ap)) out.add(b);
  return out;
}

/// Lowest-energy bitstring among the reads (first occurrence wins ties).
inline Bits best_read(const IsingProblem& p, const std::vector<Bits>& reads) {
  if (reads.empty()) throw InvalidArgument("no reads");
  std::size_t best = 0;
  double e_best = ising_energy(p, reads[0]);
  for (std::size_t r = 1; r < reads.size(); ++r) {
    const double e = ising_energy(p, reads[r]);
    if (e < e_best) {
      e_best = e;
      best = r;
    }
  }
  return reads[best];
}

} // namespace qtsp

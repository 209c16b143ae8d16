#pragma once

#include "qtsp/error.hpp"
#include "qtsp/qubo.hpp"
#include "qtsp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace qtsp {

using Amplitude = std::complex<double>;
using StateVector = std::vector<Amplitude>;

/// Measured bitstring counts. Character 0 of every key is qubit/variable 0.
class SampleSet {
public:
  SampleSet() = default;
  explicit SampleSet(std::size_t width) : width_(width) {}

  void add(const std::string& bits, std::uint64_t count = 1) {
    if (bits.size() != width_) {
      throw SizeMismatch("sample has " + std::to_string(bits.size()) + " bits, set expects " +
                         std::to_string(width_));
    }
    if (count == 0) return;
    counts_[bits] += count;
    shots_ += count;
  }
  void add(const Bits& b, std::uint64_t count = 1) { add(to_string(b), count); }

  std::size_t width() const noexcept { return width_; }
  std::uint64_t shots() const noexcept { return shots_; }
  const std::map<std::string, std::uint64_t>& counts() const noexcept { return counts_; }

  std::uint64_t count(const std::string& bits) const {
    auto it = counts_.find(bits);
    return it == counts_.end() ? 0 : it->second;
  }
  double frequency(const std::string& bits) const {
    return shots_ ? static_cast<double>(count(bits)) / static_cast<double>(shots_) : 0.0;
  }

  /// Most frequent bitstring; ties resolve to the lexicographically smallest.
  std::string mode() const {
    std::string best;
    std::uint64_t best_count = 0;
    for (const auto& [k, c] : counts_) {
      if (c > best_count) {
        best = k;
        best_count = c;
      }
    }
    return best;
  }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
  std::size_t width_ = 0;
  std::uint64_t shots_ = 0;
  std::map<std::string, std::uint64_t> counts_;
};

inline nlohmann::json to_json(const SampleSet& s) {
  return {{"width", s.width()}, {"shots", s.shots()}, {"counts", s.counts()}};
}

inline SampleSet sample_set_from_json(const nlohmann::json& j) {
  SampleSet s(j.at("width").get<std::size_t>());
  for (const auto& [k, v] : j.at("counts").items()) s.add(k, v.get<std::uint64_t>());
  return s;
}

inline std::size_t qubit_count_of(const StateVector& psi) {
  std::size_t nq = 0;
  while ((std::size_t{1} << nq) < psi.size()) ++nq;
  if ((std::size_t{1} << nq) != psi.size()) throw SizeMismatch("state length is not a power of two");
  return nq;
}

/// Draws one basis index from the cumulative distribution `cdf` (last entry is the total).
inline std::uint64_t draw_index(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform01(rng) * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::uint64_t>(it - cdf.begin());
}

inline std::vector<double> cumulative_probabilities(const StateVector& psi) {
  std::vector<double> cdf(psi.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    acc += std::norm(psi[i]);
    cdf[i] = acc;
  }
  return cdf;
}

/// Flips each bit independently with probability `p_flip`.
inline void flip_bits(Bits& b, double p_flip, Rng& rng) {
  if (p_flip <= 0.0) return;
  for (auto& bit : b) {
    if (uniform01(rng) < p_flip) bit ^= 1U;
  }
}

/// Projective measurement of `psi` in the computational basis, `shots` times.
inline SampleSet measure(const StateVector& psi, std::uint64_t shots, double p_flip, Rng& rng) {
  if (shots == 0) throw InvalidArgument("shots must be at least 1");
  const std::size_t nq = qubit_count_of(psi);
  const auto cdf = cumulative_probabilities(psi);
  SampleSet out(nq);
  for (std::uint64_t s = 0; s < shots; ++s) {
    Bits b = bits_from_index(draw_index(cdf, rng), nq);
    flip_bits(b, p_flip, rng);
    out.add(b);
  }
  return out;
}

/// Shot-weighted mean QUBO energy.
inline double expectation_diag(const SampleSet& s, const QuboProblem& q) {
  if (s.width() != q.size()) throw SizeMismatch("sample width does not match the QUBO size");
  if (s.shots() == 0) throw InvalidArgument("empty sample set");
  double acc = 0.0;
  for (const auto& [k, c] : s.counts()) acc += static_cast<double>(c) * qubo_energy(q, bits_from_string(k));
  return acc / static_cast<double>(s.shots());
}

inline double expectation_diag(const SampleSet& s, const IsingProblem& p) {
  if (s.width() != p.size()) throw SizeMismatch("sample width does not match the Ising size");
  if (s.shots() == 0) throw InvalidArgument("empty sample set");
  double acc = 0.0;
  for (const auto& [k, c] : s.counts()) acc += static_cast<double>(c) * ising_energy(p, bits_from_string(k));
  return acc / static_cast<double>(s.shots());
}

/// Lowest QUBO energy among the sampled bitstrings.
inline double min_energy(const SampleSet& s, const QuboProblem& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [k, c] : s.counts()) best = std::min(best, qubo_energy(q, bits_from_string(k)));
  return best;
}

} // namespace qtsp

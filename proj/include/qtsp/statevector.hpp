#pragma once

#include "qtsp/error.hpp"
#include "qtsp/rng.hpp"
#include "qtsp/samples.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtsp {

inline constexpr std::size_t kMaxSimQubits = 20;

enum class GateKind { RX, RY, RZ, CZ, RXX };

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CZ: return "CZ";
    case GateKind::RXX: return "RXX";
  }
  return "?";
}

inline GateKind gate_from_name(std::string_view s) {
  if (s == "RX") return GateKind::RX;
  if (s == "RY") return GateKind::RY;
  if (s == "RZ") return GateKind::RZ;
  if (s == "CZ") return GateKind::CZ;
  if (s == "RXX") return GateKind::RXX;
  throw InvalidArgument("unknown gate kind '" + std::string(s) + "'");
}

inline constexpr bool is_two_qubit(GateKind k) { return k == GateKind::CZ || k == GateKind::RXX; }
inline constexpr bool takes_angle(GateKind k) { return k != GateKind::CZ; }

/// One gate. The angle is either the fixed value `angle` or, when `param` is
/// set, the value of that parameter slot at execution time.
struct GateOp {
  GateKind kind = GateKind::RY;
  std::vector<int> targets;
  double angle = 0.0;
  std::optional<int> param;

  static GateOp fixed(GateKind k, std::vector<int> t, double a = 0.0) { return {k, std::move(t), a, std::nullopt}; }
  static GateOp slot(GateKind k, std::vector<int> t, int p) { return {k, std::move(t), 0.0, p}; }

  double resolve(std::span<const double> params) const { return param ? params[*param] : angle; }

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

struct CircuitSpec {
  int num_qubits = 0;
  std::vector<GateOp> ops;
  int num_params = 0;

  void validate() const {
    if (num_qubits < 1) throw InvalidArgument("circuit needs at least one qubit");
    if (static_cast<std::size_t>(num_qubits) > kMaxSimQubits) {
      throw CapacityExceeded("simulator is capped at " + std::to_string(kMaxSimQubits) + " qubits, circuit has " +
                             std::to_string(num_qubits));
    }
    for (const auto& op : ops) {
      const std::size_t arity = is_two_qubit(op.kind) ? 2 : 1;
      if (op.targets.size() != arity) {
        throw InvalidArgument(std::string(gate_name(op.kind)) + " takes " + std::to_string(arity) + " target(s)");
      }
      for (int t : op.targets) {
        if (t < 0 || t >= num_qubits) throw InvalidArgument("gate target out of range");
      }
      if (arity == 2 && op.targets[0] == op.targets[1]) throw InvalidArgument("gate targets must be distinct");
      if (op.kind == GateKind::CZ && op.param) throw InvalidArgument("CZ takes no angle");
      if (op.param && (*op.param < 0 || *op.param >= num_params)) {
        throw InvalidArgument("parameter slot out of range");
      }
    }
  }

  friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

/// Depolarizing gate noise plus symmetric readout flips.
struct NoiseModel {
  double p1q = 0.0;
  double p2q = 0.0;
  double p_readout = 0.0;
  std::string label = "none";

  bool gate_noise_free() const noexcept { return p1q == 0.0 && p2q == 0.0; }

  void validate() const {
    for (double p : {p1q, p2q, p_readout}) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("noise probabilities must lie in [0, 1]");
    }
  }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

// Device presets. Two-qubit and readout rates follow the published medians;
// one-qubit rates are not published and are set to a tenth of the two-qubit
// rate. Devices without a published readout median use 1e-2.
inline NoiseModel noise_preset(std::string_view name) {
  if (name == "none") return {0.0, 0.0, 0.0, "none"};
  if (name == "fez") return {2e-4, 2e-3, 8e-3, "fez"};
  if (name == "brisbane") return {8e-4, 8e-3, 1.7e-2, "brisbane"};
  if (name == "garnet") return {5e-4, 5e-3, 1e-2, "garnet"};
  if (name == "marmot") return {6e-4, 6e-3, 1e-2, "marmot"};
  throw InvalidArgument("unknown noise preset '" + std::string(name) + "'");
}

inline const std::array<std::string_view, 5>& noise_preset_names() {
  static const std::array<std::string_view, 5> names{"none", "fez", "brisbane", "garnet", "marmot"};
  return names;
}

using Matrix2 = std::array<Amplitude, 4>;  // row-major
using Matrix4 = std::array<Amplitude, 16>; // row-major, first target is the high bit

inline Matrix2 single_qubit_matrix(GateKind k, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Amplitude i{0.0, 1.0};
  switch (k) {
    case GateKind::RX: return {c, -i * s, -i * s, c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {std::exp(-i * (theta / 2.0)), 0.0, 0.0, std::exp(i * (theta / 2.0))};
    default: throw InvalidArgument("not a single-qubit gate");
  }
}

inline Matrix4 two_qubit_matrix(GateKind k, double theta) {
  Matrix4 m{};
  if (k == GateKind::CZ) {
    m[0] = m[5] = m[10] = 1.0;
    m[15] = -1.0;
    return m;
  }
  if (k == GateKind::RXX) {
    const double c = std::cos(theta / 2.0);
    const Amplitude mis{0.0, -std::sin(theta / 2.0)};
    for (int d = 0; d < 4; ++d) m[d * 5] = c;
    // X(x)X maps |ab> to |~a~b>: anti-diagonal.
    m[0 * 4 + 3] = m[1 * 4 + 2] = m[2 * 4 + 1] = m[3 * 4 + 0] = mis;
    return m;
  }
  throw InvalidArgument("not a two-qubit gate");
}

/// Qubit q lives at bit (num_qubits - 1 - q) of the amplitude index, so the
/// index written in binary is the bitstring with qubit 0 leftmost.
inline std::size_t bit_of(int qubit, std::size_t nq) { return nq - 1 - static_cast<std::size_t>(qubit); }

inline void apply_1q(StateVector& psi, std::size_t nq, int q, const Matrix2& u) {
  const std::size_t stride = std::size_t{1} << bit_of(q, nq);
  for (std::size_t base = 0; base < psi.size(); base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const std::size_t i0 = base + off;
      const std::size_t i1 = i0 + stride;
      const Amplitude a = psi[i0];
      const Amplitude b = psi[i1];
      psi[i0] = u[0] * a + u[1] * b;
      psi[i1] = u[2] * a + u[3] * b;
    }
  }
}

inline void apply_2q(StateVector& psi, std::size_t nq, int qa, int qb, const Matrix4& u) {
  const std::size_t ma = std::size_t{1} << bit_of(qa, nq);
  const std::size_t mb = std::size_t{1} << bit_of(qb, nq);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i & (ma | mb)) continue;
    const std::array<std::size_t, 4> idx{i, i | mb, i | ma, i | ma | mb};
    std::array<Amplitude, 4> in{};
    for (int r = 0; r < 4; ++r) in[r] = psi[idx[r]];
    for (int r = 0; r < 4; ++r) {
      Amplitude acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += u[r * 4 + c] * in[c];
      psi[idx[r]] = acc;
    }
  }
}

inline void apply_gate(StateVector& psi, std::size_t nq, const GateOp& op, std::span<const double> params) {
  switch (op.kind) {
    case GateKind::CZ: {
      const std::size_t mask = (std::size_t{1} << bit_of(op.targets[0], nq)) | (std::size_t{1} << bit_of(op.targets[1], nq));
      for (std::size_t i = 0; i < psi.size(); ++i) {
        if ((i & mask) == mask) psi[i] = -psi[i];
      }
      return;
    }
    case GateKind::RXX:
      apply_2q(psi, nq, op.targets[0], op.targets[1], two_qubit_matrix(op.kind, op.resolve(params)));
      return;
    default:
      apply_1q(psi, nq, op.targets[0], single_qubit_matrix(op.kind, op.resolve(params)));
  }
}

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline void apply_pauli(StateVector& psi, std::size_t nq, int q, Pauli p) {
  static const Amplitude i{0.0, 1.0};
  switch (p) {
    case Pauli::I: return;
    case Pauli::X: apply_1q(psi, nq, q, {0.0, 1.0, 1.0, 0.0}); return;
    case Pauli::Y: apply_1q(psi, nq, q, {0.0, -i, i, 0.0}); return;
    case Pauli::Z: apply_1q(psi, nq, q, {1.0, 0.0, 0.0, -1.0}); return;
  }
}

inline StateVector zero_state(std::size_t nq) {
  StateVector psi(std::size_t{1} << nq, Amplitude{0.0, 0.0});
  psi[0] = 1.0;
  return psi;
}

/// U(params)|0...0>.
inline StateVector apply_circuit(const CircuitSpec& c, std::span<const double> params) {
  c.validate();
  if (params.size() != static_cast<std::size_t>(c.num_params)) {
    throw SizeMismatch("circuit expects " + std::to_string(c.num_params) + " parameters, got " +
                       std::to_string(params.size()));
  }
  const auto nq = static_cast<std::size_t>(c.num_qubits);
  StateVector psi = zero_state(nq);
  for (const auto& op : c.ops) apply_gate(psi, nq, op, params);
  return psi;
}

/// Multinomial draw from |psi|^2 followed by per-bit readout flips.
inline SampleSet sample(const StateVector& psi, std::uint64_t shots, const NoiseModel& noise, std::uint64_t seed) {
  noise.validate();
  Rng rng = make_rng(seed, 0);
  return measure(psi, shots, noise.p_readout, rng);
}

/// Stochastic Pauli trajectories: after each gate, with probability p1q (p2q)
/// a uniformly random non-identity Pauli acts on the gate's target(s). One
/// trajectory per shot, all drawn from a single seeded stream.
inline SampleSet execute_noisy(const CircuitSpec& c, std::span<const double> params, const NoiseModel& noise,
                               std::uint64_t shots, std::uint64_t seed) {
  noise.validate();
  const StateVector ideal = apply_circuit(c, params);
  if (noise.gate_noise_free()) return sample(ideal, shots, noise, seed);
  if (shots == 0) throw InvalidArgument("shots must be at least 1");

  const auto nq = static_cast<std::size_t>(c.num_qubits);
  const auto ideal_cdf = cumulative_probabilities(ideal);
  Rng rng = make_rng(seed, 0);
  SampleSet out(nq);

  struct Fault {
    std::size_t after_op;
    std::array<Pauli, 2> paulis;
  };
  std::vector<Fault> faults;
  StateVector psi;

  for (std::uint64_t s = 0; s < shots; ++s) {
    faults.clear();
    for (std::size_t g = 0; g < c.ops.size(); ++g) {
      const bool two = is_two_qubit(c.ops[g].kind);
      if (uniform01(rng) >= (two ? noise.p2q : noise.p1q)) continue;
      Fault f{g, {Pauli::I, Pauli::I}};
      if (two) {
        const auto code = 1 + uniform_index(rng, 15); // 1..15, never II
        f.paulis = {static_cast<Pauli>(code / 4), static_cast<Pauli>(code % 4)};
      } else {
        f.paulis[0] = static_cast<Pauli>(1 + uniform_index(rng, 3));
      }
      faults.push_back(f);
    }

    std::uint64_t idx = 0;
    if (faults.empty()) {
      idx = draw_index(ideal_cdf, rng);
    } else {
      psi = zero_state(nq);
      std::size_t next = 0;
      for (std::size_t g = 0; g < c.ops.size(); ++g) {
        apply_gate(psi, nq, c.ops[g], params);
        for (; next < faults.size() && faults[next].after_op == g; ++next) {
          const auto& op = c.ops[g];
          apply_pauli(psi, nq, op.targets[0], faults[next].paulis[0]);
          if (op.targets.size() == 2) apply_pauli(psi, nq, op.targets[1], faults[next].paulis[1]);
        }
      }
      idx = draw_index(cumulative_probabilities(psi), rng);
    }
    Bits b = bits_from_index(idx, nq);
    flip_bits(b, noise.p_readout, rng);
    out.add(b);
  }
  return out;
}

/// Exact <psi| H |psi> for a diagonal QUBO Hamiltonian.
inline double exact_expectation(const StateVector& psi, const QuboProblem& q) {
  const std::size_t nq = qubit_count_of(psi);
  if (nq != q.size()) throw SizeMismatch("state width does not match the QUBO size");
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    if (p > 0.0) acc += p * qubo_energy(q, bits_from_index(i, nq));
  }
  return acc;
}

// Circuit interchange: [{"kind": "RY", "targets": [0], "angle": 0.5 | "param": 3}, ...]
inline nlohmann::json to_json(const CircuitSpec& c) {
  auto ops = nlohmann::json::array();
  for (const auto& op : c.ops) {
    nlohmann::json j{{"kind", gate_name(op.kind)}, {"targets", op.targets}};
    if (op.param) {
      j["param"] = *op.param;
    } else if (takes_angle(op.kind)) {
      j["angle"] = op.angle;
    }
    ops.push_back(std::move(j));
  }
  return ops;
}

inline CircuitSpec circuit_from_json(const nlohmann::json& j, int num_qubits) {
  CircuitSpec c;
  c.num_qubits = num_qubits;
  try {
    for (const auto& e : j) {
      GateOp op;
      op.kind = gate_from_name(e.at("kind").get<std::string>());
      op.targets = e.at("targets").get<std::vector<int>>();
      if (e.contains("param")) {
        op.param = e.at("param").get<int>();
        c.num_params = std::max(c.num_params, *op.param + 1);
      } else if (e.contains("angle")) {
        op.angle = e.at("angle").get<double>();
      } else if (takes_angle(op.kind)) {
        throw InvalidArgument(std::string(gate_name(op.kind)) + " needs an angle or a param slot");
      }
      c.ops.push_back(std::move(op));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed circuit JSON: ") + e.what());
  }
  c.validate();
  return c;
}

} // namespace qtsp

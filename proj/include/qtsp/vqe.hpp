#pragma once

#include "qtsp/error.hpp"
#include "qtsp/qubo.hpp"
#include "qtsp/rng.hpp"
#include "qtsp/samples.hpp"
#include "qtsp/statevector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtsp {

/// One RY column followed by a linear CZ chain, repeated `layers` times.
/// Parameter slots are qubit-major: slot = qubit * layers + layer.
inline CircuitSpec build_ry_cz_ansatz(int num_qubits, int layers = 1) {
  if (num_qubits < 2) throw InvalidArgument("RY-CZ ansatz needs at least 2 qubits");
  if (layers < 1) throw InvalidArgument("RY-CZ ansatz needs at least 1 layer");
  CircuitSpec c;
  c.num_qubits = num_qubits;
  c.num_params = num_qubits * layers;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < num_qubits; ++q) c.ops.push_back(GateOp::slot(GateKind::RY, {q}, q * layers + l));
    for (int q = 0; q + 1 < num_qubits; ++q) c.ops.push_back(GateOp::fixed(GateKind::CZ, {q, q + 1}));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Native-basis translation
// ---------------------------------------------------------------------------

enum class Basis { RyCz, RxRzCz, RxRzRxx };

inline std::string_view basis_name(Basis b) {
  switch (b) {
    case Basis::RyCz: return "ry-cz";
    case Basis::RxRzCz: return "rxrz-cz";
    case Basis::RxRzRxx: return "rxrz-rxx";
  }
  return "?";
}

inline Basis basis_from_name(std::string_view s) {
  if (s == "ry-cz") return Basis::RyCz;
  if (s == "rxrz-cz") return Basis::RxRzCz;
  if (s == "rxrz-rxx") return Basis::RxRzRxx;
  throw InvalidArgument("unknown basis '" + std::string(s) + "' (expected ry-cz, rxrz-cz or rxrz-rxx)");
}

/// Native basis of each device preset: Heron and Eagle use RX/RZ with CZ,
/// Garnet RX/RY with CZ, Marmot RX/RZ with RXX.
inline Basis preset_basis(std::string_view preset) {
  if (preset == "none" || preset == "garnet") return Basis::RyCz;
  if (preset == "fez" || preset == "brisbane") return Basis::RxRzCz;
  if (preset == "marmot") return Basis::RxRzRxx;
  throw InvalidArgument("unknown noise preset '" + std::string(preset) + "'");
}

struct GateCountReport {
  int one_qubit = 0;
  int two_qubit = 0;
  int depth = 0;           // ASAP layers over all gates
  int two_qubit_depth = 0; // ASAP layers counting two-qubit gates only
};

inline GateCountReport gate_counts(const CircuitSpec& c) {
  GateCountReport r;
  std::vector<int> level(c.num_qubits, 0), level2(c.num_qubits, 0);
  for (const auto& op : c.ops) {
    const bool two = is_two_qubit(op.kind);
    (two ? r.two_qubit : r.one_qubit)++;
    int l = 0, l2 = 0;
    for (int t : op.targets) {
      l = std::max(l, level[t]);
      l2 = std::max(l2, level2[t]);
    }
    for (int t : op.targets) {
      level[t] = l + 1;
      if (two) level2[t] = l2 + 1;
      else level2[t] = l2;
    }
    r.depth = std::max(r.depth, l + 1);
    if (two) r.two_qubit_depth = std::max(r.two_qubit_depth, l2 + 1);
  }
  return r;
}

inline Matrix2 matmul(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Matrix2 adjoint(const Matrix2& a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

/// Angles with U = e^{i phase} RZ(a) RY(b) RZ(c).
struct ZyzAngles {
  double a = 0.0, b = 0.0, c = 0.0;
};

inline ZyzAngles zyz_decompose(const Matrix2& u) {
  const Amplitude det = u[0] * u[3] - u[1] * u[2];
  const Amplitude s = std::sqrt(det);
  const Matrix2 v{u[0] / s, u[1] / s, u[2] / s, u[3] / s};
  ZyzAngles z;
  z.b = 2.0 * std::atan2(std::abs(v[2]), std::abs(v[0]));
  const double sum_half = std::abs(v[3]) > 1e-14 ? std::arg(v[3]) : 0.0;  // (a + c) / 2
  const double diff_half = std::abs(v[2]) > 1e-14 ? std::arg(v[2]) : 0.0; // (a - c) / 2
  z.a = sum_half + diff_half;
  z.c = sum_half - diff_half;
  return z;
}

namespace detail {

inline bool negligible_angle(double theta) {
  const double r = std::remainder(theta, 2.0 * std::numbers::pi);
  return std::abs(r) < 1e-12;
}

/// Builds a circuit in a target basis, fusing runs of fixed-angle single-qubit
/// gates on each qubit into one Euler triple.
class BasisWriter {
public:
  BasisWriter(Basis basis, int nq, int num_params) : basis_(basis), pending_(nq) {
    out_.num_qubits = nq;
    out_.num_params = num_params;
  }

  void fixed(GateKind k, int q, double theta) {
    auto& p = pending_[q];
    p = matmul(single_qubit_matrix(k, theta), p.value_or(Matrix2{1.0, 0.0, 0.0, 1.0}));
  }
  void fixed(const Matrix2& u, int q) {
    auto& p = pending_[q];
    p = matmul(u, p.value_or(Matrix2{1.0, 0.0, 0.0, 1.0}));
  }

  /// Emits a rotation about `axis` whose angle stays symbolic (`op.param`) or fixed.
  void rotation(GateKind axis, int q, const GateOp& src) {
    if (!src.param) {
      fixed(axis, q, src.angle);
      return;
    }
    const double h = std::numbers::pi / 2.0;
    auto emit = [&](GateKind native) {
      flush(q);
      out_.ops.push_back(GateOp::slot(native, {q}, *src.param));
    };
    if (basis_ == Basis::RyCz) {
      if (axis == GateKind::RZ) { // RZ(t) = RX(h) RY(t) RX(-h)
        fixed(GateKind::RX, q, -h);
        emit(GateKind::RY);
        fixed(GateKind::RX, q, h);
      } else {
        emit(axis);
      }
    } else {
      if (axis == GateKind::RY) { // RY(t) = RZ(h) RX(t) RZ(-h)
        fixed(GateKind::RZ, q, -h);
        emit(GateKind::RX);
        fixed(GateKind::RZ, q, h);
      } else {
        emit(axis);
      }
    }
  }

  void cz(int a, int b) {
    if (basis_ != Basis::RxRzRxx) {
      emit2(GateOp::fixed(GateKind::CZ, {a, b}));
      return;
    }
    // CZ ~ (RZ(h) x RZ(h)) RZZ(-h),  RZZ(t) = (U x U) RXX(t) (U^+ x U^+),  U = RY(-h)
    const double h = std::numbers::pi / 2.0;
    fixed(GateKind::RY, a, h);
    fixed(GateKind::RY, b, h);
    emit2(GateOp::fixed(GateKind::RXX, {a, b}, -h));
    fixed(GateKind::RY, a, -h);
    fixed(GateKind::RY, b, -h);
    fixed(GateKind::RZ, a, h);
    fixed(GateKind::RZ, b, h);
  }

  void rxx(int a, int b, const GateOp& src) {
    if (basis_ == Basis::RxRzRxx) {
      GateOp op = src;
      op.targets = {a, b};
      emit2(std::move(op));
      return;
    }
    // RXX(t) = (V x V) RZZ(t) (V^+ x V^+),  V = RY(h);
    // RZZ(t) = (I x H) CZ (I x RX(t)) CZ (I x H).
    const double h = std::numbers::pi / 2.0;
    const double r = 1.0 / std::numbers::sqrt2;
    const Matrix2 hadamard{r, r, r, -r};
    fixed(GateKind::RY, a, -h);
    fixed(GateKind::RY, b, -h);
    fixed(hadamard, b);
    emit2(GateOp::fixed(GateKind::CZ, {a, b}));
    GateOp inner = src;
    inner.kind = GateKind::RX;
    inner.targets = {b};
    rotation(GateKind::RX, b, inner);
    emit2(GateOp::fixed(GateKind::CZ, {a, b}));
    fixed(hadamard, b);
    fixed(GateKind::RY, a, h);
    fixed(GateKind::RY, b, h);
  }

  CircuitSpec finish() {
    for (int q = 0; q < out_.num_qubits; ++q) flush(q);
    return std::move(out_);
  }

private:
  void emit2(GateOp op) {
    flush(op.targets[0]);
    flush(op.targets[1]);
    out_.ops.push_back(std::move(op));
  }

  void flush(int q) {
    auto& p = pending_[q];
    if (!p) return;
    const Matrix2 u = *p;
    p.reset();
    // Decompose W^+ U W in ZYZ, then conjugate back. ry-cz: W = RY(h) maps
    // RZ -> RX. rxrz: W = RZ(-h) maps RY -> RX.
    const bool ry = basis_ == Basis::RyCz;
    const Matrix2 w = ry ? single_qubit_matrix(GateKind::RY, std::numbers::pi / 2.0)
                         : single_qubit_matrix(GateKind::RZ, -std::numbers::pi / 2.0);
    const GateKind outer = ry ? GateKind::RX : GateKind::RZ;
    const GateKind middle = ry ? GateKind::RY : GateKind::RX;
    const auto z = zyz_decompose(matmul(adjoint(w), matmul(u, w)));
    if (negligible_angle(z.b)) {
      push(outer, q, z.a + z.c);
    } else {
      push(outer, q, z.c);
      push(middle, q, z.b);
      push(outer, q, z.a);
    }
  }

  void push(GateKind k, int q, double theta) {
    if (negligible_angle(theta)) return;
    out_.ops.push_back(GateOp::fixed(k, {q}, theta));
  }

  Basis basis_;
  std::vector<std::optional<Matrix2>> pending_;
  CircuitSpec out_;
};

} // namespace detail

struct TranslatedCircuit {
  CircuitSpec circuit;
  GateCountReport report;
};

/// Rewrites `c` over the native gates of `basis`; equal to the source up to a
/// global phase.
inline TranslatedCircuit translate_to_basis(const CircuitSpec& c, Basis basis) {
  c.validate();
  detail::BasisWriter w(basis, c.num_qubits, c.num_params);
  for (const auto& op : c.ops) {
    switch (op.kind) {
      case GateKind::CZ: w.cz(op.targets[0], op.targets[1]); break;
      case GateKind::RXX: w.rxx(op.targets[0], op.targets[1], op); break;
      default: w.rotation(op.kind, op.targets[0], op);
    }
  }
  TranslatedCircuit out{w.finish(), {}};
  out.report = gate_counts(out.circuit);
  return out;
}

// ---------------------------------------------------------------------------
// NFT optimizer
// ---------------------------------------------------------------------------

using CostFunction = std::function<double(std::span<const double>)>;

struct TraceEntry {
  std::size_t index = 0;
  std::vector<double> params;
  double energy = 0.0;
  double wall_seconds = 0.0;
};

struct OptimizerTrace {
  std::vector<TraceEntry> entries;
  std::vector<double> final_params;
  double final_estimate = 0.0; // incumbent value after the last update
};

/// Raised when the cost returns a non-finite value; carries the trace so far.
class OptimizerAborted : public BackendFailure {
public:
  OptimizerAborted(const std::string& what, OptimizerTrace trace) : BackendFailure(what), trace_(std::move(trace)) {}
  const OptimizerTrace& trace() const noexcept { return trace_; }

private:
  OptimizerTrace trace_;
};

/// One coordinate update, reported to NftOptions::on_update.
struct NftUpdate {
  std::size_t sweep = 0;
  std::size_t param = 0;
  double old_angle = 0.0;
  double new_angle = 0.0;
  double old_value = 0.0;
  double predicted_value = 0.0;
};

struct NftOptions {
  int sweeps = 6;
  std::function<void(const NftUpdate&, std::span<const double> params)> on_update;
};

/// Sequential minimal optimization for costs of the form a + b cos(theta_k - c)
/// in each coordinate. Per parameter: two fresh evaluations at +-pi/2, the
/// incumbent value reused, then a jump to the analytic minimizer.
inline OptimizerTrace nft_optimize(const CostFunction& cost, std::vector<double> params, const NftOptions& opts = {}) {
  using clock = std::chrono::steady_clock;
  constexpr double half_pi = std::numbers::pi / 2.0;
  OptimizerTrace trace;

  auto evaluate = [&](const std::vector<double>& p) {
    const auto t0 = clock::now();
    const double e = cost(p);
    const double dt = std::chrono::duration<double>(clock::now() - t0).count();
    trace.entries.push_back({trace.entries.size(), p, e, dt});
    if (!std::isfinite(e)) {
      trace.final_params = p;
      throw OptimizerAborted("cost evaluation " + std::to_string(trace.entries.size() - 1) + " returned a non-finite value",
                             trace);
    }
    return e;
  };

  double current = evaluate(params);
  for (int s = 0; s < opts.sweeps; ++s) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      const double theta = params[k];
      params[k] = theta + half_pi;
      const double e_plus = evaluate(params);
      params[k] = theta - half_pi;
      const double e_minus = evaluate(params);
      params[k] = theta;

      // E(theta + d) = a + C cos d - S sin d  with C = E0 - a, S = (E- - E+)/2
      const double a = 0.5 * (e_plus + e_minus);
      const double cpart = current - a;
      const double spart = 0.5 * (e_minus - e_plus);
      const double b = std::hypot(cpart, spart);
      NftUpdate u{static_cast<std::size_t>(s), k, theta, theta, current, current};
      if (b > 1e-12 * std::max(1.0, std::abs(a))) {
        const double shift = std::numbers::pi - std::atan2(spart, cpart);
        params[k] = std::remainder(theta + shift, 2.0 * std::numbers::pi);
        u.new_angle = params[k];
        u.predicted_value = a - b;
        current = a - b;
      }
      if (opts.on_update) opts.on_update(u, params);
    }
  }
  trace.final_params = params;
  trace.final_estimate = current;
  return trace;
}

// ---------------------------------------------------------------------------
// VQE driver
// ---------------------------------------------------------------------------

struct VqeConfig {
  std::uint64_t shots = 200;
  NoiseModel noise{};
  std::uint64_t seed = 0;
  int sweeps = 6;
  Basis basis = Basis::RyCz;
  bool exact_cost = false; // statevector expectation instead of sampled shots
};

struct VqeResult {
  std::vector<double> initial_params;
  std::vector<double> best_params;
  double best_energy = 0.0;
  SampleSet final_samples;
  OptimizerTrace trace;
  VqeConfig config;
  GateCountReport gates;
};

inline std::vector<double> random_initial_params(std::size_t count, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  std::vector<double> p(count);
  for (auto& v : p) v = uniform(rng, -std::numbers::pi, std::numbers::pi);
  return p;
}

/// Minimizes the sampled QUBO energy of `ansatz` with NFT. Evaluation k draws
/// its shots from stream k+1 of the seed; the final sample uses its own stream.
inline VqeResult run_vqe(const QuboProblem& problem, const CircuitSpec& ansatz, const VqeConfig& cfg,
                         const NftOptions& extra = {}) {
  if (static_cast<std::size_t>(ansatz.num_qubits) != problem.size()) {
    throw SizeMismatch("ansatz has " + std::to_string(ansatz.num_qubits) + " qubits, problem has " +
                       std::to_string(problem.size()) + " variables");
  }
  if (cfg.exact_cost && !cfg.noise.gate_noise_free()) throw InvalidArgument("exact cost mode requires a noiseless model");
  cfg.noise.validate();
  const auto translated = translate_to_basis(ansatz, cfg.basis);
  const CircuitSpec& circuit = translated.circuit;

  std::uint64_t eval = 0;
  CostFunction cost = [&](std::span<const double> p) {
    const std::uint64_t stream = stream_seed(cfg.seed, ++eval);
    if (cfg.exact_cost) return exact_expectation(apply_circuit(circuit, p), problem);
    return expectation_diag(execute_noisy(circuit, p, cfg.noise, cfg.shots, stream), problem);
  };

  NftOptions opts = extra;
  opts.sweeps = cfg.sweeps;
  VqeResult r;
  r.config = cfg;
  r.gates = translated.report;
  r.initial_params = random_initial_params(static_cast<std::size_t>(ansatz.num_params), cfg.seed);
  r.trace = nft_optimize(cost, r.initial_params, opts);

  const auto best = std::min_element(r.trace.entries.begin(), r.trace.entries.end(),
                                     [](const TraceEntry& x, const TraceEntry& y) { return x.energy < y.energy; });
  r.best_energy = best->energy;
  r.best_params = r.trace.final_params;
  const std::uint64_t final_stream = stream_seed(cfg.seed, 0xF1A1ULL << 32);
  r.final_samples = execute_noisy(circuit, r.best_params, cfg.noise, cfg.shots, final_stream);
  return r;
}

} // namespace qtsp

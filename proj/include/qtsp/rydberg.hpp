#pragma once

// Neutral-atom analog emulator: atom registers, global Rabi/detuning drive,
// time evolution of the Rydberg Hamiltonian and QUBO-driven atom placement.
//
// Units: positions in um, time in ns at the interface (us internally),
// frequencies in rad/us. Bit 1 = Rydberg-excited; atom 0 is the leftmost
// bitstring character, matching the gate simulator.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qtsp/error.hpp"
#include "qtsp/qubo.hpp"
#include "qtsp/rng.hpp"
#include "qtsp/samples.hpp"

namespace qtsp {

inline constexpr std::size_t kMaxAtoms = 10;

struct RydbergParams {
  double c6 = 5.42e6;        // rad/us um^6
  double omega_max = 12.56;  // rad/us
  double delta_min = -50.0;  // rad/us
  double delta_max = 50.0;   // rad/us
  double dt_ns = 1.0;
  double max_duration_ns = 4000.0;
  double min_spacing_um = 4.0;
  double lattice_spacing_um = 5.0;

  void validate() const {
    if (!(c6 > 0.0) || !(omega_max > 0.0) || !(dt_ns > 0.0) || !(max_duration_ns > 0.0)) {
      throw InvalidArgument("Rydberg constants must be positive");
    }
    if (!(delta_min < delta_max)) throw InvalidArgument("detuning range is empty");
    if (!(min_spacing_um > 0.0) || !(lattice_spacing_um >= min_spacing_um)) {
      throw InvalidArgument("lattice spacing must be at least the minimum spacing");
    }
  }
  /// Distance at which the pair interaction equals the maximal Rabi frequency.
  double blockade_radius() const { return std::pow(c6 / omega_max, 1.0 / 6.0); }
};

enum class Lattice { Free, Triangular };

inline std::string lattice_name(Lattice l) { return l == Lattice::Free ? "free" : "triangular"; }

inline Lattice lattice_from_name(const std::string& s) {
  if (s == "free") return Lattice::Free;
  if (s == "triangular") return Lattice::Triangular;
  throw InvalidArgument("unknown lattice '" + s + "' (free, triangular)");
}

using Point = std::array<double, 2>;

inline double distance(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

/// Site (i, j) of a triangular lattice with the given spacing: a_1 = (1, 0), a_2 = (1/2, sqrt3/2).
inline Point triangular_site(int i, int j, double spacing) {
  return {spacing * (i + 0.5 * j), spacing * (std::numbers::sqrt3 / 2.0) * j};
}

inline bool is_triangular_site(const Point& p, double spacing, double tol = 1e-6) {
  const double j = p[1] / (spacing * std::numbers::sqrt3 / 2.0);
  const double i = p[0] / spacing - 0.5 * std::round(j);
  return std::abs(j - std::round(j)) < tol && std::abs(i - std::round(i)) < tol;
}

struct AtomRegister {
  std::vector<Point> positions;
  Lattice lattice = Lattice::Free;
  double spacing_um = 0.0; // lattice spacing when triangular

  std::size_t size() const noexcept { return positions.size(); }

  void validate(const RydbergParams& p) const {
    if (positions.empty()) throw InvalidArgument("register has no atoms");
    if (positions.size() > kMaxAtoms) {
      throw CapacityExceeded("register has " + std::to_string(positions.size()) + " atoms, emulator supports <= " +
                             std::to_string(kMaxAtoms));
    }
    for (std::size_t a = 0; a < positions.size(); ++a) {
      for (std::size_t b = a + 1; b < positions.size(); ++b) {
        if (distance(positions[a], positions[b]) < p.min_spacing_um - 1e-9) {
          throw InvalidArgument("atoms " + std::to_string(a) + " and " + std::to_string(b) + " closer than " +
                                std::to_string(p.min_spacing_um) + " um");
        }
      }
      if (lattice == Lattice::Triangular && !is_triangular_site(positions[a], spacing_um)) {
        throw InvalidArgument("atom " + std::to_string(a) + " is not on the triangular lattice");
      }
    }
  }
};

/// Pair interactions C6 / r^6, row-major N x N with zero diagonal.
inline std::vector<double> interaction_matrix(const std::vector<Point>& pos, double c6) {
  const std::size_t n = pos.size();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double r = distance(pos[a], pos[b]);
      v[a * n + b] = v[b * n + a] = c6 / std::pow(r, 6);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Drives
// ---------------------------------------------------------------------------

/// Global drive: Omega(t), delta(t) in rad/us as functions of t in ns.
struct Drive {
  double duration_ns = 0.0;
  std::function<double(double)> omega;
  std::function<double(double)> delta;
};

inline Drive constant_drive(double omega, double delta, double duration_ns) {
  return {duration_ns, [omega](double) { return omega; }, [delta](double) { return delta; }};
}

/// Five Rabi and five detuning control points, linearly interpolated.
/// Rabi knots sit at T k / 6 for k = 1..5 with zero at both ends; detuning
/// knots at T k / 4 for k = 0..4.
struct PulseSchedule {
  std::array<double, 5> omega_points{};
  std::array<double, 5> delta_points{};
  double duration_ns = 4000.0;

  void validate(const RydbergParams& p) const {
    if (!(duration_ns > 0.0) || duration_ns > p.max_duration_ns) {
      throw InvalidArgument("pulse duration must be in (0, " + std::to_string(p.max_duration_ns) + "] ns");
    }
    for (double w : omega_points) {
      if (!(w >= 0.0) || w > p.omega_max) throw InvalidArgument("Rabi control point outside [0, omega_max]");
    }
    for (double d : delta_points) {
      if (!(d >= p.delta_min) || d > p.delta_max) throw InvalidArgument("detuning control point outside range");
    }
  }

  double omega_at(double t_ns) const {
    std::array<double, 7> knots{0.0};
    std::copy(omega_points.begin(), omega_points.end(), knots.begin() + 1);
    return interpolate(knots, t_ns);
  }
  double delta_at(double t_ns) const { return interpolate(delta_points, t_ns); }

  Drive drive() const {
    return {duration_ns, [s = *this](double t) { return s.omega_at(t); }, [s = *this](double t) { return s.delta_at(t); }};
  }

  /// (omega_1..5, delta_1..5)
  std::vector<double> to_vector() const {
    std::vector<double> v(omega_points.begin(), omega_points.end());
    v.insert(v.end(), delta_points.begin(), delta_points.end());
    return v;
  }
  static PulseSchedule from_vector(std::span<const double> v, double duration_ns) {
    if (v.size() != 10) throw SizeMismatch("pulse vector needs 10 entries");
    PulseSchedule s;
    std::copy(v.begin(), v.begin() + 5, s.omega_points.begin());
    std::copy(v.begin() + 5, v.end(), s.delta_points.begin());
    s.duration_ns = duration_ns;
    return s;
  }

private:
  template <std::size_t K>
  double interpolate(const std::array<double, K>& knots, double t_ns) const {
    const double x = std::clamp(t_ns / duration_ns, 0.0, 1.0) * double(K - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(x), K - 2);
    const double f = x - double(k);
    return (1.0 - f) * knots[k] + f * knots[k + 1];
  }
};

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

/// H = (Omega/2) sum_j X_j - delta sum_j n_j + sum_{i<j} V_ij n_i n_j.
class RydbergHamiltonian {
public:
  RydbergHamiltonian(const AtomRegister& reg, const RydbergParams& p) : n_(reg.size()), dim_(std::size_t{1} << n_) {
    const auto v = interaction_matrix(reg.positions, p.c6);
    interaction_.assign(dim_, 0.0);
    excitations_.assign(dim_, 0.0);
    for (std::size_t idx = 0; idx < dim_; ++idx) {
      for (std::size_t a = 0; a < n_; ++a) {
        if (!occupied(idx, a)) continue;
        excitations_[idx] += 1.0;
        for (std::size_t b = a + 1; b < n_; ++b) {
          if (occupied(idx, b)) interaction_[idx] += v[a * n_ + b];
        }
      }
    }
  }

  std::size_t atoms() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  bool occupied(std::size_t idx, std::size_t atom) const { return (idx >> (n_ - 1 - atom)) & 1U; }

  double diagonal(std::size_t idx, double delta) const { return interaction_[idx] - delta * excitations_[idx]; }

  void apply(const StateVector& x, StateVector& y, double omega, double delta) const {
    const double half = 0.5 * omega;
    for (std::size_t idx = 0; idx < dim_; ++idx) {
      Amplitude acc = diagonal(idx, delta) * x[idx];
      if (half != 0.0) {
        for (std::size_t a = 0; a < n_; ++a) acc += half * x[idx ^ (std::size_t{1} << a)];
      }
      y[idx] = acc;
    }
  }

  Eigen::MatrixXd dense(double omega, double delta) const {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(Eigen::Index(dim_), Eigen::Index(dim_));
    for (std::size_t idx = 0; idx < dim_; ++idx) {
      h(Eigen::Index(idx), Eigen::Index(idx)) = diagonal(idx, delta);
      for (std::size_t a = 0; a < n_; ++a) h(Eigen::Index(idx), Eigen::Index(idx ^ (std::size_t{1} << a))) = 0.5 * omega;
    }
    return h;
  }

  double expectation(const StateVector& psi, double omega, double delta) const {
    StateVector y(dim_);
    apply(psi, y, omega, delta);
    Amplitude s{};
    for (std::size_t i = 0; i < dim_; ++i) s += std::conj(psi[i]) * y[i];
    return s.real();
  }

private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> interaction_;
  std::vector<double> excitations_;
};

namespace detail {

/// psi <- exp(-i H tau) psi by dense diagonalization of the real symmetric H.
inline void dense_step(const RydbergHamiltonian& h, double omega, double delta, double tau, StateVector& psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(omega, delta));
  const auto& u = es.eigenvectors();
  const auto& lam = es.eigenvalues();
  const Eigen::Index d = u.rows();
  Eigen::VectorXcd x(d);
  for (Eigen::Index i = 0; i < d; ++i) x(i) = psi[std::size_t(i)];
  Eigen::VectorXcd c = u.transpose().cast<Amplitude>() * x;
  for (Eigen::Index i = 0; i < d; ++i) c(i) *= std::exp(Amplitude(0.0, -lam(i) * tau));
  x = u.cast<Amplitude>() * c;
  for (Eigen::Index i = 0; i < d; ++i) psi[std::size_t(i)] = x(i);
}

/// psi <- exp(-i H tau) psi by Lanczos with full reorthogonalization; stops
/// once the standard a-posteriori error estimate drops below tol.
inline void krylov_step(const RydbergHamiltonian& h, double omega, double delta, double tau, StateVector& psi,
                        double tol = 1e-13, Eigen::Index max_dim = 40) {
  const auto dim = Eigen::Index(h.dim());
  Eigen::Map<Eigen::VectorXcd> x(psi.data(), dim);
  const double beta0 = x.norm();
  if (beta0 == 0.0) return;
  const Eigen::Index kmax = std::min(max_dim, dim);

  Eigen::MatrixXcd v(dim, kmax);
  v.col(0) = x / beta0;
  std::vector<double> alpha, beta;
  StateVector in(static_cast<std::size_t>(dim)), out(static_cast<std::size_t>(dim));
  Eigen::Map<Eigen::VectorXcd> w(out.data(), dim);
  Eigen::VectorXcd coeff;

  auto small_exp = [&](Eigen::Index k) {
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), k - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    const auto& u = es.eigenvectors();
    Eigen::VectorXcd c(k);
    for (Eigen::Index i = 0; i < k; ++i) c(i) = u(0, i) * std::exp(Amplitude(0.0, -es.eigenvalues()(i) * tau));
    return Eigen::VectorXcd(u.cast<Amplitude>() * c);
  };

  for (Eigen::Index j = 0; j < kmax; ++j) {
    Eigen::Map<Eigen::VectorXcd>(in.data(), dim) = v.col(j);
    h.apply(in, out, omega, delta);
    alpha.push_back(v.col(j).dot(w).real());
    w -= alpha.back() * v.col(j);
    if (j > 0) w -= beta.back() * v.col(j - 1);
    const Eigen::VectorXcd ov = v.leftCols(j + 1).adjoint() * w;
    w -= v.leftCols(j + 1) * ov;
    const double b = w.norm();
    coeff = small_exp(j + 1);
    const double err = b * std::abs(coeff(j));
    const bool invariant = b < 1e-14 * std::max(1.0, std::abs(alpha.back()));
    if (invariant || err < tol) break;
    if (j + 1 == kmax) throw BackendFailure("Krylov propagator did not converge; reduce dt");
    beta.push_back(b);
    v.col(j + 1) = w / b;
  }
  x = beta0 * (v.leftCols(coeff.size()) * coeff);
}

} // namespace detail

inline constexpr std::size_t kDensePropagatorMaxDim = 16;

inline StateVector ground_configuration(std::size_t atoms) {
  StateVector psi(std::size_t{1} << atoms, Amplitude{});
  psi[0] = 1.0;
  return psi;
}

/// Piecewise-constant propagation: the duration is cut into ceil(T/dt) equal
/// steps, each exponentiated exactly with the drive frozen at its midpoint.
inline StateVector evolve(const AtomRegister& reg, const Drive& drive, const RydbergParams& p, StateVector psi) {
  p.validate();
  if (reg.size() == 0 || reg.size() > kMaxAtoms) throw CapacityExceeded("emulator supports 1..10 atoms");
  if (psi.size() != (std::size_t{1} << reg.size())) throw SizeMismatch("state dimension does not match register");
  if (!(drive.duration_ns >= 0.0) || drive.duration_ns > p.max_duration_ns) {
    throw InvalidArgument("drive duration outside [0, " + std::to_string(p.max_duration_ns) + "] ns");
  }
  if (drive.duration_ns == 0.0) return psi;
  const RydbergHamiltonian h(reg, p);
  const auto steps = static_cast<std::uint64_t>(std::ceil(drive.duration_ns / p.dt_ns - 1e-9));
  const double step_ns = drive.duration_ns / double(steps);
  const double tau = step_ns * 1e-3;
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double t_mid = (double(k) + 0.5) * step_ns;
    const double omega = drive.omega(t_mid), delta = drive.delta(t_mid);
    if (!std::isfinite(omega) || !std::isfinite(delta) || omega < 0.0 || omega > p.omega_max * (1 + 1e-12)) {
      throw InvalidArgument("drive amplitude out of bounds at t = " + std::to_string(t_mid) + " ns");
    }
    if (h.dim() <= kDensePropagatorMaxDim) {
      detail::dense_step(h, omega, delta, tau, psi);
    } else {
      detail::krylov_step(h, omega, delta, tau, psi);
    }
  }
  return psi;
}

inline StateVector evolve(const AtomRegister& reg, const Drive& drive, const RydbergParams& p) {
  return evolve(reg, drive, p, ground_configuration(reg.size()));
}

inline StateVector evolve(const AtomRegister& reg, const PulseSchedule& s, const RydbergParams& p) {
  s.validate(p);
  return evolve(reg, s.drive(), p);
}

/// Projective occupancy measurement.
inline SampleSet sample_final(const StateVector& psi, std::uint64_t shots, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  return measure(psi, shots, 0.0, rng);
}

// ---------------------------------------------------------------------------
// Placement
// ---------------------------------------------------------------------------

/// Interactions are matched to the QUBO couplings up to a fitted global
/// scale s = <U, Q> / |Q|^2. The objective is the fit residual divided by
/// |U|^2, i.e. 1 - cos^2(U, Q), so it does not depend on the overall size.
struct PlacementFit {
  double objective = 1.0;
  double scale = 0.0; // rad/us per QUBO unit
};

inline PlacementFit placement_fit(const std::vector<Point>& pos, const QuboProblem& q, double c6) {
  const std::size_t m = pos.size();
  double uq = 0.0, uu = 0.0, qq = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double u = c6 / std::pow(distance(pos[a], pos[b]), 6);
      const double qv = q.quadratic.get(a, b);
      uq += u * qv;
      uu += u * u;
      qq += qv * qv;
    }
  }
  PlacementFit f;
  if (qq == 0.0 || uu == 0.0 || !std::isfinite(uu)) return f;
  f.scale = uq / qq;
  const double cosine = uq / std::sqrt(uu * qq);
  f.objective = cosine > 0.0 ? 1.0 - cosine * cosine : 1.0;
  return f;
}

struct PlacementOptions {
  Lattice lattice = Lattice::Triangular;
  std::uint64_t random_starts = 100;
  std::uint64_t budget = 4000; // objective evaluations, random starts included
  /// Free mode: the register is scaled so the largest |linear| QUBO term maps
  /// to this fraction of delta_max.
  double detuning_fraction = 0.5;
};

struct PlacementResult {
  AtomRegister reg;
  PlacementFit fit;
  std::uint64_t evaluations = 0;
};

namespace detail {

inline std::vector<Point> triangular_patch(std::size_t min_sites, double spacing) {
  for (int r = 1;; ++r) {
    std::vector<Point> sites;
    for (int i = -r; i <= r; ++i)
      for (int j = -r; j <= r; ++j)
        if (std::abs(i + j) <= r) sites.push_back(triangular_site(i, j, spacing));
    if (sites.size() >= min_sites) return sites;
  }
}

inline double min_pair_distance(const std::vector<Point>& pos) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pos.size(); ++a)
    for (std::size_t b = a + 1; b < pos.size(); ++b) d = std::min(d, distance(pos[a], pos[b]));
  return d;
}

inline PlacementResult place_on_lattice(const QuboProblem& q, const PlacementOptions& o, const RydbergParams& p,
                                        Rng& rng) {
  const std::size_t m = q.size();
  const auto sites = triangular_patch(4 * m, p.lattice_spacing_um);
  std::uint64_t evals = 0;
  auto eval = [&](const std::vector<std::size_t>& pick) {
    std::vector<Point> pos(m);
    for (std::size_t a = 0; a < m; ++a) pos[a] = sites[pick[a]];
    ++evals;
    return placement_fit(pos, q, p.c6).objective;
  };

  std::vector<std::size_t> best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < o.random_starts; ++s) {
    std::vector<std::size_t> idx(sites.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
    idx.resize(m);
    const double obj = eval(idx);
    if (obj < best_obj) best_obj = obj, best = idx;
  }

  while (evals < o.budget) {
    auto cand = best;
    if (m > 1 && uniform01(rng) < 0.3) {
      const auto a = uniform_index(rng, m), b = uniform_index(rng, m);
      std::swap(cand[a], cand[b]);
    } else {
      const auto a = uniform_index(rng, m);
      const auto site = uniform_index(rng, sites.size());
      if (std::find(cand.begin(), cand.end(), site) != cand.end()) {
        ++evals;
        continue;
      }
      cand[a] = site;
    }
    const double obj = eval(cand);
    if (obj < best_obj) best_obj = obj, best = std::move(cand);
  }

  PlacementResult r;
  r.reg.lattice = Lattice::Triangular;
  r.reg.spacing_um = p.lattice_spacing_um;
  for (auto s : best) r.reg.positions.push_back(sites[s]);
  r.fit = placement_fit(r.reg.positions, q, p.c6);
  r.evaluations = evals;
  return r;
}

inline PlacementResult place_free(const QuboProblem& q, const PlacementOptions& o, const RydbergParams& p, Rng& rng) {
  const std::size_t m = q.size();
  const double box = p.lattice_spacing_um * std::ceil(std::sqrt(double(m))) * 1.5;
  const double guard = 1e-3 * p.lattice_spacing_um;
  std::uint64_t evals = 0;
  auto eval = [&](const std::vector<Point>& pos) {
    ++evals;
    if (min_pair_distance(pos) < guard) return std::numeric_limits<double>::infinity();
    return placement_fit(pos, q, p.c6).objective;
  };

  // 1/r^6 couplings make the continuous landscape full of deep local minima
  // (a 4-cycle drawn as a zigzag, say). Half the budget goes to the discrete
  // lattice search, whose result seeds the continuous search alongside the
  // best random starts; each seed gets an equal share of what is left.
  constexpr std::size_t kSeeds = 4;
  PlacementOptions lat = o;
  lat.budget = std::max(o.random_starts, o.budget / 2);
  const auto coarse = place_on_lattice(q, lat, p, rng);
  evals += coarse.evaluations;

  std::vector<std::pair<double, std::vector<Point>>> starts;
  for (std::uint64_t s = 0; s < o.random_starts; ++s) {
    std::vector<Point> pos(m);
    for (auto& pt : pos) pt = {uniform(rng, 0.0, box), uniform(rng, 0.0, box)};
    const double obj = eval(pos);
    starts.emplace_back(obj, std::move(pos));
  }
  std::stable_sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  starts.resize(std::min(starts.size(), kSeeds - 1));
  starts.insert(starts.begin(), {coarse.fit.objective, coarse.reg.positions});

  std::vector<Point> best = starts[0].second;
  double best_obj = starts[0].first;
  const std::uint64_t share = evals < o.budget ? (o.budget - evals) / starts.size() : 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    auto [cur_obj, cur] = starts[k];
    const std::uint64_t stop = k + 1 == starts.size() ? o.budget : evals + share;
    double step = 0.25 * p.lattice_spacing_um;
    std::uint64_t misses = 0;
    while (evals < stop) {
      auto cand = cur;
      const auto a = uniform_index(rng, m);
      cand[a][0] += step * normal01(rng);
      cand[a][1] += step * normal01(rng);
      const double obj = eval(cand);
      if (obj < cur_obj) {
        cur_obj = obj;
        cur = std::move(cand);
        misses = 0;
      } else if (++misses > 4 * m) {
        step = std::max(step * 0.7, guard);
        misses = 0;
      }
    }
    if (cur_obj < best_obj) best_obj = cur_obj, best = std::move(cur);
  }

  // Fix the overall size: the fitted scale goes as lambda^-6 when all
  // coordinates are multiplied by lambda.
  const auto fit = placement_fit(best, q, p.c6);
  double max_linear = 0.0;
  for (double l : q.linear) max_linear = std::max(max_linear, std::abs(l));
  double lambda = 1.0;
  if (fit.scale > 0.0 && max_linear > 0.0) {
    const double target = o.detuning_fraction * p.delta_max / max_linear;
    lambda = std::pow(fit.scale / target, 1.0 / 6.0);
  }
  const double dmin = min_pair_distance(best);
  if (dmin * lambda < p.min_spacing_um) lambda = p.min_spacing_um / dmin;
  const Point origin = best[0];
  for (auto& pt : best) pt = {(pt[0] - origin[0]) * lambda, (pt[1] - origin[1]) * lambda};

  PlacementResult r;
  r.reg.lattice = Lattice::Free;
  r.reg.positions = std::move(best);
  r.fit = placement_fit(r.reg.positions, q, p.c6);
  r.evaluations = evals;
  return r;
}

} // namespace detail

/// Searches atom positions whose pair interactions reproduce the QUBO
/// couplings: best of `random_starts` random placements, then local search
/// until the evaluation budget is spent.
inline PlacementResult place_atoms(const QuboProblem& q, const PlacementOptions& o, const RydbergParams& p,
                                   std::uint64_t seed) {
  p.validate();
  if (q.size() < 2) throw InvalidArgument("placement needs at least two variables");
  if (q.size() > kMaxAtoms) {
    throw CapacityExceeded("QUBO has " + std::to_string(q.size()) + " variables, placement supports <= " +
                           std::to_string(kMaxAtoms));
  }
  if (o.random_starts < 1 || o.budget < o.random_starts) throw InvalidArgument("placement budget below random starts");
  Rng rng = make_rng(seed, 0);
  auto r = o.lattice == Lattice::Triangular ? detail::place_on_lattice(q, o, p, rng) : detail::place_free(q, o, p, rng);
  r.reg.validate(p);
  return r;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const AtomRegister& r) {
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& p : r.positions) pos.push_back({p[0], p[1]});
  nlohmann::json j{{"positions_um", pos}, {"lattice", lattice_name(r.lattice)}};
  if (r.lattice == Lattice::Triangular) j["spacing_um"] = r.spacing_um;
  return j;
}

inline AtomRegister register_from_json(const nlohmann::json& j) {
  AtomRegister r;
  for (const auto& p : j.at("positions_um")) r.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  r.lattice = lattice_from_name(j.value("lattice", std::string("free")));
  r.spacing_um = j.value("spacing_um", 0.0);
  return r;
}

inline nlohmann::json to_json(const PulseSchedule& s) {
  return {{"omega_points", s.omega_points}, {"delta_points", s.delta_points}, {"duration_ns", s.duration_ns}};
}

inline PulseSchedule pulse_from_json(const nlohmann::json& j) {
  PulseSchedule s;
  s.omega_points = j.at("omega_points").get<std::array<double, 5>>();
  s.delta_points = j.at("delta_points").get<std::array<double, 5>>();
  s.duration_ns = j.value("duration_ns", 4000.0);
  return s;
}

} // namespace qtsp

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qsearch/dense_operator.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/format.hpp"
#include "qsearch/statevec.hpp"

namespace qsearch {

// Above this coupling the finite-difference step is far from unitary.
inline constexpr double kMaxStableEpsilon = 0.1;

// Periodic 1-D grid (a loop of sites) with a real potential per site.
class PotentialGrid {
 public:
  PotentialGrid(std::vector<double> potential, double dx, double dt)
      : potential_(std::move(potential)), dx_(dx), dt_(dt) {
    if (potential_.size() < 2) throw DomainError("potential grid needs at least two sites");
    if (!(dx_ > 0.0) || !std::isfinite(dx_)) throw DomainError("dx must be positive");
    if (!(dt_ >= 0.0) || !std::isfinite(dt_)) throw DomainError("dt must be non-negative");
    for (double v : potential_) {
      if (!std::isfinite(v)) throw DomainError("potential values must be finite");
    }
  }

  static PotentialGrid flat(std::size_t num_sites, double dx, double dt) {
    return {std::vector<double>(num_sites, 0.0), dx, dt};
  }

  // -depth on `width` consecutive sites centred at `center`, 0 elsewhere.
  static PotentialGrid square_well(std::size_t num_sites, std::size_t center, std::size_t width,
                                   double depth, double dx, double dt) {
    if (num_sites == 0 || center >= num_sites) throw DomainError("well centre out of range");
    if (width == 0 || width > num_sites) throw DomainError("well width out of range");
    std::vector<double> v(num_sites, 0.0);
    const std::size_t start = (center + num_sites - width / 2) % num_sites;
    for (std::size_t k = 0; k < width; ++k) v[(start + k) % num_sites] = -depth;
    return {std::move(v), dx, dt};
  }

  // curvature * d^2 with d the periodic distance to `center` in sites.
  static PotentialGrid quadratic_well(std::size_t num_sites, std::size_t center, double curvature,
                                      double dx, double dt) {
    if (num_sites == 0 || center >= num_sites) throw DomainError("well centre out of range");
    std::vector<double> v(num_sites);
    for (std::size_t j = 0; j < num_sites; ++j) {
      const std::size_t raw = j > center ? j - center : center - j;
      const double d = static_cast<double>(std::min(raw, num_sites - raw));
      v[j] = curvature * d * d;
    }
    return {std::move(v), dx, dt};
  }

  std::size_t num_sites() const { return potential_.size(); }
  const std::vector<double>& potential() const { return potential_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  double epsilon() const { return dt_ / (dx_ * dx_); }
  bool stable() const { return epsilon() <= kMaxStableEpsilon; }

  // Lowest-potential site; the middle one of the tied sites for flat-bottomed wells.
  std::size_t minimum_site() const {
    const double lowest = *std::min_element(potential_.begin(), potential_.end());
    std::vector<std::size_t> ties;
    for (std::size_t j = 0; j < potential_.size(); ++j) {
      if (potential_[j] == lowest) ties.push_back(j);
    }
    return ties[ties.size() / 2];
  }

 private:
  std::vector<double> potential_;
  double dx_;
  double dt_;
};

// Periodic tridiagonal D: 1 - 2i eps on the diagonal, i eps to both neighbours.
inline DenseOperator loop_diffusion_matrix(std::size_t num_sites, double epsilon) {
  if (num_sites < 2) throw DomainError("loop diffusion needs N >= 2");
  DenseOperator d(num_sites);
  for (std::size_t j = 0; j < num_sites; ++j) {
    d(j, j) += Amplitude(1.0, -2.0 * epsilon);
    d(j, (j + 1) % num_sites) += Amplitude(0.0, epsilon);
    d(j, (j + num_sites - 1) % num_sites) += Amplitude(0.0, epsilon);
  }
  return d;
}

// R = diag(exp(-i V_j dt)).
inline DenseOperator potential_rotation(const PotentialGrid& grid) {
  std::vector<Amplitude> diag;
  diag.reserve(grid.num_sites());
  for (double v : grid.potential()) diag.push_back(std::polar(1.0, -v * grid.dt()));
  return DenseOperator::diagonal(diag);
}

namespace detail {

inline void check_grid_state(const StateVector& psi, const PotentialGrid& grid) {
  if (psi.num_sites() != grid.num_sites()) {
    throw DomainError("state has " + std::to_string(psi.num_sites()) + " sites, grid has " +
                      std::to_string(grid.num_sites()));
  }
}

// out = D R in, stencil form; `phases` holds exp(-i V_j dt).
inline void dr_stencil(const StateVector& in, const std::vector<Amplitude>& phases, double eps,
                       StateVector& out) {
  const std::size_t n = in.num_sites();
  const Amplitude center(1.0, -2.0 * eps);
  const Amplitude hop(0.0, eps);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t right = (j + 1) % n;
    const std::size_t left = (j + n - 1) % n;
    out[j] = center * (phases[j] * in[j]) +
             hop * (phases[right] * in[right] + phases[left] * in[left]);
  }
}

inline std::vector<Amplitude> rotation_phases(const PotentialGrid& grid) {
  std::vector<Amplitude> phases;
  phases.reserve(grid.num_sites());
  for (double v : grid.potential()) phases.push_back(std::polar(1.0, -v * grid.dt()));
  return phases;
}

}  // namespace detail

// psi(t + dt) = D R psi(t): potential phases first, then loop diffusion.
inline StateVector dr_step(const StateVector& psi, const PotentialGrid& grid) {
  detail::check_grid_state(psi, grid);
  StateVector out(psi.num_sites());
  detail::dr_stencil(psi, detail::rotation_phases(grid), grid.epsilon(), out);
  return out;
}

struct EvolutionRecord {
  std::size_t step = 0;
  double norm = 1.0;
  std::vector<double> probabilities;  // empty unless requested
};

struct EvolutionTrace {
  std::vector<EvolutionRecord> records;
};

struct EvolutionResult {
  StateVector state;
  EvolutionTrace trace;
};

inline EvolutionResult evolve(StateVector psi, const PotentialGrid& grid, std::size_t steps,
                              bool record_probabilities = false) {
  detail::check_grid_state(psi, grid);
  const auto phases = detail::rotation_phases(grid);
  const double eps = grid.epsilon();
  EvolutionTrace trace;
  trace.records.reserve(steps);
  StateVector next(psi.num_sites());
  for (std::size_t s = 1; s <= steps; ++s) {
    detail::dr_stencil(psi, phases, eps, next);
    std::swap(psi, next);
    EvolutionRecord rec{s, psi.norm(), {}};
    if (record_probabilities) rec.probabilities = probabilities(psi);
    trace.records.push_back(std::move(rec));
  }
  return {std::move(psi), std::move(trace)};
}

struct StepDrift {
  double max_drift = 0.0;    // max |‖D R psi‖ - 1| over the sampled unit states
  double coefficient = 0.0;  // max_drift / eps^2
};

// Single-step norm drift measured on `samples` seeded random unit states.
inline StepDrift measure_step_drift(const PotentialGrid& grid, std::size_t samples,
                                    std::uint64_t seed) {
  StepDrift out;
  for (std::size_t k = 0; k < samples; ++k) {
    const StateVector psi = random_state(grid.num_sites(), seed + k);
    out.max_drift = std::max(out.max_drift, std::abs(dr_step(psi, grid).norm() - 1.0));
  }
  const double eps = grid.epsilon();
  out.coefficient = eps > 0.0 ? out.max_drift / (eps * eps) : 0.0;
  return out;
}

// `step,norm` rows, or long-form `step,norm,site,prob` when probabilities were recorded.
inline void write_evolution_csv(std::ostream& os, const EvolutionTrace& trace,
                                bool per_site) {
  os << (per_site ? "step,norm,site,prob\n" : "step,norm\n");
  for (const auto& rec : trace.records) {
    if (!per_site) {
      os << rec.step << ',' << format_double(rec.norm) << '\n';
      continue;
    }
    for (std::size_t j = 0; j < rec.probabilities.size(); ++j) {
      os << rec.step << ',' << format_double(rec.norm) << ',' << j << ','
         << format_double(rec.probabilities[j]) << '\n';
    }
  }
}

}  // namespace qsearch

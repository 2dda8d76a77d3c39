#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/dense_operator.hpp"
#include "qsearch/diffusion.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/format.hpp"
#include "qsearch/gates.hpp"
#include "qsearch/phase_ops.hpp"
#include "qsearch/statevec.hpp"

namespace qsearch {

// How the diffusion step of each iteration is evaluated.
enum class Engine { kSynthesized, kClosedForm, kDense };

inline std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::kSynthesized: return "synthesized";
    case Engine::kClosedForm: return "closed-form";
    case Engine::kDense: return "dense";
  }
  return "?";
}

inline Engine parse_engine(std::string_view name) {
  for (Engine e : {Engine::kSynthesized, Engine::kClosedForm, Engine::kDense}) {
    if (engine_name(e) == name) return e;
  }
  throw DomainError("unknown engine '" + std::string(name) + "'");
}

struct SearchConfig {
  unsigned n = 1;
  std::size_t target = 0;
  double gamma = kPi;
  std::optional<std::size_t> reps;  // nullopt: optimal_reps(2^n)
  std::uint64_t seed = 0;
  Engine engine = Engine::kSynthesized;
};

struct SearchRecord {
  std::size_t iteration = 0;
  Amplitude marked = 0.0;
  double marked_probability = 0.0;
  double unmarked_probability = 0.0;
  double norm = 1.0;
  // Norm before renormalization; equals `norm` for the unitary engines.
  double raw_norm = 1.0;
};

struct SearchTrace {
  std::vector<SearchRecord> records;
};

struct SearchResult {
  StateVector final_state;
  std::size_t reps = 0;
  double success_probability = 0.0;
  MeasurementSample measurement;
  SearchTrace trace;
};

// floor((pi/4) sqrt N), at least 1.
inline std::size_t optimal_reps(std::size_t num_sites) {
  if (num_sites < 2) throw DomainError("search needs N >= 2");
  const auto reps = static_cast<std::size_t>(
      std::floor(kPi / 4.0 * std::sqrt(static_cast<double>(num_sites))));
  return reps < 1 ? 1 : reps;
}

inline SearchRecord make_search_record(std::size_t iteration, const StateVector& psi,
                                       std::size_t target, double raw_norm) {
  SearchRecord r;
  r.iteration = iteration;
  r.marked = psi[target];
  r.marked_probability = std::norm(r.marked);
  const double total = psi.norm_squared();
  double unmarked = 0.0;
  for (std::size_t j = 0; j < psi.num_sites(); ++j) {
    if (j != target) unmarked += std::norm(psi[j]);
  }
  r.unmarked_probability = unmarked;
  r.norm = std::sqrt(total);
  r.raw_norm = raw_norm < 0.0 ? r.norm : raw_norm;
  return r;
}

// Starts from W|0...0> and applies D R_gamma(target) `reps` times.
inline SearchResult run_search(const SearchConfig& config) {
  if (config.n == 0 || config.n >= 8 * sizeof(std::size_t) - 1) {
    throw DomainError("qubit count out of range");
  }
  const std::size_t num_sites = std::size_t{1} << config.n;
  if (config.target >= num_sites) {
    throw DomainError("target " + std::to_string(config.target) + " out of range for " +
                      std::to_string(num_sites) + " sites");
  }
  if (config.engine == Engine::kDense) require_dense_dim(num_sites);

  const std::size_t reps = config.reps.value_or(optimal_reps(num_sites));
  const PhaseSpec phase{{config.target}, config.gamma};
  phase.validate(num_sites);

  StateVector psi = basis_state(num_sites, 0);
  walsh_hadamard_in_place(psi);

  DenseOperator dense_d;
  if (config.engine == Engine::kDense) dense_d = exact_diffusion_matrix(num_sites);

  SearchResult result;
  result.reps = reps;
  result.trace.records.reserve(reps + 1);
  result.trace.records.push_back(make_search_record(0, psi, config.target, -1.0));
  for (std::size_t it = 1; it <= reps; ++it) {
    selective_phase_rotation_in_place(psi, phase);
    switch (config.engine) {
      case Engine::kSynthesized: apply_diffusion_synthesized_in_place(psi); break;
      case Engine::kClosedForm: apply_diffusion_closed_form_in_place(psi); break;
      case Engine::kDense: psi = dense_d.apply(psi); break;
    }
    result.trace.records.push_back(make_search_record(it, psi, config.target, -1.0));
  }
  result.success_probability = probability(psi, config.target);
  result.measurement = measure(psi, config.seed);
  result.final_state = std::move(psi);
  return result;
}

// Successive differences of |marked amplitude|; empty for traces shorter than 2.
inline std::vector<double> per_iteration_gain(const SearchTrace& trace) {
  std::vector<double> gains;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    gains.push_back(std::abs(trace.records[i].marked) - std::abs(trace.records[i - 1].marked));
  }
  return gains;
}

enum class PhaseSchedule {
  // Each step rotates the marked amplitude so its phase leads the unmarked
  // amplitudes by gamma, undoing the phase D picked up on the previous step.
  kLocked,
  // Plain R_gamma every step.
  kFixed,
};

struct InfinitesimalSearchConfig {
  std::size_t num_sites = 64;
  double epsilon = 1e-3;
  double gamma = kPi / 2.0;
  std::size_t steps = 100;
  std::size_t target = 0;
  PhaseSchedule schedule = PhaseSchedule::kLocked;
};

// Above this N*eps the all-to-all D is too far from unitary to use.
inline constexpr double kMaxInfinitesimalCoupling = 0.5;

// Iterates D_eps R from the uniform state with the exact-diagonal dense D,
// renormalizing each step. Record norms are post-normalization; raw_norm
// keeps the drift.
inline SearchTrace infinitesimal_search_run(const InfinitesimalSearchConfig& config) {
  const InfinitesimalDiffusionSpec spec{config.num_sites, config.epsilon, true};
  spec.validate();
  if (static_cast<double>(config.num_sites) * config.epsilon > kMaxInfinitesimalCoupling) {
    throw DomainError("N*epsilon exceeds " + format_double(kMaxInfinitesimalCoupling) +
                      "; infinitesimal diffusion regime is invalid");
  }
  if (config.target >= config.num_sites) throw DomainError("target out of range");
  if (!std::isfinite(config.gamma)) throw DomainError("phase angle must be finite");

  const DenseOperator d = infinitesimal_diffusion_matrix(spec);
  StateVector psi = uniform_state(config.num_sites);
  const std::size_t t = config.target;

  SearchTrace trace;
  trace.records.reserve(config.steps + 1);
  trace.records.push_back(make_search_record(0, psi, t, -1.0));
  for (std::size_t step = 1; step <= config.steps; ++step) {
    if (config.schedule == PhaseSchedule::kFixed) {
      psi[t] *= phase_factor(config.gamma);
    } else {
      Amplitude unmarked_sum = 0.0;
      for (std::size_t j = 0; j < psi.num_sites(); ++j) {
        if (j != t) unmarked_sum += psi[j];
      }
      psi[t] = std::polar(std::abs(psi[t]), std::arg(unmarked_sum) + config.gamma);
    }
    psi = d.apply(psi);
    const double raw = psi.normalize();
    trace.records.push_back(make_search_record(step, psi, t, raw));
  }
  return trace;
}

// Columns: iteration,marked_re,marked_im,marked_prob,unmarked_prob,norm
inline void write_search_csv(std::ostream& os, const SearchTrace& trace) {
  os << "iteration,marked_re,marked_im,marked_prob,unmarked_prob,norm\n";
  for (const auto& r : trace.records) {
    os << r.iteration << ',' << format_double(r.marked.real()) << ','
       << format_double(r.marked.imag()) << ',' << format_double(r.marked_probability) << ','
       << format_double(r.unmarked_probability) << ',' << format_double(r.norm) << '\n';
  }
}

}  // namespace qsearch

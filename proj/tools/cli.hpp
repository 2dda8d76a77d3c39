#pragma once

// Command-line front end. Everything lives in this header so the test suite
// can drive commands in-process through qsearch::cli::run().

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsearch/qsearch.hpp"

namespace qsearch::cli {

enum ExitCode : int { kOk = 0, kToleranceFailure = 1, kUsageError = 2 };

// Largest register the search command will allocate (16M amplitudes).
inline constexpr unsigned kMaxSearchQubits = 24;
// Dense audits and exhaustive kickback checks stay at this size.
inline constexpr unsigned kMaxAuditQubits = 5;

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

inline void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--seed", opts.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", opts.out, "Output file (default: stdout)");
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

// Writes `text` to `path`, or to `fallback` when no path was given.
inline void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  f << text;
}

inline nlohmann::json search_trace_json(const SearchTrace& trace) {
  auto rows = nlohmann::json::array();
  for (const auto& r : trace.records) {
    rows.push_back({{"iteration", r.iteration},
                    {"marked_re", r.marked.real()},
                    {"marked_im", r.marked.imag()},
                    {"marked_prob", r.marked_probability},
                    {"unmarked_prob", r.unmarked_probability},
                    {"norm", r.norm}});
  }
  return rows;
}

// ---------------------------------------------------------------- search

struct SearchOptions {
  CommonOptions common;
  unsigned n = 0;
  std::size_t target = 0;
  double gamma = kPi;
  std::optional<std::size_t> reps;
  std::string engine = "synthesized";
  double norm_tol = 1e-10;
  double min_success = 0.0;
};

inline int cmd_search(const SearchOptions& o, bool full_trace, std::ostream& out,
                      std::ostream& err) {
  if (o.n < 1 || o.n > kMaxSearchQubits) {
    err << "error: --n must be in [1, " << kMaxSearchQubits << "]\n";
    return kUsageError;
  }
  SearchConfig cfg;
  cfg.n = o.n;
  cfg.target = o.target;
  cfg.gamma = o.gamma;
  cfg.reps = o.reps;
  cfg.seed = o.common.seed;
  cfg.engine = parse_engine(o.engine);
  const SearchResult res = run_search(cfg);

  const double norm_dev = std::abs(res.final_state.norm() - 1.0);
  const bool pass = norm_dev <= o.norm_tol && res.success_probability >= o.min_success;

  std::ostringstream summary;
  summary << "N=" << res.final_state.num_sites() << " reps=" << res.reps
          << " success=" << format_double(res.success_probability)
          << " measured=" << res.measurement.index << " seed=" << res.measurement.seed
          << " engine=" << engine_name(cfg.engine) << " norm_deviation=" << format_double(norm_dev)
          << " status=" << (pass ? "pass" : "fail") << '\n';

  std::ostringstream trace_text;
  if (o.common.format == "json") {
    nlohmann::json doc{{"N", res.final_state.num_sites()},
                       {"reps", res.reps},
                       {"target", cfg.target},
                       {"gamma", cfg.gamma},
                       {"engine", engine_name(cfg.engine)},
                       {"success_probability", res.success_probability},
                       {"measured_index", res.measurement.index},
                       {"seed", res.measurement.seed},
                       {"norm_deviation", norm_dev},
                       {"pass", pass},
                       {"trace", search_trace_json(res.trace)}};
    trace_text << doc.dump(2) << '\n';
  } else {
    write_search_csv(trace_text, res.trace);
  }

  if (full_trace) {
    emit(o.common.out, trace_text.str(), out);
    (o.common.out.empty() ? err : out) << summary.str();
  } else {
    if (!o.common.out.empty()) emit(o.common.out, trace_text.str(), out);
    out << summary.str();
  }
  return pass ? kOk : kToleranceFailure;
}

// ----------------------------------------------------------- schrodinger

struct SchrodingerOptions {
  CommonOptions common;
  std::size_t sites = 64;
  std::size_t steps = 1000;
  double epsilon = 1e-3;
  double dx = 1.0;
  std::optional<double> dt;
  std::string potential = "square";
  std::optional<std::size_t> well_center;
  std::size_t well_width = 4;
  double well_depth = 5.0;
  double curvature = 1e-2;
  std::string potential_file;
  bool per_site = false;
  bool force = false;
  std::size_t drift_samples = 8;
};

inline std::vector<double> read_potential_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open potential file '" + path + "'");
  std::vector<double> v;
  std::string line;
  while (std::getline(f, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    v.push_back(std::stod(line.substr(first)));
  }
  return v;
}

inline PotentialGrid make_grid(const SchrodingerOptions& o) {
  const double dt = o.dt.value_or(o.epsilon * o.dx * o.dx);
  const std::size_t center = o.well_center.value_or(o.sites / 2);
  if (o.potential == "zero") return PotentialGrid::flat(o.sites, o.dx, dt);
  if (o.potential == "square") {
    return PotentialGrid::square_well(o.sites, center, o.well_width, o.well_depth, o.dx, dt);
  }
  if (o.potential == "quadratic") {
    return PotentialGrid::quadratic_well(o.sites, center, o.curvature, o.dx, dt);
  }
  if (o.potential_file.empty()) throw DomainError("--potential file requires --potential-file");
  return {read_potential_file(o.potential_file), o.dx, dt};
}

inline int cmd_schrodinger(const SchrodingerOptions& o, std::ostream& out, std::ostream& err) {
  const PotentialGrid grid = make_grid(o);
  const double eps = grid.epsilon();
  if (!grid.stable()) {
    if (!o.force) {
      err << "error: epsilon = " << format_double(eps) << " exceeds " << kMaxStableEpsilon
          << "; the step is far from unitary (use --force to run anyway)\n";
      return kUsageError;
    }
    err << "warning: epsilon = " << format_double(eps) << " exceeds " << kMaxStableEpsilon
        << "\n";
  }

  const StateVector initial = uniform_state(grid.num_sites());
  const auto drift = measure_step_drift(grid, std::max<std::size_t>(o.drift_samples, 1),
                                        o.common.seed);
  const EvolutionResult res = evolve(initial, grid, o.steps, o.per_site);

  const double bound = static_cast<double>(o.steps) * drift.max_drift;
  const double cumulative = std::abs(res.state.norm() - 1.0);
  const std::size_t min_site = grid.minimum_site();
  const double p_initial = probability(initial, min_site);
  const double p_final = probability(res.state, min_site);
  const bool pass = cumulative <= bound;

  std::ostringstream trace_text;
  if (o.common.format == "json") {
    auto rows = nlohmann::json::array();
    for (const auto& r : res.trace.records) {
      nlohmann::json row{{"step", r.step}, {"norm", r.norm}};
      if (o.per_site) row["prob"] = r.probabilities;
      rows.push_back(std::move(row));
    }
    nlohmann::json doc{{"sites", grid.num_sites()},
                       {"steps", o.steps},
                       {"epsilon", eps},
                       {"dt", grid.dt()},
                       {"dx", grid.dx()},
                       {"step_drift", drift.max_drift},
                       {"step_drift_coefficient", drift.coefficient},
                       {"norm_drift", cumulative},
                       {"norm_drift_bound", bound},
                       {"min_site", min_site},
                       {"initial_prob_at_min", p_initial},
                       {"final_prob_at_min", p_final},
                       {"pass", pass},
                       {"trace", rows}};
    trace_text << doc.dump(2) << '\n';
  } else {
    write_evolution_csv(trace_text, res.trace, o.per_site);
  }
  std::ostringstream summary;
  summary << "sites=" << grid.num_sites() << " steps=" << o.steps
          << " epsilon=" << format_double(eps) << " step_drift=" << format_double(drift.max_drift)
          << " c=" << format_double(drift.coefficient)
          << " norm_drift=" << format_double(cumulative) << " bound=" << format_double(bound)
          << " min_site=" << min_site << " prob_initial=" << format_double(p_initial)
          << " prob_final=" << format_double(p_final) << " status=" << (pass ? "pass" : "fail")
          << '\n';

  emit(o.common.out, trace_text.str(), out);
  (o.common.out.empty() ? err : out) << summary.str();
  return pass ? kOk : kToleranceFailure;
}

// ----------------------------------------------------------------- audit

struct AuditOptions {
  CommonOptions common;
  unsigned n = 3;
  double gamma = kPi;
  double break_b = 0.0;
  double unitary_tol = 1e-12;
  double identity_tol = 1e-13;
  double residual_tol = 1e-14;
};

struct AuditCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

inline std::vector<AuditCheck> build_audit(const AuditOptions& o) {
  const std::size_t dim = std::size_t{1} << o.n;
  ExactDiffusionSpec spec = ExactDiffusionSpec::for_size(dim);
  spec.b += o.break_b;
  const DenseOperator d = exact_diffusion_matrix(spec);

  std::vector<AuditCheck> checks;
  auto unitary = [&](std::string name, const DenseOperator& u) {
    checks.push_back({"unitarity " + name, check_unitary(u, o.unitary_tol).defect, o.unitary_tol});
  };
  unitary("M", hadamard_m());
  unitary("NOT", reversible_gate(GateKind::kNot));
  unitary("CNOT", reversible_gate(GateKind::kCnot));
  unitary("CCNOT", reversible_gate(GateKind::kCcnot));
  unitary("W(n)", walsh_hadamard_matrix(o.n));
  unitary("D(N)", d);
  unitary("R_gamma(N)", phase_rotation_matrix(dim, PhaseSpec{{dim - 1}, o.gamma}));
  unitary("R_potential(N)",
          potential_rotation(PotentialGrid::quadratic_well(std::max<std::size_t>(dim, 2), 0, 1.0,
                                                           1.0, 1e-2)));

  const DenseOperator w = walsh_hadamard_matrix(o.n);
  DenseOperator i0 = DenseOperator::identity(dim);
  i0(0, 0) = -1.0;
  DenseOperator synthesized = w * i0 * w;
  synthesized *= -1.0;
  checks.push_back({"synthesis D = -W I0 W", max_abs_diff(d, synthesized), o.identity_tol});
  checks.push_back({"column sums of D", column_sum_defect(d), o.residual_tol});
  checks.push_back({"column norm |a|^2+(N-1)|b|^2-1", std::abs(spec.column_norm_residual()),
                    o.residual_tol});
  checks.push_back({"column orthogonality 2Re(ab*)+(N-2)|b|^2",
                    std::abs(spec.column_orthogonality_residual()), o.residual_tol});
  if (dim == 2) {
    checks.push_back({"D(2) equals NOT", max_abs_diff(d, reversible_gate(GateKind::kNot)), 0.0});
  }
  return checks;
}

inline int cmd_audit(const AuditOptions& o, std::ostream& out, std::ostream& err) {
  if (o.n < 1 || o.n > kMaxAuditQubits) {
    err << "error: --n must be in [1, " << kMaxAuditQubits << "] for dense audits\n";
    return kUsageError;
  }
  const auto checks = build_audit(o);
  bool all = true;
  double max_defect = 0.0;
  for (const auto& c : checks) {
    all = all && c.pass();
    max_defect = std::max(max_defect, c.value);
  }

  std::ostringstream text;
  if (o.common.format == "json") {
    auto rows = nlohmann::json::array();
    for (const auto& c : checks) {
      rows.push_back({{"check", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
                      {"pass", c.pass()}});
    }
    text << nlohmann::json{{"n", o.n}, {"N", std::size_t{1} << o.n}, {"checks", rows},
                           {"max_defect", max_defect}, {"pass", all}}
                .dump(2)
         << '\n';
  } else {
    text << "check,value,tolerance,status\n";
    for (const auto& c : checks) {
      text << c.name << ',' << format_double(c.value) << ',' << c.tolerance << ','
           << (c.pass() ? "pass" : "fail") << '\n';
    }
    if (o.n == 1) {
      const DenseOperator d = exact_diffusion_matrix(2);
      text << "# D(2) = [[" << d(0, 0).real() << ", " << d(0, 1).real() << "], ["
           << d(1, 0).real() << ", " << d(1, 1).real() << "]] (NOT)\n";
    }
    text << "# max_defect=" << format_double(max_defect) << " status=" << (all ? "pass" : "fail")
         << '\n';
  }
  emit(o.common.out, text.str(), out);
  return all ? kOk : kToleranceFailure;
}

// --------------------------------------------------------- kickback-check

struct KickbackOptions {
  CommonOptions common;
  unsigned n = 3;
  std::optional<std::size_t> target;
  std::string circuit_file;
  std::optional<unsigned> ancillas;
  std::string emit_circuit;
  double tol = 1e-10;
  double contract_tol = kAncillaContractTolerance;
};

struct KickbackReport {
  std::size_t target = 0;
  std::size_t gates = 0;
  double max_deviation = 0.0;
  double max_ancilla_residual = 0.0;
};

// Exhaustive basis-state comparison of the circuit against direct inversion.
inline KickbackReport check_kickback(const ReversibleCircuit& circuit, std::size_t target,
                                     double contract_tol) {
  const TruthTableOracle oracle{circuit.data_wires, {target}};
  KickbackReport rep{target, circuit.gates.size(), 0.0, 0.0};
  for (std::size_t x = 0; x < oracle.num_sites(); ++x) {
    const StateVector psi = basis_state(oracle.num_sites(), x);
    const auto kicked = kickback_apply(psi, circuit, contract_tol);
    rep.max_deviation =
        std::max(rep.max_deviation, max_abs_diff(kicked.state, phase_oracle_apply(psi, oracle)));
    rep.max_ancilla_residual = std::max(rep.max_ancilla_residual, kicked.ancilla_residual);
  }
  return rep;
}

inline int cmd_kickback_check(const KickbackOptions& o, std::ostream& out, std::ostream& err) {
  if (o.n < 1 || o.n > kMaxAuditQubits) {
    err << "error: --n must be in [1, " << kMaxAuditQubits << "]\n";
    return kUsageError;
  }
  const std::size_t num_sites = std::size_t{1} << o.n;
  if (o.target && *o.target >= num_sites) {
    err << "error: --target out of range\n";
    return kUsageError;
  }
  if (!o.emit_circuit.empty()) {
    if (!o.target) {
      err << "error: --emit-circuit requires --target\n";
      return kUsageError;
    }
    emit(o.emit_circuit, format_circuit(compile_marked_indicator(o.n, *o.target)), out);
    return kOk;
  }

  std::vector<ReversibleCircuit> circuits;
  std::vector<std::size_t> targets;
  if (!o.circuit_file.empty()) {
    if (!o.target) {
      err << "error: --circuit requires --target\n";
      return kUsageError;
    }
    std::ifstream f(o.circuit_file);
    if (!f) {
      err << "error: cannot open circuit file '" << o.circuit_file << "'\n";
      return kUsageError;
    }
    const unsigned anc = o.ancillas.value_or((o.n > 2 ? o.n - 2 : 0) + 1);
    circuits.push_back(parse_circuit(f, o.n, anc));
    targets.push_back(*o.target);
  } else {
    for (std::size_t t = 0; t < num_sites; ++t) {
      if (o.target && *o.target != t) continue;
      circuits.push_back(compile_marked_indicator(o.n, t));
      targets.push_back(t);
    }
  }

  std::vector<KickbackReport> reports;
  try {
    for (std::size_t i = 0; i < circuits.size(); ++i) {
      reports.push_back(check_kickback(circuits[i], targets[i], o.contract_tol));
    }
  } catch (const CircuitContractError& e) {
    err << "ancilla-contract error: " << e.what() << '\n';
    return kToleranceFailure;
  }

  double max_dev = 0.0;
  double max_res = 0.0;
  for (const auto& r : reports) {
    max_dev = std::max(max_dev, r.max_deviation);
    max_res = std::max(max_res, r.max_ancilla_residual);
  }
  const bool pass = max_dev <= o.tol;

  std::ostringstream text;
  if (o.common.format == "json") {
    auto rows = nlohmann::json::array();
    for (const auto& r : reports) {
      rows.push_back({{"target", r.target}, {"gates", r.gates}, {"max_deviation", r.max_deviation},
                      {"ancilla_residual", r.max_ancilla_residual}});
    }
    text << nlohmann::json{{"n", o.n}, {"targets", rows}, {"max_deviation", max_dev},
                           {"max_ancilla_residual", max_res}, {"pass", pass}}
                .dump(2)
         << '\n';
  } else {
    text << "target,gates,max_deviation,ancilla_residual\n";
    for (const auto& r : reports) {
      text << r.target << ',' << r.gates << ',' << format_double(r.max_deviation) << ','
           << format_double(r.max_ancilla_residual) << '\n';
    }
    text << "# n=" << o.n << " max_deviation=" << format_double(max_dev)
         << " status=" << (pass ? "pass" : "fail") << '\n';
  }
  emit(o.common.out, text.str(), out);
  return pass ? kOk : kToleranceFailure;
}

// ------------------------------------------------------------------ main

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum search from the discretized Schrodinger equation"};
  app.require_subcommand(1);

  SearchOptions search_opts;
  SearchOptions trace_opts;
  auto add_search_flags = [](CLI::App* cmd, SearchOptions& o) {
    add_common(cmd, o.common);
    cmd->add_option("--n", o.n, "Qubits (N = 2^n)")->required();
    cmd->add_option("--target", o.target, "Marked index")->capture_default_str();
    cmd->add_option("--gamma", o.gamma, "Phase rotation of the marked state (radians)")
        ->capture_default_str();
    cmd->add_option("--reps", o.reps, "Iterations (default floor(pi/4 sqrt N))");
    cmd->add_option("--engine", o.engine, "Diffusion engine")
        ->check(CLI::IsMember({"synthesized", "closed-form", "dense"}))
        ->capture_default_str();
    cmd->add_option("--norm-tol", o.norm_tol, "Allowed final norm deviation")
        ->capture_default_str();
    cmd->add_option("--min-success", o.min_success, "Required success probability")
        ->capture_default_str();
  };
  auto* search = app.add_subcommand("search", "Run quantum search and print a summary");
  add_search_flags(search, search_opts);
  auto* trace = app.add_subcommand("trace", "Run quantum search and emit the full trace");
  add_search_flags(trace, trace_opts);

  SchrodingerOptions sch;
  auto* schrodinger = app.add_subcommand("schrodinger", "Evolve a periodic 1-D grid with DR steps");
  add_common(schrodinger, sch.common);
  schrodinger->add_option("--sites", sch.sites, "Grid sites")->capture_default_str();
  schrodinger->add_option("--steps", sch.steps, "DR steps")->capture_default_str();
  schrodinger->add_option("--epsilon", sch.epsilon, "dt/dx^2 (ignored when --dt is given)")
      ->capture_default_str();
  schrodinger->add_option("--dx", sch.dx, "Grid spacing")->capture_default_str();
  schrodinger->add_option("--dt", sch.dt, "Time step");
  schrodinger->add_option("--potential", sch.potential, "Potential shape")
      ->check(CLI::IsMember({"zero", "square", "quadratic", "file"}))
      ->capture_default_str();
  schrodinger->add_option("--well-center", sch.well_center, "Well centre site (default N/2)");
  schrodinger->add_option("--well-width", sch.well_width, "Square well width in sites")
      ->capture_default_str();
  schrodinger->add_option("--well-depth", sch.well_depth, "Square well depth")
      ->capture_default_str();
  schrodinger->add_option("--curvature", sch.curvature, "Quadratic well curvature")
      ->capture_default_str();
  schrodinger->add_option("--potential-file", sch.potential_file, "One potential value per line");
  schrodinger->add_flag("--per-site", sch.per_site, "Emit per-site probabilities (long form)");
  schrodinger->add_flag("--force", sch.force, "Run even when epsilon > 0.1");
  schrodinger->add_option("--drift-samples", sch.drift_samples,
                          "Random states used to measure the per-step drift")
      ->capture_default_str();

  AuditOptions aud;
  auto* audit = app.add_subcommand("audit", "Dense unitarity and synthesis audits");
  add_common(audit, aud.common);
  audit->add_option("--n", aud.n, "Qubits (1..5)")->capture_default_str();
  audit->add_option("--gamma", aud.gamma, "Phase angle for the R audit")->capture_default_str();
  audit->add_option("--break-b", aud.break_b, "Add this offset to b = 2/N")->capture_default_str();
  audit->add_option("--unitary-tol", aud.unitary_tol)->capture_default_str();
  audit->add_option("--identity-tol", aud.identity_tol)->capture_default_str();
  audit->add_option("--residual-tol", aud.residual_tol)->capture_default_str();

  KickbackOptions kb;
  auto* kick = app.add_subcommand("kickback-check", "Compare the ancilla kickback circuit "
                                                    "against direct selective inversion");
  add_common(kick, kb.common);
  kick->add_option("--n", kb.n, "Data qubits (1..5)")->capture_default_str();
  kick->add_option("--target", kb.target, "Check one target only");
  kick->add_option("--circuit", kb.circuit_file, "Circuit file to check instead of compiling");
  kick->add_option("--ancillas", kb.ancillas, "Ancilla count for --circuit");
  kick->add_option("--emit-circuit", kb.emit_circuit, "Write the compiled circuit and exit");
  kick->add_option("--tol", kb.tol, "Allowed deviation")->capture_default_str();
  kick->add_option("--contract-tol", kb.contract_tol, "Allowed ancilla residual")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*search) return cmd_search(search_opts, false, out, err);
    if (*trace) return cmd_search(trace_opts, true, out, err);
    if (*schrodinger) return cmd_schrodinger(sch, out, err);
    if (*audit) return cmd_audit(aud, out, err);
    if (*kick) return cmd_kickback_check(kb, out, err);
  } catch (const CircuitContractError& e) {
    err << "ancilla-contract error: " << e.what() << '\n';
    return kToleranceFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace qsearch::cli

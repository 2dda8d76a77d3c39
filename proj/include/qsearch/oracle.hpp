#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qsearch/errors.hpp"
#include "qsearch/gates.hpp"
#include "qsearch/phase_ops.hpp"
#include "qsearch/statevec.hpp"

namespace qsearch {

// f(x) = 1 exactly on the marked indices of an n-qubit register.
struct TruthTableOracle {
  unsigned n = 1;
  std::set<std::size_t> marked;

  std::size_t num_sites() const { return std::size_t{1} << n; }

  bool operator()(std::size_t x) const { return marked.count(x) != 0; }

  void validate() const {
    if (!marked.empty() && *marked.rbegin() >= num_sites()) {
      throw DomainError("marked index " + std::to_string(*marked.rbegin()) + " out of range for " +
                        std::to_string(n) + " qubits");
    }
  }
};

// Reversible circuit over data wires 0..n-1, then work ancillas, then one
// output ancilla on the last wire.
struct ReversibleCircuit {
  unsigned data_wires = 1;
  unsigned ancilla_wires = 1;  // work ancillas + the output ancilla
  std::vector<GateApplication> gates;

  unsigned total_wires() const { return data_wires + ancilla_wires; }
  unsigned work_wires() const { return ancilla_wires - 1; }
  unsigned first_work_wire() const { return data_wires; }
  unsigned output_wire() const { return total_wires() - 1; }

  void validate() const {
    if (data_wires == 0) throw DomainError("circuit needs at least one data wire");
    if (ancilla_wires == 0) throw DomainError("circuit needs an output ancilla");
    for (const auto& g : gates) g.validate(total_wires());
  }
};

inline StateVector phase_oracle_apply(StateVector psi, const TruthTableOracle& oracle) {
  oracle.validate();
  if (psi.require_qubits() != oracle.n) {
    throw DomainError("oracle acts on " + std::to_string(oracle.n) + " qubits, state has " +
                      std::to_string(psi.require_qubits()));
  }
  selective_inversion_in_place(psi, oracle.marked);
  return psi;
}

// Computes [x == target] into the output ancilla: NOTs on the zero bits of
// target, a CCNOT ladder through n-2 work ancillas, then the mirror image to
// restore the work ancillas and data wires.
inline ReversibleCircuit compile_marked_indicator(unsigned n, std::size_t target) {
  if (n == 0) throw DomainError("indicator needs n >= 1");
  if (n >= 8 * sizeof(std::size_t) || target >= (std::size_t{1} << n)) {
    throw DomainError("target " + std::to_string(target) + " out of range for " +
                      std::to_string(n) + " qubits");
  }
  ReversibleCircuit c;
  c.data_wires = n;
  c.ancilla_wires = (n > 2 ? n - 2 : 0) + 1;
  const unsigned out = c.output_wire();
  const unsigned work = c.first_work_wire();

  std::vector<GateApplication> flips;
  for (unsigned q = 0; q < n; ++q) {
    if (((target >> q) & 1U) == 0) flips.push_back({GateKind::kNot, {q}});
  }

  std::vector<GateApplication> ladder;
  if (n >= 3) {
    ladder.push_back({GateKind::kCcnot, {0, 1, work}});
    for (unsigned q = 2; q + 1 < n; ++q) {
      ladder.push_back({GateKind::kCcnot, {q, work + q - 2, work + q - 1}});
    }
  }

  GateApplication apex;
  if (n == 1) apex = {GateKind::kCnot, {0, out}};
  else if (n == 2) apex = {GateKind::kCcnot, {0, 1, out}};
  else apex = {GateKind::kCcnot, {n - 1, work + n - 3, out}};

  c.gates = flips;
  c.gates.insert(c.gates.end(), ladder.begin(), ladder.end());
  c.gates.push_back(apex);
  c.gates.insert(c.gates.end(), ladder.rbegin(), ladder.rend());
  c.gates.insert(c.gates.end(), flips.rbegin(), flips.rend());
  return c;
}

inline void circuit_apply_in_place(StateVector& psi, const ReversibleCircuit& circuit) {
  circuit.validate();
  if (psi.require_qubits() != circuit.total_wires()) {
    throw DomainError("circuit has " + std::to_string(circuit.total_wires()) +
                      " wires, register has " + std::to_string(psi.require_qubits()));
  }
  for (const auto& g : circuit.gates) apply_gate_in_place(psi, g);
}

inline StateVector circuit_apply(StateVector psi, const ReversibleCircuit& circuit) {
  circuit_apply_in_place(psi, circuit);
  return psi;
}

inline constexpr double kAncillaContractTolerance = 1e-8;

struct KickbackOutcome {
  StateVector state;             // data register after the kickback
  double ancilla_residual = 0.0; // max deviation from (ancillas as prepared) (x) state
};

// Runs the circuit with the output ancilla in (|0> - |1>)/sqrt 2 and work
// ancillas in |0>, then factors the data register back out.
inline KickbackOutcome kickback_apply(const StateVector& psi, const ReversibleCircuit& circuit,
                                      double contract_tolerance = kAncillaContractTolerance) {
  circuit.validate();
  if (psi.require_qubits() != circuit.data_wires) {
    throw DomainError("circuit has " + std::to_string(circuit.data_wires) +
                      " data wires, state has " + std::to_string(psi.require_qubits()));
  }
  const std::size_t data_dim = psi.num_sites();
  const std::size_t anc_dim = std::size_t{1} << circuit.ancilla_wires;
  const std::size_t out_bit = std::size_t{1} << (circuit.ancilla_wires - 1);
  const double s = 1.0 / std::sqrt(2.0);

  // Ancilla register: work wires low, output ancilla high.
  StateVector ancillas(anc_dim);
  ancillas[0] = s;
  ancillas[out_bit] = -s;
  StateVector extended = tensor(ancillas, psi);
  circuit_apply_in_place(extended, circuit);

  StateVector data(data_dim);
  for (std::size_t j = 0; j < data_dim; ++j) data[j] = extended[j] / s;

  double residual = 0.0;
  for (std::size_t a = 0; a < anc_dim; ++a)
    for (std::size_t j = 0; j < data_dim; ++j) {
      const Amplitude expected = ancillas[a] * data[j];
      residual = std::max(residual, std::abs(extended[a * data_dim + j] - expected));
    }
  if (residual > contract_tolerance) {
    throw CircuitContractError("ancillas did not return to their prepared states (residual " +
                               std::to_string(residual) + ")");
  }
  return {std::move(data), residual};
}

// One gate per line: `KIND wire[,wire[,wire]]`, controls before target.
inline std::string format_circuit(const ReversibleCircuit& circuit) {
  std::ostringstream os;
  for (const auto& g : circuit.gates) {
    os << gate_name(g.kind) << ' ';
    for (std::size_t i = 0; i < g.wires.size(); ++i) os << (i ? "," : "") << g.wires[i];
    os << '\n';
  }
  return os.str();
}

// Inverse of format_circuit. Blank lines and lines starting with '#' are skipped.
inline ReversibleCircuit parse_circuit(std::istream& is, unsigned data_wires,
                                       unsigned ancilla_wires) {
  ReversibleCircuit c;
  c.data_wires = data_wires;
  c.ancilla_wires = ancilla_wires;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line.substr(first));
    std::string kind, wires;
    ls >> kind >> wires;
    std::string extra;
    if (wires.empty() || (ls >> extra)) {
      throw DomainError("circuit line " + std::to_string(line_no) + ": expected 'KIND w[,w[,w]]'");
    }
    GateApplication g;
    try {
      g.kind = parse_gate_kind(kind);
      std::istringstream ws(wires);
      std::string tok;
      while (std::getline(ws, tok, ',')) {
        std::size_t used = 0;
        const unsigned long w = std::stoul(tok, &used);
        if (used != tok.size()) throw DomainError("bad wire '" + tok + "'");
        g.wires.push_back(static_cast<unsigned>(w));
      }
      g.validate(c.total_wires());
    } catch (const std::exception& e) {
      throw DomainError("circuit line " + std::to_string(line_no) + ": " + e.what());
    }
    c.gates.push_back(std::move(g));
  }
  c.validate();
  return c;
}

}  // namespace qsearch

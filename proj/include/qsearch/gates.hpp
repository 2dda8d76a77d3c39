#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/dense_operator.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/statevec.hpp"

namespace qsearch {

enum class GateKind { kNot, kCnot, kCcnot, kM };

inline std::size_t arity(GateKind kind) {
  switch (kind) {
    case GateKind::kNot: return 1;
    case GateKind::kCnot: return 2;
    case GateKind::kCcnot: return 3;
    case GateKind::kM: return 1;
  }
  throw DomainError("unknown gate kind");
}

inline std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kNot: return "NOT";
    case GateKind::kCnot: return "CNOT";
    case GateKind::kCcnot: return "CCNOT";
    case GateKind::kM: return "M";
  }
  throw DomainError("unknown gate kind");
}

inline GateKind parse_gate_kind(std::string_view name) {
  for (GateKind k : {GateKind::kNot, GateKind::kCnot, GateKind::kCcnot, GateKind::kM}) {
    if (gate_name(k) == name) return k;
  }
  throw DomainError("unknown gate kind '" + std::string(name) + "'");
}

// One gate placed on register wires. Controls come first, the target last.
struct GateApplication {
  GateKind kind = GateKind::kNot;
  std::vector<unsigned> wires;

  void validate(unsigned register_wires) const {
    if (wires.size() != arity(kind)) {
      throw DomainError(std::string(gate_name(kind)) + " expects " + std::to_string(arity(kind)) +
                        " wires, got " + std::to_string(wires.size()));
    }
    for (std::size_t i = 0; i < wires.size(); ++i) {
      if (wires[i] >= register_wires) {
        throw DomainError("wire " + std::to_string(wires[i]) + " out of range for a " +
                          std::to_string(register_wires) + "-wire register");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (wires[i] == wires[j]) throw DomainError("gate wires must be distinct");
      }
    }
  }

  friend bool operator==(const GateApplication&, const GateApplication&) = default;
};

// M = (1/sqrt 2) [[1, 1], [1, -1]].
inline DenseOperator hadamard_m() {
  const double s = 1.0 / std::sqrt(2.0);
  return DenseOperator{{s, s}, {s, -s}};
}

// Permutation matrices of the reversible gate set. Controls are the
// higher-order bits of the local index, the target is bit 0.
inline DenseOperator reversible_gate(GateKind kind) {
  switch (kind) {
    case GateKind::kNot:
      return DenseOperator{{0.0, 1.0}, {1.0, 0.0}};
    case GateKind::kCnot:
    case GateKind::kCcnot: {
      const std::size_t dim = std::size_t{1} << arity(kind);
      DenseOperator op(dim);
      for (std::size_t i = 0; i < dim - 2; ++i) op(i, i) = 1.0;
      op(dim - 2, dim - 1) = 1.0;
      op(dim - 1, dim - 2) = 1.0;
      return op;
    }
    case GateKind::kM:
      break;
  }
  throw DomainError("not a reversible gate kind: " + std::string(gate_name(kind)));
}

inline DenseOperator gate_matrix(GateKind kind) {
  return kind == GateKind::kM ? hadamard_m() : reversible_gate(kind);
}

namespace detail {

inline void apply_local_gate(StateVector& psi, const DenseOperator& u,
                             const std::vector<unsigned>& wires) {
  const std::size_t k = wires.size();
  const std::size_t local_dim = std::size_t{1} << k;
  // Local bit (k - 1 - i) corresponds to wires[i].
  std::array<std::size_t, 8> offsets{};
  std::size_t gate_mask = 0;
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((l >> (k - 1 - i)) & 1U) off |= std::size_t{1} << wires[i];
    }
    offsets[l] = off;
  }
  for (unsigned w : wires) gate_mask |= std::size_t{1} << w;

  std::array<Amplitude, 8> in{};
  for (std::size_t base = 0; base < psi.num_sites(); ++base) {
    if (base & gate_mask) continue;
    for (std::size_t l = 0; l < local_dim; ++l) in[l] = psi[base | offsets[l]];
    for (std::size_t r = 0; r < local_dim; ++r) {
      Amplitude acc = 0.0;
      for (std::size_t c = 0; c < local_dim; ++c) acc += u(r, c) * in[c];
      psi[base | offsets[r]] = acc;
    }
  }
}

}  // namespace detail

inline void apply_gate_in_place(StateVector& psi, const GateApplication& g) {
  g.validate(psi.require_qubits());
  detail::apply_local_gate(psi, gate_matrix(g.kind), g.wires);
}

inline StateVector apply_gate(StateVector psi, const GateApplication& g) {
  apply_gate_in_place(psi, g);
  return psi;
}

// In-place fast Walsh-Hadamard butterfly: M on every qubit, scaled by
// 1/sqrt 2 per stage. Returns the number of M layers applied (= n).
inline std::size_t walsh_hadamard_in_place(StateVector& psi) {
  const unsigned n = psi.require_qubits();
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t size = psi.num_sites();
  for (unsigned q = 0; q < n; ++q) {
    const std::size_t half = std::size_t{1} << q;
    for (std::size_t block = 0; block < size; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const Amplitude a = psi[i];
        const Amplitude b = psi[i + half];
        psi[i] = (a + b) * s;
        psi[i + half] = (a - b) * s;
      }
    }
  }
  return n;
}

inline StateVector walsh_hadamard(StateVector psi) {
  walsh_hadamard_in_place(psi);
  return psi;
}

// Dense M (x) ... (x) M on n qubits, for audits.
inline DenseOperator walsh_hadamard_matrix(unsigned n) {
  require_dense_dim(std::size_t{1} << n);
  DenseOperator w = DenseOperator::identity(1);
  const DenseOperator m = hadamard_m();
  for (unsigned q = 0; q < n; ++q) w = kron(m, w);
  return w;
}

}  // namespace qsearch

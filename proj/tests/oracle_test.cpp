#include "qsearch/oracle.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qsearch;

namespace {

// Basis state of the extended register: data x, ancillas all |0>.
StateVector extended_basis(const ReversibleCircuit& c, std::size_t x) {
  return basis_state(std::size_t{1} << c.total_wires(), x);
}

}  // namespace

TEST(PhaseOracle, examples) {
  const auto out = phase_oracle_apply(uniform_state(4), {2, {3}});
  const double expected[] = {0.5, 0.5, 0.5, -0.5};
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(out[j], Amplitude(expected[j]));

  const auto psi = random_state(8, 2);
  EXPECT_EQ(max_abs_diff(phase_oracle_apply(psi, {3, {}}), psi), 0.0);
  EXPECT_EQ(max_abs_diff(phase_oracle_apply(phase_oracle_apply(psi, {3, {1, 5}}), {3, {1, 5}}), psi),
            0.0);
  EXPECT_THROW(phase_oracle_apply(psi, {2, {1}}), DomainError);
  EXPECT_THROW(phase_oracle_apply(psi, {3, {8}}), DomainError);
}

TEST(CompileIndicator, small_cases) {
  const auto one = compile_marked_indicator(1, 1);
  ASSERT_EQ(one.gates.size(), 1u);
  EXPECT_EQ(one.gates[0], (GateApplication{GateKind::kCnot, {0, 1}}));

  const auto two = compile_marked_indicator(2, 3);
  ASSERT_EQ(two.gates.size(), 1u);
  EXPECT_EQ(two.gates[0], (GateApplication{GateKind::kCcnot, {0, 1, 2}}));
  EXPECT_EQ(two.ancilla_wires, 1u);

  EXPECT_THROW(compile_marked_indicator(3, 8), DomainError);
  EXPECT_THROW(compile_marked_indicator(0, 0), DomainError);
}

TEST(CompileIndicator, truth_table_and_uncompute_exhaustive) {
  for (unsigned n = 1; n <= 5; ++n) {
    for (std::size_t t = 0; t < (std::size_t{1} << n); ++t) {
      const auto c = compile_marked_indicator(n, t);
      for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
        const auto out = circuit_apply(extended_basis(c, x), c);
        // Output is a basis state: data unchanged, work ancillas back to 0,
        // output ancilla = [x == t].
        const std::size_t expected = x | (x == t ? std::size_t{1} << c.output_wire() : 0);
        ASSERT_NEAR(probability(out, expected), 1.0, 1e-12) << "n=" << n << " t=" << t << " x=" << x;
      }
    }
  }
}

TEST(CompileIndicator, n4_t5) {
  const auto c = compile_marked_indicator(4, 5);
  EXPECT_EQ(c.work_wires(), 2u);
  for (std::size_t x = 0; x < 16; ++x) {
    const auto out = circuit_apply(extended_basis(c, x), c);
    for (std::size_t i = 0; i < out.num_sites(); ++i) {
      if (std::norm(out[i]) < 0.5) continue;
      EXPECT_EQ(i & 0xF, x);
      EXPECT_EQ((i >> 4) & 0x3, 0u);  // work ancillas restored
      EXPECT_EQ((i >> 6) & 1U, x == 5 ? 1u : 0u);
    }
  }
}

TEST(CompileIndicator, uses_only_reversible_gates_and_linear_count) {
  // Count = 2 * (zero bits of t) + 2(n-2) + 1 <= 4n - 3 for n >= 2.
  for (unsigned n = 1; n <= 16; ++n) {
    std::size_t worst = 0;
    for (std::size_t t : {std::size_t{0}, (std::size_t{1} << n) - 1, std::size_t{5} % (std::size_t{1} << n)}) {
      const auto c = compile_marked_indicator(n, t);
      for (const auto& g : c.gates) EXPECT_NE(g.kind, GateKind::kM);
      worst = std::max(worst, c.gates.size());
    }
    EXPECT_LE(worst, 4 * std::size_t{n} + 1) << n;
    if (n >= 2) {
      EXPECT_EQ(compile_marked_indicator(n, 0).gates.size(), 4 * std::size_t{n} - 3);
    }
  }
}

TEST(CircuitApply, examples) {
  ReversibleCircuit empty{2, 1, {}};
  const auto psi = random_state(8, 3);
  EXPECT_EQ(max_abs_diff(circuit_apply(psi, empty), psi), 0.0);

  ReversibleCircuit one_not{2, 1, {{GateKind::kNot, {0}}}};
  EXPECT_EQ(max_abs_diff(circuit_apply(basis_state(8, 0), one_not), basis_state(8, 1)), 0.0);

  EXPECT_THROW(circuit_apply(basis_state(4, 0), one_not), DomainError);
  ReversibleCircuit bad{2, 1, {{GateKind::kNot, {3}}}};
  EXPECT_THROW(circuit_apply(basis_state(8, 0), bad), DomainError);
}

TEST(Kickback, examples) {
  const auto c = compile_marked_indicator(2, 3);
  const auto out = kickback_apply(uniform_state(4), c);
  const double expected[] = {0.5, 0.5, 0.5, -0.5};
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(out.state[j] - expected[j]), 0.0, 1e-15);
  EXPECT_LT(max_abs_diff(out.state, phase_oracle_apply(uniform_state(4), {2, {3}})), 1e-10);

  EXPECT_LT(max_abs_diff(kickback_apply(basis_state(4, 1), c).state, basis_state(4, 1)), 1e-15);
  auto flipped = basis_state(4, 3);
  flipped.scale(-1.0);
  EXPECT_LT(max_abs_diff(kickback_apply(basis_state(4, 3), c).state, flipped), 1e-15);
}

TEST(Kickback, equivalent_to_direct_inversion) {
  for (unsigned n = 1; n <= 5; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t t = 0; t < dim; ++t) {
      const auto c = compile_marked_indicator(n, t);
      const TruthTableOracle oracle{n, {t}};
      for (std::size_t x = 0; x < dim; ++x) {
        const auto psi = basis_state(dim, x);
        ASSERT_LT(max_abs_diff(kickback_apply(psi, c).state, phase_oracle_apply(psi, oracle)), 1e-10);
      }
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto psi = random_state(dim, seed * 37 + t);
        const auto kicked = kickback_apply(psi, c);
        ASSERT_LT(max_abs_diff(kicked.state, phase_oracle_apply(psi, oracle)), 1e-10);
        ASSERT_LT(kicked.ancilla_residual, 1e-10);
      }
    }
  }
}

TEST(Kickback, missing_uncompute_is_a_contract_error) {
  auto c = compile_marked_indicator(3, 5);
  // Keep everything up to and including the output CCNOT.
  const auto apex = std::find_if(c.gates.begin(), c.gates.end(), [&](const GateApplication& g) {
    return g.wires.back() == c.output_wire();
  });
  c.gates.erase(apex + 1, c.gates.end());
  EXPECT_THROW(kickback_apply(uniform_state(8), c), CircuitContractError);
}

TEST(Kickback, data_width_mismatch) {
  EXPECT_THROW(kickback_apply(uniform_state(8), compile_marked_indicator(2, 1)), DomainError);
}

TEST(CircuitFormat, round_trip) {
  for (unsigned n = 1; n <= 6; ++n) {
    const auto c = compile_marked_indicator(n, (std::size_t{1} << n) / 3);
    std::istringstream is("# compiled\n\n" + format_circuit(c));
    const auto parsed = parse_circuit(is, c.data_wires, c.ancilla_wires);
    EXPECT_EQ(parsed.gates, c.gates);
  }
  EXPECT_EQ(format_circuit(compile_marked_indicator(2, 3)), "CCNOT 0,1,2\n");
}

TEST(CircuitFormat, parse_errors) {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return parse_circuit(is, 2, 1);
  };
  EXPECT_THROW(parse("FOO 0\n"), DomainError);
  EXPECT_THROW(parse("CNOT 0\n"), DomainError);
  EXPECT_THROW(parse("CNOT 0,3\n"), DomainError);
  EXPECT_THROW(parse("NOT x\n"), DomainError);
  EXPECT_THROW(parse("NOT 0 1\n"), DomainError);
  EXPECT_NO_THROW(parse("NOT 0\nCCNOT 0,1,2\n"));
}

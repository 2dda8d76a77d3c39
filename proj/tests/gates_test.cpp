#include "qsearch/gates.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsearch/diffusion.hpp"

using namespace qsearch;

namespace {

oracles::Matrix to_matrix(const DenseOperator& op) {
  oracles::Matrix m(op.dim());
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c) m(r, c) = op(r, c);
  return m;
}

std::vector<std::complex<double>> to_vec(const StateVector& psi) {
  return {psi.begin(), psi.end()};
}

double max_diff(const StateVector& a, const std::vector<std::complex<double>>& b) {
  double m = 0;
  for (std::size_t j = 0; j < b.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(Gates, hadamard_on_basis_states) {
  const double s = 1.0 / std::sqrt(2.0);
  const auto m = hadamard_m();
  EXPECT_LT(max_abs_diff(m.apply(basis_state(2, 0)), StateVector({s, s})), 1e-15);
  EXPECT_LT(max_abs_diff(m.apply(basis_state(2, 1)), StateVector({s, -s})), 1e-15);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LT(max_abs_diff(m.apply(m.apply(basis_state(2, j))), basis_state(2, j)), 1e-15);
  }
  EXPECT_LT(max_abs_diff(m * m, DenseOperator::identity(2)), 1e-12);
}

TEST(Gates, reversible_truth_tables) {
  const auto cnot = reversible_gate(GateKind::kCnot);
  EXPECT_EQ(max_abs_diff(cnot.apply(basis_state(4, 0b10)), basis_state(4, 0b11)), 0.0);
  EXPECT_EQ(max_abs_diff(cnot.apply(basis_state(4, 0b01)), basis_state(4, 0b01)), 0.0);

  const auto ccnot = reversible_gate(GateKind::kCcnot);
  EXPECT_EQ(max_abs_diff(ccnot.apply(basis_state(8, 0b110)), basis_state(8, 0b111)), 0.0);
  EXPECT_EQ(max_abs_diff(ccnot.apply(basis_state(8, 0b010)), basis_state(8, 0b010)), 0.0);

  const auto x = reversible_gate(GateKind::kNot);
  EXPECT_EQ(max_abs_diff(x.apply(x.apply(basis_state(2, 0))), basis_state(2, 0)), 0.0);
}

TEST(Gates, reversible_gates_are_self_inverse_permutations) {
  for (GateKind k : {GateKind::kNot, GateKind::kCnot, GateKind::kCcnot}) {
    const auto g = reversible_gate(k);
    EXPECT_TRUE(g.is_permutation()) << gate_name(k);
    EXPECT_EQ(max_abs_diff(g * g, DenseOperator::identity(g.dim())), 0.0) << gate_name(k);
  }
  EXPECT_FALSE(hadamard_m().is_permutation());
}

TEST(Gates, reversible_gate_rejects_m) { EXPECT_THROW(reversible_gate(GateKind::kM), DomainError); }

TEST(Gates, parse_gate_kind) {
  EXPECT_EQ(parse_gate_kind("CCNOT"), GateKind::kCcnot);
  EXPECT_EQ(parse_gate_kind("M"), GateKind::kM);
  EXPECT_THROW(parse_gate_kind("TOFFOLI"), DomainError);
}

TEST(ApplyGate, examples) {
  const double s = 1.0 / std::sqrt(2.0);
  const auto out = apply_gate(basis_state(4, 0), {GateKind::kM, {0}});
  EXPECT_LT(max_abs_diff(out, StateVector({s, s, 0.0, 0.0})), 1e-15);

  EXPECT_EQ(max_abs_diff(apply_gate(basis_state(4, 2), {GateKind::kCnot, {1, 0}}),
                         basis_state(4, 3)),
            0.0);

  const auto u = uniform_state(8);
  EXPECT_LT(max_abs_diff(apply_gate(u, {GateKind::kCcnot, {2, 0, 1}}), u), 1e-15);
}

TEST(ApplyGate, errors) {
  const auto psi = basis_state(4, 0);
  EXPECT_THROW(apply_gate(psi, {GateKind::kCnot, {1, 1}}), DomainError);
  EXPECT_THROW(apply_gate(psi, {GateKind::kNot, {2}}), DomainError);
  EXPECT_THROW(apply_gate(psi, {GateKind::kCnot, {0}}), DomainError);
  EXPECT_THROW(apply_gate(StateVector({1.0, 0.0, 0.0}), {GateKind::kNot, {0}}), DomainError);
}

TEST(ApplyGate, matches_dense_embedding_exhaustively) {
  // Every kind on every ordered wire tuple for n <= 4, every basis input.
  for (unsigned n = 1; n <= 4; ++n) {
    for (GateKind k : {GateKind::kNot, GateKind::kCnot, GateKind::kCcnot, GateKind::kM}) {
      const std::size_t ar = arity(k);
      if (ar > n) continue;
      const auto local = to_matrix(gate_matrix(k));
      std::vector<unsigned> wires(ar);
      std::size_t tuples = 1;
      for (std::size_t i = 0; i < ar; ++i) tuples *= n;
      for (std::size_t code = 0; code < tuples; ++code) {
        std::size_t rest = code;
        for (auto& w : wires) { w = static_cast<unsigned>(rest % n); rest /= n; }
        bool distinct = true;
        for (std::size_t i = 0; i < ar; ++i)
          for (std::size_t j = 0; j < i; ++j) distinct = distinct && wires[i] != wires[j];
        if (!distinct) continue;
        const auto full = oracles::embed(local, wires, n);
        for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
          const auto psi = basis_state(std::size_t{1} << n, x);
          EXPECT_LT(max_diff(apply_gate(psi, {k, wires}), oracles::matvec(full, to_vec(psi))), 1e-12);
        }
      }
    }
  }
}

TEST(ApplyGate, disjoint_wires_commute) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto psi = random_state(8, seed);
    const GateApplication m0{GateKind::kM, {0}};
    const GateApplication x1{GateKind::kNot, {1}};
    EXPECT_LT(max_abs_diff(apply_gate(apply_gate(psi, m0), x1), apply_gate(apply_gate(psi, x1), m0)),
              1e-12);
  }
}

TEST(WalshHadamard, examples) {
  const auto w0 = walsh_hadamard(basis_state(4, 0));
  for (const auto& a : w0) EXPECT_NEAR(std::abs(a - Amplitude(0.5)), 0.0, 1e-15);

  const auto w3 = walsh_hadamard(basis_state(4, 3));
  const double expected[] = {0.5, -0.5, -0.5, 0.5};
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(w3[j] - expected[j]), 0.0, 1e-15);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto psi = random_state(64, seed);
    EXPECT_LT(max_abs_diff(walsh_hadamard(walsh_hadamard(psi)), psi), 1e-10);
  }
}

TEST(WalshHadamard, basis_inputs_have_equal_magnitudes) {
  for (std::size_t x = 0; x < 32; ++x) {
    for (const auto& a : walsh_hadamard(basis_state(32, x))) {
      EXPECT_NEAR(std::abs(a), std::pow(2.0, -2.5), 1e-15);
    }
  }
}

TEST(WalshHadamard, matches_dense_oracle_and_is_symmetric) {
  for (unsigned n = 1; n <= 4; ++n) {
    const std::size_t d = std::size_t{1} << n;
    const auto w = oracles::walsh_hadamard(n);
    // Also check the oracle formula against the kron product of M.
    auto kron_w = oracles::Matrix::identity(1);
    for (unsigned q = 0; q < n; ++q) kron_w = oracles::kron(to_matrix(hadamard_m()), kron_w);
    for (std::size_t i = 0; i < w.e.size(); ++i) ASSERT_LT(std::abs(w.e[i] - kron_w.e[i]), 1e-15);

    for (std::size_t j = 0; j < d; ++j) {
      const auto col_j = walsh_hadamard(basis_state(d, j));
      for (std::size_t k = 0; k < d; ++k) {
        EXPECT_LT(std::abs(col_j[k] - w(k, j)), 1e-12);
        EXPECT_LT(std::abs(col_j[k] - walsh_hadamard(basis_state(d, k))[j]), 1e-15);
      }
    }
  }
}

TEST(WalshHadamard, rejects_non_power_of_two) {
  EXPECT_THROW(walsh_hadamard(uniform_state(6)), DomainError);
}

TEST(CheckUnitary, examples) {
  const DenseOperator example{{0.5, 0.5, 0.5, 0.5},
                              {0.5, 0.5, -0.5, -0.5},
                              {0.5, -0.5, -0.5, 0.5},
                              {0.5, -0.5, 0.5, -0.5}};
  const auto ok = check_unitary(example, 1e-12);
  EXPECT_TRUE(ok.unitary);
  EXPECT_LT(ok.defect, 1e-15);

  const auto bad = check_unitary(DenseOperator{{1.0, 1.0}, {0.0, 1.0}}, 1e-12);
  EXPECT_FALSE(bad.unitary);
  EXPECT_GT(bad.defect, 0.5);

  const auto d8 = check_unitary(exact_diffusion_matrix(8), 1e-12);
  EXPECT_TRUE(d8.unitary);
  EXPECT_NEAR(d8.defect, oracles::max_dev_from_identity(oracles::exact_diffusion(8)), 1e-15);
}

TEST(DenseOperator, size_guard) {
  EXPECT_THROW(DenseOperator(kMaxDenseDim + 1), ResourceError);
  EXPECT_THROW(walsh_hadamard_matrix(13), ResourceError);
}

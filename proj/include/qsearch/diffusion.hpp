#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "qsearch/dense_operator.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/gates.hpp"
#include "qsearch/phase_ops.hpp"
#include "qsearch/statevec.hpp"

namespace qsearch {

// All-to-all diffusion with coupling i*epsilon between every pair of sites.
struct InfinitesimalDiffusionSpec {
  std::size_t num_sites = 2;
  double epsilon = 1e-3;
  // Diagonal 1 - i(N-1)eps (columns sum to 1) instead of the simplified 1 - iN eps.
  bool exact_diagonal = true;

  // N*eps small enough for the matrix to be close to unitary.
  bool near_unitary() const { return static_cast<double>(num_sites) * epsilon <= 0.1; }

  Amplitude diagonal() const {
    const double couplings = exact_diagonal ? static_cast<double>(num_sites - 1)
                                            : static_cast<double>(num_sites);
    return {1.0, -couplings * epsilon};
  }

  Amplitude off_diagonal() const { return {0.0, epsilon}; }

  void validate() const {
    if (num_sites < 2) throw DomainError("infinitesimal diffusion needs N >= 2");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive");
  }
};

// Unitary diffusion: a on the diagonal, b elsewhere.
struct ExactDiffusionSpec {
  std::size_t num_sites = 2;
  Amplitude a = 0.0;
  Amplitude b = 1.0;

  // a = -1 + 2/N, b = 2/N.
  static ExactDiffusionSpec for_size(std::size_t num_sites) {
    if (num_sites < 2) throw DomainError("exact diffusion needs N >= 2");
    const double two_over_n = 2.0 / static_cast<double>(num_sites);
    return {num_sites, -1.0 + two_over_n, two_over_n};
  }

  double others() const { return static_cast<double>(num_sites - 1); }

  // |a|^2 + (N-1)|b|^2 - 1: each column has unit length.
  double column_norm_residual() const {
    return std::norm(a) + others() * std::norm(b) - 1.0;
  }

  // 2 Re(a b*) + (N-2)|b|^2: distinct columns are orthogonal.
  double column_orthogonality_residual() const {
    return 2.0 * (a * std::conj(b)).real() + (others() - 1.0) * std::norm(b);
  }

  // a + (N-1) b - 1: columns sum to one.
  Amplitude column_sum_residual() const { return a + others() * b - 1.0; }
};

inline DenseOperator infinitesimal_diffusion_matrix(const InfinitesimalDiffusionSpec& spec) {
  spec.validate();
  DenseOperator d(spec.num_sites);
  for (std::size_t r = 0; r < spec.num_sites; ++r)
    for (std::size_t c = 0; c < spec.num_sites; ++c)
      d(r, c) = r == c ? spec.diagonal() : spec.off_diagonal();
  return d;
}

inline DenseOperator exact_diffusion_matrix(const ExactDiffusionSpec& spec) {
  if (spec.num_sites < 2) throw DomainError("exact diffusion needs N >= 2");
  DenseOperator d(spec.num_sites);
  for (std::size_t r = 0; r < spec.num_sites; ++r)
    for (std::size_t c = 0; c < spec.num_sites; ++c) d(r, c) = r == c ? spec.a : spec.b;
  return d;
}

inline DenseOperator exact_diffusion_matrix(std::size_t num_sites) {
  return exact_diffusion_matrix(ExactDiffusionSpec::for_size(num_sites));
}

// (D psi)_j = -psi_j + (2/N) sum_k psi_k, in O(N).
inline void apply_diffusion_closed_form_in_place(StateVector& psi) {
  Amplitude sum = 0.0;
  for (const auto& a : psi) sum += a;
  const Amplitude mean_term = sum * (2.0 / static_cast<double>(psi.num_sites()));
  for (auto& a : psi) a = mean_term - a;
}

inline StateVector apply_diffusion_closed_form(StateVector psi) {
  apply_diffusion_closed_form_in_place(psi);
  return psi;
}

// D = -W I_0 W built from primitives: n M layers, I_0, n M layers and the
// global -1. Returns the primitive count, 2n + 2.
inline std::size_t apply_diffusion_synthesized_in_place(StateVector& psi) {
  std::size_t primitives = walsh_hadamard_in_place(psi);
  inversion_about_zero_in_place(psi);
  ++primitives;
  primitives += walsh_hadamard_in_place(psi);
  psi.scale(-1.0);
  ++primitives;
  return primitives;
}

inline StateVector apply_diffusion_synthesized(StateVector psi) {
  apply_diffusion_synthesized_in_place(psi);
  return psi;
}

inline std::size_t synthesized_primitive_count(unsigned n) { return 2 * std::size_t{n} + 2; }

// Max entrywise gap between exact D(2^n) and the dense product -W I_0 W.
inline double synthesis_identity_defect(unsigned n) {
  if (n < 1) throw DomainError("synthesis identity needs n >= 1");
  const std::size_t dim = std::size_t{1} << n;
  require_dense_dim(dim);
  const DenseOperator w = walsh_hadamard_matrix(n);
  DenseOperator i0 = DenseOperator::identity(dim);
  i0(0, 0) = -1.0;
  DenseOperator synthesized = w * i0 * w;
  synthesized *= -1.0;
  return max_abs_diff(exact_diffusion_matrix(dim), synthesized);
}

}  // namespace qsearch

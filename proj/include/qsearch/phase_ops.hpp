#pragma once

#include <cmath>
#include <complex>
#include <set>
#include <string>

#include "qsearch/dense_operator.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/statevec.hpp"

namespace qsearch {

// Phase rotation by gamma radians on a set of target sites.
struct PhaseSpec {
  std::set<std::size_t> targets;
  double gamma = kPi;

  void validate(std::size_t num_sites) const {
    if (!std::isfinite(gamma)) throw DomainError("phase angle must be finite");
    if (!targets.empty() && *targets.rbegin() >= num_sites) {
      throw DomainError("phase target " + std::to_string(*targets.rbegin()) +
                        " out of range for " + std::to_string(num_sites) + " sites");
    }
  }
};

// e^{i gamma}, exact for gamma == 0 and gamma == pi.
inline Amplitude phase_factor(double gamma) {
  if (gamma == 0.0) return 1.0;
  if (gamma == kPi) return -1.0;
  return std::polar(1.0, gamma);
}

inline void selective_phase_rotation_in_place(StateVector& psi, const PhaseSpec& spec) {
  spec.validate(psi.num_sites());
  const Amplitude f = phase_factor(spec.gamma);
  for (std::size_t t : spec.targets) psi[t] *= f;
}

inline StateVector selective_phase_rotation(StateVector psi, const PhaseSpec& spec) {
  selective_phase_rotation_in_place(psi, spec);
  return psi;
}

inline void selective_inversion_in_place(StateVector& psi, const std::set<std::size_t>& targets) {
  PhaseSpec{targets, kPi}.validate(psi.num_sites());
  for (std::size_t t : targets) psi[t] = -psi[t];
}

inline StateVector selective_inversion(StateVector psi, const std::set<std::size_t>& targets) {
  selective_inversion_in_place(psi, targets);
  return psi;
}

// I_0: sign flip on the all-zeros basis state.
inline void inversion_about_zero_in_place(StateVector& psi) { psi[0] = -psi[0]; }

inline StateVector inversion_about_zero(StateVector psi) {
  inversion_about_zero_in_place(psi);
  return psi;
}

inline DenseOperator phase_rotation_matrix(std::size_t num_sites, const PhaseSpec& spec) {
  spec.validate(num_sites);
  std::vector<Amplitude> diag(num_sites, 1.0);
  for (std::size_t t : spec.targets) diag[t] = phase_factor(spec.gamma);
  return DenseOperator::diagonal(diag);
}

}  // namespace qsearch

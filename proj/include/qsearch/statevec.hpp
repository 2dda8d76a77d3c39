#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsearch/errors.hpp"

namespace qsearch {

using Amplitude = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Tolerance used to reject non-normalized inputs at contract boundaries.
inline constexpr double kNormContractTolerance = 1e-6;

inline bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

// Number of qubits n for N = 2^n; throws DomainError otherwise.
inline unsigned exact_log2(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw DomainError("site count " + std::to_string(n) + " is not a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(n));
}

// Complex amplitudes over N sites. For qubit registers (N = 2^n) bit b of an
// index is the state of qubit b, qubit 0 being the least-significant bit.
class StateVector {
 public:
  StateVector() = default;

  explicit StateVector(std::size_t num_sites) : amps_(num_sites) {
    if (num_sites == 0) throw DomainError("state vector needs at least one site");
  }

  explicit StateVector(std::vector<Amplitude> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) throw DomainError("state vector needs at least one site");
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw DomainError("state vector amplitudes must be finite");
      }
    }
  }

  std::size_t num_sites() const { return amps_.size(); }
  std::size_t size() const { return amps_.size(); }

  // n when num_sites() == 2^n.
  std::optional<unsigned> qubit_count() const {
    if (!is_power_of_two(amps_.size())) return std::nullopt;
    return static_cast<unsigned>(std::countr_zero(amps_.size()));
  }

  unsigned require_qubits() const { return exact_log2(amps_.size()); }

  Amplitude& operator[](std::size_t i) { return amps_[i]; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  std::span<Amplitude> amps() { return amps_; }
  std::span<const Amplitude> amps() const { return amps_; }

  auto begin() { return amps_.begin(); }
  auto end() { return amps_.end(); }
  auto begin() const { return amps_.begin(); }
  auto end() const { return amps_.end(); }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  double norm() const { return std::sqrt(norm_squared()); }

  // Rescales to unit norm and returns the norm before rescaling.
  double normalize() {
    const double n = norm();
    if (n == 0.0) throw ContractError("cannot normalize the zero vector");
    for (auto& a : amps_) a /= n;
    return n;
  }

  void scale(Amplitude factor) {
    for (auto& a : amps_) a *= factor;
  }

 private:
  std::vector<Amplitude> amps_;
};

struct MeasurementSample {
  std::size_t index = 0;
  std::uint64_t seed = 0;
};

inline void check_index(const StateVector& psi, std::size_t index) {
  if (index >= psi.num_sites()) {
    throw DomainError("index " + std::to_string(index) + " out of range for " +
                      std::to_string(psi.num_sites()) + " sites");
  }
}

inline void require_unit_norm(const StateVector& psi, const char* what) {
  const double deviation = std::abs(psi.norm() - 1.0);
  if (!(deviation <= kNormContractTolerance)) {
    throw ContractError(std::string(what) + ": input norm deviates from 1 by " +
                        std::to_string(deviation));
  }
}

inline StateVector basis_state(std::size_t num_sites, std::size_t index) {
  StateVector psi(num_sites);
  check_index(psi, index);
  psi[index] = 1.0;
  return psi;
}

inline StateVector uniform_state(std::size_t num_sites) {
  StateVector psi(num_sites);
  const double amp = 1.0 / std::sqrt(static_cast<double>(num_sites));
  for (auto& a : psi) a = amp;
  return psi;
}

// Haar-like random unit state from seeded Gaussian components.
inline StateVector random_state(std::size_t num_sites, std::uint64_t seed) {
  StateVector psi(num_sites);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (auto& a : psi) a = Amplitude(gauss(rng), gauss(rng));
  psi.normalize();
  return psi;
}

inline double probability(const StateVector& psi, std::size_t index) {
  check_index(psi, index);
  return std::norm(psi[index]);
}

inline std::vector<double> probabilities(const StateVector& psi) {
  std::vector<double> out;
  out.reserve(psi.num_sites());
  for (const auto& a : psi) out.push_back(std::norm(a));
  return out;
}

// Result index j * b.num_sites() + k holds a[j] * b[k].
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  require_unit_norm(a, "tensor");
  require_unit_norm(b, "tensor");
  std::vector<Amplitude> out;
  out.reserve(a.num_sites() * b.num_sites());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(x * y);
  }
  return StateVector(std::move(out));
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
  if (a.num_sites() != b.num_sites()) throw DomainError("state size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.num_sites(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t inverse_cdf(const StateVector& psi, double u) {
  const double target = u * psi.norm_squared();
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < psi.num_sites(); ++i) {
    const double p = std::norm(psi[i]);
    if (p == 0.0) continue;
    last_nonzero = i;
    cumulative += p;
    if (target < cumulative) return i;
  }
  return last_nonzero;
}

}  // namespace detail

// Full-register measurement by inverse CDF over |amps|^2.
inline MeasurementSample measure(const StateVector& psi, std::uint64_t seed) {
  require_unit_norm(psi, "measure");
  std::mt19937_64 rng(seed);
  return {detail::inverse_cdf(psi, detail::unit_uniform(rng)), seed};
}

// Histogram of `shots` independent measurements drawn from one seeded stream.
inline std::vector<std::size_t> sample_counts(const StateVector& psi, std::uint64_t seed,
                                              std::size_t shots) {
  require_unit_norm(psi, "sample_counts");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> counts(psi.num_sites(), 0);
  for (std::size_t s = 0; s < shots; ++s) ++counts[detail::inverse_cdf(psi, detail::unit_uniform(rng))];
  return counts;
}

}  // namespace qsearch

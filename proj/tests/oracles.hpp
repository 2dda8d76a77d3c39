#pragma once

// Brute-force reference computations for the test suites. These deliberately
// avoid the library's kernels: matrices are plain row-major vectors built
// from closed-form entry formulas.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace qsearch::oracles {

using cd = std::complex<double>;

struct Matrix {
  std::size_t dim = 0;
  std::vector<cd> e;

  explicit Matrix(std::size_t d) : dim(d), e(d * d) {}
  cd& operator()(std::size_t r, std::size_t c) { return e[r * dim + c]; }
  cd operator()(std::size_t r, std::size_t c) const { return e[r * dim + c]; }

  static Matrix identity(std::size_t d) {
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix out(a.dim);
  for (std::size_t r = 0; r < a.dim; ++r)
    for (std::size_t c = 0; c < a.dim; ++c) {
      cd acc = 0.0;
      for (std::size_t k = 0; k < a.dim; ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
  return out;
}

inline std::vector<cd> matvec(const Matrix& m, const std::vector<cd>& v) {
  std::vector<cd> out(m.dim);
  for (std::size_t r = 0; r < m.dim; ++r)
    for (std::size_t c = 0; c < m.dim; ++c) out[r] += m(r, c) * v[c];
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.dim * b.dim);
  for (std::size_t r = 0; r < out.dim; ++r)
    for (std::size_t c = 0; c < out.dim; ++c)
      out(r, c) = a(r / b.dim, c / b.dim) * b(r % b.dim, c % b.dim);
  return out;
}

// W(r, c) = 2^{-n/2} (-1)^{popcount(r & c)}.
inline Matrix walsh_hadamard(unsigned n) {
  const std::size_t d = std::size_t{1} << n;
  Matrix w(d);
  const double s = std::pow(2.0, -0.5 * n);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) w(r, c) = (std::popcount(r & c) % 2 ? -s : s);
  return w;
}

// Embeds a local 2^k x 2^k matrix on `wires` (first wire = highest local bit)
// into an n-qubit register: entry (r, c) is nonzero only when r and c agree
// on every wire outside the gate.
inline Matrix embed(const Matrix& local, const std::vector<unsigned>& wires, unsigned n) {
  const std::size_t d = std::size_t{1} << n;
  const std::size_t k = wires.size();
  std::size_t mask = 0;
  for (unsigned w : wires) mask |= std::size_t{1} << w;
  auto local_index = [&](std::size_t x) {
    std::size_t l = 0;
    for (std::size_t i = 0; i < k; ++i) l = (l << 1) | ((x >> wires[i]) & 1U);
    return l;
  };
  Matrix out(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      if ((r & ~mask) == (c & ~mask)) out(r, c) = local(local_index(r), local_index(c));
  return out;
}

// Exact diffusion from its entries: -1 + 2/N on the diagonal, 2/N elsewhere.
inline Matrix exact_diffusion(std::size_t n_sites) {
  Matrix d(n_sites);
  const double b = 2.0 / static_cast<double>(n_sites);
  for (std::size_t r = 0; r < n_sites; ++r)
    for (std::size_t c = 0; c < n_sites; ++c) d(r, c) = r == c ? -1.0 + b : b;
  return d;
}

inline double max_dev_from_identity(const Matrix& u) {
  double m = 0.0;
  for (std::size_t r = 0; r < u.dim; ++r)
    for (std::size_t c = 0; c < u.dim; ++c) {
      cd acc = 0.0;
      for (std::size_t k = 0; k < u.dim; ++k) acc += std::conj(u(k, r)) * u(k, c);
      m = std::max(m, std::abs(acc - (r == c ? cd(1.0) : cd(0.0))));
    }
  return m;
}

// Marked-state probability after k Grover iterations, by explicit matrix power
// of (D I_f) applied to the uniform vector.
inline double grover_success_by_matrix_power(unsigned n, std::size_t target, std::size_t k) {
  const std::size_t d = std::size_t{1} << n;
  Matrix step = exact_diffusion(d);
  for (std::size_t r = 0; r < d; ++r) step(r, target) = -step(r, target);  // D * I_f
  Matrix power = Matrix::identity(d);
  for (std::size_t i = 0; i < k; ++i) power = multiply(step, power);
  std::vector<cd> uniform(d, 1.0 / std::sqrt(static_cast<double>(d)));
  return std::norm(matvec(power, uniform)[target]);
}

// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qsearch::oracles

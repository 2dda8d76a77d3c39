#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qsearch/errors.hpp"
#include "qsearch/statevec.hpp"

namespace qsearch {

// Explicit matrices are only built for audits up to this dimension.
inline constexpr std::size_t kMaxDenseDim = 4096;

inline void require_dense_dim(std::size_t dim) {
  if (dim > kMaxDenseDim) {
    throw ResourceError("dense operator of dimension " + std::to_string(dim) +
                        " exceeds the audit limit " + std::to_string(kMaxDenseDim));
  }
}

// Square complex matrix; entry (row, col) maps input index col to output index row.
class DenseOperator {
 public:
  DenseOperator() = default;

  explicit DenseOperator(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw DomainError("operator dimension must be positive");
    require_dense_dim(dim);
  }

  DenseOperator(std::initializer_list<std::initializer_list<Amplitude>> rows)
      : DenseOperator(rows.size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != dim_) throw DomainError("dense operator rows must be square");
      std::size_t c = 0;
      for (const auto& v : row) (*this)(r, c++) = v;
      ++r;
    }
  }

  static DenseOperator identity(std::size_t dim) {
    DenseOperator op(dim);
    for (std::size_t i = 0; i < dim; ++i) op(i, i) = 1.0;
    return op;
  }

  static DenseOperator diagonal(const std::vector<Amplitude>& diag) {
    DenseOperator op(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) op(i, i) = diag[i];
    return op;
  }

  std::size_t dim() const { return dim_; }

  Amplitude& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const Amplitude& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  StateVector apply(const StateVector& psi) const {
    if (psi.num_sites() != dim_) throw DomainError("operator/state dimension mismatch");
    std::vector<Amplitude> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      Amplitude acc = 0.0;
      const Amplitude* row = &entries_[r * dim_];
      for (std::size_t c = 0; c < dim_; ++c) acc += row[c] * psi[c];
      out[r] = acc;
    }
    return StateVector(std::move(out));
  }

  DenseOperator adjoint() const {
    DenseOperator out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  DenseOperator& operator*=(Amplitude s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim_ != b.dim_) throw DomainError("operator dimension mismatch");
    DenseOperator out(a.dim_);
    for (std::size_t r = 0; r < a.dim_; ++r)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Amplitude s = a(r, k);
        if (s == Amplitude{}) continue;
        for (std::size_t c = 0; c < a.dim_; ++c) out(r, c) += s * b(k, c);
      }
    return out;
  }

  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim_ != b.dim_) throw DomainError("operator dimension mismatch");
    DenseOperator out = a;
    for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
    return out;
  }

  double max_abs_entry() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
  }

  std::vector<Amplitude> column_sums() const {
    std::vector<Amplitude> sums(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) sums[c] += (*this)(r, c);
    return sums;
  }

  bool is_permutation() const {
    for (std::size_t r = 0; r < dim_; ++r) {
      std::size_t ones_in_row = 0, ones_in_col = 0;
      for (std::size_t c = 0; c < dim_; ++c) {
        const auto& rc = (*this)(r, c);
        const auto& cr = (*this)(c, r);
        if (rc == Amplitude(1.0)) ++ones_in_row;
        else if (rc != Amplitude{}) return false;
        if (cr == Amplitude(1.0)) ++ones_in_col;
      }
      if (ones_in_row != 1 || ones_in_col != 1) return false;
    }
    return true;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Amplitude> entries_;
};

// Kronecker product; `a` acts on the high-order part of the combined index.
inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const std::size_t n = b.dim();
  DenseOperator out(a.dim() * n);
  for (std::size_t ar = 0; ar < a.dim(); ++ar)
    for (std::size_t ac = 0; ac < a.dim(); ++ac) {
      const Amplitude s = a(ar, ac);
      if (s == Amplitude{}) continue;
      for (std::size_t br = 0; br < n; ++br)
        for (std::size_t bc = 0; bc < n; ++bc) out(ar * n + br, ac * n + bc) = s * b(br, bc);
    }
  return out;
}

inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  return (a - b).max_abs_entry();
}

struct UnitarityCheck {
  bool unitary = false;
  double defect = 0.0;  // max |U^dagger U - I|
};

inline UnitarityCheck check_unitary(const DenseOperator& u, double tol) {
  const double defect = max_abs_diff(u.adjoint() * u, DenseOperator::identity(u.dim()));
  return {defect <= tol, defect};
}

// Largest |column sum - 1| over all columns.
inline double column_sum_defect(const DenseOperator& u) {
  double m = 0.0;
  for (const auto& s : u.column_sums()) m = std::max(m, std::abs(s - Amplitude(1.0)));
  return m;
}

}  // namespace qsearch

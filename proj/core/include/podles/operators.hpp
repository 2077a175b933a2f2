#pragma once

#include "podles/hilbert.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace podles {

/// Dense row-major complex matrix. Used directly for rectangular blocks and
/// single-copy representations; LinearOperator wraps the square case over a
/// HilbertSpec.
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t rows, std::size_t cols);
  static Dense identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::span<const cplx> data() const { return a_; }
  std::span<cplx> data() { return a_; }

  Dense adjoint() const;
  Dense conj() const;
  double max_abs() const;
  double frobenius() const;

  Dense& operator+=(const Dense& o);
  Dense& operator-=(const Dense& o);
  Dense& operator*=(cplx s);

  friend Dense operator+(Dense a, const Dense& b) { return a += b; }
  friend Dense operator-(Dense a, const Dense& b) { return a -= b; }
  friend Dense operator*(cplx s, Dense a) { return a *= s; }
  friend Dense operator*(const Dense& a, const Dense& b);  // matrix product
  friend bool operator==(const Dense&, const Dense&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

/// Largest singular value by power iteration on A*A. Deterministic all-ones
/// start vector, relative tolerance on the Rayleigh quotient, hard iteration
/// cap. Throws on non-convergence (message carries the last gap).
double spectral_norm(const Dense& a, double rel_tol = 1e-12, int max_iter = 10000);

/// Ascending eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
/// Requires ||A - A*||_max below herm_tol; off-diagonal Frobenius target is
/// relative to ||A||_F.
std::vector<double> eig_hermitian(const Dense& a, double herm_tol = 1e-10);

struct EigDecomposition {
  std::vector<double> values;  // ascending
  Dense vectors;               // columns are the corresponding eigenvectors
};
EigDecomposition eig_hermitian_full(const Dense& a, double herm_tol = 1e-10);

/// Square operator on a truncated space.
class LinearOperator {
 public:
  explicit LinearOperator(HilbertSpec spec);
  LinearOperator(HilbertSpec spec, Dense m);
  static LinearOperator identity(const HilbertSpec& spec);

  const HilbertSpec& spec() const { return spec_; }
  std::size_t dim() const { return m_.rows(); }
  const Dense& matrix() const { return m_; }
  Dense& matrix() { return m_; }

  cplx& at(std::size_t r, std::size_t c) { return m_(r, c); }
  const cplx& at(std::size_t r, std::size_t c) const { return m_(r, c); }

  LinearOperator adjoint() const { return {spec_, m_.adjoint()}; }

  LinearOperator& operator+=(const LinearOperator& o);
  LinearOperator& operator-=(const LinearOperator& o);
  LinearOperator& operator*=(cplx s);
  friend LinearOperator operator+(LinearOperator a, const LinearOperator& b) { return a += b; }
  friend LinearOperator operator-(LinearOperator a, const LinearOperator& b) { return a -= b; }
  friend LinearOperator operator*(cplx s, LinearOperator a) { return a *= s; }
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);

 private:
  HilbertSpec spec_;
  Dense m_;
};

LinearOperator commutator(const LinearOperator& a, const LinearOperator& b);
LinearOperator anticommutator(const LinearOperator& a, const LinearOperator& b);
double op_norm(const LinearOperator& a);

/// Antilinear operator J = U . conj (entrywise conjugation of the argument,
/// then the unitary part U).
struct AntilinearOperator {
  LinearOperator unitary_part;

  const HilbertSpec& spec() const { return unitary_part.spec(); }
  std::vector<cplx> apply(std::span<const cplx> v) const;
};

bool is_unitary(const Dense& u, double tol = 1e-12);
/// J*J = -1 within tol.
bool is_anti_involutive(const AntilinearOperator& j, double tol = 1e-12);

/// J A J^{-1} = U conj(A) U*. Requires J anti-involutive so that J^{-1} = -J.
LinearOperator conjugate_by(const AntilinearOperator& j, const LinearOperator& a,
                            double tol = 1e-12);

struct LevelBlockNorm {
  HalfInt l_row, l_col;
  double norm;
};

/// Operator norm of every level-pair block P_{l_row} A P_{l_col}, both copies
/// included in each block.
std::vector<LevelBlockNorm> block_norms(const LinearOperator& a);

struct DecaySample {
  double l;
  double norm;
};

/// Least-squares line through (l, ln norm).
///
/// Samples at or below the floor are treated as exact zeros and skipped.
/// The line is fitted to the decaying flank: samples before the maximal one
/// are dropped, and up to three more after the peak may be dropped when that
/// lowers the fit residual (onset transients of operator products). If fewer
/// than three samples remain past the peak the full range is used, so flat or
/// growing data is fitted as-is. residual is the RMS deviation in log space.
struct DecayFit {
  double log_prefactor = 0;
  double rate = 0;
  double residual = 0;
  std::vector<DecaySample> samples;  // the samples the line was fitted to
};

/// Throws std::runtime_error when fewer than three samples survive the floor.
DecayFit decay_fit(std::vector<DecaySample> samples, double floor = 1e-13);

/// Compression P A P to levels l <= keep_l_max, returned on the smaller space.
LinearOperator restrict_levels(const LinearOperator& a, HalfInt keep_l_max);

// --- level-structured building blocks ---

/// gamma = id (+) -id; +1 on the sign=+ copy.
LinearOperator grading(const HilbertSpec& spec);

/// Orthogonal projector onto the selected levels, both copies.
LinearOperator level_projector(const HilbertSpec& spec, std::span<const HalfInt> l_set);

/// Diagonal operator q^l on level l (both copies); generates the ideal used
/// for the "modulo compacts" checks.
LinearOperator lq_operator(const HilbertSpec& spec, QParam q);

}  // namespace podles

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace infoineq {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  static Matrix identity(std::size_t n);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix; writes mirror across the diagonal.
class SymMatrix {
 public:
  static constexpr std::size_t kMaxDim = 64;

  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim, double fill = 0.0);
  /// Takes the upper triangle of a square nested list.
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }
  double max_abs() const;
  SymMatrix principal(std::span<const std::size_t> keep) const;

  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular factor, or the 1-based pivot where positivity failed.
struct CholeskyResult {
  std::optional<Matrix> factor;
  std::size_t failed_pivot = 0;
  /// min over pivots of d_k / A_kk for the pivots that were processed.
  double min_pivot_ratio = 0.0;

  bool ok() const { return factor.has_value(); }
};

/// Cholesky without pivoting. A pivot fails when d_k <= ratio_floor * A_kk
/// (and always when d_k <= 0).
CholeskyResult cholesky(const SymMatrix& a, double ratio_floor = 0.0);

/// Pivot-ratio floor below which the bound layer treats a matrix as singular.
inline constexpr double kSingularPivotRatio = 1e-12;

/// Solves L y = b (forward) and L^T x = y (backward).
std::vector<double> solve_lower(const Matrix& l, std::span<const double> b);
std::vector<double> solve_upper_transposed(const Matrix& l, std::span<const double> y);

/// A^{-1} m through the Cholesky factor; throws NotPositiveDefinite.
std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> m);

/// m^T A^{-1} m via two triangular solves; throws NotPositiveDefinite.
double quadratic_form_inv(const SymMatrix& a, std::span<const double> m);

struct SchurResult {
  /// Sigma_T - Sigma_TS Sigma_S^{-1} Sigma_ST
  SymMatrix complement;
  /// Sigma_TS Sigma_S^{-1} Sigma_ST
  SymMatrix projected;
};

/// Schur complement of Sigma_S; `cross` is Sigma_TS (r x m).
SchurResult schur_complement(const SymMatrix& sigma_t, const Matrix& cross, const SymMatrix& sigma_s);

/// Certificate that a symmetric matrix is positive semidefinite up to `tol`
/// relative to its largest entry, from a semidefinite Cholesky sweep.
struct PsdCertificate {
  bool psd = false;
  /// Smallest pivot seen (negative when the matrix is indefinite).
  double min_pivot = 0.0;
  std::size_t rank = 0;
};

PsdCertificate psd_certificate(const SymMatrix& a, double tol = 1e-9);

/// (max L_ii / min L_ii)^2 of a Cholesky factor: a cheap condition estimate.
double condition_estimate(const Matrix& l);

}  // namespace infoineq

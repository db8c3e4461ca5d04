#include "infoineq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoineq/errors.hpp"

namespace infoineq {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix::SymMatrix(std::size_t dim, double fill) : dim_(dim), data_(dim * dim, fill) {
  if (dim > kMaxDim) throw InvalidArgument("symmetric matrix dimension exceeds 64");
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  SymMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InvalidArgument("matrix rows must be square");
    for (std::size_t j = i; j < rows.size(); ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

SymMatrix SymMatrix::principal(std::span<const std::size_t> keep) const {
  SymMatrix out(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = i; j < keep.size(); ++j) out.set(i, j, (*this)(keep[i], keep[j]));
  }
  return out;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("dimension mismatch in matrix difference");
  SymMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = i; j < a.dim(); ++j) out.set(i, j, a(i, j) - b(i, j));
  }
  return out;
}

CholeskyResult cholesky(const SymMatrix& a, double ratio_floor) {
  const std::size_t n = a.dim();
  Matrix l(n, n);
  CholeskyResult result;
  result.min_pivot_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    const double ratio = a(j, j) > 0.0 ? d / a(j, j) : -std::numeric_limits<double>::infinity();
    result.min_pivot_ratio = std::min(result.min_pivot_ratio, ratio);
    if (!(d > 0.0) || ratio <= ratio_floor) {
      result.failed_pivot = j + 1;
      return result;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  if (n == 0) result.min_pivot_ratio = 1.0;
  result.factor = std::move(l);
  return result;
}

std::vector<double> solve_lower(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

std::vector<double> solve_upper_transposed(const Matrix& l, std::span<const double> y) {
  const std::size_t n = l.rows();
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> m) {
  if (m.size() != a.dim()) throw InvalidArgument("vector length differs from matrix dimension");
  const CholeskyResult c = cholesky(a, kSingularPivotRatio);
  if (!c.ok()) throw NotPositiveDefinite("matrix is not positive definite", c.failed_pivot);
  return solve_upper_transposed(*c.factor, solve_lower(*c.factor, m));
}

double quadratic_form_inv(const SymMatrix& a, std::span<const double> m) {
  if (m.size() != a.dim()) throw InvalidArgument("vector length differs from matrix dimension");
  const CholeskyResult c = cholesky(a, kSingularPivotRatio);
  if (!c.ok()) throw NotPositiveDefinite("matrix is not positive definite", c.failed_pivot);
  const auto y = solve_lower(*c.factor, m);
  double q = 0.0;
  for (double v : y) q += v * v;
  return q;
}

SchurResult schur_complement(const SymMatrix& sigma_t, const Matrix& cross, const SymMatrix& sigma_s) {
  const std::size_t r = sigma_t.dim();
  const std::size_t m = sigma_s.dim();
  if (cross.rows() != r || cross.cols() != m) throw InvalidArgument("cross-covariance has the wrong shape");
  const CholeskyResult c = cholesky(sigma_s, kSingularPivotRatio);
  if (!c.ok()) throw NotPositiveDefinite("Sigma_S is not positive definite", c.failed_pivot);

  // Rows of L^{-1} Sigma_ST, one per statistic.
  std::vector<std::vector<double>> w(r);
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = cross(i, j);
    w[i] = solve_lower(*c.factor, row);
  }
  SchurResult out{SymMatrix(r), SymMatrix(r)};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += w[i][k] * w[j][k];
      out.projected.set(i, j, s);
      out.complement.set(i, j, sigma_t(i, j) - s);
    }
  }
  return out;
}

PsdCertificate psd_certificate(const SymMatrix& a, double tol) {
  const std::size_t n = a.dim();
  const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());
  const double zero = tol * scale;
  Matrix l(n, n);
  PsdCertificate cert;
  cert.min_pivot = std::numeric_limits<double>::infinity();
  cert.psd = true;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    cert.min_pivot = std::min(cert.min_pivot, d);
    if (d < -zero) {
      cert.psd = false;
      return cert;
    }
    if (d <= zero) {
      // Zero pivot: the rest of the column must vanish too.
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = a(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
        if (std::fabs(s) > std::sqrt(zero * scale)) {
          cert.psd = false;
          return cert;
        }
      }
      continue;
    }
    ++cert.rank;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  if (n == 0) cert.min_pivot = 0.0;
  return cert;
}

double condition_estimate(const Matrix& l) {
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < l.rows(); ++i) {
    hi = std::max(hi, std::fabs(l(i, i)));
    lo = std::min(lo, std::fabs(l(i, i)));
  }
  if (l.rows() == 0) return 1.0;
  return (hi / lo) * (hi / lo);
}

}  // namespace infoineq

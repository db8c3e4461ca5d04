#pragma once

#include <functional>
#include <span>
#include <vector>

#include "infoineq/support.hpp"

namespace infoineq {

enum class QuadratureScheme { adaptive, fixed_composite };

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
  QuadratureScheme scheme = QuadratureScheme::adaptive;
  /// Discrete supports: 0 selects the tail rule, > 0 sums indices 0..N exactly.
  long lattice_truncation = 0;

  /// Throws InvalidArgument unless abs_tol > 0, rel_tol > 0, max_subdivisions >= 1.
  void validate() const;

  /// Defaults overridden by INFOINEQ_QUAD_ABS_TOL, INFOINEQ_QUAD_REL_TOL and
  /// INFOINEQ_QUAD_MAX_SUBDIV when those are set.
  static QuadratureSettings from_env();
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  /// Last lattice index summed, or -1 for continuous supports.
  long truncation = -1;
  long evaluations = 0;
};

using ScalarFn = std::function<double(double)>;
using PointFn = std::function<double(Point)>;

/// Adaptive Gauss-Kronrod (G10/K21) integral of fn over [a, b]. Infinite
/// endpoints are mapped onto finite ones by a rational transform; the interior
/// breakpoints split the range; no panel straddles a kink.
QuadResult integrate_interval(const ScalarFn& fn, Interval range, std::span<const double> breakpoints,
                              const QuadratureSettings& settings);

/// Integral (or lattice sum) of fn over support(theta). Boxes of dimension > 1
/// are integrated as iterated one-dimensional integrals.
QuadResult integrate(const PointFn& fn, const Support& support, ParamView theta,
                     const QuadratureSettings& settings, std::span<const double> extra_breaks = {});

/// Accumulates error estimates and truncation indices across the many
/// integrals of one bound computation.
class QuadratureLedger {
 public:
  explicit QuadratureLedger(QuadratureSettings settings) : settings_(settings) {}

  double operator()(const PointFn& fn, const Support& support, ParamView theta,
                    std::span<const double> extra_breaks = {});

  const QuadratureSettings& settings() const { return settings_; }
  double max_error() const { return max_error_; }
  long max_truncation() const { return max_truncation_; }

 private:
  QuadratureSettings settings_;
  double max_error_ = 0.0;
  long max_truncation_ = -1;
};

}  // namespace infoineq

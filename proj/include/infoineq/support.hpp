#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace infoineq {

using Point = std::span<const double>;
using ParamView = std::span<const double>;
using ParamVector = std::vector<double>;
using MultiIndex = std::vector<int>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed or open interval with extended-real endpoints.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool contains_open(double v) const { return v > lo && v < hi; }
  double width() const { return hi - lo; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

enum class SupportKind { continuous, discrete };

/// Sample-space support of a density family, possibly depending on the
/// parameter. Continuous supports are boxes (one interval per coordinate);
/// discrete supports are the lattice origin + step * i, i >= 0, clipped to
/// bounds(theta)[0]. Only one-dimensional lattices are supported.
struct Support {
  SupportKind kind = SupportKind::continuous;
  std::size_t dim = 1;
  std::function<std::vector<Interval>(ParamView)> bounds;
  /// Interior kinks of the first coordinate; panels never straddle them.
  std::function<std::vector<double>(ParamView)> breakpoints;
  double lattice_origin = 0.0;
  double lattice_step = 1.0;

  std::vector<Interval> at(ParamView theta) const { return bounds(theta); }

  std::vector<double> breaks(ParamView theta) const {
    return breakpoints ? breakpoints(theta) : std::vector<double>{};
  }

  bool contains(Point x, ParamView theta) const {
    const auto box = bounds(theta);
    for (std::size_t i = 0; i < box.size() && i < x.size(); ++i) {
      if (!box[i].contains(x[i])) return false;
    }
    if (kind == SupportKind::discrete) {
      const double idx = (x[0] - lattice_origin) / lattice_step;
      if (idx < 0 || std::fabs(idx - std::round(idx)) > 1e-9) return false;
    }
    return true;
  }

  static Support continuous_1d(std::function<Interval(ParamView)> interval) {
    Support s;
    s.bounds = [interval = std::move(interval)](ParamView t) {
      return std::vector<Interval>{interval(t)};
    };
    return s;
  }

  static Support lattice(double origin = 0.0, double step = 1.0) {
    Support s;
    s.kind = SupportKind::discrete;
    s.lattice_origin = origin;
    s.lattice_step = step;
    s.bounds = [origin](ParamView) { return std::vector<Interval>{{origin, kInf}}; };
    return s;
  }
};

}  // namespace infoineq

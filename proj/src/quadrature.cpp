#include "infoineq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "infoineq/errors.hpp"

namespace infoineq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;

// Gauss-10 weights for the Kronrod abscissae at odd indices 1, 3, 5, 7, 9.
constexpr std::array<double, 5> kGaussWeights = {
    0.29552422471475287, 0.26926671930999635, 0.21908636251598204,
    0.14945134915058059, 0.066671344308688138};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

double checked(double v) {
  if (std::isnan(v)) throw QuadratureError("integrand returned NaN");
  return v;
}

Panel gk21(const ScalarFn& f, double a, double b, long& evals) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 21> fv{};
  fv[0] = checked(f(center));
  for (std::size_t i = 1; i < xk.size(); ++i) {
    fv[2 * i - 1] = checked(f(center - half * xk[i]));
    fv[2 * i] = checked(f(center + half * xk[i]));
  }
  evals += 21;

  double kronrod = wk[0] * fv[0];
  double abs_sum = wk[0] * std::fabs(fv[0]);
  double gauss = 0.0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double pair = fv[2 * i - 1] + fv[2 * i];
    kronrod += wk[i] * pair;
    abs_sum += wk[i] * (std::fabs(fv[2 * i - 1]) + std::fabs(fv[2 * i]));
    if (i % 2 == 1) gauss += kGaussWeights[(i - 1) / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = wk[0] * std::fabs(fv[0] - mean);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    asc += wk[i] * (std::fabs(fv[2 * i - 1] - mean) + std::fabs(fv[2 * i] - mean));
  }

  Panel p{a, b, kronrod * half, 0.0, abs_sum * std::fabs(half)};
  double err = std::fabs((kronrod - gauss) * half);
  const double resasc = asc * std::fabs(half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (p.abs_value > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * p.abs_value, err);
  }
  p.error = err;
  if (!std::isfinite(p.value)) throw QuadratureError("integrand is not integrable (non-finite panel sum)");
  return p;
}

// One piece of the integration range expressed in a finite variable t.
struct Piece {
  ScalarFn fn;
  double a;
  double b;
};

std::vector<Piece> make_pieces(const ScalarFn& fn, Interval range, std::span<const double> breakpoints) {
  std::vector<double> cuts{range.lo};
  std::vector<double> inner(breakpoints.begin(), breakpoints.end());
  std::sort(inner.begin(), inner.end());
  for (double c : inner) {
    if (std::isfinite(c) && c > cuts.back() && c < range.hi) cuts.push_back(c);
  }
  // A doubly-infinite range is split at the origin; each half maps to [0, 1).
  if (!std::isfinite(range.lo) && !std::isfinite(range.hi) && cuts.size() == 1) cuts.push_back(0.0);
  cuts.push_back(range.hi);

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (std::isfinite(lo) && std::isfinite(hi)) {
      if (hi > lo) pieces.push_back({fn, lo, hi});
    } else if (std::isfinite(lo)) {
      pieces.push_back({[fn, lo](double t) {
                          const double s = 1.0 - t;
                          return fn(lo + t / s) / (s * s);
                        },
                        0.0, 1.0});
    } else if (std::isfinite(hi)) {
      pieces.push_back({[fn, hi](double t) {
                          const double s = 1.0 - t;
                          return fn(hi - t / s) / (s * s);
                        },
                        0.0, 1.0});
    } else {
      throw QuadratureError("integration range has no finite anchor");
    }
  }
  return pieces;
}

QuadResult integrate_adaptive(const std::vector<Piece>& pieces, const QuadratureSettings& s) {
  QuadResult out;
  std::vector<std::priority_queue<Panel, std::vector<Panel>, ByError>> queues(pieces.size());
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  int panels = 0;
  constexpr int kInitialSplit = 4;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double h = (pieces[i].b - pieces[i].a) / kInitialSplit;
    for (int j = 0; j < kInitialSplit; ++j) {
      const double a = pieces[i].a + j * h;
      const double b = j + 1 == kInitialSplit ? pieces[i].b : a + h;
      Panel p = gk21(pieces[i].fn, a, b, out.evaluations);
      total += p.value;
      total_err += p.error;
      total_abs += p.abs_value;
      queues[i].push(p);
      ++panels;
    }
  }

  auto converged = [&] {
    const double target = std::max(s.abs_tol, s.rel_tol * std::fabs(total));
    return total_err <= target || total_err <= 100.0 * kEps * total_abs;
  };

  while (!converged()) {
    if (panels >= s.max_subdivisions) {
      throw QuadratureError("quadrature did not converge after " + std::to_string(panels) +
                            " panels (estimated error " + std::to_string(total_err) + ")");
    }
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < queues.size(); ++i) {
      if (!queues[i].empty() && queues[i].top().error > worst_err) {
        worst_err = queues[i].top().error;
        worst = i;
      }
    }
    const Panel p = queues[worst].top();
    queues[worst].pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      throw QuadratureError("quadrature panel underflow");
    }
    const Panel left = gk21(pieces[worst].fn, p.a, mid, out.evaluations);
    const Panel right = gk21(pieces[worst].fn, mid, p.b, out.evaluations);
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    total_abs += left.abs_value + right.abs_value - p.abs_value;
    queues[worst].push(left);
    queues[worst].push(right);
    ++panels;
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  for (auto& q : queues) {
    while (!q.empty()) {
      total += q.top().value;
      total_err += q.top().error;
      q.pop();
    }
  }
  out.value = total;
  out.error = total_err;
  return out;
}

QuadResult integrate_fixed(const std::vector<Piece>& pieces, const QuadratureSettings& s) {
  QuadResult out;
  const int per_piece = std::max(1, s.max_subdivisions / static_cast<int>(std::max<std::size_t>(1, pieces.size())));
  for (const Piece& piece : pieces) {
    const double h = (piece.b - piece.a) / per_piece;
    for (int j = 0; j < per_piece; ++j) {
      const double a = piece.a + j * h;
      const double b = j + 1 == per_piece ? piece.b : a + h;
      const Panel p = gk21(piece.fn, a, b, out.evaluations);
      out.value += p.value;
      out.error += p.error;
    }
  }
  return out;
}

QuadResult sum_lattice(const PointFn& fn, const Support& support, ParamView theta, const QuadratureSettings& s) {
  const Interval range = support.at(theta).at(0);
  const double origin = support.lattice_origin;
  const double step = support.lattice_step;
  long first = 0;
  if (std::isfinite(range.lo) && range.lo > origin) first = static_cast<long>(std::ceil((range.lo - origin) / step - 1e-9));
  long last = std::numeric_limits<long>::max();
  if (std::isfinite(range.hi)) last = static_cast<long>(std::floor((range.hi - origin) / step + 1e-9));

  QuadResult out;
  double x = 0.0;
  const Point px(&x, 1);
  double sum = 0.0;
  double comp = 0.0;
  double abs_sum = 0.0;
  auto add = [&](double term) {
    // Kahan summation keeps the lattice sums reproducible to the last bits.
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    abs_sum += std::fabs(term);
  };

  if (s.lattice_truncation > 0) {
    const long stop = std::min(last, s.lattice_truncation);
    for (long i = first; i <= stop; ++i) {
      x = origin + step * static_cast<double>(i);
      add(checked(fn(px)));
      ++out.evaluations;
    }
    out.value = sum;
    out.truncation = stop;
    return out;
  }

  // Tail rule: stop once three consecutive decreasing terms past the peak are
  // below 1e-14 of the running absolute sum.
  constexpr long kMaxTerms = 2'000'000;
  constexpr double kTailMass = 1e-14;
  constexpr long kZeroRun = 1000;
  double peak = 0.0;
  double previous = kInf;
  int quiet = 0;
  long i = first;
  for (; i <= last; ++i) {
    if (i - first > kMaxTerms) throw QuadratureError("lattice sum did not meet the tail rule");
    x = origin + step * static_cast<double>(i);
    const double term = checked(fn(px));
    ++out.evaluations;
    add(term);
    const double mag = std::fabs(term);
    peak = std::max(peak, mag);
    const bool small = mag <= kTailMass * std::max(abs_sum, std::numeric_limits<double>::min());
    if (peak == 0.0 && i - first >= kZeroRun) break;
    if (peak > 0.0 && small && mag <= previous) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
    previous = mag;
  }
  out.value = sum;
  out.error = kTailMass * abs_sum;
  out.truncation = std::min(i, last);
  return out;
}

QuadResult integrate_box(const PointFn& fn, const std::vector<Interval>& box, std::size_t coord,
                         std::vector<double>& x, std::span<const double> breaks, const QuadratureSettings& s) {
  QuadResult acc;
  ScalarFn inner = [&](double v) -> double {
    x[coord] = v;
    if (coord + 1 == box.size()) {
      ++acc.evaluations;
      return fn(Point(x.data(), x.size()));
    }
    const QuadResult r = integrate_box(fn, box, coord + 1, x, {}, s);
    acc.error = std::max(acc.error, r.error);
    acc.evaluations += r.evaluations;
    return r.value;
  };
  QuadResult r = integrate_interval(inner, box[coord], coord == 0 ? breaks : std::span<const double>{}, s);
  r.error += acc.error * box[coord].width() * (std::isfinite(box[coord].width()) ? 1.0 : 0.0);
  r.evaluations = acc.evaluations;
  return r;
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
    throw InvalidArgument("quadrature settings need abs_tol > 0, rel_tol > 0, max_subdivisions >= 1");
  }
}

QuadratureSettings QuadratureSettings::from_env() {
  QuadratureSettings s;
  if (const char* v = std::getenv("INFOINEQ_QUAD_ABS_TOL")) s.abs_tol = std::strtod(v, nullptr);
  if (const char* v = std::getenv("INFOINEQ_QUAD_REL_TOL")) s.rel_tol = std::strtod(v, nullptr);
  if (const char* v = std::getenv("INFOINEQ_QUAD_MAX_SUBDIV")) s.max_subdivisions = std::atoi(v);
  s.validate();
  return s;
}

QuadResult integrate_interval(const ScalarFn& fn, Interval range, std::span<const double> breakpoints,
                              const QuadratureSettings& settings) {
  settings.validate();
  if (std::isnan(range.lo) || std::isnan(range.hi)) throw QuadratureError("NaN integration limit");
  if (!(range.hi > range.lo)) return {};
  const auto pieces = make_pieces(fn, range, breakpoints);
  return settings.scheme == QuadratureScheme::adaptive ? integrate_adaptive(pieces, settings)
                                                        : integrate_fixed(pieces, settings);
}

QuadResult integrate(const PointFn& fn, const Support& support, ParamView theta, const QuadratureSettings& settings,
                     std::span<const double> extra_breaks) {
  settings.validate();
  if (support.kind == SupportKind::discrete) return sum_lattice(fn, support, theta, settings);

  const auto box = support.at(theta);
  std::vector<double> breaks = support.breaks(theta);
  breaks.insert(breaks.end(), extra_breaks.begin(), extra_breaks.end());
  std::vector<double> x(box.size(), 0.0);
  return integrate_box(fn, box, 0, x, breaks, settings);
}

double QuadratureLedger::operator()(const PointFn& fn, const Support& support, ParamView theta,
                                    std::span<const double> extra_breaks) {
  const QuadResult r = integrate(fn, support, theta, settings_, extra_breaks);
  max_error_ = std::max(max_error_, r.error);
  max_truncation_ = std::max(max_truncation_, r.truncation);
  return r.value;
}

}  // namespace infoineq

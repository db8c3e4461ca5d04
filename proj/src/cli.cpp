#include "infoineq/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "infoineq/errors.hpp"
#include "infoineq/escort.hpp"
#include "infoineq/report_io.hpp"
#include "infoineq/verify.hpp"

namespace infoineq::cli {

namespace {

struct Config {
  std::string model;
  std::vector<std::string> hyper;
  std::string method = "naudts";
  std::vector<double> theta;
  std::vector<double> grid;
  int order = 1;
  std::vector<double> nodes;
  std::string output;
  bool self = false;
  bool numeric_lambda = false;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::optional<int> max_subdiv;
  std::optional<long> truncation;
  std::uint64_t seed = McSettings{}.seed;
  long samples = McSettings{}.sample_count;
  std::string suite;
  std::string out_file;
};

Hyper parse_hyper(const std::vector<std::string>& items) {
  Hyper h;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidArgument("hyper: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw InvalidArgument("hyper: value of '" + key + "' is not a number");
    if (!h.emplace(key, v).second) throw InvalidArgument("hyper: duplicate key '" + key + "'");
  }
  return h;
}

QuadratureSettings quad_settings(const Config& c) {
  QuadratureSettings q = QuadratureSettings::from_env();
  if (c.abs_tol) q.abs_tol = *c.abs_tol;
  if (c.rel_tol) q.rel_tol = *c.rel_tol;
  if (c.max_subdiv) q.max_subdivisions = *c.max_subdiv;
  if (c.truncation) q.lattice_truncation = *c.truncation;
  q.validate();
  if (q.lattice_truncation < 0) throw InvalidArgument("truncation must be >= 0");
  return q;
}

Statistic under_f(Statistic t) {
  t.lambda_under_g = {};
  return t;
}

bool uses_nodes(const std::string& m) { return m == "bhatt-dd" || m == "multi-dd"; }

void validate_method(const Config& c) {
  static const std::vector<std::string> methods = {"naudts", "bhatt", "bhatt-dd", "bhatt-dd-sup", "hcr",
                                                   "cr",     "multi", "multi-dd", "schur"};
  if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
    throw InvalidArgument("unknown method '" + c.method + "'");
  }
  if (c.order < 1) throw InvalidArgument("order must be >= 1");
  if (uses_nodes(c.method) && c.nodes.empty()) throw InvalidArgument("method " + c.method + " requires --nodes");
  if (!uses_nodes(c.method) && !c.nodes.empty()) throw InvalidArgument("method " + c.method + " does not take --nodes");
}

BoundReport compute(const CatalogEntry& e, const Config& c, double theta, const BoundOptions& o) {
  const EscortPair pair = c.self ? EscortPair::self(e.escort.f) : e.escort;
  const Statistic t = c.self ? under_f(e.statistic) : e.statistic;
  const ParamVector th{theta};
  BoundReport r;
  if (c.method == "naudts") {
    r = naudts_bound(pair, t, th, o);
  } else if (c.method == "bhatt") {
    r = bhattacharyya_regular(pair, t, theta, c.order, o);
  } else if (c.method == "bhatt-dd") {
    std::vector<double> nodes{theta};
    nodes.insert(nodes.end(), c.nodes.begin(), c.nodes.end());
    r = bhattacharyya_dd(pair, t, NodeSet(nodes), o);
  } else if (c.method == "bhatt-dd-sup") {
    r = bhattacharyya_dd_sup(pair, t, theta, c.order, {}, o);
  } else if (c.method == "hcr") {
    r = hcr_bound(e.escort.f, under_f(e.statistic), theta, {}, o);
  } else if (c.method == "cr") {
    r = classical_cr(e.escort.f, under_f(e.statistic), th, o);
  } else if (c.method == "multi") {
    r = multiparam_bound(pair, t, th, c.order, o);
  } else if (c.method == "multi-dd") {
    std::vector<double> nodes{theta};
    nodes.insert(nodes.end(), c.nodes.begin(), c.nodes.end());
    r = multiparam_dd_bound(pair, t, th, {nodes}, o);
  } else {
    const auto scores = derivative_scores(pair, th, multi_indices(1, c.order), o);
    const auto s = vector_schur_bound(pair, {t}, scores, th, o);
    r.method = "schur";
    r.theta = th;
    r.order = c.order;
    r.bound = s.j(0, 0);
    r.variance = s.sigma_t(0, 0);
    r.gap = s.complement(0, 0);
    r.attained = std::fabs(*r.gap) <= o.attainment_tol.value_or(1e-6) * std::max(*r.variance, 1e-300);
    r.diagnostics.quad_error = s.quad_error;
    const auto ch = cholesky(s.sigma_s);
    r.diagnostics.sigma_condition = ch.ok() ? condition_estimate(*ch.factor) : std::nan("");
  }
  r.model = e.name;
  r.hyper = e.hyper;
  return r;
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out_file.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_file, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + c.out_file + "'");
  f << text;
}

int list_models(const Config& c, std::ostream& out) {
  std::ostringstream s;
  if (c.output == "json") {
    Json arr = Json::array();
    for (const auto& i : catalog_index()) arr.push_back({{"name", i.name}, {"signature", i.signature}, {"summary", i.summary}});
    s << arr.dump(2) << '\n';
  } else {
    for (const auto& i : catalog_index()) {
      s << i.name << (i.signature.empty() ? "" : " [" + i.signature + "]") << "  " << i.summary << '\n';
    }
  }
  emit(c, s.str(), out);
  return kExitOk;
}

BoundOptions bound_options(const Config& c) {
  BoundOptions o;
  o.quad = quad_settings(c);
  o.numeric_lambda = c.numeric_lambda;
  return o;
}

int bound(const Config& c, std::ostream& out) {
  validate_method(c);
  if (c.theta.empty()) throw InvalidArgument("bound requires --theta");
  const auto e = catalog_lookup(c.model, parse_hyper(c.hyper));
  for (double t : c.theta) e.escort.f.domain.require(ParamView(&t, 1));
  const auto o = bound_options(c);
  std::vector<BoundReport> reports;
  for (double t : c.theta) reports.push_back(compute(e, c, t, o));
  std::ostringstream s;
  if (c.output == "csv") {
    write_csv_header(s, 1, false);
    for (const auto& r : reports) write_csv_row(s, r, false);
  } else if (c.output == "pretty") {
    for (const auto& r : reports) write_pretty(s, r);
  } else if (reports.size() == 1) {
    s << to_json(reports.front()).dump(2) << '\n';
  } else {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    s << arr.dump(2) << '\n';
  }
  emit(c, s.str(), out);
  return kExitOk;
}

std::vector<double> sweep_grid(const Config& c) {
  if (!c.grid.empty() && !c.theta.empty()) throw InvalidArgument("sweep takes --theta or --grid, not both");
  if (c.grid.empty()) return c.theta;
  if (c.grid.size() != 3) throw InvalidArgument("--grid expects lo,hi,count");
  const double count = c.grid[2];
  if (count < 0 || count != std::floor(count)) throw InvalidArgument("--grid count must be a nonnegative integer");
  std::vector<double> g;
  const int n = static_cast<int>(count);
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? c.grid[0] : c.grid[0] + (c.grid[1] - c.grid[0]) * i / (n - 1));
  return g;
}

int sweep(const Config& c, std::ostream& out, std::ostream& err) {
  validate_method(c);
  const auto grid = sweep_grid(c);
  const auto e = catalog_lookup(c.model, parse_hyper(c.hyper));
  for (double t : grid) e.escort.f.domain.require(ParamView(&t, 1));
  const auto o = bound_options(c);
  std::ostringstream s;
  bool failed = false;
  if (c.output == "json") {
    Json arr = Json::array();
    for (double t : grid) {
      try {
        arr.push_back(to_json(compute(e, c, t, o)));
      } catch (const Error& ex) {
        failed = true;
        arr.push_back({{"theta", {t}}, {"error", ex.what()}});
      }
    }
    s << arr.dump(2) << '\n';
  } else {
    write_csv_header(s, 1, true);
    for (double t : grid) {
      try {
        write_csv_row(s, compute(e, c, t, o), true);
      } catch (const Error& ex) {
        failed = true;
        write_csv_error_row(s, {t}, ex.what());
      }
    }
  }
  emit(c, s.str(), out);
  if (failed) err << "sweep: one or more rows failed\n";
  return failed ? kExitFailure : kExitOk;
}

int synth(const Config& c, std::ostream& out) {
  const auto e = catalog_lookup(c.model, parse_hyper(c.hyper));
  if (e.escort.f.support.kind != SupportKind::continuous) {
    throw InvalidArgument("synth: no constructive recipe for lattice model " + e.name);
  }
  const bool location = e.name == "expmin";
  const double ref = 1.0;
  const ParamVector th{ref};
  const ModelSpec f = e.escort.f;
  const Statistic t = e.statistic;
  const double phi = t.target ? t.target(ref) : expectation(f, [&](Point x) { return t(x); }, th);
  const Interval s = f.support.at(th)[0];
  const double shift = location ? ref : 0.0;
  BaseDensity base;
  base.name = e.name;
  base.support = {s.lo - shift, s.hi - shift};
  base.pdf = [f, ref, shift](double x) { return f.density(x + shift, ref); };
  for (double b : f.support.breaks(th)) base.breaks.push_back(b - shift);
  Statistic bt;
  bt.name = t.name;
  bt.eval = [t, shift](Point x) { return t(x[0] + shift); };
  const auto g = location ? synth_location(base, bt, phi) : synth_scale(base, bt, phi);

  std::ostringstream o;
  if (c.output == "json") {
    double sup = 0.0;
    const Interval r = g.range();
    const Interval gs = e.escort.g.support.at(th)[0];
    const double lo = std::max(r.lo + shift, gs.lo);
    const double hi = std::min(r.hi + shift, gs.hi);
    for (int i = 0; i <= 2000; ++i) {
      const double x = lo + (hi - lo) * i / 2000.0;
      sup = std::max(sup, std::fabs(g.density(x, ref) - e.escort.g.density(x, ref)));
    }
    const auto pair = EscortPair::make(f, g.model(f.domain));
    const auto report = naudts_bound(pair, under_f(t), th, bound_options(c));
    Json j = {{"model", e.name},
              {"family_rule", location ? "location-shift" : "scale"},
              {"theta", ref},
              {"phi", phi},
              {"normalizer", g.normalizer()},
              {"orientation", g.orientation()},
              {"nodes", g.nodes().size()},
              {"range", {r.lo, r.hi}},
              {"sup_error_vs_catalog_escort", sup},
              {"naudts", to_json(report)}};
    o << j.dump(2) << '\n';
  } else {
    g.write_csv(o);
  }
  emit(c, o.str(), out);
  return kExitOk;
}

int verify(const Config& c, std::ostream& out) {
  std::ostringstream s;
  bool passed = true;
  if (c.suite == "attainment") {
    if (c.model.empty()) throw InvalidArgument("verify --suite attainment requires --model");
    const auto e = catalog_lookup(c.model, parse_hyper(c.hyper));
    std::vector<double> grid = c.theta;
    if (grid.empty()) {
      for (const auto& p : e.reference_points) grid.push_back(p[0]);
    }
    for (double t : grid) e.escort.f.domain.require(ParamView(&t, 1));
    const auto suite = attainment_suite(e, grid, bound_options(c));
    passed = suite.passed;
    s << to_json(suite).dump(2) << '\n';
  } else if (c.suite == "reduction") {
    const auto suite = reduction_suite();
    passed = suite.passed;
    s << to_json(suite).dump(2) << '\n';
  } else {
    McSettings m;
    m.seed = c.seed;
    m.sample_count = c.samples;
    m.validate();
    Json arr = Json::array();
    for (const auto& check : mc_suite(m)) {
      passed = passed && check.passed;
      arr.push_back(to_json(check));
    }
    s << Json{{"suite", "mc"}, {"passed", passed}, {"generator", kGeneratorName}, {"seed", c.seed}, {"checks", arr}}.dump(2)
      << '\n';
  }
  emit(c, s.str(), out);
  return passed ? kExitOk : kExitFailure;
}

int reduce(const Config& c, std::ostream& out) {
  const auto suite = reduction_suite();
  std::ostringstream s;
  s << to_json(suite).dump(2) << '\n';
  emit(c, s.str(), out);
  return suite.passed ? kExitOk : kExitFailure;
}

void quad_options(CLI::App* app, Config& c) {
  app->add_option("--abs-tol", c.abs_tol, "Quadrature absolute tolerance");
  app->add_option("--rel-tol", c.rel_tol, "Quadrature relative tolerance");
  app->add_option("--max-subdiv", c.max_subdiv, "Quadrature subdivision limit");
  app->add_option("--truncation", c.truncation, "Lattice truncation index (0 = tail rule)");
}

void bound_flags(CLI::App* app, Config& c) {
  app->add_option("--model", c.model, "Catalog model")->required();
  app->add_option("--hyper", c.hyper, "Hyperparameters key=value")->delimiter(',');
  app->add_option("--method", c.method, "Bound method");
  app->add_option("--order", c.order, "Order k");
  app->add_option("--nodes", c.nodes, "Extra divided-difference nodes")->delimiter(',');
  app->add_flag("--self", c.self, "Use g = f");
  app->add_flag("--numeric-lambda", c.numeric_lambda, "Ignore closed-form lambda");
  app->add_option("--out", c.out_file, "Write output to FILE");
  quad_options(app, c);
}

}  // namespace

BoundReport compute_bound(const BoundRequest& request, double theta) {
  Config c;
  c.model = request.model;
  c.method = request.method;
  c.order = request.order;
  c.nodes = request.nodes;
  c.self = request.self;
  c.numeric_lambda = request.numeric_lambda;
  c.truncation = request.truncation;
  validate_method(c);
  const auto e = catalog_lookup(request.model, request.hyper);
  e.escort.f.domain.require(ParamView(&theta, 1));
  return compute(e, c, theta, bound_options(c));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Generalized information inequalities", "infoineq"};
  app.require_subcommand(1, 1);

  auto* list = app.add_subcommand("list-models", "List catalog models");
  list->add_option("--output", c.output, "pretty or json")->check(CLI::IsMember({"pretty", "json"}));
  list->add_option("--out", c.out_file, "Write output to FILE");

  auto* bnd = app.add_subcommand("bound", "Compute a bound");
  bound_flags(bnd, c);
  bnd->add_option("--theta", c.theta, "Parameter values")->delimiter(',')->required();
  bnd->add_option("--output", c.output, "json, csv or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));

  auto* swp = app.add_subcommand("sweep", "Bounds over a parameter grid");
  bound_flags(swp, c);
  swp->add_option("--theta", c.theta, "Parameter values")->delimiter(',');
  swp->add_option("--grid", c.grid, "lo,hi,count")->delimiter(',');
  swp->add_option("--output", c.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* syn = app.add_subcommand("synth", "Synthesize the optimizing escort");
  syn->add_option("--model", c.model, "Catalog model")->required();
  syn->add_option("--hyper", c.hyper, "Hyperparameters key=value")->delimiter(',');
  syn->add_option("--output", c.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  syn->add_option("--out", c.out_file, "Write output to FILE");
  quad_options(syn, c);

  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("--suite", c.suite, "attainment, reduction or mc")
      ->required()
      ->check(CLI::IsMember({"attainment", "reduction", "mc"}));
  ver->add_option("--model", c.model, "Catalog model (attainment)");
  ver->add_option("--hyper", c.hyper, "Hyperparameters key=value")->delimiter(',');
  ver->add_option("--theta", c.theta, "Parameter grid (attainment)")->delimiter(',');
  ver->add_option("--seed", c.seed, "Monte Carlo seed");
  ver->add_option("--samples", c.samples, "Monte Carlo sample count");
  ver->add_option("--out", c.out_file, "Write output to FILE");
  quad_options(ver, c);

  auto* red = app.add_subcommand("reduce", "Run the reduction-chain checks");
  red->add_option("--out", c.out_file, "Write output to FILE");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list->parsed()) {
      if (c.output.empty()) c.output = "pretty";
      return list_models(c, out);
    }
    if (bnd->parsed()) {
      if (c.output.empty()) c.output = "json";
      return bound(c, out);
    }
    if (swp->parsed()) {
      if (c.output.empty()) c.output = "csv";
      return sweep(c, out, err);
    }
    if (syn->parsed()) {
      if (c.output.empty()) c.output = "csv";
      return synth(c, out);
    }
    if (ver->parsed()) return verify(c, out);
    return reduce(c, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace infoineq::cli

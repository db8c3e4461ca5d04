#include "infoineq/report_io.hpp"

#include <cmath>
#include <cstdio>

#include "infoineq/errors.hpp"

namespace infoineq {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_number(v[i]);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + v[i];
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const BoundReport& r) {
  const auto& d = r.diagnostics;
  Json diag = {
      {"sigma_condition", std::isfinite(d.sigma_condition) ? Json(d.sigma_condition) : Json(nullptr)},
      {"quad_error", d.quad_error},
      {"truncation", d.truncation},
      {"equality_correlation", opt(d.equality_correlation)},
      {"argmax_nodes", d.argmax_nodes},
      {"lambda_path", d.lambda_path},
      {"derivative_path", d.derivative_path},
      {"degraded", d.degraded},
      {"dropped_scores", d.dropped_scores},
      {"score_mean_max", d.score_mean_max},
      {"identity_residual", d.identity_residual},
      {"m_vector", d.m_vector},
      {"assumptions_checked", d.assumptions_checked},
  };
  Json hyper = Json::object();
  for (const auto& [k, v] : r.hyper) hyper[k] = v;
  return Json{
      {"method", r.method},
      {"model", r.model},
      {"hyper", hyper},
      {"theta", r.theta},
      {"order", r.order},
      {"nodes", r.nodes},
      {"bound", r.bound},
      {"variance", opt(r.variance)},
      {"gap", opt(r.gap)},
      {"attained", r.attained ? Json(*r.attained) : Json(nullptr)},
      {"diagnostics", diag},
      {"versions", {{"spec", kSchemaVersion}, {"catalog", kCatalogVersion}}},
  };
}

BoundReport report_from_json(const Json& j) {
  try {
    BoundReport r;
    r.method = j.at("method").get<std::string>();
    r.model = j.at("model").get<std::string>();
    for (const auto& [k, v] : j.at("hyper").items()) r.hyper[k] = v.get<double>();
    r.theta = j.at("theta").get<ParamVector>();
    r.order = j.at("order").get<int>();
    r.nodes = j.at("nodes").get<std::vector<double>>();
    r.bound = j.at("bound").get<double>();
    r.variance = read_opt(j, "variance");
    r.gap = read_opt(j, "gap");
    if (!j.at("attained").is_null()) r.attained = j.at("attained").get<bool>();
    const Json& d = j.at("diagnostics");
    auto& o = r.diagnostics;
    o.sigma_condition = d.at("sigma_condition").is_null() ? std::nan("") : d.at("sigma_condition").get<double>();
    o.quad_error = d.at("quad_error").get<double>();
    o.truncation = d.at("truncation").get<long>();
    o.equality_correlation = read_opt(d, "equality_correlation");
    o.argmax_nodes = d.at("argmax_nodes").get<std::vector<double>>();
    o.lambda_path = d.value("lambda_path", "");
    o.derivative_path = d.value("derivative_path", "");
    o.degraded = d.value("degraded", false);
    o.dropped_scores = d.value("dropped_scores", std::vector<std::string>{});
    o.score_mean_max = d.value("score_mean_max", 0.0);
    o.identity_residual = d.value("identity_residual", 0.0);
    o.m_vector = d.value("m_vector", std::vector<double>{});
    o.assumptions_checked = d.value("assumptions_checked", true);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("report: malformed JSON: ") + e.what());
  }
}

Json to_json(const McEstimate& e) {
  return Json{{"mean", e.mean},       {"stderr", e.std_error},       {"samples", e.samples},
              {"seed", e.seed},       {"generator", e.generator},    {"method", e.method}};
}

Json to_json(const AttainmentSuite& s) {
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"method", c.claim.method},
                      {"order", c.claim.order},
                      {"self_pair", c.claim.self_pair},
                      {"claimed_attained", c.claim.attained},
                      {"passed", c.passed},
                      {"error", c.error.empty() ? Json(nullptr) : Json(c.error)},
                      {"report", c.error.empty() ? to_json(c.report) : Json(nullptr)}});
  }
  return Json{{"suite", "attainment"}, {"entry", s.entry}, {"passed", s.passed}, {"checks", checks}};
}

Json to_json(const ReductionSuite& s) {
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"name", c.name},
                      {"achieved", c.achieved},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"error", c.error.empty() ? Json(nullptr) : Json(c.error)}});
  }
  return Json{{"suite", "reduction"}, {"passed", s.passed}, {"checks", checks}};
}

Json to_json(const McCheck& c) {
  return Json{{"entry", c.entry}, {"quantity", c.quantity}, {"quadrature", c.quadrature},
              {"mc", to_json(c.mc)}, {"passed", c.passed}};
}

const std::vector<std::string>& csv_diagnostic_columns() {
  static const std::vector<std::string> cols = {
      "argmax_nodes",   "assumptions_checked", "degraded",   "derivative_path", "dropped_scores",
      "equality_correlation", "identity_residual", "lambda_path", "m_vector",  "quad_error",
      "score_mean_max", "sigma_condition",     "truncation",
  };
  return cols;
}

void write_csv_header(std::ostream& out, std::size_t theta_dim, bool with_error) {
  for (std::size_t i = 0; i < theta_dim; ++i) out << "theta" << i << ',';
  out << "bound,variance,gap,attained";
  for (const auto& c : csv_diagnostic_columns()) out << ',' << c;
  if (with_error) out << ",error";
  out << '\n';
}

void write_csv_row(std::ostream& out, const BoundReport& r, bool with_error) {
  const auto& d = r.diagnostics;
  for (double t : r.theta) out << format_number(t) << ',';
  out << format_number(r.bound) << ',' << opt_number(r.variance) << ',' << opt_number(r.gap) << ','
      << (r.attained ? (*r.attained ? "true" : "false") : "");
  out << ',' << join(d.argmax_nodes) << ',' << (d.assumptions_checked ? "true" : "false") << ','
      << (d.degraded ? "true" : "false") << ',' << csv_field(d.derivative_path) << ',' << csv_field(join(d.dropped_scores))
      << ',' << opt_number(d.equality_correlation) << ',' << format_number(d.identity_residual) << ','
      << csv_field(d.lambda_path) << ',' << join(d.m_vector) << ',' << format_number(d.quad_error) << ','
      << format_number(d.score_mean_max) << ',' << format_number(d.sigma_condition) << ',' << d.truncation;
  if (with_error) out << ',';
  out << '\n';
}

void write_csv_error_row(std::ostream& out, const ParamVector& theta, const std::string& error) {
  for (double t : theta) out << format_number(t) << ',';
  out << ",,,";
  for (std::size_t i = 0; i < csv_diagnostic_columns().size(); ++i) out << ',';
  out << ',' << csv_field(error) << '\n';
}

void write_pretty(std::ostream& out, const BoundReport& r) {
  out << r.method << " bound for " << r.model;
  if (!r.hyper.empty()) {
    out << " (";
    bool first = true;
    for (const auto& [k, v] : r.hyper) {
      out << (first ? "" : ", ") << k << '=' << format_number(v);
      first = false;
    }
    out << ')';
  }
  out << " at theta = " << join(r.theta) << '\n';
  out << "  bound     " << format_number(r.bound) << '\n';
  if (r.variance) out << "  variance  " << format_number(*r.variance) << '\n';
  if (r.gap) out << "  gap       " << format_number(*r.gap) << '\n';
  if (r.attained) out << "  attained  " << (*r.attained ? "yes" : "no") << '\n';
  if (r.diagnostics.equality_correlation) {
    out << "  corr      " << format_number(*r.diagnostics.equality_correlation) << '\n';
  }
  if (!r.diagnostics.argmax_nodes.empty()) out << "  argmax    " << join(r.diagnostics.argmax_nodes) << '\n';
  if (!r.diagnostics.dropped_scores.empty()) out << "  dropped   " << join(r.diagnostics.dropped_scores) << '\n';
}

}  // namespace infoineq

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "infoineq/bounds.hpp"
#include "infoineq/verify.hpp"

namespace infoineq {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kCatalogVersion = "1";

using Json = nlohmann::ordered_json;

Json to_json(const BoundReport& r);
/// Inverse of to_json; throws InvalidArgument on a malformed document.
BoundReport report_from_json(const Json& j);

Json to_json(const McEstimate& e);
Json to_json(const AttainmentSuite& s);
Json to_json(const ReductionSuite& s);
Json to_json(const McCheck& c);

/// %.17g; nan, inf and -inf spelled out.
std::string format_number(double v);

/// Diagnostic column names in CSV order.
const std::vector<std::string>& csv_diagnostic_columns();

/// theta0..theta{dim-1}, bound, variance, gap, attained, diagnostics, and an
/// error column when `with_error`.
void write_csv_header(std::ostream& out, std::size_t theta_dim, bool with_error);
void write_csv_row(std::ostream& out, const BoundReport& r, bool with_error);
/// A failed sweep row: theta filled, every other value empty, then the error.
void write_csv_error_row(std::ostream& out, const ParamVector& theta, const std::string& error);

/// Human-readable multi-line summary.
void write_pretty(std::ostream& out, const BoundReport& r);

}  // namespace infoineq

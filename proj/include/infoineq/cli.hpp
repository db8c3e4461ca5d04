#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "infoineq/bounds.hpp"

namespace infoineq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// One bound computation as the bound command performs it.
struct BoundRequest {
  std::string model;
  Hyper hyper;
  /// naudts, bhatt, bhatt-dd, bhatt-dd-sup, hcr, cr, multi, multi-dd or schur.
  std::string method = "naudts";
  int order = 1;
  /// Extra nodes for bhatt-dd and multi-dd; theta is prepended.
  std::vector<double> nodes;
  bool self = false;
  bool numeric_lambda = false;
  std::optional<long> truncation;
};

/// Throws InvalidArgument or DomainError on a bad request.
BoundReport compute_bound(const BoundRequest& request, double theta);

/// Runs one command line (without the program name). Reports go to `out`,
/// one-line diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infoineq::cli

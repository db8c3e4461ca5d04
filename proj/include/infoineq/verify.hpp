#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "infoineq/bounds.hpp"

namespace infoineq {

enum class McMethod { automatic, inverse_cdf, direct };

const char* to_string(McMethod m);

struct McSettings {
  long sample_count = 1'000'000;
  std::uint64_t seed = 0x5eed5eedULL;
  McMethod method = McMethod::automatic;

  /// Throws InvalidArgument when sample_count < 1000.
  void validate() const;
};

inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64-substreams";
inline constexpr long kMcChunk = 65536;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;
  std::string method;

  /// |mean - reference| <= k * standard error.
  bool agrees(double reference, double k = 4.0) const;
};

/// Draws from m at theta given a uniform variate on (0, 1).
using Sampler = std::function<double(double u)>;

/// Closed-form quantile when wired, else numeric CDF inversion for continuous
/// scalar models; sequential search from the mode for lattices. Throws
/// InvalidArgument when no sampler is available.
Sampler make_sampler(const ModelSpec& m, ParamView theta, McMethod method, std::string* resolved = nullptr);

/// Sample means of several functions over one stream of draws. Chunks of
/// kMcChunk samples use independent sub-seeds and merge associatively.
std::vector<McEstimate> mc_moments(const ModelSpec& m, const std::vector<std::function<double(Point)>>& fns,
                                   ParamView theta, const McSettings& s = {});

McEstimate mc_expectation(const ModelSpec& m, const std::function<double(Point)>& fn, ParamView theta,
                          const McSettings& s = {});

/// One row of the claims table: the engine, its configuration and whether
/// the bound is claimed to be attained.
struct AttainmentClaim {
  std::string method;
  int order = 1;
  bool self_pair = false;
  bool attained = true;
};

std::vector<AttainmentClaim> attainment_claims(const CatalogEntry& entry);

struct AttainmentCheck {
  AttainmentClaim claim;
  BoundReport report;
  bool passed = false;
  std::string error;
};

struct AttainmentSuite {
  std::string entry;
  std::vector<AttainmentCheck> checks;
  bool passed = true;
};

AttainmentSuite attainment_suite(const CatalogEntry& entry, const std::vector<double>& theta_grid,
                                 const BoundOptions& opts = {});

struct ReductionCheck {
  std::string name;
  double achieved = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string error;
};

struct ReductionSuite {
  std::vector<ReductionCheck> checks;
  bool passed = true;
};

ReductionSuite reduction_suite();

struct McCheck {
  std::string entry;
  std::string quantity;
  double quadrature = 0.0;
  McEstimate mc;
  bool passed = false;
};

/// E_f[T], E_f[T^2] and E_g[T] of every catalog entry at theta = 1 against quadrature.
std::vector<McCheck> mc_suite(const McSettings& s = {});

}  // namespace infoineq

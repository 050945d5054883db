#pragma once

#include <optional>
#include <string>
#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/poncelet.hpp"
#include "json.hpp"

namespace billiards {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class CheckKind {
  Info,    ///< reported only
  MaxAbs,  ///< max |v| ≤ tolerance
  MaxDev,  ///< max |v − mean| ≤ tolerance
  StdDev,  ///< standard deviation ≤ tolerance
  Equals,  ///< max |v − expected| ≤ tolerance
};

/// One conserved quantity or identity residual across the sampled polygons.
/// Tolerances are absolute; relative criteria are converted when the record
/// is built.
struct QuantityRecord {
  std::string name;
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;
  double max_dev = 0.0;
  std::optional<double> expected;
  std::optional<double> residual;
  CheckKind check = CheckKind::Info;
  double tolerance = 0.0;
  bool applicable = true;
  bool pass = true;

  friend bool operator==(const QuantityRecord&, const QuantityRecord&) = default;
};

QuantityRecord make_record(std::string name, std::vector<double> values, CheckKind check,
                           double tolerance, std::optional<double> expected = std::nullopt,
                           bool applicable = true);

struct RunConfig {
  std::string command = "verify";
  double a1 = 2.0;
  double a2 = 1.0;
  int n = 4;
  int k = 1;
  int samples = 64;
  double tol = 1e-9;
  double px = 0.0;
  double py = 0.0;
  std::uint64_t seed = 42;
  int harmonics = 4;
  std::vector<Harmonic> coeffs;  ///< explicit TrigPoly harmonics; overrides seed
  std::string format;            ///< "csv" | "json"; empty selects the command default
  std::string out;
  bool parallel = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct FamilyInfo {
  std::string table;
  std::optional<double> lambda;
  std::optional<double> ac;
  std::optional<double> bc;
  std::optional<double> J;

  friend bool operator==(const FamilyInfo&, const FamilyInfo&) = default;
};

struct InvariantReport {
  RunConfig config;
  std::string version = kLibraryVersion;
  std::string timestamp;
  FamilyInfo family;
  std::vector<QuantityRecord> quantities;
  bool pass = false;
  std::optional<std::string> error;

  const QuantityRecord* find(const std::string& name) const;
  friend bool operator==(const InvariantReport&, const InvariantReport&) = default;
};

struct VerifyOptions {
  int samples = 64;
  /// Threshold scale: closure is checked at tol·a1, every other check at its
  /// default tolerance times tol/1e−9.
  double tol = 1e-9;
  Point2 pedal_point{};
  Execution execution = Execution::Sequential;
};

/// Sweeps the family and evaluates every applicable conserved quantity.
/// Throws on construction failures (ClosureFailure while sweeping).
InvariantReport verify_family(const PonceletFamily& family, const VerifyOptions& options);

/// Table-independent identities on a single orbit of a generic convex table.
InvariantReport verify_generic(const SupportCurve& curve, const BilliardPolygon& polygon,
                               double tol = 1e-9);

FamilyInfo describe(const PonceletFamily& family);
FamilyInfo describe(const SupportCurve& curve);

/// Column order of the per-sample CSV.
const std::vector<std::string>& sweep_csv_columns();
/// Header plus one row per sample, 17 significant digits.
std::string sweep_csv(const InvariantReport& report);

nlohmann::json to_json(const InvariantReport& report);
InvariantReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace billiards

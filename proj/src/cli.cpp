#include "billiards/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/poncelet.hpp"

namespace billiards::cli {

namespace {

PonceletFamily family_for(const RunConfig& config) {
  const auto table = SupportCurve::ellipse(config.a1, config.a2);
  if (2 * config.k >= config.n) {
    std::ostringstream msg;
    msg << "k/n = " << config.k << "/" << config.n
        << " must lie in (0, 1/2) with gcd(n, k) = 1 (rotation range)";
    throw Error(ErrorKind::NotBracketed, msg.str());
  }
  return find_caustic(table, config.n, config.k);
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open output file " + config.out);
  file << text;
}

std::string render(const InvariantReport& report, const std::string& format) {
  if (format == "csv") return sweep_csv(report);
  return to_json(report).dump(2) + "\n";
}

std::string format_or(const RunConfig& config, const char* fallback) {
  return config.format.empty() ? fallback : config.format;
}

void summarize(const InvariantReport& report, std::ostream& err) {
  for (const auto& q : report.quantities) {
    if (!q.pass) err << "FAILED " << q.name << " (tolerance " << q.tolerance << ")\n";
  }
}

}  // namespace

void validate(const RunConfig& c) {
  if (!(c.a1 >= c.a2 && c.a2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "need a1 >= a2 > 0");
  if (c.samples < 2) throw Error(ErrorKind::InvalidArgument, "need samples >= 2");
  if (!(c.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "need tol > 0");
  if (c.n < 2 || c.k < 1 || std::gcd(c.n, c.k) != 1) {
    throw Error(ErrorKind::InvalidArgument, "need n >= 2, k >= 1 and gcd(n, k) = 1");
  }
  if (!c.format.empty() && c.format != "csv" && c.format != "json") {
    throw Error(ErrorKind::InvalidArgument, "format must be csv or json");
  }
}

Harmonic parse_harmonic(const std::string& text) {
  std::istringstream is(text);
  Harmonic h{};
  char sep1 = 0;
  char sep2 = 0;
  if (!(is >> h.k >> sep1 >> h.a >> sep2 >> h.b) || sep1 != ':' || sep2 != ':') {
    throw Error(ErrorKind::InvalidArgument, "harmonic must be written k:a:b, got " + text);
  }
  return h;
}

int cmd_caustic(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const PonceletFamily family = family_for(config);
    const double rho = rotation_number(family.table, family.caustic.lambda);
    const double residual = std::abs(rho - static_cast<double>(config.k) / config.n);
    std::ostringstream os;
    if (format_or(config, "text") == "json") {
      nlohmann::json j = {{"lambda", family.caustic.lambda}, {"ac", family.caustic.ac},
                          {"bc", family.caustic.bc},         {"J", family.J},
                          {"rotation_residual", residual}};
      os << j.dump(2) << "\n";
    } else {
      os << std::setprecision(17) << "lambda " << family.caustic.lambda << "\n"
         << "ac " << family.caustic.ac << "\n"
         << "bc " << family.caustic.bc << "\n"
         << "J " << family.J << "\n"
         << "rotation_residual " << residual << "\n";
    }
    emit(config, os.str(), out);
    return kExitPass;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConstruction;
  }
}

InvariantReport build_family_report(const RunConfig& config, int& exit_code) {
  InvariantReport report;
  try {
    validate(config);
    const PonceletFamily family = family_for(config);
    report.family = describe(family);
    VerifyOptions options;
    options.samples = config.samples;
    options.tol = config.tol;
    options.pedal_point = {config.px, config.py};
    options.execution = config.parallel ? Execution::Parallel : Execution::Sequential;
    try {
      report = verify_family(family, options);
    } catch (const Error& e) {
      report.error = e.what();
      report.pass = false;
      exit_code = kExitConstruction;
    }
  } catch (const Error& e) {
    report.error = e.what();
    report.pass = false;
    exit_code = kExitConstruction;
  }
  report.config = config;
  report.timestamp = utc_timestamp();
  if (!report.error) exit_code = report.pass ? kExitPass : kExitCheckFailed;
  return report;
}

namespace {

int write_family_report(const RunConfig& config, const char* default_format, std::ostream& out,
                        std::ostream& err) {
  int code = kExitPass;
  const InvariantReport report = build_family_report(config, code);
  std::string format = format_or(config, default_format);
  if (report.error) {
    err << "error: " << *report.error << "\n";
    format = "json";  // the partial report has no per-sample rows
  }
  try {
    emit(config, render(report, format), out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConstruction;
  }
  summarize(report, err);
  return code;
}

}  // namespace

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return write_family_report(config, "json", out, err);
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return write_family_report(config, "csv", out, err);
}

int cmd_generic(const RunConfig& config, std::ostream& out, std::ostream& err) {
  InvariantReport report;
  int code = kExitPass;
  try {
    if (config.samples < 2 || !(config.tol > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "need samples >= 2 and tol > 0");
    }
    const SupportCurve table = config.coeffs.empty()
                                   ? random_trig_poly(config.seed, config.harmonics)
                                   : SupportCurve::trig_poly(1.0, config.coeffs);
    report.family = describe(table);
    const BilliardPolygon orbit = birkhoff_orbit(table, config.n, config.k, config.seed);
    report = verify_generic(table, orbit, config.tol);
    code = report.pass ? kExitPass : kExitCheckFailed;
  } catch (const Error& e) {
    report.error = e.what();
    report.pass = false;
    code = kExitConstruction;
    err << "error: " << e.what() << "\n";
  }
  report.config = config;
  report.timestamp = utc_timestamp();
  try {
    emit(config, to_json(report).dump(2) + "\n", out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConstruction;
  }
  summarize(report, err);
  return code;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.command == "caustic") return cmd_caustic(config, out, err);
  if (config.command == "verify") return cmd_verify(config, out, err);
  if (config.command == "generic") return cmd_generic(config, out, err);
  if (config.command == "sweep") return cmd_sweep(config, out, err);
  err << "error: unknown command " << config.command << "\n";
  return kExitConstruction;
}

}  // namespace billiards::cli

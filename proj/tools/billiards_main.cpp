#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "billiards/cli.hpp"
#include "billiards/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Periodic billiard orbits in ellipses and convex tables, with invariant checks"};
  app.require_subcommand(1);

  billiards::RunConfig config;
  std::vector<std::string> coeffs;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--a1", config.a1, "semi-major axis of the table")->capture_default_str();
    sub->add_option("--a2", config.a2, "semi-minor axis of the table")->capture_default_str();
    sub->add_option("--n", config.n, "period")->capture_default_str();
    sub->add_option("--k", config.k, "winding number")->capture_default_str();
    sub->add_option("--samples", config.samples, "family phases to sample")->capture_default_str();
    sub->add_option("--tol", config.tol, "closure tolerance (relative to a1)")->capture_default_str();
    sub->add_option("--px", config.px, "pedal point x")->capture_default_str();
    sub->add_option("--py", config.py, "pedal point y")->capture_default_str();
    sub->add_option("--seed", config.seed, "seed for generic tables")->capture_default_str();
    sub->add_option("--harmonics", config.harmonics, "harmonic count for generic tables")
        ->capture_default_str();
    sub->add_option("--coeff", coeffs, "explicit harmonic k:a:b (repeatable)");
    sub->add_option("--format", config.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", config.out, "output path (default stdout)");
    sub->add_flag("--parallel", config.parallel, "evaluate sweep phases concurrently");
  };

  for (const char* name : {"caustic", "verify", "generic", "sweep"}) {
    add_common(app.add_subcommand(name));
  }
  app.get_subcommand("caustic")->description("locate the caustic of the (n, k) family");
  app.get_subcommand("verify")->description("sweep the family and check every invariant");
  app.get_subcommand("generic")->description("Birkhoff orbit on a random convex table");
  app.get_subcommand("sweep")->description("per-phase CSV of the family invariants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : billiards::cli::kExitConstruction;
  }

  config.command = app.get_subcommands().front()->get_name();
  try {
    for (const auto& text : coeffs) config.coeffs.push_back(billiards::cli::parse_harmonic(text));
  } catch (const billiards::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return billiards::cli::kExitConstruction;
  }
  return billiards::cli::run(config, std::cout, std::cerr);
}

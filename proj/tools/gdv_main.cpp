// gdv: good-deal bounds, superhedging and relevance checks on scenario files.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "gdv/cli.hpp"

namespace {

int emit(const gdv::cli::Outcome& o, const std::string& format) {
  if (format == "json") {
    std::cout << o.report.dump(2) << "\n";
  } else {
    std::cout << gdv::cli::render_text(o.report);
  }
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Good-deal valuation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  gdv::cli::Options opt;
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tol", opt.tol, "shortfall bisection tolerance")->check(CLI::PositiveNumber);

  std::string scenario, claim, mode = "risk", which = "all", loss;
  std::optional<double> delta;

  auto* bounds = app.add_subcommand("bounds", "no-arbitrage and good-deal intervals for a claim");
  bounds->add_option("scenario", scenario)->required();
  bounds->add_option("claim", claim)->required();
  bounds->add_option("--seed", opt.seed);
  bounds->add_option("--trials", opt.trials);

  auto* price = app.add_subcommand("price", "ask and bid of a claim");
  price->add_option("scenario", scenario)->required();
  price->add_option("claim", claim)->required();
  price->add_option("--mode", mode)->check(CLI::IsMember({"risk", "indiff", "shortfall"}));
  price->add_option("--loss", loss, "power:P or exp:A");
  price->add_option("--delta", delta);

  auto* check = app.add_subcommand("check", "certify market and risk measure properties");
  check->add_option("scenario", scenario)->required();
  check->add_option("--which", which)->check(CLI::IsMember({"ftap", "gdv", "relevance", "all-gdvs-relevant", "all"}));
  check->add_option("--seed", opt.seed);
  check->add_option("--trials", opt.trials);

  std::size_t atoms = 3, generators = 2, iters = 50;
  auto* fuzz = app.add_subcommand("fuzz", "randomized condition-equivalence harness");
  fuzz->add_option("--atoms", atoms);
  fuzz->add_option("--generators", generators);
  fuzz->add_option("--seed", opt.seed);
  fuzz->add_option("--iters", iters);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gdv::cli::kMalformed;
  }

  try {
    if (fuzz->parsed()) return emit(gdv::cli::cmd_fuzz(atoms, generators, opt.seed, iters), format);
    const gdv::Scenario s = gdv::load_scenario(scenario);
    if (bounds->parsed()) return emit(gdv::cli::cmd_bounds(s, claim, opt), format);
    if (price->parsed()) {
      std::optional<std::string> l;
      if (!loss.empty()) l = loss;
      return emit(gdv::cli::cmd_price(s, claim, mode, l, delta, opt), format);
    }
    return emit(gdv::cli::cmd_check(s, which, opt), format);
  } catch (const gdv::DegenerateOffsetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gdv::cli::kUndecided;
  } catch (const gdv::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gdv::cli::kMalformed;
  } catch (const gdv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gdv::cli::kUndecided;
  }
}

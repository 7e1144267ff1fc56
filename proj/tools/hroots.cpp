// hroots: roots of a complex polynomial from Hankel-determinant ratios.
//
//   hroots roots --poly "1 -3 2"
//   hroots trace --side laurent --r 1 --kmax 40 poly.json
//   echo "1 0 -1" | hroots roots --format csv

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "hroots/cli.hpp"

namespace {

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

}  // namespace

int main(int argc, char** argv) {
  using namespace hroots;
  cli::JobSpec job;
  std::string format = "json", side = "taylor", inline_poly, file;
  unsigned long long seed = 0;

  CLI::App app{"Polynomial roots from limits of Hankel-determinant ratios"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--precision", job.config.precision_bits, "Working precision in bits")->envname("HROOTS_PRECISION");
    sub->add_option("--kmax", job.config.k_max, "Largest series index used by traces")->envname("HROOTS_KMAX");
    sub->add_option("--tol", job.config.tol, "Relative tolerance for converged limits")->envname("HROOTS_TOL");
    sub->add_option("--seed", seed, "Seed for the tie-breaking shifts")->envname("HROOTS_SEED");
    sub->add_option("--max-shifts", job.config.max_shifts, "Shift budget")->envname("HROOTS_MAX_SHIFTS");
    sub->add_option("--max-precision", job.config.max_precision_bits, "Ceiling for precision escalation")
        ->envname("HROOTS_MAX_PRECISION");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->envname("HROOTS_FORMAT");
    sub->add_flag("--exact", job.exact, "Hex-float numbers")->envname("HROOTS_EXACT");
    sub->add_option("--poly", inline_poly, "Coefficients inline, highest power first");
    sub->add_option("file", file, "Input file (default: stdin)");
  };
  auto with_side = [&](CLI::App* sub) {
    sub->add_option("--side", side, "Series side")->check(CLI::IsMember({"taylor", "laurent"}));
  };

  auto* roots = app.add_subcommand("roots", "All roots with multiplicities (JSON)");
  auto* trace = app.add_subcommand("trace", "Ratio trace k,re,im,diff (CSV)");
  auto* series = app.add_subcommand("series", "Series coefficients of P'/P (CSV)");
  auto* dets = app.add_subcommand("dets", "Hankel determinants with cancellation bits (CSV)");
  auto* verify = app.add_subcommand("verify", "Cross-check the pipeline against the oracle");
  for (auto* s : {roots, trace, series, dets, verify}) common(s);
  for (auto* s : {trace, series, dets}) with_side(s);
  trace->add_option("--r", job.r, "Determinant order")->envname("HROOTS_R");
  dets->add_option("--r", job.r, "Determinant order")->envname("HROOTS_R");
  series->add_option("--count", job.count, "Number of coefficients")->envname("HROOTS_COUNT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  job.command = *cli::parse_command(chosen->get_name());
  job.config.shift_seed = seed;
  job.side = *cli::parse_side(side);
  // Diagnostic commands default to CSV, roots and verify to JSON.
  const bool format_given = chosen->count("--format") > 0 || std::getenv("HROOTS_FORMAT") != nullptr;
  if (!format_given && (job.command == cli::Command::Trace || job.command == cli::Command::Series ||
                        job.command == cli::Command::Dets)) {
    format = "csv";
  }
  job.format = *cli::parse_format(format);

  if (!inline_poly.empty()) {
    job.input = inline_poly;
  } else if (!file.empty() && file != "-") {
    std::ifstream in(file);
    if (!in) {
      std::cerr << R"({"error":{"code":"Usage","stage":"cli","message":"cannot open )" << file << "\"}}\n";
      return 1;
    }
    job.input = slurp(in);
  } else {
    job.input = slurp(std::cin);
  }
  return cli::run(job, std::cout, std::cerr);
}

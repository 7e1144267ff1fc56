#pragma once

// Front end behind the `hroots` binary. Kept as a library so tests and the
// Python module can drive jobs in-process.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "hroots/engine.hpp"
#include "hroots/poly.hpp"
#include "hroots/series.hpp"

namespace hroots::cli {

enum class Command { Roots, Trace, Series, Dets, Verify };
enum class Format { Json, Csv };

const char* to_string(Command c);
std::optional<Command> parse_command(std::string_view s);
std::optional<Format> parse_format(std::string_view s);
std::optional<Side> parse_side(std::string_view s);

struct JobSpec {
  Command command = Command::Roots;
  /// Polynomial source text: JSON {"coefficients": [[re, im], ...]} or
  /// whitespace separated real coefficients, highest power first.
  std::string input;
  SolverConfig config;
  Format format = Format::Json;
  /// Hex-float numbers instead of shortest decimals.
  bool exact = false;
  Side side = Side::Taylor;
  int r = 1;
  /// Number of series coefficients for `series`.
  long count = 16;
};

/// Throws Error(ParseError) with line/column in the message, or
/// LeadingCoefficientZero / EmptyInput from polynomial validation.
Polynomial parse_input(std::string_view text, mp::Bits bits = mp::kDefaultBits);

/// Exit status: 0 success, 1 usage error, 2 numerical failure. Data goes to
/// out; a JSON {"error": {...}} object goes to err on failure.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

/// Rebuilds a trace from `trace` CSV output so it can be re-classified.
RatioTrace trace_from_csv(std::string_view csv, Side side, int r, mp::Bits bits);

}  // namespace hroots::cli

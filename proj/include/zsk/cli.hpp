#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace zsk::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,
  exit_tolerance = 2,
  exit_evaluation = 3,
};

/*
  Entry point of the zsk tool. args excludes the program name. Reports go to
  out (or to --output), diagnostics to err. Commands:
    verify <closed-form|lattice|abstract-J|gzeta|all>
    integrate <expression>
    nodes
    sweep
  Global flags: --threads (default ZSK_THREADS or 1), --chunk, --format,
  --output, --no-timing, --config FILE with key=value lines.
*/
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/*
  Comma-separated numbers; an item lo:hi:step expands to lo, lo+step, ...
  strictly below hi. Throws parse_error on malformed or empty input.
*/
[[nodiscard]] std::vector<double> parse_real_list(std::string_view text);
[[nodiscard]] std::vector<int> parse_int_list(std::string_view text);
/// A positive integer count; accepts exponent notation such as 1e6.
[[nodiscard]] std::int64_t parse_count(std::string_view text);

}  // namespace zsk::cli

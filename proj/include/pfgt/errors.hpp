// errors.hpp -- error types and process exit codes shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace pfgt {

// Exit codes of the command-line tool.
enum exit_code : int {
  exit_ok = 0,
  exit_config = 1,
  exit_numerical = 2,
  exit_verification = 3,
};

// Invalid or incomplete run configuration. Carries the offending key and
// the 1-based line where it appeared (0 when synthetic, e.g. a missing key).
struct config_error : std::runtime_error {
  std::string key;
  int line;
  config_error(std::string k, int ln, const std::string& reason)
      : std::runtime_error("config error: " + k +
                           (ln > 0 ? " (line " + std::to_string(ln) + ")" : "") +
                           ": " + reason),
        key(std::move(k)), line(ln) {}
};

// A NaN or infinity appeared in an evolving field; the run must abort.
struct numerical_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A differential operator was asked to act on a bounded-topology field
// without ghost data installed.
struct bounded_without_closure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ghost-layer linear system became singular (unreachable for the shipped
// stencils, checked anyway).
struct singular_closure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed snapshot file (bad magic, shape, or truncated payload).
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Growth-rate fit left the linear regime.
struct fit_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deformed surface patch frame is too ill-conditioned to difference.
struct degenerate_frame : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pfgt

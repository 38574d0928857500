#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangle/certify.hpp"
#include "tangle/map.hpp"
#include "tangle/ode.hpp"

namespace tangle::cli {

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysisNegative = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitNumeric = 4;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OptionError : std::runtime_error {  // precondition violations, exit 3
  using std::runtime_error::runtime_error;
};

enum class Command {
  kEscapeMap,
  kOrbit,
  kAttractor,
  kLyapunov,
  kFixedPoints,
  kCertify,
  kScan,
  kTangency,
  kMelnikov,
  kValidate,
};

std::optional<Command> command_from_name(const std::string& name);
std::string command_name(Command c);

/// Fully validated run configuration: the command, the map or ODE system it
/// applies to, and the per-command numeric options.
struct RunConfig {
  Command command = Command::kEscapeMap;
  MapParams map;
  OdeSystem system;
  bool rho_auto = true;

  // numeric options (defaults per command)
  int n = 0;
  int theta_res = 1000, z_res = 1000;
  std::optional<double> theta_min, theta_max, z_min, z_max;
  double theta0 = 0.0, z0 = 0.0;
  int burn_in = 1000, keep = 100, seeds = 10000;
  int m_min = 0, m_max = 0;
  int period = 1, orbit_seeds = 400;
  ConeSpec cones;
  CertifySampling sampling;
  double a_min = 0.0, a_max = kTwoPi;
  int steps = 64;
  int saddle_m = 0;  // 0 = strict rule
  double seed_radius = 1e-4;
  int order_n = 20;
  std::vector<double> mu_list;
  int val_theta_samples = 10, val_z_samples = 5;
  double shoot_tol = 1e-9;

  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string out = "tangle_out";

  /// Canonical key=value text of the effective configuration. Execution
  /// details (threads, out) are echoed but excluded from the analysis hash
  /// so artifacts stay byte-identical across thread counts.
  std::string echo_text(bool include_execution = true) const;
};

/// Parses config-file text plus command-line overrides into a validated
/// RunConfig. Flags take precedence over file values. Throws ParseError
/// (malformed input, unknown keys; exit 2) or OptionError (precondition
/// violations; exit 3).
RunConfig parse_config(const std::string& file_text, const std::string& file_name,
                       const std::vector<std::string>& args);

/// Entry point used by main(); returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace tangle::cli

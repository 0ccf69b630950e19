#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gamow/boundary.hpp"
#include "gamow/shapes.hpp"

namespace gamow::cli {

using json = nlohmann::json;

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_assertion = 4 };

class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Random amplitudes drawn per mode, uniform in [-amplitude, amplitude].
struct PerturbationSpec {
  std::vector<std::pair<int, int>> modes;
  double amplitude = 0.0;
  /// Rescale the tessellated shape to the volume of the unperturbed ball.
  bool volume_normalize = false;
};

struct RunConfig {
  std::string kind;
  std::optional<ShapeSpec> shape;
  std::optional<std::string> mesh;
  std::optional<PerturbationSpec> perturbation;
  std::vector<double> gammas;
  json options = json::object();
  std::string output;
  std::uint64_t seed = 0;
  int threads = 1;
  json assertions = json::array();
  json raw;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"energy",  "spectrum",    "flow", "diagnose",
                                              "annulus", "ball-oracle", "sweep"};
  return kinds;
}

/// Validates and converts a JSON config; throws ConfigError.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::filesystem::path& path);

ShapeSpec parse_shape(const json& j);

/// Tessellates the configured shape or reads the mesh, then applies the
/// seeded perturbation (mt19937_64 seeded with `seed`).
Boundary build_boundary(const RunConfig& config);

/// Uniform doubles in [0, 1) from the top 53 bits of mt19937_64.
std::vector<double> seeded_uniforms(std::uint64_t seed, std::size_t count);

struct RunFlags {
  std::string out;
  int threads = -1;  // -1: use the config value
  int dump_mesh_every = 0;
  bool export_matrices = false;
};

struct Artifact {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunOutcome {
  int exit_code = exit_ok;
  std::string message;
  std::filesystem::path output_dir;
  json result;
  std::vector<Artifact> artifacts;
};

/// Resolution order: flags.out, config.output, $GAMOW_OUT/<name>, ./gamow_out/<name>.
std::filesystem::path resolve_output_dir(const RunConfig& config, const RunFlags& flags,
                                         const std::string& name);

/// Runs one experiment and writes outputs plus manifest.json. Never throws for
/// library errors; they become exit codes.
RunOutcome run(const RunConfig& config, const RunFlags& flags,
               const std::filesystem::path& output_dir);

/// Evaluates the config's "assert" list against a result document.
/// Returns the failure messages.
std::vector<std::string> check_assertions(const json& assertions, const json& result);

std::string sha256_file(const std::filesystem::path& path);

/// Shortest round-trip text for a double (locale independent).
std::string format_double(double x);

/// Entry point of the `gamow` executable.
int main_entry(int argc, char** argv);

}  // namespace gamow::cli

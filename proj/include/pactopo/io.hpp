#pragma once

#include "pactopo/config.hpp"
#include "pactopo/errors.hpp"
#include "pactopo/pipeline.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pac {

/// Syntax errors and unknown keys in a configuration document.
class ConfigParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// Parses a run configuration. The document is `key = value` lines grouped
/// in [mesh], [material], [loads], [target], [flow] and [output] sections;
/// `section.key = value` is accepted anywhere, `#` starts a comment. Keys not
/// given keep the values of `base`, or of the preset named by a top-level
/// `preset = <id>` (with optional `scale`), or of preset T1R1. The result is
/// validated.
RunConfig parse_config(std::string_view text, const std::optional<RunConfig>& base = std::nullopt);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical document listing every key; parse_config(serialize_config(c))
/// reproduces c.
std::string serialize_config(const RunConfig& config);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// `step,time,J,E_target,E_interface,vi_iters,cg_iters` with 17 significant
/// digits.
std::string trace_csv(const EnergyTrace& trace);
void write_trace_csv(const EnergyTrace& trace, const std::filesystem::path& path);

/// Legacy ASCII UNSTRUCTURED_GRID with point data `phi`, `u_bar`, `u_hat`.
std::string vtk_snapshot(const SimplexMesh& mesh, const PhaseField& phi, const DisplacementField& u_bar,
                         const DisplacementField& u_hat);
void write_vtk_snapshot(const SimplexMesh& mesh, const PhaseField& phi, const DisplacementField& u_bar,
                        const DisplacementField& u_hat, const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`. Throws
/// IoError naming the path and the OS error.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Command-line entry point: `run`, `verify`, `preset`. Returns 0 on
/// success, 1 on usage errors, 2 on runtime failures.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pac

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dnls::cli {

enum ExitCode { kOk = 0, kError = 1, kNotConverged = 2 };

struct RunConfig {
    std::string potential = "cubic";
    std::string setting = "onsite"; ///< onsite, intersite or both
    std::size_t n = 20;
    double beta = 1.0;
    double tau = 0.1;
    std::size_t max_steps = 100000;
    double residual_tol = 1e-10;
    std::filesystem::path output_dir = "out";
    std::vector<double> eps_list;
    double window = 6.0;
    std::vector<std::size_t> n_list;
    std::vector<double> beta_list;
    double t_final = 10.0;
    double dt = 1e-3;
    std::string profile;
    std::string preset;
    // Set when beta or potential came from a flag or config file rather than a
    // default; analyze and evolve otherwise take them from the profile JSON.
    bool beta_set = false;
    bool potential_set = false;
};

/// Applies one key=value setting. Throws dnls::Error(InvalidArgument) on an
/// unknown key or a value that does not parse or is not positive.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Plain-text config: one key=value per line, '#' starts a comment.
void apply_config_text(RunConfig& cfg, const std::string& text);

/// Overwrites cfg with a named preset's settings. Throws on unknown names.
void apply_preset(RunConfig& cfg, const std::string& name);

struct PresetInfo {
    std::string name;
    std::string command;
    std::string description;
};
const std::vector<PresetInfo>& presets();

/// Full command line, argv[0] included. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dnls::cli

// config.hpp -- flat key=value run configuration: parsing with unknown-key
// rejection, validation, and exact round-trip serialization.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vesmg/model.hpp"
#include "vesmg/multigrid.hpp"
#include "vesmg/sim_types.hpp"

namespace vesmg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full description of one harness invocation. Defaults reproduce the
// growth experiment driven by the fig7 preset (star-shaped vesicle on a
// 256^2 grid; see README).
struct RunConfig {
    std::string mode = "simulate"; // simulate | convergence | complexity

    int grid_m = 256;
    int grid_n = 256;
    double grid_lx = 1.0;
    double grid_ly = 1.0;

    ModelParams model;

    double dt = 1.0e-6;
    double t_final = 2.5e-2;
    int steps = 0; // > 0 overrides t_final

    MgParams mg;

    InitialCondition ic;

    std::string out_dir = "out";
    int snapshot_stride = 0; // 0 = auto (about 6 snapshots per run)
    int diag_stride = 1;
    int jobs = 1;

    std::vector<int> convergence_grids = {128, 256, 512};
    std::string convergence_norm = "l2"; // l2 | max
    std::vector<int> complexity_grids = {128, 256};
    int complexity_steps = 20;

    int num_steps() const;
    GridSpec grid() const;
    void validate() const; // throws ConfigError naming the offending key

    bool operator==(const RunConfig&) const = default;
};

// Apply one "key = value" assignment; throws ConfigError for unknown keys
// or unparsable values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Parse a config text (one key = value per line, '#' comments) on top of
// the given base.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Serialize every key; parse_config_text(serialize_config(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

} // namespace vesmg

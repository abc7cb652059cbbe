// vesicle_mg -- command-line harness for the vesicle growth/shrinkage
// simulator: single runs, grid-convergence studies, and multigrid
// complexity studies, driven by flat key=value configs and shipped presets.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vesmg/sim.hpp"

namespace {

std::string locate_preset(const std::string& name) {
    std::vector<std::string> roots;
    if (const char* env = std::getenv("VESICLE_MG_PRESETS"))
        roots.push_back(env);
    roots.push_back("presets");
#ifdef VESMG_PRESET_DIR
    roots.push_back(VESMG_PRESET_DIR);
#endif
    for (const auto& root : roots) {
        const std::string path = root + "/" + name + ".cfg";
        if (std::filesystem::exists(path))
            return path;
    }
    throw vesmg::ConfigError("preset '" + name + "' not found (searched $VESICLE_MG_PRESETS, "
                             "./presets, and the installed preset directory)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vesicle_mg: phase-field vesicle growth/shrinkage simulator"};

    std::string mode;
    std::string config_path;
    std::string preset;
    std::string out_dir;
    int jobs = 0;
    int snapshot_stride = -1;
    int diag_stride = -1;
    std::vector<std::string> overrides;

    app.add_option("--mode", mode, "simulate | convergence | complexity");
    app.add_option("--config", config_path, "config file (flat key = value lines)");
    app.add_option("--preset", preset,
                   "named preset from the presets/ directory (e.g. fig7, table1-test5)");
    app.add_option("--out", out_dir, "output directory (default: $VESICLE_MG_OUT or 'out')");
    app.add_option("--jobs", jobs, "worker processes for convergence/complexity studies");
    app.add_option("--snapshot-stride", snapshot_stride, "steps between field snapshots (0 = auto)");
    app.add_option("--diag-stride", diag_stride, "steps between diagnostics rows");
    app.add_option("--set", overrides, "override a single key, e.g. --set grid.m=128")
        ->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        vesmg::RunConfig cfg;
        if (!preset.empty())
            cfg = vesmg::load_config_file(locate_preset(preset), cfg);
        if (!config_path.empty())
            cfg = vesmg::load_config_file(config_path, cfg);
        for (const auto& kv : overrides) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw vesmg::ConfigError("--set expects key=value, got '" + kv + "'");
            vesmg::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!mode.empty())
            cfg.mode = mode;
        if (!out_dir.empty())
            cfg.out_dir = out_dir;
        else if (const char* env = std::getenv("VESICLE_MG_OUT");
                 env && std::filesystem::path(cfg.out_dir).is_relative())
            cfg.out_dir = std::string(env) + "/" + cfg.out_dir;
        if (jobs > 0)
            cfg.jobs = jobs;
        if (snapshot_stride >= 0)
            cfg.snapshot_stride = snapshot_stride;
        if (diag_stride >= 0)
            cfg.diag_stride = diag_stride;
        cfg.validate();

        if (cfg.mode == "simulate") {
            vesmg::run(cfg);
        } else if (cfg.mode == "convergence") {
            // Studies persist their own resolved config at the study root.
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream(cfg.out_dir + "/config.resolved") << vesmg::serialize_config(cfg);
            const auto rows = vesmg::convergence_study(cfg);
            for (const auto& r : rows)
                std::cout << r.coarse_m << "^2-" << r.fine_m << "^2 error=" << r.error
                          << " rate=" << r.rate << "\n";
        } else {
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream(cfg.out_dir + "/config.resolved") << vesmg::serialize_config(cfg);
            const auto rows = vesmg::complexity_study(cfg);
            for (const auto& r : rows)
                std::cout << "m=" << r.m << " h=" << r.h << " iterations=" << r.iterations
                          << "\n";
        }
    } catch (const vesmg::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vesmg::NotConvergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

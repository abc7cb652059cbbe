#include "vesmg/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace vesmg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "': cannot parse '" + value + "' as a number");
    }
    if (pos != value.size())
        throw ConfigError("config: key '" + key + "': trailing characters in '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "': cannot parse '" + value + "' as an integer");
    }
    if (pos != value.size())
        throw ConfigError("config: key '" + key + "': trailing characters in '" + value + "'");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ConfigError("config: key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("config: key '" + key + "': empty entry in list '" + value + "'");
        out.push_back(parse_int(key, item));
    }
    if (out.empty())
        throw ConfigError("config: key '" + key + "': empty list");
    return out;
}

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

std::string format_int_list(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    return os.str();
}

} // namespace

int RunConfig::num_steps() const {
    if (steps > 0)
        return steps;
    return static_cast<int>(std::llround(t_final / dt));
}

GridSpec RunConfig::grid() const {
    return GridSpec::make(grid_m, grid_n, grid_lx / grid_m);
}

void RunConfig::validate() const {
    if (mode != "simulate" && mode != "convergence" && mode != "complexity")
        throw ConfigError("config: mode must be simulate, convergence, or complexity (got '" +
                          mode + "')");
    if (grid_m < 2 || grid_n < 2)
        throw ConfigError("config: grid.m and grid.n must be >= 2");
    if (!(grid_lx > 0.0) || !(grid_ly > 0.0))
        throw ConfigError("config: grid.lx and grid.ly must be positive");
    const double hx = grid_lx / grid_m;
    const double hy = grid_ly / grid_n;
    if (std::abs(hx - hy) > 1e-12 * hx)
        throw ConfigError("config: grid must have square cells (lx/m == ly/n)");
    try {
        model.validate();
        mg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(dt > 0.0))
        throw ConfigError("config: time.dt must be positive");
    if (steps < 0)
        throw ConfigError("config: time.steps must be >= 0");
    if (steps == 0 && !(t_final > 0.0))
        throw ConfigError("config: time.t_final must be positive when time.steps is 0");
    if (ic.mode < 0)
        throw ConfigError("config: ic.mode must be >= 0");
    if (ic.presmooth_steps < 0)
        throw ConfigError("config: ic.presmooth_steps must be >= 0");
    if (!(ic.presmooth_dt_factor > 0.0))
        throw ConfigError("config: ic.presmooth_dt_factor must be positive");
    if (snapshot_stride < 0 || diag_stride < 0)
        throw ConfigError("config: output strides must be >= 0");
    if (jobs < 1)
        throw ConfigError("config: jobs must be >= 1");
    if (mode == "convergence") {
        if (convergence_grids.size() < 2)
            throw ConfigError("config: convergence.grids needs at least two entries");
        for (std::size_t i = 1; i < convergence_grids.size(); ++i)
            if (convergence_grids[i] != 2 * convergence_grids[i - 1])
                throw ConfigError("config: convergence.grids must double at each refinement");
    }
    if (convergence_norm != "l2" && convergence_norm != "max")
        throw ConfigError("config: convergence.norm must be l2 or max");
    if (mode == "complexity") {
        if (complexity_grids.empty())
            throw ConfigError("config: complexity.grids must not be empty");
        if (complexity_steps < 1)
            throw ConfigError("config: complexity.steps must be >= 1");
    }
}

void apply_config_entry(RunConfig& cfg, const std::string& rawkey, const std::string& rawvalue) {
    const std::string key = trim(rawkey);
    const std::string value = trim(rawvalue);
    if (key.empty())
        throw ConfigError("config: empty key");

    if (key == "mode") cfg.mode = value;
    else if (key == "grid.m") cfg.grid_m = parse_int(key, value);
    else if (key == "grid.n") cfg.grid_n = parse_int(key, value);
    else if (key == "grid.lx") cfg.grid_lx = parse_double(key, value);
    else if (key == "grid.ly") cfg.grid_ly = parse_double(key, value);
    else if (key == "model.epsilon") cfg.model.epsilon = parse_double(key, value);
    else if (key == "model.gamma_surf") cfg.model.gamma_surf = parse_double(key, value);
    else if (key == "model.gamma_bend") cfg.model.gamma_bend = parse_double(key, value);
    else if (key == "model.gamma_area") cfg.model.gamma_area = parse_double(key, value);
    else if (key == "model.gamma_in") cfg.model.gamma_in = parse_double(key, value);
    else if (key == "model.gamma_out") cfg.model.gamma_out = parse_double(key, value);
    else if (key == "model.psi_in") cfg.model.psi_in = parse_double(key, value);
    else if (key == "model.psi_out") cfg.model.psi_out = parse_double(key, value);
    else if (key == "model.beta_in") cfg.model.beta_in = parse_double(key, value);
    else if (key == "model.beta_out") cfg.model.beta_out = parse_double(key, value);
    else if (key == "model.m0") cfg.model.m0 = parse_double(key, value);
    else if (key == "model.m_phi") cfg.model.m_phi = parse_double(key, value);
    else if (key == "time.dt") cfg.dt = parse_double(key, value);
    else if (key == "time.t_final") cfg.t_final = parse_double(key, value);
    else if (key == "time.steps") cfg.steps = parse_int(key, value);
    else if (key == "mg.lambda") cfg.mg.sweeps = parse_int(key, value);
    else if (key == "mg.tol") cfg.mg.tol = parse_double(key, value);
    else if (key == "mg.max_cycles") cfg.mg.max_cycles = parse_int(key, value);
    else if (key == "mg.depth") cfg.mg.depth = parse_int(key, value);
    else if (key == "mg.coarse_sweeps") cfg.mg.coarse_sweeps = parse_int(key, value);
    else if (key == "mg.mass_tol") cfg.mg.mass_tol = parse_double(key, value);
    else if (key == "mg.refresh_within_sweep") cfg.mg.refresh_within_sweep = parse_bool(key, value);
    else if (key == "ic.kind") {
        if (value == "tanh_ellipse") cfg.ic.kind = IcKind::tanh_ellipse;
        else if (value == "star") cfg.ic.kind = IcKind::star;
        else throw ConfigError("config: ic.kind must be tanh_ellipse or star (got '" + value + "')");
    }
    else if (key == "ic.center_x") cfg.ic.center_x = parse_double(key, value);
    else if (key == "ic.center_y") cfg.ic.center_y = parse_double(key, value);
    else if (key == "ic.radius") cfg.ic.radius = parse_double(key, value);
    else if (key == "ic.xscale") cfg.ic.xscale = parse_double(key, value);
    else if (key == "ic.yscale") cfg.ic.yscale = parse_double(key, value);
    else if (key == "ic.amplitude") cfg.ic.amplitude = parse_double(key, value);
    else if (key == "ic.mode") cfg.ic.mode = parse_int(key, value);
    else if (key == "ic.psi_slope") cfg.ic.psi_slope = parse_double(key, value);
    else if (key == "ic.psi_offset") cfg.ic.psi_offset = parse_double(key, value);
    else if (key == "ic.presmooth_steps") cfg.ic.presmooth_steps = parse_int(key, value);
    else if (key == "ic.presmooth_dt_factor") cfg.ic.presmooth_dt_factor = parse_double(key, value);
    else if (key == "output.dir") cfg.out_dir = value;
    else if (key == "output.snapshot_stride") cfg.snapshot_stride = parse_int(key, value);
    else if (key == "output.diag_stride") cfg.diag_stride = parse_int(key, value);
    else if (key == "jobs") cfg.jobs = parse_int(key, value);
    else if (key == "convergence.grids") cfg.convergence_grids = parse_int_list(key, value);
    else if (key == "convergence.norm") cfg.convergence_norm = value;
    else if (key == "complexity.grids") cfg.complexity_grids = parse_int_list(key, value);
    else if (key == "complexity.steps") cfg.complexity_steps = parse_int(key, value);
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        apply_config_entry(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), std::move(base));
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "mode = " << cfg.mode << "\n";
    os << "grid.m = " << cfg.grid_m << "\n";
    os << "grid.n = " << cfg.grid_n << "\n";
    os << "grid.lx = " << format_double(cfg.grid_lx) << "\n";
    os << "grid.ly = " << format_double(cfg.grid_ly) << "\n";
    os << "model.epsilon = " << format_double(cfg.model.epsilon) << "\n";
    os << "model.gamma_surf = " << format_double(cfg.model.gamma_surf) << "\n";
    os << "model.gamma_bend = " << format_double(cfg.model.gamma_bend) << "\n";
    os << "model.gamma_area = " << format_double(cfg.model.gamma_area) << "\n";
    os << "model.gamma_in = " << format_double(cfg.model.gamma_in) << "\n";
    os << "model.gamma_out = " << format_double(cfg.model.gamma_out) << "\n";
    os << "model.psi_in = " << format_double(cfg.model.psi_in) << "\n";
    os << "model.psi_out = " << format_double(cfg.model.psi_out) << "\n";
    os << "model.beta_in = " << format_double(cfg.model.beta_in) << "\n";
    os << "model.beta_out = " << format_double(cfg.model.beta_out) << "\n";
    os << "model.m0 = " << format_double(cfg.model.m0) << "\n";
    os << "model.m_phi = " << format_double(cfg.model.m_phi) << "\n";
    os << "time.dt = " << format_double(cfg.dt) << "\n";
    os << "time.t_final = " << format_double(cfg.t_final) << "\n";
    os << "time.steps = " << cfg.steps << "\n";
    os << "mg.lambda = " << cfg.mg.sweeps << "\n";
    os << "mg.tol = " << format_double(cfg.mg.tol) << "\n";
    os << "mg.max_cycles = " << cfg.mg.max_cycles << "\n";
    os << "mg.depth = " << cfg.mg.depth << "\n";
    os << "mg.coarse_sweeps = " << cfg.mg.coarse_sweeps << "\n";
    os << "mg.mass_tol = " << format_double(cfg.mg.mass_tol) << "\n";
    os << "mg.refresh_within_sweep = " << (cfg.mg.refresh_within_sweep ? "true" : "false") << "\n";
    os << "ic.kind = " << (cfg.ic.kind == IcKind::star ? "star" : "tanh_ellipse") << "\n";
    os << "ic.center_x = " << format_double(cfg.ic.center_x) << "\n";
    os << "ic.center_y = " << format_double(cfg.ic.center_y) << "\n";
    os << "ic.radius = " << format_double(cfg.ic.radius) << "\n";
    os << "ic.xscale = " << format_double(cfg.ic.xscale) << "\n";
    os << "ic.yscale = " << format_double(cfg.ic.yscale) << "\n";
    os << "ic.amplitude = " << format_double(cfg.ic.amplitude) << "\n";
    os << "ic.mode = " << cfg.ic.mode << "\n";
    os << "ic.psi_slope = " << format_double(cfg.ic.psi_slope) << "\n";
    os << "ic.psi_offset = " << format_double(cfg.ic.psi_offset) << "\n";
    os << "ic.presmooth_steps = " << cfg.ic.presmooth_steps << "\n";
    os << "ic.presmooth_dt_factor = " << format_double(cfg.ic.presmooth_dt_factor) << "\n";
    os << "output.dir = " << cfg.out_dir << "\n";
    os << "output.snapshot_stride = " << cfg.snapshot_stride << "\n";
    os << "output.diag_stride = " << cfg.diag_stride << "\n";
    os << "jobs = " << cfg.jobs << "\n";
    os << "convergence.grids = " << format_int_list(cfg.convergence_grids) << "\n";
    os << "convergence.norm = " << cfg.convergence_norm << "\n";
    os << "complexity.grids = " << format_int_list(cfg.complexity_grids) << "\n";
    os << "complexity.steps = " << cfg.complexity_steps << "\n";
    return os.str();
}

} // namespace vesmg

#include "nhs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nhs {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += " | ";
        out += v[i];
    }
    return out;
}

long long want_int(const std::string& key, const std::string& value, int line, long long lo,
                   long long hi) {
    long long x = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || p != value.data() + value.size())
        throw config_error(line, "key '" + key + "': expected integer, got '" + value + "'");
    if (x < lo || x > hi)
        throw config_error(line, "key '" + key + "': value " + value + " outside [" +
                                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

std::uint64_t want_u64(const std::string& key, const std::string& value, int line) {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || p != value.data() + value.size())
        throw config_error(line,
                           "key '" + key + "': expected unsigned integer, got '" + value + "'");
    return x;
}

double want_double(const std::string& key, const std::string& value, int line, double lo,
                   double hi, bool strict_lo) {
    double x = 0.0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || p != value.data() + value.size())
        throw config_error(line, "key '" + key + "': expected number, got '" + value + "'");
    if (!std::isfinite(x) || x > hi || (strict_lo ? x <= lo : x < lo))
        throw config_error(line, "key '" + key + "': value " + value + " outside " +
                                     (strict_lo ? "(" : "[") + fmt(lo) + ", " + fmt(hi) + "]");
    return x;
}

std::string want_enum(const std::string& key, const std::string& value, int line,
                      const std::vector<std::string>& options) {
    for (const auto& o : options)
        if (value == o) return value;
    throw config_error(line,
                       "key '" + key + "': '" + value + "' is not one of " + join(options));
}

std::vector<double> want_scales(const std::string& key, const std::string& value, int line) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        out.push_back(want_double(key, item, line, 0.0, 1e6, true));
    }
    if (out.empty() || out.size() > 32)
        throw config_error(line, "key '" + key + "': expected 1..32 comma-separated values");
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1])
            throw config_error(line, "key '" + key + "': values must be strictly increasing");
    return out;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (key == "experiment") {
        cfg.experiment = want_enum(key, value, line, valid_experiments());
    } else if (key == "seed") {
        cfg.seed = want_u64(key, value, line);
    } else if (key == "dimension") {
        cfg.dimension = static_cast<int>(want_int(key, value, line, 1, 3));
    } else if (key == "half_width") {
        cfg.half_width = want_double(key, value, line, 0.0, 1e6, true);
    } else if (key == "points_per_axis") {
        cfg.points_per_axis = static_cast<int>(want_int(key, value, line, 4, 4096));
        if (cfg.points_per_axis % 2 != 0)
            throw config_error(line, "key 'points_per_axis': must be even (no node may sit on "
                                     "the interface)");
    } else if (key == "time_levels") {
        cfg.time_levels = static_cast<int>(want_int(key, value, line, 2, 4096));
    } else if (key == "time_horizon") {
        cfg.time_horizon = want_double(key, value, line, 0.0, 1e6, true);
    } else if (key == "kernel_variant") {
        cfg.kernel_variant = want_enum(key, value, line, {"neumann", "dirichlet"});
    } else if (key == "ball_coarsest") {
        cfg.ball_coarsest = static_cast<int>(want_int(key, value, line, 0, 12));
    } else if (key == "ball_finest") {
        cfg.ball_finest = static_cast<int>(want_int(key, value, line, 0, 12));
    } else if (key == "ball_lattice") {
        cfg.ball_lattice = static_cast<int>(want_int(key, value, line, 1, 16));
    } else if (key == "corpus_size") {
        cfg.corpus_size = static_cast<int>(want_int(key, value, line, 1, 20));
    } else if (key == "input_id") {
        cfg.input_id = value;
    } else if (key == "data_scale") {
        cfg.data_scale = want_double(key, value, line, 0.0, 1e6, false);
    } else if (key == "max_iterations") {
        cfg.max_iterations = static_cast<int>(want_int(key, value, line, 1, 500));
    } else if (key == "convergence_tol") {
        cfg.convergence_tol = want_double(key, value, line, 0.0, 1.0, true);
    } else if (key == "nonlinearity_direction") {
        cfg.nonlinearity_direction = want_enum(key, value, line, {"e1", "en"});
    } else if (key == "quadrature_points") {
        cfg.quadrature_points = static_cast<int>(want_int(key, value, line, 0, 8192));
    } else if (key == "divergence_path") {
        cfg.divergence_path = want_enum(key, value, line, {"kernel", "fd"});
    } else if (key == "sweep_scales") {
        cfg.sweep_scales = want_scales(key, value, line);
    } else if (key == "mc_samples") {
        cfg.mc_samples = static_cast<int>(want_int(key, value, line, 1, 100000));
    } else {
        throw config_error(line, "unknown key: '" + key + "'");
    }
}

}  // namespace

GridSpec RunConfig::make_grid() const {
    GridSpec g;
    g.dimension = dimension;
    g.half_width = half_width;
    g.points_per_axis = points_per_axis;
    g.time_levels = GridSpec::graded_levels(time_horizon, time_levels);
    g.validate();
    return g;
}

std::string RunConfig::canonical_echo() const {
    std::ostringstream os;
    os << "experiment=" << experiment << '\n';
    os << "seed=" << seed << '\n';
    os << "dimension=" << dimension << '\n';
    os << "half_width=" << fmt(half_width) << '\n';
    os << "points_per_axis=" << points_per_axis << '\n';
    os << "time_levels=" << time_levels << '\n';
    os << "time_horizon=" << fmt(time_horizon) << '\n';
    os << "kernel_variant=" << kernel_variant << '\n';
    os << "ball_coarsest=" << ball_coarsest << '\n';
    os << "ball_finest=" << ball_finest << '\n';
    os << "ball_lattice=" << ball_lattice << '\n';
    os << "corpus_size=" << corpus_size << '\n';
    os << "input_id=" << input_id << '\n';
    os << "data_scale=" << fmt(data_scale) << '\n';
    os << "max_iterations=" << max_iterations << '\n';
    os << "convergence_tol=" << fmt(convergence_tol) << '\n';
    os << "nonlinearity_direction=" << nonlinearity_direction << '\n';
    os << "quadrature_points=" << quadrature_points << '\n';
    os << "divergence_path=" << divergence_path << '\n';
    os << "sweep_scales=";
    for (size_t i = 0; i < sweep_scales.size(); ++i) {
        if (i) os << ',';
        os << fmt(sweep_scales[i]);
    }
    os << '\n';
    os << "mc_samples=" << mc_samples << '\n';
    return os.str();
}

const std::vector<std::string>& valid_experiments() {
    static const std::vector<std::string> names = {
        "kernel-checks",  "norm-report",    "trace-forward",
        "roundtrip",      "equivalence-suite", "solver",
        "smallness-sweep", "splitting-diagnostics"};
    return names;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(lineno, "expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error(lineno, "empty key");
        if (!seen.insert(key).second) throw config_error(lineno, "duplicate key: '" + key + "'");
        apply(cfg, key, value, lineno);
    }
    if (cfg.experiment.empty())
        throw config_error(0, "missing required key: experiment (one of " +
                                  join(valid_experiments()) + ")");
    if (cfg.ball_coarsest > cfg.ball_finest)
        throw config_error(0, "ball_coarsest must not exceed ball_finest");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error(0, "cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string schema_help() {
    return
        "experiment              required: kernel-checks | norm-report | trace-forward |\n"
        "                        roundtrip | equivalence-suite | solver | smallness-sweep |\n"
        "                        splitting-diagnostics\n"
        "seed                    u64, default 42; drives corpus generation and Monte Carlo\n"
        "dimension               int in [1,3], default 1\n"
        "half_width              real > 0, default 1; the box is [-L, L]^n\n"
        "points_per_axis         even int in [4,4096], default 128\n"
        "time_levels             int in [2,4096], default 32; levels t_k = T (k/M)^2\n"
        "time_horizon            real > 0, default 0.25\n"
        "kernel_variant          neumann | dirichlet, default neumann\n"
        "ball_coarsest           int in [0,12], default 1; radii r_j = 2^-j L\n"
        "ball_finest             int in [0,12], default 4; >= ball_coarsest\n"
        "ball_lattice            int in [1,16], default 2; centers step r/lattice\n"
        "corpus_size             int in [1,20], default 20; leading corpus entries used\n"
        "input_id                corpus entry id, default: experiment-specific\n"
        "data_scale              real >= 0, default 1; multiplies the initial data\n"
        "max_iterations          int in [1,500], default 25\n"
        "convergence_tol         real in (0,1), default 1e-10\n"
        "nonlinearity_direction  e1 | en, default e1\n"
        "quadrature_points       int in [0,8192], default 0 (auto: 2x time levels)\n"
        "divergence_path         kernel | fd, default kernel\n"
        "sweep_scales            increasing positive reals, default 0.5,1,2,4,8,16\n"
        "mc_samples              int in [1,100000], default 200\n";
}

}  // namespace nhs

// Tests for the config parser, the serialization layer, the run
// manifest, and the command-line tool's exit-code contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "doctest.h"
#include "json.hpp"
#include "nhs/config.hpp"
#include "nhs/corpus.hpp"
#include "nhs/experiments.hpp"
#include "nhs/io.hpp"

using namespace nhs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Relative path -> bytes for every regular file under root.
std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
    return out;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void expect_parse_error(const std::string& text, int line, const std::string& message) {
    try {
        (void)parse_config(text);
        FAIL_CHECK("expected config_error: ", message);
    } catch (const config_error& e) {
        CHECK(e.line == line);
        CHECK(std::string(e.what()) == message);
    }
}

#ifndef _WIN32
int run_cli(const std::string& args, const fs::path& out_file, const fs::path& err_file) {
    const std::string cmd = std::string(NHS_CLI_PATH) + " " + args + " > " + out_file.string() +
                            " 2> " + err_file.string();
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("config parsing fills defaults and accepts the full schema") {
    RunConfig cfg = parse_config("experiment=norm-report\n");
    CHECK(cfg.experiment == "norm-report");
    CHECK(cfg.seed == 42);
    CHECK(cfg.dimension == 1);
    CHECK(cfg.half_width == 1.0);
    CHECK(cfg.points_per_axis == 128);
    CHECK(cfg.time_levels == 32);
    CHECK(cfg.time_horizon == 0.25);
    CHECK(cfg.kernel_variant == "neumann");
    CHECK(cfg.ball_coarsest == 1);
    CHECK(cfg.ball_finest == 4);
    CHECK(cfg.ball_lattice == 2);
    CHECK(cfg.corpus_size == 20);
    CHECK(cfg.input_id.empty());
    CHECK(cfg.data_scale == 1.0);
    CHECK(cfg.max_iterations == 25);
    CHECK(cfg.convergence_tol == 1e-10);
    CHECK(cfg.nonlinearity_direction == "e1");
    CHECK(cfg.quadrature_points == 0);
    CHECK(cfg.divergence_path == "kernel");
    CHECK(cfg.sweep_scales == (std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0, 16.0}));
    CHECK(cfg.mc_samples == 200);

    // Comments, blank lines, whitespace around '=' and inside lists.
    RunConfig full = parse_config(
        "# a comment\n"
        "; another comment\n"
        "\n"
        "experiment = solver\n"
        "  seed\t= 7\n"
        "sweep_scales = 0.5, 1, 2\n"
        "input_id = gauss-bump\n"
        "kernel_variant = dirichlet\n");
    CHECK(full.experiment == "solver");
    CHECK(full.seed == 7);
    CHECK(full.sweep_scales == (std::vector<double>{0.5, 1.0, 2.0}));
    CHECK(full.input_id == "gauss-bump");
    CHECK(full.kernel_variant == "dirichlet");

    CHECK(valid_experiments().size() == 8);
    CHECK(schema_help().find("points_per_axis") != std::string::npos);
}

TEST_CASE("config errors carry the 1-based line of the offending entry") {
    expect_parse_error("experiment=solver\nseed=7\nseed=9\n", 3, "duplicate key: 'seed'");
    expect_parse_error("experiment=solver\nbogus=1\n", 2, "unknown key: 'bogus'");
    expect_parse_error("experiment=solver\ntime_levels=abc\n", 2,
                       "key 'time_levels': expected integer, got 'abc'");
    expect_parse_error("experiment=solver\npoints_per_axis=9\n", 2,
                       "key 'points_per_axis': must be even (no node may sit on the interface)");
    expect_parse_error("experiment=solver\nkernel_variant=robin\n", 2,
                       "key 'kernel_variant': 'robin' is not one of neumann | dirichlet");
    expect_parse_error("experiment=solver\njust some words\n", 2,
                       "expected key=value, got 'just some words'");
    expect_parse_error("experiment=solver\ndata_scale=1e200\n", 2,
                       "key 'data_scale': value 1e200 outside [0, 1e+06]");
    expect_parse_error("experiment=solver\nsweep_scales=2,1\n", 2,
                       "key 'sweep_scales': values must be strictly increasing");
    expect_parse_error("experiment=solver\ntime_levels=0\n", 2,
                       "key 'time_levels': value 0 outside [2, 4096]");
    // Comment and blank lines still count toward the line number.
    expect_parse_error("# header\n\nexperiment=solver\nbogus=1\n", 4, "unknown key: 'bogus'");
    // File-wide problems are reported as line 0.
    expect_parse_error("seed=1\n", 0,
                       "missing required key: experiment (one of kernel-checks | norm-report | "
                       "trace-forward | roundtrip | equivalence-suite | solver | smallness-sweep "
                       "| splitting-diagnostics)");
    expect_parse_error("experiment=solver\nball_coarsest=3\nball_finest=2\n", 0,
                       "ball_coarsest must not exceed ball_finest");

    try {
        (void)load_config("/nonexistent/path/run.cfg");
        FAIL_CHECK("expected config_error for unreadable file");
    } catch (const config_error& e) {
        CHECK(e.line == 0);
        CHECK(std::string(e.what()) == "cannot read config file: /nonexistent/path/run.cfg");
    }
}

TEST_CASE("canonical echo is a parser fixpoint") {
    for (const std::string text :
         {std::string("experiment=solver\n"),
          std::string("experiment=smallness-sweep\nseed=9\nhalf_width=12\npoints_per_axis=64\n"
                      "sweep_scales=0.25,0.5,1,7.5\ninput_id=odd-pair\nconvergence_tol=1e-08\n"
                      "divergence_path=fd\nnonlinearity_direction=en\n")}) {
        RunConfig cfg = parse_config(text);
        const std::string echo = cfg.canonical_echo();
        RunConfig back = parse_config(echo);
        CHECK(back.canonical_echo() == echo);
    }
    RunConfig cfg = parse_config("experiment=solver\n");
    const std::string echo = cfg.canonical_echo();
    CHECK(echo.find("data_scale=1\n") != std::string::npos);
    CHECK(echo.find("sweep_scales=0.5,1,2,4,8,16\n") != std::string::npos);
    CHECK(echo.find("convergence_tol=1e-10\n") != std::string::npos);
}

TEST_CASE("format_double emits shortest round-tripping decimal text") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e6) == "1e+06");
    CHECK(format_double(-0.25) == "-0.25");
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 1000; ++i) {
        int exponent = static_cast<int>(seeded_uniform(rng, -250.0, 250.0));
        double v = seeded_uniform(rng, -1.0, 1.0) * std::ldexp(1.0, exponent);
        std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("CSV writer escapes per RFC 4180 and rejects ragged rows") {
    CsvTable t;
    t.columns = {"name", "note"};
    t.add_row({"plain", "cell"});
    t.add_row({"a,b", "q\"uote"});
    t.add_row({"multi\nline", ""});
    CHECK(to_csv(t) ==
          "name,note\n"
          "plain,cell\n"
          "\"a,b\",\"q\"\"uote\"\n"
          "\"multi\nline\",\n");
    CHECK_THROWS_WITH_AS(t.add_row({"only-one"}), "csv row width does not match the header",
                         std::runtime_error);
}

TEST_CASE("text and field writers create directories and list every node") {
    fs::path dir = fresh_dir("nhs_io_writers");
    fs::path nested = dir / "a" / "b" / "c.txt";
    write_text(nested.string(), "payload\n");
    CHECK(slurp(nested) == "payload\n");

    // A regular file in the parent position makes the write fail loudly.
    CHECK_THROWS_AS(write_text((nested / "x.txt").string(), "nope"), std::runtime_error);

    GridSpec g;
    g.dimension = 1;
    g.half_width = 1.0;
    g.points_per_axis = 4;
    ScalarField f(g, [](std::span<const double> x) { return 2.0 * x[0]; });
    fs::path field_path = dir / "field.csv";
    write_field_csv(field_path.string(), f);
    const std::string text = slurp(field_path);
    CHECK(text ==
          "# grid: n=1 L=1 N=4\n"
          "# nodes: 4, storage: row-major, last axis fastest\n"
          "index,x1,value\n"
          "0,-0.75,-1.5\n"
          "1,-0.25,-0.5\n"
          "2,0.25,0.5\n"
          "3,0.75,1.5\n");
}

TEST_CASE("JSON reports keep fixed keys in fixed order") {
    NormReport r;
    r.bmo_N = 1.0;
    r.tmo = 2.0;
    r.tent_inf2 = 3.0;
    r.tent_inf1 = 4.0;
    r.tent_12 = 5.0;
    r.bmo_inv_N = 6.0;
    r.weighted_linf = 7.0;
    r.path_eps = 8.0;
    r.hardy = 9.0;
    r.square_fn_l1 = 10.0;
    r.ball_family = "fam";
    r.grid = "grid";
    const std::string s = to_json_string(r);
    auto j = nlohmann::json::parse(s);
    CHECK(j["bmo_N"] == 1.0);
    CHECK(j["square_fn_l1"] == 10.0);
    CHECK(j["ball_family"] == "fam");
    CHECK(j["grid"] == "grid");
    const char* order[] = {"bmo_N",         "tmo",      "tent_inf2", "tent_inf1",
                           "tent_12",       "bmo_inv_N", "weighted_linf", "path_eps",
                           "hardy",         "square_fn_l1", "ball_family", "grid"};
    std::size_t prev = 0;
    for (const char* key : order) {
        std::size_t pos = s.find("\"" + std::string(key) + "\"");
        REQUIRE(pos != std::string::npos);
        CHECK(pos > prev);
        prev = pos;
    }

    SolverDiagnostics d;
    d.verdict = "converged";
    d.residual = 1e-12;
    d.contraction_estimate = 0.25;
    d.iterations.push_back({1, 0.5, 0.1, 0.0});
    auto dj = nlohmann::json::parse(to_json_string(d));
    CHECK(dj["verdict"] == "converged");
    CHECK(dj["iterations"].size() == 1);
    CHECK(dj["iterations"][0]["k"] == 1);
    CHECK(dj["iterations"][0]["increment"] == 0.1);
}

TEST_CASE("run manifest fingerprints the canonical config") {
    RunManifest m;
    m.experiment = "norm-report";
    m.config_echo = "a";  // hash pinned: FNV-1a of the single byte 'a'
    m.grid = "g";
    m.ball_family = "f";
    m.kernel_variant = "neumann";
    const std::string s = to_json_string(m);
    CHECK(s.find("\"config_hash\": \"fnv1a:af63dc4c8601ec8c\"") != std::string::npos);
    CHECK(to_json_string(m) == s);  // pure function of the struct
    auto j = nlohmann::json::parse(s);
    CHECK(j["schema_version"] == 1);
    CHECK(j["config"] == nlohmann::json::array({"a"}));
    // No timestamps or host details anywhere.
    CHECK(s.find("time") == std::string::npos);
    CHECK(s.find("host") == std::string::npos);
}

TEST_CASE("shipped corpus manifest matches the generator output") {
    const std::string shipped = slurp(fs::path(NHS_SOURCE_DIR) / "data" / "corpus_manifest.csv");
    CHECK(shipped == corpus_manifest(42, 1.0, 1));
    // Sanity: all twenty entries present with stable leading ids.
    std::vector<CorpusEntry> corpus = make_corpus(42, 1.0, 1);
    CHECK(corpus.size() == 20);
    CHECK(corpus[0].id == "gauss-bump");
    CHECK(shipped.find("clipped-log") != std::string::npos);
}

TEST_CASE("experiment runs are byte-deterministic") {
    RunConfig kc = parse_config(
        "experiment=kernel-checks\npoints_per_axis=64\ntime_levels=8\nmc_samples=50\n");
    fs::path a = fresh_dir("nhs_io_kc_a");
    fs::path b = fresh_dir("nhs_io_kc_b");
    run_experiment(kc, a.string());
    run_experiment(kc, b.string());
    auto sa = snapshot(a);
    auto sb = snapshot(b);
    CHECK(!sa.empty());
    CHECK(sa == sb);
    CHECK(sa.count("manifest.json") == 1);
    CHECK(sa.count("kernel_checks.csv") == 1);
    // The manifest echoes the resolved config verbatim.
    auto j = nlohmann::json::parse(sa["manifest.json"]);
    std::string echo;
    for (const auto& line : j["config"]) echo += line.get<std::string>() + "\n";
    CHECK(echo == kc.canonical_echo());
    CHECK(j["experiment"] == "kernel-checks");

    RunConfig nr = parse_config("experiment=norm-report\npoints_per_axis=64\ntime_levels=8\n");
    fs::path c = fresh_dir("nhs_io_nr_a");
    fs::path d = fresh_dir("nhs_io_nr_b");
    run_experiment(nr, c.string());
    run_experiment(nr, d.string());
    auto sc = snapshot(c);
    CHECK(sc == snapshot(d));
    CHECK(sc.count("norm_report.json") == 1);
    // Corpus-driven experiments ship the input family beside the results.
    CHECK(sc.count("corpus_manifest.csv") == 1);
    CHECK(sc["corpus_manifest.csv"] == corpus_manifest(42, 1.0, 1));
}

#ifndef _WIN32
TEST_CASE("command-line tool maps outcomes to exit codes") {
    fs::path dir = fresh_dir("nhs_io_cli");
    fs::path out = dir / "stdout.txt";
    fs::path err = dir / "stderr.txt";

    // Exit 0: a small valid run.
    fs::path good = dir / "good.cfg";
    write_text(good.string(),
               "experiment=norm-report\npoints_per_axis=64\ntime_levels=8\n");
    fs::path run_dir = dir / "run";
    CHECK(run_cli("run " + good.string() + " --out " + run_dir.string(), out, err) == 0);
    CHECK(slurp(out) == "wrote " + run_dir.string() + "\n");
    CHECK(fs::exists(run_dir / "manifest.json"));

    // --seed overrides the config's seed in the resolved echo.
    fs::path run_dir2 = dir / "run_seeded";
    CHECK(run_cli("run " + good.string() + " --out " + run_dir2.string() + " --seed 7", out,
                  err) == 0);
    CHECK(slurp(run_dir2 / "manifest.json").find("seed=7") != std::string::npos);

    // validate echoes the canonical config.
    CHECK(run_cli("validate " + good.string(), out, err) == 0);
    const std::string echoed = slurp(out);
    CHECK(echoed.rfind("valid\n", 0) == 0);
    CHECK(echoed.find("experiment=norm-report\n") != std::string::npos);

    // list-experiments prints all eight names.
    CHECK(run_cli("list-experiments", out, err) == 0);
    const std::string names = slurp(out);
    for (const std::string& n : valid_experiments())
        CHECK(names.find(n + "\n") != std::string::npos);

    // Exit 2: range violation, reported as file:line.
    fs::path bad = dir / "bad.cfg";
    write_text(bad.string(), "# blow-up scale\nexperiment=solver\ndata_scale=1e200\n");
    CHECK(run_cli("run " + bad.string() + " --out " + (dir / "never").string(), out, err) == 2);
    CHECK(slurp(err).find(bad.string() +
                          ":3: key 'data_scale': value 1e200 outside [0, 1e+06]") !=
          std::string::npos);

    // Exit 2 with the schema appended when the required key is missing.
    fs::path empty = dir / "empty.cfg";
    write_text(empty.string(), "seed=1\n");
    CHECK(run_cli("validate " + empty.string(), out, err) == 2);
    CHECK(slurp(err).find("missing required key: experiment") != std::string::npos);
    CHECK(slurp(err).find("points_per_axis") != std::string::npos);  // schema help follows

    // Exit 3: a numerical failure inside the run.
    fs::path fine = dir / "fine.cfg";
    write_text(fine.string(),
               "experiment=norm-report\npoints_per_axis=16\nball_finest=4\ntime_levels=8\n");
    CHECK(run_cli("run " + fine.string() + " --out " + (dir / "never3").string(), out, err) == 3);
    CHECK(slurp(err).find("numerical failure: ball radius below grid spacing") !=
          std::string::npos);
}
#endif

#include <cstdint>
#include <ctime>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "nhs/config.hpp"
#include "nhs/experiments.hpp"

namespace {

std::string timestamped_dir(const std::string& experiment) {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
#ifdef _WIN32
    localtime_s(&tm, &now);
#else
    localtime_r(&now, &tm);
#endif
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return "runs/" + experiment + "-" + buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-space heat-flow norm and solver experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    std::uint64_t seed_override = 0;

    CLI::App* run = app.add_subcommand("run", "Execute the experiment named in a config file");
    run->add_option("config", config_path, "key=value config file")->required();
    run->add_option("--out", out_dir, "artifact directory (default: runs/<experiment>-<time>)")
        ->envname("NHS_OUT");
    run->add_option("--threads", threads, "worker thread count (0 = library default)")
        ->envname("NHS_THREADS");
    run->add_option("--seed", seed_override, "override the config's seed")->envname("NHS_SEED");

    CLI::App* validate =
        app.add_subcommand("validate", "Parse and range-check a config file, echo it back");
    validate->add_option("config", config_path, "key=value config file")->required();

    CLI::App* list = app.add_subcommand("list-experiments", "Print the experiment names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const std::string& name : nhs::valid_experiments()) std::cout << name << '\n';
            return 0;
        }
        if (validate->parsed()) {
            const nhs::RunConfig cfg = nhs::load_config(config_path);
            std::cout << "valid\n" << cfg.canonical_echo();
            return 0;
        }
        // run
        nhs::RunConfig cfg = nhs::load_config(config_path);
        if (run->count("--seed") > 0) cfg.seed = seed_override;
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#else
        (void)threads;
#endif
        const std::string dir = out_dir.empty() ? timestamped_dir(cfg.experiment) : out_dir;
        nhs::run_experiment(cfg, dir);
        std::cout << "wrote " << dir << '\n';
        return 0;
    } catch (const nhs::config_error& e) {
        std::cerr << config_path << ":" << e.line << ": " << e.what() << '\n';
        if (e.line == 0 && std::string(e.what()).find("missing required key") != std::string::npos)
            std::cerr << '\n' << nhs::schema_help();
        return 2;
    } catch (const nhs::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

// fuzzytori: run, describe and validate experiment configs.
//
// Exit status: 0 success, 1 certificate rows FAILED, 2 invalid config or usage,
// 3 runtime error.
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "fuzzytori/experiments.hpp"

namespace ex = ft::experiments;

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

ex::ExperimentConfig load(const Overrides& o) {
    auto c = ex::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.threads) {
        if (*o.threads == 0) throw ex::ConfigError("threads", "must be positive");
        c.threads = *o.threads;
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy tori: quantum metric certificates"};
    app.require_subcommand(1);
    Overrides o;

    auto* run = app.add_subcommand("run", "Run an experiment and write CSV, plots and a summary");
    run->add_option("--config", o.config, "Experiment config (JSON)")->required();
    run->add_option("--out", o.out, "Output directory")->required();
    run->add_option("--seed", o.seed, "Override the config seed");
    run->add_option("--threads", o.threads, "Worker threads");

    auto* val = app.add_subcommand("validate", "Check a config without running it");
    val->add_option("--config", o.config, "Experiment config (JSON)")->required();
    val->add_option("--seed", o.seed, "Override the config seed");
    val->add_option("--threads", o.threads, "Worker threads");

    std::string kind;
    auto* desc = app.add_subcommand("describe", "Print what an experiment kind certifies");
    desc->add_option("kind", kind, "Experiment kind (omit to list all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*desc) {
            if (kind.empty()) {
                for (const auto& k : ex::known_kinds()) std::cout << ex::describe(k) << '\n';
            } else {
                std::cout << ex::describe(kind);
            }
            return 0;
        }
        if (*val) {
            ex::validate(load(o));
            std::cout << "config ok\n";
            return 0;
        }
        const auto cfg = load(o);
        const auto res = ex::run(cfg);
        ex::write_outputs(res, o.out);
        std::cout << res.summary;
        std::cout << "outputs written to " << o.out << '\n';
        if (res.failed_rows > 0) {
            std::cerr << "certificate FAILED on " << res.failed_rows << " row(s)\n";
            return 1;
        }
        return 0;
    } catch (const ex::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

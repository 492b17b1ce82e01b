#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sinrloss/config.hpp"
#include "sinrloss/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sinrloss::IoError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SINR-loss prediction and Monte-Carlo validation for adaptive "
                 "low-rank filters under low-rank-plus-white disturbance"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<std::string> out_path;
    std::optional<std::string> format;

    const std::vector<std::string> subcommands = {"predict",  "simulate",  "sweep-k",
                                                  "sweep-theta", "mse-qf", "mse-sinr",
                                                  "eig-pdf",  "separation"};
    for (const auto& name : subcommands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "Monte-Carlo master seed (overrides config)");
        sub->add_option("--trials", trials, "Monte-Carlo trial count (overrides config)");
        sub->add_option("--threads", threads, "worker count, 0 = auto (overrides config)");
        sub->add_option("--out", out_path, "output file path (overrides config)");
        sub->add_option("--format", format, "csv | json (overrides config)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        sinrloss::RunConfig cfg = sinrloss::parse_config(read_file(config_path));
        // flags win over config keys
        cfg.experiment = app.get_subcommands().front()->get_name();
        if (seed) cfg.mc.master_seed = *seed;
        if (trials) cfg.mc.trials = *trials;
        if (threads) cfg.mc.parallelism = *threads;
        if (out_path) cfg.output_path = *out_path;
        if (format) cfg.output_format = *format;
        return sinrloss::run(cfg);
    } catch (const sinrloss::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const sinrloss::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const sinrloss::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

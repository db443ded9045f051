#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>

#include "commands.hpp"
#include "hotspot/errors.hpp"
#include "run_config.hpp"

namespace hotspot::app {

namespace {

void use_stderr_logger() {
    auto logger = spdlog::get("hotspot");
    if (!logger) logger = spdlog::stderr_color_mt("hotspot");
    spdlog::set_default_logger(logger);
}

void set_log_level(const std::string& level) {
    const auto parsed = spdlog::level::from_str(level);
    if (parsed == spdlog::level::off && level != "off") {
        throw ContractViolation("log_level must be one of trace, debug, info, warn, error, critical, off");
    }
    spdlog::set_level(parsed);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"Layout hotspot toolchain: feature augmentation, dataset synthesis, evaluation", "hotspot"};
    app.require_subcommand(0, 1);

    std::optional<std::filesystem::path> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::filesystem::path> out_dir;
    bool print_config = false;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--seed", seed, "override synth.seed");
    app.add_option("--workers", workers, "worker threads (0 = available parallelism)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");

    auto* augment = app.add_subcommand("augment", "add the PCA complexity channel to layout images");
    auto* synth = app.add_subcommand("synth", "compose a multi-clip dataset from a clip library");
    auto* eval = app.add_subcommand("eval", "score JSONL predictions against a dataset");
    auto* inspect = app.add_subcommand("inspect", "render k-map or annotation overlays");
    for (auto* sub : {augment, synth, eval, inspect}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, std::cerr);
        return code == 0 ? kExitOk : kExitConfig;
    }

    use_stderr_logger();
    spdlog::set_level(spdlog::level::info);
    try {
        RunConfig config;
        if (config_path) config = load_run_config(*config_path);
        if (seed) config.synth.config.seed = *seed;
        if (workers) config.workers = *workers;
        if (out_dir) config.out = *out_dir;
        set_log_level(config.log_level);

        if (print_config) {
            out << to_json(config).dump(2) << '\n';
            return kExitOk;
        }
        if (augment->parsed()) {
            cmd_augment(config, out);
        } else if (synth->parsed()) {
            cmd_synth(config, out);
        } else if (eval->parsed()) {
            cmd_eval(config, out);
        } else if (inspect->parsed()) {
            cmd_inspect(config, out);
        } else {
            std::cerr << app.help();
            return kExitConfig;
        }
        return kExitOk;
    } catch (const ContractViolation& e) {
        spdlog::error("{}", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        spdlog::error("{}", e.what());
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        spdlog::error("{}", e.what());
        return kExitIo;
    } catch (const NumericalError& e) {
        spdlog::error("{}", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        spdlog::error("internal error: {}", e.what());
        return kExitInternal;
    }
}

}  // namespace hotspot::app

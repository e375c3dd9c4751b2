// slampoint: batch toolkit for Grand Slam point-by-point serve analysis.
//
// Subcommands: ingest, prepare, train, tune, evaluate, report.
// Exit codes: 0 success, 1 internal error, 2 usage/input error.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "slampoint/config.hpp"
#include "slampoint/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"slampoint: Grand Slam point-winner pipeline"};
    app.require_subcommand(1);

    std::string config_path, data_dir, out_dir, model_name, model_file;
    std::string seed_text, serve_text, budget_text;
    app.add_option("--config", config_path, "key=value config file (flags win over it)");
    app.add_option("--data-dir", data_dir,
                   "raw data directory (default: $SLAMPOINT_DATA_DIR)");
    app.add_option("--out", out_dir, "artifact directory (default: out)");
    app.add_option("--seed", seed_text, "master seed (default: 17)");
    app.add_option("--serve", serve_text, "serve subset, 1 or 2 (default: 1)");
    app.add_option("--model", model_name,
                   "model family: baseline|logistic|forest|adaboost|gbt (default: gbt)");
    app.add_option("--model-file", model_file, "fitted model file (evaluate/report)");
    app.add_option("--budget", budget_text, "random-search trials (default: 20)");

    for (const char* name : {"ingest", "prepare", "train", "tune", "evaluate", "report"})
        app.add_subcommand(name)->ignore_case()->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends print and exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage message; remap the code
        return 2;
    }

    slampoint::config::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = slampoint::config::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "slampoint: " << e.what() << "\n";
        return 2;
    }
    if (const char* env = std::getenv("SLAMPOINT_DATA_DIR"); env && !cfg.has("data_dir"))
        cfg.set("data_dir", env);
    if (!data_dir.empty()) cfg.set("data_dir", data_dir);
    if (!out_dir.empty()) cfg.set("out", out_dir);
    if (!seed_text.empty()) cfg.set("seed", seed_text);
    if (!serve_text.empty()) cfg.set("serve", serve_text);
    if (!model_name.empty()) cfg.set("model", model_name);
    if (!model_file.empty()) cfg.set("model_file", model_file);
    if (!budget_text.empty()) cfg.set("budget", budget_text);

    const std::string command = app.get_subcommands().front()->get_name();
    return slampoint::pipeline::run_command(command, cfg, std::cout, std::cerr);
}

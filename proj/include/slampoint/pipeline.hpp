#pragma once

// Batch pipeline stages behind the CLI: ingest -> prepare -> train -> tune
// -> evaluate -> report. Each stage reads and writes files under the
// configured output directory and prints a one-screen summary.

#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "slampoint/config.hpp"
#include "slampoint/ingest.hpp"
#include "slampoint/models.hpp"

namespace slampoint::pipeline {

// Exit codes: 0 success, 1 internal error, 2 usage/input error.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------- paths

std::string dataset_path(const std::string& out_dir);
std::string exclusions_path(const std::string& out_dir);
std::string prepared_path(const std::string& out_dir, int serve);
std::string schema_path(const std::string& out_dir, int serve);
std::string split_plan_path(const std::string& out_dir);
std::string model_path(const std::string& out_dir, models::Family family, int serve, bool tuned);
std::string cv_report_path(const std::string& out_dir, models::Family family, int serve,
                           bool tuned);
std::string test_report_path(const std::string& out_dir, models::Family family, int serve);
std::string trials_path(const std::string& out_dir, models::Family family, int serve);
std::string report_dir(const std::string& out_dir);

// ---------------------------------------------------------------- config helpers

// "2016-2020" or "2016,2017,2019" or a mix; throws UsageError on garbage.
std::set<int> parse_years(const std::string& text);
// Comma-separated tournament tokens; throws UsageError on unknown tokens.
std::set<ingest::Tournament> parse_tournaments(const std::string& text);

ingest::Scope scope_from_config(const config::RunConfig& cfg);
ingest::ArtifactStamp stamp_from_config(const config::RunConfig& cfg);
models::Family family_from_config(const config::RunConfig& cfg);
int serve_from_config(const config::RunConfig& cfg);
// default hyperparameters for the family with `hp.<name>` config overrides
models::Hyperparams hyperparams_from_config(const config::RunConfig& cfg,
                                            models::Family family);

// ---------------------------------------------------------------- stages

// Every stage throws UsageError for missing inputs / bad options and other
// exceptions for internal failures; the CLI maps these to exit codes.
void cmd_ingest(const config::RunConfig& cfg, std::ostream& out);
void cmd_prepare(const config::RunConfig& cfg, std::ostream& out);
void cmd_train(const config::RunConfig& cfg, std::ostream& out);
void cmd_tune(const config::RunConfig& cfg, std::ostream& out);
void cmd_evaluate(const config::RunConfig& cfg, std::ostream& out);
void cmd_report(const config::RunConfig& cfg, std::ostream& out);

// Dispatches by name and maps exceptions to exit codes. Unknown command
// names are usage errors.
int run_command(const std::string& name, const config::RunConfig& cfg, std::ostream& out,
                std::ostream& err);

}  // namespace slampoint::pipeline

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "slampoint/pipeline.hpp"
#include "support/simulator.hpp"
#include "support/test_util.hpp"

// End-to-end coverage of the installed binary: argument handling, exit
// codes, environment fallback, and a full run over a simulated bundle.

using namespace slampoint;
namespace ts = slampoint::testsupport;
namespace fs = std::filesystem;

namespace {

std::string bin_path() {
#ifdef SLAMPOINT_BIN
    return SLAMPOINT_BIN;
#else
    return "./slampoint";
#endif
}

// Runs `prefix binary args`, returns the exit code; -1 for launch failures.
int run_cli(const std::string& args, const std::string& redirect = "> /dev/null 2>&1",
            const std::string& env_prefix = "") {
    std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + bin_path() + " " + args +
                      " " + redirect;
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("argument errors and help use the documented exit codes") {
    REQUIRE(fs::exists(bin_path()));
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 2);                     // a subcommand is required
    CHECK(run_cli("transmogrify") == 2);         // unknown subcommand
    CHECK(run_cli("ingest --bad-flag x") == 2);  // unknown option
    CHECK(run_cli("ingest --config /nonexistent/file.cfg") == 2);
    CHECK(run_cli("prepare --out /nonexistent/run") == 2);  // missing dataset
}

TEST_CASE("the binary drives the full pipeline over a simulated bundle") {
    ts::TempDir data_dir("cli-data");
    ts::TempDir out_root("cli-out");
    const std::string outd = out_root.file("run");
    const std::string logs = out_root.file("log");

    auto sims = ts::default_sim_matches(20, 778899);
    ts::write_fixture_bundle(data_dir.path(), sims, ts::default_rankings(sims));

    // ---- ingest via SLAMPOINT_DATA_DIR environment fallback
    REQUIRE(run_cli("ingest --out " + outd, "> " + logs + ".out 2> " + logs + ".err",
                    "SLAMPOINT_DATA_DIR=" + data_dir.path()) == 0);
    REQUIRE(fs::exists(pipeline::dataset_path(outd)));
    CHECK(ts::slurp(logs + ".out").find("ingest: 20 matches") != std::string::npos);

    // without the variable and without --data-dir the same call is a usage error
    CHECK(run_cli("ingest --out " + outd, "> /dev/null 2>&1", "SLAMPOINT_DATA_DIR=") == 2);

    // ---- remaining stages through explicit flags
    REQUIRE(run_cli("prepare --out " + outd) == 0);
    REQUIRE(run_cli("train --out " + outd + " --model baseline --serve 2") == 0);
    REQUIRE(fs::exists(pipeline::model_path(outd, models::Family::Baseline, 2, false)));
    REQUIRE(run_cli("tune --out " + outd + " --model baseline --serve 2 --budget 2") == 0);
    REQUIRE(fs::exists(pipeline::trials_path(outd, models::Family::Baseline, 2)));
    REQUIRE(run_cli("evaluate --out " + outd + " --model baseline --serve 2") == 0);
    REQUIRE(fs::exists(pipeline::test_report_path(outd, models::Family::Baseline, 2)));

    // report succeeds without any gbt model; the importance section is skipped
    REQUIRE(run_cli("report --out " + outd, "> " + logs + "2.out 2> /dev/null") == 0);
    CHECK(fs::exists(pipeline::report_dir(outd) + "/index.md"));
    CHECK(fs::exists(pipeline::report_dir(outd) + "/win_rates.tsv"));
    CHECK(!fs::exists(pipeline::report_dir(outd) + "/importance.tsv"));
    CHECK(ts::slurp(logs + "2.out").find("importance chart skipped") != std::string::npos);
}

TEST_CASE("command-line flags override config-file values") {
    ts::TempDir data_dir("cli-ov-data");
    ts::TempDir out_root("cli-ov-out");
    const std::string outd = out_root.file("right");

    auto sims = ts::default_sim_matches(20, 13579);
    ts::write_fixture_bundle(data_dir.path(), sims, ts::default_rankings(sims));

    const std::string cfg_path = out_root.file("run.cfg");
    {
        std::ofstream out(cfg_path, std::ios::binary);
        out << "data_dir=" << data_dir.path() << "\n";
        out << "out=" << out_root.file("wrong") << "\n";
        out << "seed=1\n";
    }

    REQUIRE(run_cli("ingest --config " + cfg_path + " --out " + outd + " --seed 99") == 0);
    CHECK(fs::exists(pipeline::dataset_path(outd)));
    CHECK(!fs::exists(out_root.file("wrong")));
    // the seed flag reached the artifact stamp
    CHECK(ts::slurp(pipeline::exclusions_path(outd)).find(" seed=99 ") != std::string::npos);
}

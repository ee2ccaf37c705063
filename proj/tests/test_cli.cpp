// Drives the installed binary end to end: synth -> validate -> run -> rank.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

static std::string g_bin;

static int run_cmd(const std::string& args) {
    const std::string cmd = g_bin + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

TEST_CASE("synth then validate") {
    const fs::path dir = fs::temp_directory_path() / "newsrank_cli_test";
    fs::remove_all(dir);
    CHECK(run_cmd("synth --seed 7 --items 400 --slices 24 --out-dir " + dir.string()) == 0);
    CHECK(fs::exists(dir / "catalog.jsonl"));
    CHECK(fs::exists(dir / "snapshots.jsonl"));
    CHECK(run_cmd("validate --catalog " + (dir / "catalog.jsonl").string() +
                  " --snapshots " + (dir / "snapshots.jsonl").string()) == 0);

    SUBCASE("repeat invocation writes identical files") {
        const std::string before = slurp(dir / "catalog.jsonl");
        CHECK(run_cmd("synth --seed 7 --items 400 --slices 24 --out-dir " + dir.string()) ==
              0);
        CHECK(slurp(dir / "catalog.jsonl") == before);
    }
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cmd("synth --items 0") == 2);
    CHECK(run_cmd("run --catalog missing.jsonl --snapshots missing.jsonl "
                  "--protocol no-such-protocol") == 2);
    CHECK(run_cmd("frobnicate") == 2);
}

TEST_CASE("run pred-eval, save a model, rank a snapshot") {
    const fs::path dir = fs::temp_directory_path() / "newsrank_cli_run";
    fs::remove_all(dir);
    REQUIRE(run_cmd("synth --seed 11 --items 900 --slices 700 --out-dir " + dir.string()) ==
            0);
    const std::string corpus_args = "--catalog " + (dir / "catalog.jsonl").string() +
                                    " --snapshots " + (dir / "snapshots.jsonl").string();
    CHECK(run_cmd("run " + corpus_args +
                  " --protocol pred-eval --learner rf --resample under --reps 2"
                  " --trees 30 --max-terms 30 --seed 3 --out-dir " +
                  (dir / "out").string() + " --save-model " + (dir / "model.json").string()) ==
          0);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "report.csv"));
    CHECK(fs::exists(dir / "model.json"));

    SUBCASE("reports are byte-identical across reruns") {
        const std::string before = slurp(dir / "out" / "report.json");
        CHECK(run_cmd("run " + corpus_args +
                      " --protocol pred-eval --learner rf --resample under --reps 2"
                      " --trees 30 --max-terms 30 --seed 3 --out-dir " +
                      (dir / "out2").string()) == 0);
        CHECK(slurp(dir / "out2" / "report.json") == before);
    }

    SUBCASE("rank emits a CSV for an existing snapshot") {
        // pick the last snapshot: 700 slices after 2014-05-01T00:00:00Z
        CHECK(run_cmd("rank " + corpus_args + " --model " + (dir / "model.json").string() +
                      " --at 2014-05-15T13:30:00Z --out " + (dir / "rank.csv").string()) ==
              0);
        const std::string csv = slurp(dir / "rank.csv");
        CHECK(csv.find("GroundTruthRank") != std::string::npos);
    }

    SUBCASE("rank on a missing snapshot lists neighbours and exits 2") {
        CHECK(run_cmd("rank " + corpus_args + " --model " + (dir / "model.json").string() +
                      " --at 2014-05-02T00:13:00Z") == 2);
    }

    SUBCASE("rank without model file exits 2") {
        CHECK(run_cmd("rank " + corpus_args +
                      " --model /nonexistent/model.json --at 2014-05-02T00:00:00Z") == 2);
    }
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-newsrank-binary>\n");
        return 1;
    }
    g_bin = argv[argc - 1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv);
    return ctx.run();
}

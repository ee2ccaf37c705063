#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "newsrank/error.hpp"
#include "newsrank/harness.hpp"

using namespace newsrank;

namespace {

ProtocolSpec small_spec(ProtocolKind kind, std::uint64_t seed) {
    ProtocolSpec spec = ProtocolSpec::defaults(kind);
    spec.seed = seed;
    spec.reps = 3;
    spec.max_terms = 25;
    LearnerSpec rf = LearnerSpec::random_forest();
    rf.n_trees = 25;
    spec.learners = {rf};
    ResampleParams under;
    under.strategy = ResampleStrategy::UNDER;
    ResampleParams none;
    none.strategy = ResampleStrategy::NONE;
    spec.strategies = {under, none};
    return spec;
}

const Corpus& pred_corpus() {
    static const Corpus c = generate_synthetic(91, 1200, 8);
    return c;
}

const Corpus& rank_corpus() {
    static const Corpus c = generate_synthetic(92, 900, 620);
    return c;
}

}  // namespace

TEST_CASE("mc_windows arithmetic") {
    ProtocolSpec spec = ProtocolSpec::defaults(ProtocolKind::PRED_EVAL);
    spec.reps = 50;
    spec.seed = 5;
    const std::vector<Window> ws = mc_windows(1000, spec);
    REQUIRE(ws.size() == 50);
    for (const Window& w : ws) {
        CHECK(w.train_end - w.train_begin == 500);
        CHECK(w.test_end - w.test_begin == 250);
        CHECK(w.train_end == w.test_begin);
        CHECK(w.test_begin >= 500);
        CHECK(w.test_begin <= 750);
        CHECK(w.test_end <= 1000);
    }
    // seeded determinism
    const std::vector<Window> again = mc_windows(1000, spec);
    for (std::size_t i = 0; i < ws.size(); ++i) CHECK(ws[i].test_begin == again[i].test_begin);

    SUBCASE("count-mode test size") {
        spec.test_size = TestSize::cases(24);
        const std::vector<Window> cw = mc_windows(100, spec);
        for (const Window& w : cw) CHECK(w.test_end - w.test_begin == 24);
    }
    SUBCASE("window larger than the data") {
        spec.test_size = TestSize::cases(24);
        CHECK_THROWS_WITH_AS(mc_windows(10, spec), doctest::Contains("need at least"), Error);
        CHECK_THROWS_AS(mc_windows(3, spec), Error);  // test length would be zero
    }
}

TEST_CASE("pred-eval produces sane aggregated scores") {
    const ExperimentReport report =
        run_protocol(pred_corpus(), small_spec(ProtocolKind::PRED_EVAL, 17));
    REQUIRE(report.combos.size() == 2);
    CHECK(report.windows.size() == 3);
    for (const ComboResult& c : report.combos) {
        CHECK(c.f1.per_window.size() == 3);
        for (const auto& m : {c.precision, c.recall, c.f1}) {
            if (m.mean) {
                CHECK(*m.mean >= 0.0);
                CHECK(*m.mean <= 1.0);
            }
            CHECK(m.n_defined + m.n_dropped == 3);
        }
    }
    CHECK(report.combos[0].strategy == "under");
    CHECK(report.combos[1].strategy == "none");
}

TEST_CASE("aggregates equal the mean of per-window values") {
    const ExperimentReport report =
        run_protocol(pred_corpus(), small_spec(ProtocolKind::PRED_EVAL, 23));
    for (const ComboResult& c : report.combos) {
        double sum = 0.0;
        int n = 0;
        for (const auto& v : c.f1.per_window) {
            if (v) {
                sum += *v;
                ++n;
            }
        }
        if (n > 0) {
            REQUIRE(c.f1.mean.has_value());
            CHECK(*c.f1.mean == doctest::Approx(sum / n).epsilon(1e-12));
        }
    }
}

TEST_CASE("reports are byte-identical under a fixed seed") {
    const ExperimentReport a =
        run_protocol(pred_corpus(), small_spec(ProtocolKind::PRED_EVAL, 31));
    const ExperimentReport b =
        run_protocol(pred_corpus(), small_spec(ProtocolKind::PRED_EVAL, 31));
    CHECK(a.to_json().dump() == b.to_json().dump());
    const ExperimentReport c =
        run_protocol(pred_corpus(), small_spec(ProtocolKind::PRED_EVAL, 32));
    CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("temporal hygiene for pred-eval") {
    HygieneTrace trace;
    run_protocol(pred_corpus(), small_spec(ProtocolKind::PRED_EVAL, 37), Lexicon::builtin(),
                 &trace);
    REQUIRE(trace.windows.size() == 3);
    for (const auto& w : trace.windows) {
        if (!w.used) continue;
        CHECK(w.max_train_pub_ts < w.min_test_ts);
        const std::unordered_set<std::string> test_ids(w.test_ids.begin(), w.test_ids.end());
        for (const std::string& id : w.train_ids) CHECK(test_ids.count(id) == 0);
        CHECK_FALSE(w.train_ids.empty());
        CHECK_FALSE(w.test_ids.empty());
    }
}

TEST_CASE("standalone rank protocol") {
    ProtocolSpec spec = small_spec(ProtocolKind::STANDALONE_RANK, 41);
    spec.reps = 2;
    spec.strategies.resize(1);  // just "under"
    HygieneTrace trace;
    const ExperimentReport report =
        run_protocol(rank_corpus(), spec, Lexicon::builtin(), &trace);

    REQUIRE(report.combos.size() == 1);
    const ComboResult& c = report.combos[0];
    CHECK(c.n_queries == 2 * 24);
    for (const auto& m : {c.map, c.mrp, c.mrr, c.ndcg, c.p_at_k}) {
        if (m.mean) {
            CHECK(*m.mean >= 0.0);
            CHECK(*m.mean <= 1.0);
        }
    }
    // something actually got evaluated
    CHECK(c.map.n_defined + report.dropped_windows > 0);

    for (const auto& w : trace.windows) {
        if (!w.used) continue;
        // training items end at least two days before the first test snapshot
        CHECK(w.max_train_pub_ts + kTwoDays < w.min_test_ts + kSecondsPerSlice);
        const std::unordered_set<std::string> test_ids(w.test_ids.begin(), w.test_ids.end());
        for (const std::string& id : w.train_ids) CHECK(test_ids.count(id) == 0);
    }
}

TEST_CASE("realworld rank protocol") {
    ProtocolSpec spec = small_spec(ProtocolKind::REALWORLD_RANK, 43);
    spec.reps = 2;
    spec.test_size = TestSize::cases(48);
    spec.strategies.resize(1);
    const ExperimentReport report = run_protocol(rank_corpus(), spec);
    const ComboResult& c = report.combos[0];
    if (c.map.mean) {
        CHECK(*c.map.mean > 0.0);
        CHECK(*c.map.mean <= 1.0);
    }
    CHECK(c.n_queries == 2 * 48);
}

TEST_CASE("augmentation protocol") {
    ProtocolSpec spec = small_spec(ProtocolKind::AUGMENTATION, 47);
    spec.reps = 2;
    spec.test_size = TestSize::cases(48);
    spec.strategies.resize(1);
    const ExperimentReport report = run_protocol(rank_corpus(), spec);

    REQUIRE(report.systems.size() == 5);
    CHECK(report.systems[0].system == "framework");
    CHECK(report.systems[1].system == "official");
    CHECK(report.systems[2].system == "fused_agreement");
    CHECK(report.systems[3].system == "fused_poll");
    CHECK(report.systems[4].system == "baseline_time");

    for (const AugSystemResult& s : report.systems) {
        REQUIRE(s.f1_per_slice.size() == 8);
        for (const auto& f : s.f1_per_slice) {
            if (f) {
                CHECK(*f >= 0.0);
                CHECK(*f <= 1.0);
            }
        }
    }
    // per slice, every system faces the same set of young truth items:
    // tp + fn is system-independent
    for (std::size_t t = 0; t < 8; ++t) {
        const long expected = report.systems[0].tp[t] + report.systems[0].fn[t];
        for (const AugSystemResult& s : report.systems)
            CHECK(s.tp[t] + s.fn[t] == expected);
    }

    SUBCASE("slices csv") {
        namespace fs = std::filesystem;
        const auto path = (fs::temp_directory_path() / "aug_slices.csv").string();
        report.write_slices_csv(path);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "system,slice,f1,tp,fp,fn");
        int rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        CHECK(rows == 5 * 8);
    }
}

TEST_CASE("ranking protocols refuse a corpus without snapshots") {
    const Corpus no_snaps = generate_synthetic(7, 300, 1);
    ProtocolSpec spec = small_spec(ProtocolKind::STANDALONE_RANK, 3);
    // one snapshot exists, but the window cannot fit
    CHECK_THROWS_AS(run_protocol(no_snaps, spec), Error);
}

TEST_CASE("fit_latest_model trains on the newest window") {
    ProtocolSpec spec = small_spec(ProtocolKind::PRED_EVAL, 53);
    const Model m = fit_latest_model(pred_corpus(), spec);
    CHECK(m.feature_names().size() == 25 + 2);
}

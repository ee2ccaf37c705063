#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsrank/corpus.hpp"
#include "newsrank/learners.hpp"
#include "newsrank/rankeval.hpp"
#include "newsrank/resample.hpp"

namespace newsrank {

inline constexpr const char* kVersion = "0.1.0";

enum class ProtocolKind { PRED_EVAL, STANDALONE_RANK, REALWORLD_RANK, AUGMENTATION };

const char* protocol_name(ProtocolKind k);
ProtocolKind protocol_from_name(const std::string& name);

struct TestSize {
    enum class Mode { FRACTION, COUNT };
    Mode mode = Mode::FRACTION;
    double fraction = 0.25;
    int count = 0;

    static TestSize frac(double f) { return {Mode::FRACTION, f, 0}; }
    static TestSize cases(int n) { return {Mode::COUNT, 0.0, n}; }
};

// The experiment grid. "Cases" are news items ordered by pub_ts for
// PRED_EVAL and snapshots for the ranking protocols.
struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::PRED_EVAL;
    int reps = 50;
    double train_frac = 0.5;
    TestSize test_size = TestSize::frac(0.25);
    std::uint64_t seed = 1;
    std::vector<LearnerSpec> learners;
    std::vector<ResampleParams> strategies;
    std::size_t max_terms = 150;
    int ndcg_k = 10;
    int aug_max_slice = 8;  // evaluate the first 4 hours of alive-time

    // Paper-default windowing per protocol, with an rf x {smoter,under,none}
    // grid.
    static ProtocolSpec defaults(ProtocolKind kind);
    void validate(std::size_t n_cases) const;
};

struct Window {
    std::size_t train_begin, train_end, test_begin, test_end;  // [begin, end)
};

// `reps` windows with seeded uniform start points; training window of
// train_frac * n_cases cases ending at the start point, test window of
// test_size cases following it. Windows may overlap across repetitions.
std::vector<Window> mc_windows(std::size_t n_cases, const ProtocolSpec& spec);

// Instrumentation for the temporal-hygiene checks: which ids fed vocabulary,
// relevance and standardization fitting, and what the window boundaries were.
struct HygieneTrace {
    struct WindowTrace {
        Timestamp max_train_pub_ts = 0;
        Timestamp min_test_ts = 0;
        std::vector<std::string> train_ids;  // items used to fit vocab, phi, scaler, model
        std::vector<std::string> test_ids;   // items the window is evaluated on
        bool used = false;                   // false when the window was dropped whole
    };
    std::vector<WindowTrace> windows;
};

struct MetricSummary {
    std::optional<double> mean;
    int n_defined = 0;
    int n_dropped = 0;
    std::vector<std::optional<double>> per_window;
};

struct ComboResult {
    std::string learner;
    std::string strategy;
    // PRED_EVAL
    MetricSummary precision, recall, f1;
    // ranking protocols
    MetricSummary map, mrp, mrr, ndcg, p_at_k, f1_top10;
    int n_queries = 0;
    int n_queries_dropped = 0;
};

struct AugSystemResult {
    std::string system;
    std::vector<std::optional<double>> f1_per_slice;  // index 0 = slice 1
    std::vector<long> tp, fp, fn;                     // per-slice micro counts
    std::optional<double> mean_f1;                    // over defined slices
};

struct ExperimentReport {
    ProtocolKind kind = ProtocolKind::PRED_EVAL;
    std::uint64_t seed = 0;
    nlohmann::ordered_json config;
    std::size_t n_cases = 0;
    std::vector<Window> windows;
    int dropped_windows = 0;
    std::vector<ComboResult> combos;
    std::vector<AugSystemResult> systems;  // AUGMENTATION only

    nlohmann::ordered_json to_json() const;
    void write_json(const std::string& path) const;
    void write_csv(const std::string& path) const;
    void write_slices_csv(const std::string& path) const;  // AUGMENTATION only
};

ExperimentReport run_protocol(const Corpus& corpus, const ProtocolSpec& spec,
                              const Lexicon& lexicon = Lexicon::builtin(),
                              HygieneTrace* trace = nullptr);

// The most recent training window's data, fitted with the first learner and
// strategy of the grid; used by the CLI to export a model for `rank`.
Model fit_latest_model(const Corpus& corpus, const ProtocolSpec& spec,
                       const Lexicon& lexicon = Lexicon::builtin());

}  // namespace newsrank

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "newsrank/error.hpp"
#include "newsrank/harness.hpp"
#include "newsrank/ranking.hpp"
#include "newsrank/relevance.hpp"

namespace fs = std::filesystem;
using namespace newsrank;

namespace {

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("NEWSRANK_SEED");
    if (!v || !*v) return std::nullopt;
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ValidationError("NEWSRANK_SEED is not a valid integer");
    }
}

Lexicon load_lexicon_or_builtin(const std::string& path) {
    if (path.empty()) return Lexicon::builtin();
    return Lexicon::load(path);
}

struct SynthArgs {
    std::uint64_t seed = 1;
    int items = 5000;
    int slices = 96;
    std::string out_dir = ".";
    std::string params_path;
    std::string topic = "synthetic";
};

int cmd_synth(const SynthArgs& args) {
    GenParams params;
    if (!args.params_path.empty()) params = GenParams::load(args.params_path);
    const Corpus corpus = generate_synthetic(args.seed, args.items, args.slices, params);
    fs::create_directories(args.out_dir);
    const std::string catalog = (fs::path(args.out_dir) / "catalog.jsonl").string();
    const std::string snapshots = (fs::path(args.out_dir) / "snapshots.jsonl").string();
    write_corpus(corpus, catalog, snapshots);

    std::vector<double> y;
    for (const NewsItem& it : corpus.items())
        if (it.has_count()) y.push_back(static_cast<double>(*it.n_tweets_2d));
    const RelevanceFn rel = build_relevance(y);
    std::size_t rare = 0;
    for (double v : y) rare += rel.is_rare(v);
    std::cout << "wrote " << catalog << " (" << corpus.items().size() << " items, "
              << y.size() << " with known counts)\n"
              << "wrote " << snapshots << " (" << corpus.snapshots().size()
              << " snapshots)\n"
              << "rare fraction at phi >= " << rel.threshold() << ": "
              << static_cast<double>(rare) / static_cast<double>(y.size()) << "\n";
    return 0;
}

struct RunArgs {
    std::string catalog, snapshots;
    std::string protocol = "pred-eval";
    std::vector<std::string> learners;
    std::vector<std::string> strategies;
    int reps = -1;
    double train_frac = -1.0;
    double test_frac = -1.0;
    int test_cases = -1;
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string out_dir = ".";
    std::string lexicon_path;
    std::string save_model_path;
    std::size_t max_terms = 150;
    int trees = 500;
    int min_leaf = 5;
    double over_pct = 2.0;
    double under_ratio = 1.0;
    int k_neighbors = 5;
};

ProtocolSpec build_spec(const RunArgs& args) {
    ProtocolSpec spec = ProtocolSpec::defaults(protocol_from_name(args.protocol));
    if (args.reps > 0) spec.reps = args.reps;
    if (args.train_frac > 0) spec.train_frac = args.train_frac;
    if (args.test_frac > 0) spec.test_size = TestSize::frac(args.test_frac);
    if (args.test_cases > 0) spec.test_size = TestSize::cases(args.test_cases);
    spec.seed = args.seed;
    if (const auto s = env_seed()) spec.seed = *s;
    spec.max_terms = args.max_terms;

    if (!args.learners.empty()) {
        spec.learners.clear();
        for (const std::string& name : args.learners) {
            LearnerSpec l = learner_from_name(name) == LearnerKind::LINEAR
                                ? LearnerSpec::linear()
                                : LearnerSpec::random_forest();
            spec.learners.push_back(l);
        }
    }
    for (LearnerSpec& l : spec.learners) {
        if (l.kind == LearnerKind::RANDOM_FOREST) {
            l.n_trees = args.trees;
            l.min_leaf = args.min_leaf;
        }
    }
    if (!args.strategies.empty()) {
        spec.strategies.clear();
        for (const std::string& name : args.strategies) {
            ResampleParams p;
            p.strategy = strategy_from_name(name);
            spec.strategies.push_back(p);
        }
    }
    for (ResampleParams& p : spec.strategies) {
        p.over_pct = args.over_pct;
        p.under_ratio = args.under_ratio;
        p.k_neighbors = args.k_neighbors;
    }
    return spec;
}

int cmd_run(const RunArgs& args) {
    const Corpus corpus = load_corpus(args.catalog, args.snapshots);
    const ProtocolSpec spec = build_spec(args);
    const Lexicon lexicon = load_lexicon_or_builtin(args.lexicon_path);

    const ExperimentReport report = run_protocol(corpus, spec, lexicon);
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    report.write_json((out / "report.json").string());
    report.write_csv((out / "report.csv").string());
    if (spec.kind == ProtocolKind::AUGMENTATION)
        report.write_slices_csv((out / "augmentation_slices.csv").string());

    if (!args.save_model_path.empty()) {
        const Model model = fit_latest_model(corpus, spec, lexicon);
        model.save(args.save_model_path);
        std::cout << "saved model to " << args.save_model_path << "\n";
    }

    std::cout << "protocol " << protocol_name(spec.kind) << ": " << report.windows.size()
              << " windows over " << report.n_cases << " cases ("
              << report.dropped_windows << " dropped)\n";
    for (const ComboResult& c : report.combos) {
        std::cout << "  " << c.learner << "_" << c.strategy << ":";
        auto show = [&](const char* name, const MetricSummary& m) {
            std::cout << ' ' << name << '=';
            if (m.mean)
                std::cout << *m.mean;
            else
                std::cout << "NA";
        };
        if (spec.kind == ProtocolKind::PRED_EVAL) {
            show("prec", c.precision);
            show("rec", c.recall);
            show("f1", c.f1);
        } else {
            show("map", c.map);
            show("mrp", c.mrp);
            show("mrr", c.mrr);
            show("ndcg", c.ndcg);
        }
        std::cout << '\n';
    }
    for (const AugSystemResult& s : report.systems) {
        std::cout << "  " << s.system << ": mean F1 over slices = ";
        if (s.mean_f1)
            std::cout << *s.mean_f1;
        else
            std::cout << "NA";
        std::cout << '\n';
    }
    std::cout << "report written to " << (out / "report.json").string() << "\n";
    return 0;
}

struct RankArgs {
    std::string catalog, snapshots, model_path, at, out_path, lexicon_path;
};

int cmd_rank(const RankArgs& args) {
    if (!fs::exists(args.model_path))
        throw ValidationError("model file '" + args.model_path + "' does not exist");
    const Corpus corpus = load_corpus(args.catalog, args.snapshots);
    const Model model = Model::load(args.model_path);
    const Lexicon lexicon = load_lexicon_or_builtin(args.lexicon_path);
    const Timestamp at = parse_iso8601(args.at);

    const Snapshot* snap = nullptr;
    for (const Snapshot& s : corpus.snapshots())
        if (s.ts == at) snap = &s;
    if (!snap) {
        std::string msg = "no snapshot at " + args.at;
        const Snapshot* before = nullptr;
        const Snapshot* after = nullptr;
        for (const Snapshot& s : corpus.snapshots()) {
            if (s.ts < at) before = &s;
            if (s.ts > at && !after) after = &s;
        }
        if (before) msg += "; nearest earlier: " + format_iso8601(before->ts);
        if (after) msg += "; nearest later: " + format_iso8601(after->ts);
        throw ValidationError(msg);
    }

    const NewsPool pool = filter_known(build_pool(*snap, corpus, snap->ts), corpus);
    if (pool.size() == 0) throw Error("snapshot pool has no items with known counts");
    const RankedList truth = ground_truth_rank(pool, corpus);
    const RankedList pred = predicted_rank(pool, corpus, model, PredictMode::HYBRID, lexicon);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file) throw Error("cannot write '" + args.out_path + "'");
        out = &file;
    }
    *out << "id,GroundTruthRank,RealNTweets,PR.rankPosition,Pred.NTweets\n";
    for (std::size_t i = 0; i < truth.entries.size(); ++i) {
        const std::string& id = truth.entries[i].id;
        const int pr_pos = pred.position_of(id);
        double pred_score = 0.0;
        for (const RankedEntry& e : pred.entries)
            if (e.id == id) pred_score = e.score;
        *out << id << ',' << (i + 1) << ',' << truth.entries[i].score << ',' << pr_pos << ','
             << pred_score << '\n';
    }
    return 0;
}

struct ValidateArgs {
    std::string catalog, snapshots;
};

int cmd_validate(const ValidateArgs& args) {
    const Corpus corpus = load_corpus(args.catalog, args.snapshots);
    std::size_t known = 0, unknown = 0;
    for (const NewsItem& it : corpus.items()) (it.has_count() ? known : unknown)++;
    std::cout << "items: " << corpus.items().size() << " (" << known << " with counts, "
              << unknown << " unknown)\n"
              << "snapshots: " << corpus.snapshots().size() << "\n";
    if (!corpus.snapshots().empty()) {
        std::cout << "snapshot span: " << format_iso8601(corpus.snapshots().front().ts)
                  << " .. " << format_iso8601(corpus.snapshots().back().ts) << "\n";
    }
    std::cout << "ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"news popularity prediction and ranking experiments"};
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
    synth_cmd->add_option("--seed", synth.seed, "generator seed");
    synth_cmd->add_option("--items", synth.items, "number of news items")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--slices", synth.slices, "number of 30-minute snapshots")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--out-dir", synth.out_dir, "output directory");
    synth_cmd->add_option("--params", synth.params_path, "generator params JSON file");
    synth_cmd->add_option("--topic", synth.topic, "topic label");

    RunArgs run;
    CLI::App* run_cmd = app.add_subcommand("run", "run an evaluation protocol");
    run_cmd->add_option("--catalog", run.catalog, "catalog JSONL")->required();
    run_cmd->add_option("--snapshots", run.snapshots, "snapshots JSONL")->required();
    run_cmd->add_option("--protocol", run.protocol,
                        "pred-eval | standalone-rank | realworld-rank | augmentation");
    run_cmd->add_option("--learner", run.learners, "lm | rf (repeatable)");
    run_cmd->add_option("--resample", run.strategies, "smoter | under | none (repeatable)");
    run_cmd->add_option("--reps", run.reps, "Monte Carlo repetitions");
    run_cmd->add_option("--train-frac", run.train_frac, "training fraction of cases");
    run_cmd->add_option("--test-frac", run.test_frac, "test fraction of cases");
    run_cmd->add_option("--test-cases", run.test_cases, "test size in cases");
    run_cmd->add_option("--seed", run.seed, "experiment seed");
    run_cmd->add_option("--out-dir", run.out_dir, "output directory");
    run_cmd->add_option("--lexicon", run.lexicon_path, "sentiment lexicon CSV");
    run_cmd->add_option("--save-model", run.save_model_path,
                        "save the most recent window's model here");
    run_cmd->add_option("--max-terms", run.max_terms, "vocabulary size");
    run_cmd->add_option("--trees", run.trees, "random forest size");
    run_cmd->add_option("--min-leaf", run.min_leaf, "random forest leaf size");
    run_cmd->add_option("--over-pct", run.over_pct, "SMOTEr oversampling rate");
    run_cmd->add_option("--under-ratio", run.under_ratio, "normal cases kept per rare case");
    run_cmd->add_option("--k", run.k_neighbors, "SMOTEr neighbour count");

    RankArgs rank;
    CLI::App* rank_cmd = app.add_subcommand("rank", "score one snapshot against ground truth");
    rank_cmd->add_option("--catalog", rank.catalog, "catalog JSONL")->required();
    rank_cmd->add_option("--snapshots", rank.snapshots, "snapshots JSONL")->required();
    rank_cmd->add_option("--model", rank.model_path, "trained model file")->required();
    rank_cmd->add_option("--at", rank.at, "snapshot timestamp (ISO-8601 UTC)")->required();
    rank_cmd->add_option("--out", rank.out_path, "output CSV (stdout when omitted)");
    rank_cmd->add_option("--lexicon", rank.lexicon_path, "sentiment lexicon CSV");

    ValidateArgs validate;
    CLI::App* validate_cmd = app.add_subcommand("validate", "lint a corpus");
    validate_cmd->add_option("--catalog", validate.catalog, "catalog JSONL")->required();
    validate_cmd->add_option("--snapshots", validate.snapshots, "snapshots JSONL")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (synth_cmd->parsed()) {
            if (const auto s = env_seed()) synth.seed = *s;
            return cmd_synth(synth);
        }
        if (run_cmd->parsed()) return cmd_run(run);
        if (rank_cmd->parsed()) return cmd_rank(rank);
        if (validate_cmd->parsed()) return cmd_validate(validate);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

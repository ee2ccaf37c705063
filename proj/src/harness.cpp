#include "newsrank/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "newsrank/error.hpp"
#include "newsrank/regeval.hpp"
#include "newsrank/relevance.hpp"
#include "newsrank/rng.hpp"

namespace newsrank {

const char* protocol_name(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::PRED_EVAL: return "pred-eval";
        case ProtocolKind::STANDALONE_RANK: return "standalone-rank";
        case ProtocolKind::REALWORLD_RANK: return "realworld-rank";
        case ProtocolKind::AUGMENTATION: return "augmentation";
    }
    return "?";
}

ProtocolKind protocol_from_name(const std::string& name) {
    if (name == "pred-eval") return ProtocolKind::PRED_EVAL;
    if (name == "standalone-rank") return ProtocolKind::STANDALONE_RANK;
    if (name == "realworld-rank") return ProtocolKind::REALWORLD_RANK;
    if (name == "augmentation") return ProtocolKind::AUGMENTATION;
    throw ValidationError("unknown protocol '" + name + "'");
}

ProtocolSpec ProtocolSpec::defaults(ProtocolKind kind) {
    ProtocolSpec spec;
    spec.kind = kind;
    switch (kind) {
        case ProtocolKind::PRED_EVAL:
            spec.reps = 50;
            spec.train_frac = 0.5;
            spec.test_size = TestSize::frac(0.25);
            break;
        case ProtocolKind::STANDALONE_RANK:
            spec.reps = 100;
            spec.train_frac = 0.2;
            spec.test_size = TestSize::cases(24);
            break;
        case ProtocolKind::REALWORLD_RANK:
        case ProtocolKind::AUGMENTATION:
            spec.reps = 50;
            spec.train_frac = 0.2;
            spec.test_size = TestSize::cases(96);
            break;
    }
    spec.learners = {LearnerSpec::random_forest()};
    ResampleParams smoter_params, under_params, none_params;
    smoter_params.strategy = ResampleStrategy::SMOTER;
    under_params.strategy = ResampleStrategy::UNDER;
    none_params.strategy = ResampleStrategy::NONE;
    spec.strategies = {smoter_params, under_params, none_params};
    return spec;
}

void ProtocolSpec::validate(std::size_t) const {
    if (reps < 1) throw ValidationError("reps must be >= 1");
    if (train_frac <= 0.0 || train_frac >= 1.0)
        throw ValidationError("train_frac must be in (0, 1)");
    if (test_size.mode == TestSize::Mode::FRACTION) {
        if (test_size.fraction <= 0.0 || test_size.fraction >= 1.0)
            throw ValidationError("test fraction must be in (0, 1)");
    } else if (test_size.count < 1) {
        throw ValidationError("test case count must be >= 1");
    }
    if (learners.empty()) throw ValidationError("no learners configured");
    if (strategies.empty()) throw ValidationError("no resample strategies configured");
    for (const LearnerSpec& l : learners) l.validate();
    for (const ResampleParams& s : strategies) s.validate();
    if (ndcg_k < 1) throw ValidationError("ndcg_k must be >= 1");
    if (aug_max_slice < 1 || aug_max_slice > kFinalSlice)
        throw ValidationError("aug_max_slice must be in [1, 96]");
}

std::vector<Window> mc_windows(std::size_t n_cases, const ProtocolSpec& spec) {
    spec.validate(n_cases);
    const std::size_t train_len =
        static_cast<std::size_t>(spec.train_frac * static_cast<double>(n_cases));
    const std::size_t test_len =
        spec.test_size.mode == TestSize::Mode::FRACTION
            ? static_cast<std::size_t>(spec.test_size.fraction * static_cast<double>(n_cases))
            : static_cast<std::size_t>(spec.test_size.count);
    if (train_len < 1 || test_len < 1 || train_len + test_len > n_cases)
        throw Error("mc_windows: window does not fit: need at least " +
                    std::to_string(train_len + test_len) + " cases (train " +
                    std::to_string(train_len) + " + test " + std::to_string(test_len) +
                    "), have " + std::to_string(n_cases));

    Rng rng = Rng::derive(spec.seed, 0x31A275);
    const std::size_t span = n_cases - test_len - train_len + 1;  // valid start points
    std::vector<Window> windows;
    windows.reserve(static_cast<std::size_t>(spec.reps));
    for (int r = 0; r < spec.reps; ++r) {
        const std::size_t start = train_len + rng.below(span);
        windows.push_back({start - train_len, start, start, start + test_len});
    }
    return windows;
}

namespace {

nlohmann::ordered_json spec_to_json(const ProtocolSpec& spec) {
    nlohmann::ordered_json j;
    j["protocol"] = protocol_name(spec.kind);
    j["reps"] = spec.reps;
    j["train_frac"] = spec.train_frac;
    if (spec.test_size.mode == TestSize::Mode::FRACTION)
        j["test_size"] = {{"fraction", spec.test_size.fraction}};
    else
        j["test_size"] = {{"count", spec.test_size.count}};
    j["seed"] = spec.seed;
    j["max_terms"] = spec.max_terms;
    j["ndcg_k"] = spec.ndcg_k;
    if (spec.kind == ProtocolKind::AUGMENTATION) j["aug_max_slice"] = spec.aug_max_slice;
    nlohmann::ordered_json learners = nlohmann::ordered_json::array();
    for (const LearnerSpec& l : spec.learners) {
        nlohmann::ordered_json lj;
        lj["kind"] = learner_name(l.kind);
        if (l.kind == LearnerKind::LINEAR) {
            lj["ridge_lambda"] = l.ridge_lambda;
        } else {
            lj["n_trees"] = l.n_trees;
            lj["mtry"] = l.mtry;
            lj["min_leaf"] = l.min_leaf;
            lj["bootstrap"] = l.bootstrap;
        }
        learners.push_back(std::move(lj));
    }
    j["learners"] = std::move(learners);
    nlohmann::ordered_json strategies = nlohmann::ordered_json::array();
    for (const ResampleParams& s : spec.strategies) {
        nlohmann::ordered_json sj;
        sj["strategy"] = strategy_name(s.strategy);
        if (s.strategy == ResampleStrategy::SMOTER) {
            sj["over_pct"] = s.over_pct;
            sj["under_ratio"] = s.under_ratio;
            sj["k_neighbors"] = s.k_neighbors;
        } else if (s.strategy == ResampleStrategy::UNDER) {
            sj["under_ratio"] = s.under_ratio;
        }
        strategies.push_back(std::move(sj));
    }
    j["strategies"] = std::move(strategies);
    return j;
}

MetricSummary summarize(std::vector<std::optional<double>> per_window) {
    MetricSummary s;
    const MeanResult m = mean_over_queries(per_window);
    s.mean = m.mean;
    s.n_defined = m.n_defined;
    s.n_dropped = m.n_dropped;
    s.per_window = std::move(per_window);
    return s;
}

// Training items for a ranking window: published inside the training
// snapshot period but at least two days before its end, so every training
// target was observable when the window closed.
std::vector<NewsItem> ranking_train_items(const Corpus& corpus, Timestamp train_start,
                                          Timestamp train_end) {
    const Timestamp cutoff = train_end - kTwoDays;
    std::vector<NewsItem> out;
    for (const NewsItem& it : corpus.items()) {
        if (!it.has_count()) continue;
        if (it.pub_ts >= train_start && it.pub_ts <= cutoff) out.push_back(it);
    }
    std::sort(out.begin(), out.end(), [](const NewsItem& a, const NewsItem& b) {
        if (a.pub_ts != b.pub_ts) return a.pub_ts < b.pub_ts;
        return a.id < b.id;
    });
    return out;
}

// Everything fitted from one window's training items.
struct TrainedWindow {
    Vocabulary vocab;
    Dataset train_ds;
    RelevanceFn rel;
    Timestamp max_train_pub_ts = 0;

    TrainedWindow(const std::vector<NewsItem>& train_items, const ProtocolSpec& spec,
                  const Lexicon& lexicon)
        : vocab(build_vocabulary(train_items, spec.max_terms)),
          train_ds(featurize(train_items, vocab, lexicon)),
          rel(build_relevance(train_ds.y)) {
        for (const NewsItem& it : train_items)
            max_train_pub_ts = std::max(max_train_pub_ts, it.pub_ts);
    }
};

constexpr std::size_t kNumAugSystems = 5;
const char* const kAugSystems[kNumAugSystems] = {"framework", "official", "fused_agreement",
                                                 "fused_poll", "baseline_time"};

// One snapshot of the augmentation experiment: decayed framework and ground
// truth scores, the five systems' top-10 sets, and per-slice micro counts
// over items still in their first aug_max_slice slices.
void augmentation_query(const Corpus& corpus, const ProtocolSpec& spec, const Lexicon& lexicon,
                        const Model& model, const Snapshot& snap, const NewsPool& pool,
                        std::vector<AugSystemResult>& aug,
                        std::vector<std::optional<double>>& f1_full_pool) {
    const Timestamp ref = pool.ref_time;

    // HYBRID base scores: observed for OLD, predicted for NEW.
    const RankedList hybrid = predicted_rank(pool, corpus, model, PredictMode::HYBRID, lexicon);
    std::vector<RankedEntry> framework_scored, truth_scored;
    framework_scored.reserve(pool.size());
    truth_scored.reserve(pool.size());
    for (const RankedEntry& e : hybrid.entries) {
        const NewsItem& it = corpus.item(e.id);
        const int t = slice_index(it.pub_ts, ref);
        framework_scored.push_back({e.id, decay(e.score, t)});
        truth_scored.push_back({e.id, decay(static_cast<double>(*it.n_tweets_2d), t)});
    }
    const RankedList framework =
        rank_descending(std::move(framework_scored), RankKind::PREDICTED, corpus);
    const RankedList truth =
        rank_descending(std::move(truth_scored), RankKind::GROUND_TRUTH, corpus);
    const RankedList official = official_rank(snap, pool);
    const RankedList agreement = fuse(official, framework, FuseStrategy::AGREEMENT);
    const RankedList poll = fuse(official, framework, FuseStrategy::POLL);
    const RankedList by_time = baseline_time(pool, corpus);

    const RankedList* systems[kNumAugSystems] = {&framework, &official, &agreement, &poll,
                                                 &by_time};

    const std::size_t top_k = std::min<std::size_t>(10, pool.size());
    const std::vector<std::string> truth_ids = truth.top_ids(top_k);
    const std::unordered_set<std::string> truth_top(truth_ids.begin(), truth_ids.end());

    for (std::size_t s = 0; s < kNumAugSystems; ++s) {
        f1_full_pool[s] = f1_top10(*systems[s], truth);
        const std::vector<std::string> sys_ids = systems[s]->top_ids(top_k);
        const std::unordered_set<std::string> sys_top(sys_ids.begin(), sys_ids.end());
        for (const std::string& id : pool.ids) {
            const int t = slice_index(corpus.item(id).pub_ts, ref);
            if (t > spec.aug_max_slice) continue;
            const std::size_t slot = static_cast<std::size_t>(t - 1);
            const bool in_sys = sys_top.count(id) != 0;
            const bool in_truth = truth_top.count(id) != 0;
            if (in_sys && in_truth)
                ++aug[s].tp[slot];
            else if (in_sys)
                ++aug[s].fp[slot];
            else if (in_truth)
                ++aug[s].fn[slot];
        }
    }
}

std::vector<NewsItem> window_train_items_pred(const Corpus& corpus,
                                              const std::vector<std::size_t>& case_items,
                                              const Window& win) {
    std::vector<NewsItem> out;
    out.reserve(win.train_end - win.train_begin);
    for (std::size_t i = win.train_begin; i < win.train_end; ++i)
        out.push_back(corpus.items()[case_items[i]]);
    return out;
}

}  // namespace

ExperimentReport run_protocol(const Corpus& corpus, const ProtocolSpec& spec,
                              const Lexicon& lexicon, HygieneTrace* trace) {
    const bool is_pred = spec.kind == ProtocolKind::PRED_EVAL;
    const bool is_aug = spec.kind == ProtocolKind::AUGMENTATION;
    const std::vector<std::size_t> case_items = corpus.known_items_by_pub();
    if (!is_pred && corpus.snapshots().empty())
        throw Error("run_protocol: ranking protocols need snapshots");
    const std::size_t n_cases = is_pred ? case_items.size() : corpus.snapshots().size();
    const std::vector<Window> windows = mc_windows(n_cases, spec);

    ExperimentReport report;
    report.kind = spec.kind;
    report.seed = spec.seed;
    report.config = spec_to_json(spec);
    report.n_cases = n_cases;
    report.windows = windows;
    if (trace) trace->windows.assign(windows.size(), {});

    const std::size_t n_learners = spec.learners.size();
    const std::size_t n_strategies = spec.strategies.size();
    // The augmentation experiment follows one configuration (the first of
    // each grid), mirroring the paper's use of its best single model.
    const std::size_t n_combos = is_aug ? 1 : n_learners * n_strategies;

    report.combos.resize(n_combos);
    for (std::size_t c = 0; c < n_combos; ++c) {
        const std::size_t li = is_aug ? 0 : c / n_strategies;
        const std::size_t si = is_aug ? 0 : c % n_strategies;
        report.combos[c].learner = learner_name(spec.learners[li].kind);
        report.combos[c].strategy = strategy_name(spec.strategies[si].strategy);
    }

    struct PerWindowValues {
        std::vector<std::optional<double>> precision, recall, f1;
        std::vector<std::optional<double>> map, mrp, mrr, ndcg, p10, f1t10;
    };
    std::vector<PerWindowValues> values(n_combos);
    for (PerWindowValues& v : values) {
        for (auto* m : {&v.precision, &v.recall, &v.f1, &v.map, &v.mrp, &v.mrr, &v.ndcg,
                        &v.p10, &v.f1t10})
            m->assign(windows.size(), std::nullopt);
    }

    std::vector<AugSystemResult> aug(kNumAugSystems);
    if (is_aug) {
        for (std::size_t s = 0; s < kNumAugSystems; ++s) {
            aug[s].system = kAugSystems[s];
            aug[s].tp.assign(static_cast<std::size_t>(spec.aug_max_slice), 0);
            aug[s].fp.assign(static_cast<std::size_t>(spec.aug_max_slice), 0);
            aug[s].fn.assign(static_cast<std::size_t>(spec.aug_max_slice), 0);
        }
    }

    for (std::size_t w = 0; w < windows.size(); ++w) {
        const Window& win = windows[w];
        const std::uint64_t window_seed = mix_seed(spec.seed, 1000 + w);

        try {
            if (is_pred) {
                const std::vector<NewsItem> train_items =
                    window_train_items_pred(corpus, case_items, win);
                std::vector<NewsItem> test_items;
                test_items.reserve(win.test_end - win.test_begin);
                for (std::size_t i = win.test_begin; i < win.test_end; ++i)
                    test_items.push_back(corpus.items()[case_items[i]]);

                const TrainedWindow tw(train_items, spec, lexicon);
                const FeatureMatrix test_m = featurize_matrix(test_items, tw.vocab, lexicon);
                std::vector<double> y_test;
                y_test.reserve(test_items.size());
                for (const NewsItem& it : test_items)
                    y_test.push_back(static_cast<double>(*it.n_tweets_2d));

                if (trace) {
                    auto& t = trace->windows[w];
                    t.used = true;
                    t.train_ids = tw.train_ds.ids;
                    t.max_train_pub_ts = tw.max_train_pub_ts;
                    t.min_test_ts = test_items.front().pub_ts;
                    for (const NewsItem& it : test_items) {
                        t.test_ids.push_back(it.id);
                        t.min_test_ts = std::min(t.min_test_ts, it.pub_ts);
                    }
                }

                for (std::size_t li = 0; li < n_learners; ++li) {
                    for (std::size_t si = 0; si < n_strategies; ++si) {
                        const std::size_t c = li * n_strategies + si;
                        try {
                            ResampleParams params = spec.strategies[si];
                            params.seed = mix_seed(window_seed, 100 + si);
                            LearnerSpec lspec = spec.learners[li];
                            lspec.seed = mix_seed(window_seed, 7000 + li);
                            const Dataset train2 = resample(tw.train_ds, tw.rel, params);
                            const Model model = fit(lspec, train2);
                            const std::vector<double> y_pred = model.predict(test_m);
                            const RegScores scores = utility_prf(y_test, y_pred, tw.rel);
                            values[c].precision[w] = scores.precision;
                            values[c].recall[w] = scores.recall;
                            values[c].f1[w] = scores.f1;
                        } catch (const Error&) {
                            // this combo failed on this window (for instance
                            // too few rare cases for SMOTEr); stays undefined
                        }
                    }
                }
            } else {
                const Timestamp train_start = corpus.snapshots()[win.train_begin].ts;
                const Timestamp train_end = corpus.snapshots()[win.train_end - 1].ts;
                const std::vector<NewsItem> train_items =
                    ranking_train_items(corpus, train_start, train_end);
                if (train_items.size() < 8)
                    throw Error("window training set too small after the 2-day cutoff");
                const TrainedWindow tw(train_items, spec, lexicon);

                if (trace) {
                    auto& t = trace->windows[w];
                    t.used = true;
                    t.train_ids = tw.train_ds.ids;
                    t.max_train_pub_ts = tw.max_train_pub_ts;
                    t.min_test_ts = corpus.snapshots()[win.test_begin].ts;
                }

                for (std::size_t c = 0; c < n_combos; ++c) {
                    const std::size_t li = is_aug ? 0 : c / n_strategies;
                    const std::size_t si = is_aug ? 0 : c % n_strategies;
                    ResampleParams params = spec.strategies[si];
                    params.seed = mix_seed(window_seed, 100 + si);
                    LearnerSpec lspec = spec.learners[li];
                    lspec.seed = mix_seed(window_seed, 7000 + li);
                    const Dataset train2 = resample(tw.train_ds, tw.rel, params);
                    const Model model = fit(lspec, train2);

                    std::vector<std::optional<double>> ap, rp, rr, ndcg, p10, f1t;
                    int dropped = 0;
                    for (std::size_t q = win.test_begin; q < win.test_end; ++q) {
                        const Snapshot& snap = corpus.snapshots()[q];
                        const NewsPool full =
                            filter_known(build_pool(snap, corpus, snap.ts), corpus);

                        if (is_aug) {
                            if (full.size() == 0) {
                                ++dropped;
                                continue;
                            }
                            std::vector<std::optional<double>> f1q(kNumAugSystems);
                            augmentation_query(corpus, spec, lexicon, model, snap, full, aug,
                                               f1q);
                            f1t.push_back(f1q[0]);  // framework's full-pool top-10 F1
                            if (trace && c == 0) {
                                auto& t = trace->windows[w];
                                for (std::size_t i = 0; i < full.ids.size(); ++i)
                                    if (!full.is_old[i]) t.test_ids.push_back(full.ids[i]);
                            }
                            continue;
                        }

                        NewsPool pool = full;
                        if (spec.kind == ProtocolKind::STANDALONE_RANK) {
                            NewsPool fresh;
                            fresh.ref_time = full.ref_time;
                            for (std::size_t i = 0; i < full.ids.size(); ++i) {
                                if (full.is_old[i]) continue;
                                fresh.ids.push_back(full.ids[i]);
                                fresh.is_old.push_back(false);
                            }
                            pool = std::move(fresh);
                        }
                        if (pool.size() == 0) {
                            ++dropped;
                            continue;
                        }
                        if (trace && c == 0) {
                            auto& t = trace->windows[w];
                            for (std::size_t i = 0; i < pool.ids.size(); ++i)
                                if (!pool.is_old[i]) t.test_ids.push_back(pool.ids[i]);
                        }
                        const RankedList truth = ground_truth_rank(pool, corpus);
                        const PredictMode mode = spec.kind == ProtocolKind::STANDALONE_RANK
                                                     ? PredictMode::NEW_ONLY
                                                     : PredictMode::HYBRID;
                        const RankedList pred =
                            predicted_rank(pool, corpus, model, mode, lexicon);
                        const RelevanceJudgments judg =
                            RelevanceJudgments::from_ground_truth(truth);
                        ap.push_back(average_precision(pred, judg));
                        rp.push_back(r_precision(pred, judg));
                        rr.push_back(reciprocal_rank(pred, judg));
                        ndcg.push_back(ndcg_at_k(pred, judg, spec.ndcg_k));
                        p10.push_back(p_at_k(pred, judg, spec.ndcg_k));
                        f1t.push_back(f1_top10(pred, truth));
                    }
                    values[c].map[w] = mean_over_queries(ap).mean;
                    values[c].mrp[w] = mean_over_queries(rp).mean;
                    values[c].mrr[w] = mean_over_queries(rr).mean;
                    values[c].ndcg[w] = mean_over_queries(ndcg).mean;
                    values[c].p10[w] = mean_over_queries(p10).mean;
                    values[c].f1t10[w] = mean_over_queries(f1t).mean;
                    report.combos[c].n_queries +=
                        static_cast<int>(win.test_end - win.test_begin);
                    report.combos[c].n_queries_dropped += dropped;
                }
            }
        } catch (const Error&) {
            ++report.dropped_windows;
            if (trace) trace->windows[w].used = false;
        }
    }

    for (std::size_t c = 0; c < n_combos; ++c) {
        ComboResult& combo = report.combos[c];
        combo.precision = summarize(std::move(values[c].precision));
        combo.recall = summarize(std::move(values[c].recall));
        combo.f1 = summarize(std::move(values[c].f1));
        combo.map = summarize(std::move(values[c].map));
        combo.mrp = summarize(std::move(values[c].mrp));
        combo.mrr = summarize(std::move(values[c].mrr));
        combo.ndcg = summarize(std::move(values[c].ndcg));
        combo.p_at_k = summarize(std::move(values[c].p10));
        combo.f1_top10 = summarize(std::move(values[c].f1t10));
    }

    if (is_aug) {
        for (AugSystemResult& sys : aug) {
            sys.f1_per_slice.resize(static_cast<std::size_t>(spec.aug_max_slice));
            std::vector<std::optional<double>> defined;
            for (std::size_t t = 0; t < sys.f1_per_slice.size(); ++t) {
                const long denom = 2 * sys.tp[t] + sys.fp[t] + sys.fn[t];
                if (denom > 0)
                    sys.f1_per_slice[t] =
                        2.0 * static_cast<double>(sys.tp[t]) / static_cast<double>(denom);
                defined.push_back(sys.f1_per_slice[t]);
            }
            sys.mean_f1 = mean_over_queries(defined).mean;
        }
        report.systems = std::move(aug);
    }
    return report;
}

Model fit_latest_model(const Corpus& corpus, const ProtocolSpec& spec, const Lexicon& lexicon) {
    const bool is_pred = spec.kind == ProtocolKind::PRED_EVAL;
    const std::vector<std::size_t> case_items = corpus.known_items_by_pub();
    const std::size_t n_cases = is_pred ? case_items.size() : corpus.snapshots().size();
    const std::vector<Window> windows = mc_windows(n_cases, spec);
    const Window latest = *std::max_element(
        windows.begin(), windows.end(),
        [](const Window& a, const Window& b) { return a.train_end < b.train_end; });

    std::vector<NewsItem> train_items;
    if (is_pred) {
        train_items = window_train_items_pred(corpus, case_items, latest);
    } else {
        train_items = ranking_train_items(corpus, corpus.snapshots()[latest.train_begin].ts,
                                          corpus.snapshots()[latest.train_end - 1].ts);
    }
    if (train_items.size() < 8) throw Error("fit_latest_model: training window too small");
    const TrainedWindow tw(train_items, spec, lexicon);
    ResampleParams params = spec.strategies.front();
    params.seed = mix_seed(spec.seed, 42);
    LearnerSpec lspec = spec.learners.front();
    lspec.seed = mix_seed(spec.seed, 43);
    return fit(lspec, resample(tw.train_ds, tw.rel, params));
}

namespace {

nlohmann::ordered_json metric_to_json(const MetricSummary& m, bool with_windows = true) {
    nlohmann::ordered_json j;
    if (m.mean)
        j["mean"] = *m.mean;
    else
        j["mean"] = nullptr;
    j["n_defined"] = m.n_defined;
    j["n_dropped"] = m.n_dropped;
    if (with_windows) {
        nlohmann::ordered_json v = nlohmann::ordered_json::array();
        for (const auto& x : m.per_window) {
            if (x)
                v.push_back(*x);
            else
                v.push_back(nullptr);
        }
        j["per_window"] = std::move(v);
    }
    return j;
}

}  // namespace

nlohmann::ordered_json ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "newsrank";
    j["version"] = kVersion;
    j["protocol"] = protocol_name(kind);
    j["seed"] = seed;
    j["config"] = config;
    j["n_cases"] = n_cases;
    j["dropped_windows"] = dropped_windows;
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const Window& w : windows)
        ws.push_back({{"train", {w.train_begin, w.train_end}},
                      {"test", {w.test_begin, w.test_end}}});
    j["windows"] = std::move(ws);

    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const ComboResult& c : combos) {
        nlohmann::ordered_json cj;
        cj["learner"] = c.learner;
        cj["strategy"] = c.strategy;
        if (kind == ProtocolKind::PRED_EVAL) {
            cj["precision"] = metric_to_json(c.precision);
            cj["recall"] = metric_to_json(c.recall);
            cj["f1"] = metric_to_json(c.f1);
        } else {
            cj["map"] = metric_to_json(c.map);
            cj["mrp"] = metric_to_json(c.mrp);
            cj["mrr"] = metric_to_json(c.mrr);
            cj["ndcg"] = metric_to_json(c.ndcg);
            cj["p_at_k"] = metric_to_json(c.p_at_k);
            cj["f1_top10"] = metric_to_json(c.f1_top10);
            cj["n_queries"] = c.n_queries;
            cj["n_queries_dropped"] = c.n_queries_dropped;
        }
        results.push_back(std::move(cj));
    }
    j["results"] = std::move(results);

    if (kind == ProtocolKind::AUGMENTATION) {
        nlohmann::ordered_json systems_json = nlohmann::ordered_json::array();
        for (const AugSystemResult& s : systems) {
            nlohmann::ordered_json sj;
            sj["system"] = s.system;
            nlohmann::ordered_json f1s = nlohmann::ordered_json::array();
            for (const auto& f : s.f1_per_slice) {
                if (f)
                    f1s.push_back(*f);
                else
                    f1s.push_back(nullptr);
            }
            sj["f1_per_slice"] = std::move(f1s);
            if (s.mean_f1)
                sj["mean_f1"] = *s.mean_f1;
            else
                sj["mean_f1"] = nullptr;
            sj["tp"] = s.tp;
            sj["fp"] = s.fp;
            sj["fn"] = s.fn;
            systems_json.push_back(std::move(sj));
        }
        j["systems"] = std::move(systems_json);
    }
    return j;
}

void ExperimentReport::write_json(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report to '" + path + "'");
    out << to_json().dump(2) << '\n';
}

namespace {

void write_metric_row(std::ofstream& out, const std::string& learner,
                      const std::string& strategy, const char* metric,
                      const MetricSummary& m) {
    out << learner << ',' << strategy << ',' << metric << ',';
    if (m.mean)
        out << *m.mean;
    else
        out << "NA";
    out << ',' << m.n_defined << ',' << m.n_dropped << '\n';
}

}  // namespace

void ExperimentReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report to '" + path + "'");
    out << "learner,strategy,metric,mean,n_defined,n_dropped\n";
    for (const ComboResult& c : combos) {
        if (kind == ProtocolKind::PRED_EVAL) {
            write_metric_row(out, c.learner, c.strategy, "precision", c.precision);
            write_metric_row(out, c.learner, c.strategy, "recall", c.recall);
            write_metric_row(out, c.learner, c.strategy, "f1", c.f1);
        } else {
            write_metric_row(out, c.learner, c.strategy, "map", c.map);
            write_metric_row(out, c.learner, c.strategy, "mrp", c.mrp);
            write_metric_row(out, c.learner, c.strategy, "mrr", c.mrr);
            write_metric_row(out, c.learner, c.strategy, "ndcg", c.ndcg);
            write_metric_row(out, c.learner, c.strategy, "p_at_k", c.p_at_k);
            write_metric_row(out, c.learner, c.strategy, "f1_top10", c.f1_top10);
        }
    }
}

void ExperimentReport::write_slices_csv(const std::string& path) const {
    if (kind != ProtocolKind::AUGMENTATION)
        throw Error("write_slices_csv: only meaningful for the augmentation protocol");
    std::ofstream out(path);
    if (!out) throw Error("cannot write report to '" + path + "'");
    out << "system,slice,f1,tp,fp,fn\n";
    for (const AugSystemResult& s : systems) {
        for (std::size_t t = 0; t < s.f1_per_slice.size(); ++t) {
            out << s.system << ',' << (t + 1) << ',';
            if (s.f1_per_slice[t])
                out << *s.f1_per_slice[t];
            else
                out << "NA";
            out << ',' << s.tp[t] << ',' << s.fp[t] << ',' << s.fn[t] << '\n';
        }
    }
}

}  // namespace newsrank

#include "newsrank/ranking.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "newsrank/error.hpp"

namespace newsrank {

const char* rank_kind_name(RankKind k) {
    switch (k) {
        case RankKind::GROUND_TRUTH: return "ground_truth";
        case RankKind::PREDICTED: return "predicted";
        case RankKind::OFFICIAL: return "official";
        case RankKind::FUSED: return "fused";
        case RankKind::BASELINE_TIME: return "baseline_time";
    }
    return "?";
}

int RankedList::position_of(const std::string& id) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].id == id) return static_cast<int>(i) + 1;
    }
    return 0;
}

std::vector<std::string> RankedList::top_ids(std::size_t k) const {
    std::vector<std::string> out;
    out.reserve(std::min(k, entries.size()));
    for (std::size_t i = 0; i < entries.size() && i < k; ++i) out.push_back(entries[i].id);
    return out;
}

std::vector<std::string> NewsPool::old_ids() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (is_old[i]) out.push_back(ids[i]);
    return out;
}

std::vector<std::string> NewsPool::new_ids() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (!is_old[i]) out.push_back(ids[i]);
    return out;
}

NewsPool build_pool(const Snapshot& snapshot, const Corpus& corpus, Timestamp ref_time) {
    NewsPool pool;
    pool.ref_time = ref_time;
    pool.ids.reserve(snapshot.ranked_ids.size());
    for (const std::string& id : snapshot.ranked_ids) {
        if (!corpus.has_item(id)) throw Error("build_pool: unknown id '" + id + "'");
        pool.ids.push_back(id);
        pool.is_old.push_back(ref_time - corpus.item(id).pub_ts >= kTwoDays);
    }
    return pool;
}

NewsPool filter_known(const NewsPool& pool, const Corpus& corpus) {
    NewsPool out;
    out.ref_time = pool.ref_time;
    for (std::size_t i = 0; i < pool.ids.size(); ++i) {
        if (!corpus.item(pool.ids[i]).has_count()) continue;
        out.ids.push_back(pool.ids[i]);
        out.is_old.push_back(pool.is_old[i]);
    }
    return out;
}

RankedList rank_descending(std::vector<RankedEntry> scored, RankKind kind, const Corpus& corpus) {
    std::sort(scored.begin(), scored.end(), [&](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        const Timestamp ta = corpus.item(a.id).pub_ts;
        const Timestamp tb = corpus.item(b.id).pub_ts;
        if (ta != tb) return ta < tb;
        return a.id < b.id;
    });
    return {std::move(scored), kind};
}

RankedList ground_truth_rank(const NewsPool& pool, const Corpus& corpus) {
    std::vector<RankedEntry> scored;
    scored.reserve(pool.size());
    for (const std::string& id : pool.ids) {
        const NewsItem& it = corpus.item(id);
        if (!it.has_count())
            throw Error("ground_truth_rank: item '" + id + "' has unknown tweet count");
        scored.push_back({id, static_cast<double>(*it.n_tweets_2d)});
    }
    return rank_descending(std::move(scored), RankKind::GROUND_TRUTH, corpus);
}

namespace {

Vocabulary vocabulary_from_schema(const std::vector<std::string>& feature_names) {
    Vocabulary vocab;
    for (const std::string& name : feature_names) {
        if (name.rfind("tf:", 0) == 0) vocab.terms.push_back(name.substr(3));
    }
    vocab.doc_freq.assign(vocab.terms.size(), 0);
    return vocab;
}

}  // namespace

RankedList predicted_rank(const NewsPool& pool, const Corpus& corpus, const Model& model,
                          PredictMode mode, const Lexicon& lexicon) {
    std::vector<std::string> targets =
        mode == PredictMode::NEW_ONLY ? pool.new_ids() : pool.ids;
    if (mode == PredictMode::NEW_ONLY && targets.empty())
        throw Error("predicted_rank: no NEW items to rank");
    if (targets.empty()) throw Error("predicted_rank: empty pool");

    std::unordered_set<std::string> old_set;
    for (const std::string& id : pool.old_ids()) old_set.insert(id);

    std::vector<NewsItem> to_predict;
    for (const std::string& id : targets) {
        if (mode == PredictMode::HYBRID && old_set.count(id)) continue;
        to_predict.push_back(corpus.item(id));
    }

    std::unordered_map<std::string, double> score;
    if (!to_predict.empty()) {
        const Vocabulary vocab = vocabulary_from_schema(model.feature_names());
        const FeatureMatrix rows = featurize_matrix(to_predict, vocab, lexicon);
        const std::vector<double> preds = model.predict(rows);
        for (std::size_t i = 0; i < to_predict.size(); ++i) score[to_predict[i].id] = preds[i];
    }

    std::vector<RankedEntry> scored;
    scored.reserve(targets.size());
    for (const std::string& id : targets) {
        if (mode == PredictMode::HYBRID && old_set.count(id)) {
            const NewsItem& it = corpus.item(id);
            if (!it.has_count())
                throw Error("predicted_rank: OLD item '" + id + "' has unknown tweet count");
            scored.push_back({id, static_cast<double>(*it.n_tweets_2d)});
        } else {
            scored.push_back({id, score.at(id)});
        }
    }
    return rank_descending(std::move(scored), RankKind::PREDICTED, corpus);
}

RankedList official_rank(const Snapshot& snapshot, const NewsPool& pool) {
    std::unordered_set<std::string> wanted(pool.ids.begin(), pool.ids.end());
    RankedList list;
    list.kind = RankKind::OFFICIAL;
    for (std::size_t i = 0; i < snapshot.ranked_ids.size(); ++i) {
        const std::string& id = snapshot.ranked_ids[i];
        if (wanted.count(id))
            list.entries.push_back({id, static_cast<double>(i + 1)});
    }
    if (list.entries.size() != pool.size())
        throw Error("official_rank: pool contains ids missing from the snapshot");
    return list;
}

RankedList baseline_time(const NewsPool& pool, const Corpus& corpus) {
    if (pool.size() == 0) throw Error("baseline_time: empty pool");
    RankedList list;
    list.kind = RankKind::BASELINE_TIME;
    for (const std::string& id : pool.ids)
        list.entries.push_back({id, static_cast<double>(corpus.item(id).pub_ts)});
    std::sort(list.entries.begin(), list.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.score != b.score) return a.score > b.score;  // most recent first
                  return a.id < b.id;
              });
    return list;
}

double decay(double base, int t, int t_f) {
    if (t < 1) throw Error("decay: slice index must be >= 1");
    if (t_f < 1) throw Error("decay: t_f must be >= 1");
    if (t > t_f) t = t_f;
    return base * (1.0 - static_cast<double>(t - 1) / static_cast<double>(t_f));
}

RankedList fuse(const RankedList& official, const RankedList& predicted, FuseStrategy strategy) {
    std::unordered_map<std::string, int> pos_a, pos_b;
    std::unordered_map<std::string, double> pred_score;
    for (std::size_t i = 0; i < official.entries.size(); ++i)
        pos_a[official.entries[i].id] = static_cast<int>(i) + 1;
    for (std::size_t i = 0; i < predicted.entries.size(); ++i) {
        pos_b[predicted.entries[i].id] = static_cast<int>(i) + 1;
        pred_score[predicted.entries[i].id] = predicted.entries[i].score;
    }
    if (pos_a.size() != official.entries.size() || pos_b.size() != predicted.entries.size())
        throw Error("fuse: duplicate ids in input ranking");

    std::string diff;
    for (const auto& [id, _] : pos_a)
        if (!pos_b.count(id)) diff += (diff.empty() ? "" : ", ") + id;
    for (const auto& [id, _] : pos_b)
        if (!pos_a.count(id)) diff += (diff.empty() ? "" : ", ") + id;
    if (!diff.empty()) throw Error("fuse: rankings cover different ids: " + diff);

    struct Keyed {
        std::string id;
        double key;
        double pred;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(official.entries.size());
    for (const RankedEntry& e : official.entries) {
        const double a = pos_a[e.id];
        const double b = pos_b[e.id];
        const double key =
            strategy == FuseStrategy::AGREEMENT ? 0.5 * (a + b) : std::min(a, b);
        keyed.push_back({e.id, key, pred_score[e.id]});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.key != b.key) return a.key < b.key;
        if (a.pred != b.pred) return a.pred > b.pred;
        return a.id < b.id;
    });

    RankedList out;
    out.kind = RankKind::FUSED;
    for (const Keyed& k : keyed) out.entries.push_back({k.id, k.key});
    return out;
}

void write_rank_csv(std::ostream& out, const RankedList& list) {
    out << "rank,id,score,kind\n";
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        out << (i + 1) << ',' << list.entries[i].id << ',' << list.entries[i].score << ','
            << rank_kind_name(list.kind) << '\n';
    }
}

}  // namespace newsrank

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "newsrank/corpus.hpp"
#include "newsrank/features.hpp"
#include "newsrank/learners.hpp"

namespace newsrank {

enum class RankKind { GROUND_TRUTH, PREDICTED, OFFICIAL, FUSED, BASELINE_TIME };

const char* rank_kind_name(RankKind k);

struct RankedEntry {
    std::string id;
    double score = 0.0;
};

struct RankedList {
    std::vector<RankedEntry> entries;
    RankKind kind = RankKind::GROUND_TRUTH;

    std::size_t size() const { return entries.size(); }
    // 1-based rank of id; 0 when absent.
    int position_of(const std::string& id) const;
    std::vector<std::string> top_ids(std::size_t k) const;
};

// Snapshot pool split into OLD (published at least two days before ref_time,
// so the tweet count is knowable) and NEW (still inside the 2-day window).
struct NewsPool {
    std::vector<std::string> ids;
    std::vector<bool> is_old;  // aligned with ids
    Timestamp ref_time = 0;

    std::size_t size() const { return ids.size(); }
    std::vector<std::string> old_ids() const;
    std::vector<std::string> new_ids() const;
};

NewsPool build_pool(const Snapshot& snapshot, const Corpus& corpus, Timestamp ref_time);

// Pool restricted to items with a known tweet count (items whose count could
// not be collected cannot enter ground truth or HYBRID scoring).
NewsPool filter_known(const NewsPool& pool, const Corpus& corpus);

// Shared ordering for score-based ranks: score descending, then earlier
// pub_ts, then id.
RankedList rank_descending(std::vector<RankedEntry> scored, RankKind kind, const Corpus& corpus);

// Descending by observed n_tweets_2d. Every pool item must have a known count.
RankedList ground_truth_rank(const NewsPool& pool, const Corpus& corpus);

enum class PredictMode { NEW_ONLY, HYBRID };

// NEW_ONLY ranks only the NEW items by predicted count; HYBRID ranks the whole
// pool, OLD items by their observed count and NEW items by prediction. The
// vocabulary is recovered from the model's feature schema.
RankedList predicted_rank(const NewsPool& pool, const Corpus& corpus, const Model& model,
                          PredictMode mode, const Lexicon& lexicon);

// The snapshot's own order restricted to the pool ids; score is unused and
// holds the original position for inspection.
RankedList official_rank(const Snapshot& snapshot, const NewsPool& pool);

// Most recent first; ties by id.
RankedList baseline_time(const NewsPool& pool, const Corpus& corpus);

// base * (1 - (t - 1) / t_f), with t capped at t_f. t < 1 is an error.
double decay(double base, int t, int t_f = kFinalSlice);

enum class FuseStrategy { AGREEMENT, POLL };

// Position-only fusion of two rankings over the same id set: AGREEMENT keys
// on the average position, POLL on the minimum. Ties break by the higher
// score in `predicted` (the decayed predicted score), then id.
RankedList fuse(const RankedList& official, const RankedList& predicted, FuseStrategy strategy);

// CSV: rank,id,score,kind
void write_rank_csv(std::ostream& out, const RankedList& list);

}  // namespace newsrank

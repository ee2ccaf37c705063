#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "newsrank/timeutil.hpp"

namespace newsrank {

// One news story. n_tweets_2d is the total tweet count in the two days
// after publication; empty while that window has not closed (or the count
// could not be collected), in which case the item is excluded from
// training and ground truth.
struct NewsItem {
    std::string id;
    std::string title;
    std::string headline;
    Timestamp pub_ts = 0;
    std::optional<std::int64_t> n_tweets_2d;

    bool has_count() const { return n_tweets_2d.has_value(); }
};

// One 30-minute query: the official top list at time ts, best rank first.
struct Snapshot {
    Timestamp ts = 0;
    std::vector<std::string> ranked_ids;
};

// Immutable after construction; safe for concurrent reads.
class Corpus {
public:
    Corpus(std::vector<NewsItem> items, std::vector<Snapshot> snapshots, std::string topic);

    const std::vector<NewsItem>& items() const { return items_; }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    const std::string& topic() const { return topic_; }

    bool has_item(const std::string& id) const { return index_.count(id) != 0; }
    const NewsItem& item(const std::string& id) const;

    // Indices of items with a known tweet count, ordered by (pub_ts, id).
    std::vector<std::size_t> known_items_by_pub() const;

private:
    std::vector<NewsItem> items_;
    std::vector<Snapshot> snapshots_;
    std::string topic_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Catalog and snapshots are JSON-lines files; see README for the schema.
// Malformed lines, duplicate ids and unresolvable snapshot ids all raise
// ValidationError with the offending line or id named.
Corpus load_corpus(const std::string& catalog_path, const std::string& snapshots_path,
                   std::string topic = "");
void write_corpus(const Corpus& corpus, const std::string& catalog_path,
                  const std::string& snapshots_path);

// Knobs for the synthetic stream generator. Defaults are tuned so that the
// box-plot relevance function at threshold 0.9 tags roughly 7-10% of items
// as rare.
struct GenParams {
    int vocab_size = 250;
    int hot_terms = 12;
    double log_mu = 3.0;         // log-scale location of the tweet-count draw
    double log_sigma = 1.0;      // log-scale spread (heavy right tail)
    double hot_rate = 0.20;      // fraction of items carrying hot terms
    double hot_boost = 1.05;     // added to log_mu per hot-term occurrence
    double untweeted_rate = 0.20;  // items that never get tweeted
    double unknown_rate = 0.06;    // items whose count could not be collected
    int headline_min = 6;
    int headline_max = 11;
    int alive_slices = 192;      // how long an item may stay in snapshots
    double official_pop_weight = 1.0;   // weight of observed popularity in the official rank
    double official_recency_gain = 4.0; // weight of recency in the official rank
    double official_noise = 0.8;

    void validate() const;  // throws ValidationError on nonsense (negative rates etc.)
    static GenParams load(const std::string& path);
};

// Deterministic for a fixed (seed, n_items, n_slices, params): equal seeds
// give byte-identical corpora. Snapshots are spaced 30 simulated minutes
// apart and rank alive items by a noisy blend of recency and observed-so-far
// popularity, top 100 kept.
Corpus generate_synthetic(std::uint64_t seed, int n_items, int n_slices,
                          const GenParams& params = {});

}  // namespace newsrank

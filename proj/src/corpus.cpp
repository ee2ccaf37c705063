#include "newsrank/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "newsrank/error.hpp"
#include "newsrank/rng.hpp"

namespace newsrank {

using nlohmann::json;
using nlohmann::ordered_json;

Corpus::Corpus(std::vector<NewsItem> items, std::vector<Snapshot> snapshots, std::string topic)
    : items_(std::move(items)), snapshots_(std::move(snapshots)), topic_(std::move(topic)) {
    index_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const NewsItem& it = items_[i];
        if (it.id.empty()) throw ValidationError("item with empty id");
        if (it.headline.empty()) throw ValidationError("item '" + it.id + "' has empty headline");
        if (it.n_tweets_2d && *it.n_tweets_2d < 0)
            throw ValidationError("item '" + it.id + "' has negative tweet count");
        if (!index_.emplace(it.id, i).second)
            throw ValidationError("duplicate item id '" + it.id + "'");
    }
    Timestamp prev = 0;
    bool first = true;
    for (const Snapshot& snap : snapshots_) {
        if (!first && snap.ts <= prev)
            throw ValidationError("snapshots not strictly increasing at " +
                                  format_iso8601(snap.ts));
        prev = snap.ts;
        first = false;
        std::unordered_set<std::string> seen;
        for (const std::string& id : snap.ranked_ids) {
            if (!seen.insert(id).second)
                throw ValidationError("snapshot " + format_iso8601(snap.ts) +
                                      " lists id '" + id + "' twice");
            if (!index_.count(id))
                throw ValidationError("snapshot " + format_iso8601(snap.ts) +
                                      " references unknown id '" + id + "'");
        }
    }
}

const NewsItem& Corpus::item(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("unknown item id '" + id + "'");
    return items_[it->second];
}

std::vector<std::size_t> Corpus::known_items_by_pub() const {
    std::vector<std::size_t> idx;
    idx.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (items_[i].has_count()) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) {
        if (items_[a].pub_ts != items_[b].pub_ts) return items_[a].pub_ts < items_[b].pub_ts;
        return items_[a].id < items_[b].id;
    });
    return idx;
}

namespace {

json parse_line(const std::string& path, int lineno, const std::string& line) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed JSON (" +
                              e.what() + ")");
    }
}

template <class F>
void for_each_jsonl(const std::string& path, F&& fn) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        fn(lineno, parse_line(path, lineno, line));
    }
}

std::string require_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw ValidationError(where + ": missing or non-string field '" + key + "'");
    return j[key].get<std::string>();
}

}  // namespace

Corpus load_corpus(const std::string& catalog_path, const std::string& snapshots_path,
                   std::string topic) {
    std::vector<NewsItem> items;
    for_each_jsonl(catalog_path, [&](int lineno, const json& j) {
        const std::string where = catalog_path + ":" + std::to_string(lineno);
        NewsItem it;
        it.id = require_string(j, "id", where);
        it.title = require_string(j, "title", where);
        it.headline = require_string(j, "headline", where);
        it.pub_ts = parse_iso8601(require_string(j, "pub_ts", where));
        if (!j.contains("n_tweets_2d"))
            throw ValidationError(where + ": missing field 'n_tweets_2d'");
        const json& n = j["n_tweets_2d"];
        if (n.is_null()) {
            it.n_tweets_2d.reset();
        } else if (n.is_number_integer()) {
            it.n_tweets_2d = n.get<std::int64_t>();
        } else {
            throw ValidationError(where + ": 'n_tweets_2d' must be an integer or null");
        }
        items.push_back(std::move(it));
    });

    std::vector<Snapshot> snapshots;
    for_each_jsonl(snapshots_path, [&](int lineno, const json& j) {
        const std::string where = snapshots_path + ":" + std::to_string(lineno);
        Snapshot snap;
        snap.ts = parse_iso8601(require_string(j, "ts", where));
        if (!j.contains("ranked_ids") || !j["ranked_ids"].is_array())
            throw ValidationError(where + ": missing or non-array field 'ranked_ids'");
        for (const json& id : j["ranked_ids"]) {
            if (!id.is_string())
                throw ValidationError(where + ": 'ranked_ids' entries must be strings");
            snap.ranked_ids.push_back(id.get<std::string>());
        }
        snapshots.push_back(std::move(snap));
    });

    return Corpus(std::move(items), std::move(snapshots), std::move(topic));
}

void write_corpus(const Corpus& corpus, const std::string& catalog_path,
                  const std::string& snapshots_path) {
    std::ofstream cat(catalog_path);
    if (!cat) throw Error("cannot write '" + catalog_path + "'");
    for (const NewsItem& it : corpus.items()) {
        ordered_json j;
        j["id"] = it.id;
        j["title"] = it.title;
        j["headline"] = it.headline;
        j["pub_ts"] = format_iso8601(it.pub_ts);
        if (it.n_tweets_2d)
            j["n_tweets_2d"] = *it.n_tweets_2d;
        else
            j["n_tweets_2d"] = nullptr;
        cat << j.dump() << '\n';
    }
    std::ofstream snaps(snapshots_path);
    if (!snaps) throw Error("cannot write '" + snapshots_path + "'");
    for (const Snapshot& snap : corpus.snapshots()) {
        ordered_json j;
        j["ts"] = format_iso8601(snap.ts);
        j["ranked_ids"] = snap.ranked_ids;
        snaps << j.dump() << '\n';
    }
}

void GenParams::validate() const {
    if (vocab_size < 10) throw ValidationError("vocab_size must be >= 10");
    if (hot_terms < 0 || hot_terms > vocab_size)
        throw ValidationError("hot_terms must be in [0, vocab_size]");
    if (log_sigma <= 0) throw ValidationError("log_sigma must be positive");
    if (untweeted_rate < 0 || untweeted_rate >= 1)
        throw ValidationError("untweeted_rate must be in [0, 1)");
    if (unknown_rate < 0 || unknown_rate >= 1)
        throw ValidationError("unknown_rate must be in [0, 1)");
    if (headline_min < 1 || headline_max < headline_min)
        throw ValidationError("bad headline length range");
    if (alive_slices < 1) throw ValidationError("alive_slices must be >= 1");
    if (official_noise < 0) throw ValidationError("official_noise must be >= 0");
    if (official_pop_weight < 0 || official_recency_gain < 0)
        throw ValidationError("official rank weights must be >= 0");
    if (hot_boost < 0) throw ValidationError("hot_boost must be >= 0");
    if (hot_rate < 0 || hot_rate >= 1) throw ValidationError("hot_rate must be in [0, 1)");
}

GenParams GenParams::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": malformed JSON (" + e.what() + ")");
    }
    GenParams p;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("vocab_size", p.vocab_size);
    get("hot_terms", p.hot_terms);
    get("log_mu", p.log_mu);
    get("log_sigma", p.log_sigma);
    get("hot_rate", p.hot_rate);
    get("hot_boost", p.hot_boost);
    get("untweeted_rate", p.untweeted_rate);
    get("unknown_rate", p.unknown_rate);
    get("headline_min", p.headline_min);
    get("headline_max", p.headline_max);
    get("alive_slices", p.alive_slices);
    get("official_pop_weight", p.official_pop_weight);
    get("official_recency_gain", p.official_recency_gain);
    get("official_noise", p.official_noise);
    p.validate();
    return p;
}

namespace {

// Pronounceable pseudo-words, unique per index, all length >= 6 so they
// clear the tokenizer's length filter and miss the stopword list.
std::string make_word(int i) {
    static const char* syllables[] = {
        "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du", "ka", "ke", "ki",
        "ko", "ku", "la", "le", "li", "lo", "lu", "ma", "me", "mi", "mo", "mu", "na",
        "ne", "ni", "no", "nu", "ra", "re", "ri", "ro", "ru", "sa", "se", "si", "so",
        "su", "ta", "te", "ti", "to", "tu", "va", "ve", "vi", "vo", "vu"};
    constexpr int kBase = 50;
    std::string w;
    w += syllables[i % kBase];
    w += syllables[(i / kBase) % kBase];
    w += syllables[(i / (kBase * kBase)) % kBase];
    return w;
}

const char* kPositiveWords[] = {"good", "great", "strong", "happy", "best", "success"};
const char* kNegativeWords[] = {"bad", "crisis", "fear", "loss", "worst", "scandal"};

}  // namespace

Corpus generate_synthetic(std::uint64_t seed, int n_items, int n_slices,
                          const GenParams& params) {
    if (n_items <= 0) throw ValidationError("n_items must be > 0");
    if (n_slices <= 0) throw ValidationError("n_slices must be > 0");
    params.validate();

    Rng rng = Rng::derive(seed, 0xC0151);

    std::vector<std::string> vocab(params.vocab_size);
    for (int i = 0; i < params.vocab_size; ++i) vocab[i] = make_word(i);
    std::vector<std::size_t> hot =
        rng.sample_indices(static_cast<std::size_t>(params.vocab_size),
                           static_cast<std::size_t>(params.hot_terms));

    // Collection starts 2014-05-01T00:00:00Z, matching nothing in particular;
    // items may be published up to alive_slices before the first snapshot so
    // early snapshots contain old news too.
    const Timestamp t0 = parse_iso8601("2014-05-01T00:00:00Z");
    const std::int64_t alive_span = static_cast<std::int64_t>(params.alive_slices) * kSecondsPerSlice;
    const Timestamp pub_lo = t0 - alive_span;
    const Timestamp pub_hi = t0 + static_cast<Timestamp>(n_slices - 1) * kSecondsPerSlice;

    int id_width = 1;
    for (int v = n_items; v >= 10; v /= 10) ++id_width;

    std::vector<NewsItem> items(static_cast<std::size_t>(n_items));
    std::vector<double> true_count(static_cast<std::size_t>(n_items));
    for (int i = 0; i < n_items; ++i) {
        NewsItem& it = items[static_cast<std::size_t>(i)];
        std::string num = std::to_string(i);
        it.id = "n" + std::string(static_cast<std::size_t>(id_width) - num.size(), '0') + num;
        it.pub_ts = pub_lo + static_cast<Timestamp>(rng.below(
                                 static_cast<std::uint64_t>(pub_hi - pub_lo + 1)));

        // Headline: mostly uniform vocabulary draws; a minority of items get
        // one to three "hot" terms injected, which raises the expected
        // log tweet count.
        int hotness = 0;
        if (!hot.empty() && rng.next_unit() < params.hot_rate) {
            const double r = rng.next_unit();
            hotness = r < 0.60 ? 1 : (r < 0.90 ? 2 : 3);
        }
        const int len = params.headline_min +
                        static_cast<int>(rng.below(static_cast<std::uint64_t>(
                            params.headline_max - params.headline_min + 1)));
        std::vector<std::string> words;
        for (int h = 0; h < hotness; ++h)
            words.push_back(vocab[hot[rng.below(hot.size())]]);
        while (static_cast<int>(words.size()) < len)
            words.push_back(vocab[rng.below(vocab.size())]);
        rng.shuffle(words);
        if (rng.next_unit() < 0.35) {
            const bool pos = rng.next_unit() < 0.5;
            words.push_back(pos ? kPositiveWords[rng.below(6)] : kNegativeWords[rng.below(6)]);
        }
        std::string headline;
        for (const std::string& w : words) {
            if (!headline.empty()) headline += ' ';
            headline += w;
        }
        it.headline = headline;

        // Title: a short sample of the headline, occasionally with its own
        // sentiment word.
        const std::size_t title_len = 3 + rng.below(3);
        std::string title;
        for (std::size_t k = 0; k < title_len && k < words.size(); ++k) {
            if (!title.empty()) title += ' ';
            title += words[rng.below(words.size())];
        }
        if (rng.next_unit() < 0.30) {
            const bool pos = rng.next_unit() < 0.5;
            title += ' ';
            title += pos ? kPositiveWords[rng.below(6)] : kNegativeWords[rng.below(6)];
        }
        it.title = title;

        // Discretized log-normal target with additive hot-term boost on the
        // log scale; a slice of cold items never gets tweeted at all.
        double count;
        if (hotness == 0 && rng.next_unit() < params.untweeted_rate) {
            count = 0.0;
        } else {
            const double z = rng.normal();
            count = std::floor(
                std::exp(params.log_mu + params.hot_boost * hotness + params.log_sigma * z));
        }
        true_count[static_cast<std::size_t>(i)] = count;
        if (rng.next_unit() < params.unknown_rate) {
            it.n_tweets_2d.reset();
        } else {
            it.n_tweets_2d = static_cast<std::int64_t>(count);
        }
    }

    std::unordered_map<std::string, double> count_of;
    count_of.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) count_of[items[i].id] = true_count[i];
    std::sort(items.begin(), items.end(), [](const NewsItem& a, const NewsItem& b) {
        if (a.pub_ts != b.pub_ts) return a.pub_ts < b.pub_ts;
        return a.id < b.id;
    });

    // Snapshots: the "official" rank sees recency plus the popularity
    // observed so far (a fresh item's count is mostly invisible, which is
    // the latency problem this whole exercise is about).
    std::vector<Snapshot> snapshots;
    snapshots.reserve(static_cast<std::size_t>(n_slices));
    for (int s = 0; s < n_slices; ++s) {
        Snapshot snap;
        snap.ts = t0 + static_cast<Timestamp>(s) * kSecondsPerSlice;
        std::vector<std::pair<double, const NewsItem*>> scored;
        for (const NewsItem& it : items) {
            const std::int64_t age = snap.ts - it.pub_ts;
            if (age < 0 || age > alive_span) continue;
            const double recency = 1.0 - static_cast<double>(age) / static_cast<double>(alive_span);
            const double observable =
                std::min(1.0, static_cast<double>(age) / static_cast<double>(kTwoDays));
            const double observed = count_of[it.id] * observable;
            const double score = params.official_pop_weight * std::log1p(observed) +
                                 params.official_recency_gain * recency +
                                 params.official_noise * rng.normal();
            scored.emplace_back(score, &it);
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second->id < b.second->id;
        });
        const std::size_t top = std::min<std::size_t>(100, scored.size());
        for (std::size_t i = 0; i < top; ++i) snap.ranked_ids.push_back(scored[i].second->id);
        snapshots.push_back(std::move(snap));
    }

    return Corpus(std::move(items), std::move(snapshots), "synthetic");
}

}  // namespace newsrank

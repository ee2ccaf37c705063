#include "newsrank/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include "newsrank/error.hpp"

namespace newsrank {

namespace {

const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> words = {
        "a",       "about",   "above",  "after",  "again",  "against", "all",    "am",
        "an",      "and",     "any",    "are",    "aren't", "as",      "at",     "be",
        "because", "been",    "before", "being",  "below",  "between", "both",   "but",
        "by",      "cannot",  "could",  "did",    "do",     "does",    "doing",  "down",
        "during",  "each",    "few",    "for",    "from",   "further", "had",    "has",
        "have",    "having",  "he",     "her",    "here",   "hers",    "him",    "his",
        "how",     "i",       "if",     "in",     "into",   "is",      "it",     "its",
        "just",    "me",      "more",   "most",   "my",     "no",      "nor",    "not",
        "now",     "of",      "off",    "on",     "once",   "only",    "or",     "other",
        "our",     "ours",    "out",    "over",   "own",    "same",    "she",    "should",
        "so",      "some",    "such",   "than",   "that",   "the",     "their",  "theirs",
        "them",    "then",    "there",  "these",  "they",   "this",    "those",  "through",
        "to",      "too",     "under",  "until",  "up",     "very",    "was",    "we",
        "were",    "what",    "when",   "where",  "which",  "while",   "who",    "whom",
        "why",     "will",    "with",   "would",  "you",    "your",    "yours"};
    return words;
}

bool is_negator(const std::string& tok) {
    if (tok == "not" || tok == "no" || tok == "never" || tok == "cannot") return true;
    return tok.size() >= 3 && tok.compare(tok.size() - 3, 3, "n't") == 0;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        const unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c == '\'') {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    // Apostrophes only matter inside a token ("don't"); trim the rest.
    for (std::string& t : tokens) {
        const auto first = t.find_first_not_of('\'');
        const auto last = t.find_last_not_of('\'');
        t = first == std::string::npos ? std::string() : t.substr(first, last - first + 1);
    }
    tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                [](const std::string& t) { return t.empty(); }),
                 tokens.end());
    return tokens;
}

std::vector<std::string> vocab_tokens(const std::string& text) {
    std::vector<std::string> tokens = tokenize(text);
    tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                [](const std::string& t) {
                                    return t.size() < 3 || is_stopword(t);
                                }),
                 tokens.end());
    return tokens;
}

bool is_stopword(const std::string& token) { return stopwords().count(token) != 0; }

Lexicon::Lexicon(std::unordered_map<std::string, int> polarity)
    : polarity_(std::move(polarity)) {
    for (const auto& [word, pol] : polarity_) {
        if (pol != 1 && pol != -1)
            throw ValidationError("lexicon word '" + word + "' has polarity " +
                                  std::to_string(pol) + ", expected -1 or 1");
    }
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open lexicon '" + path + "'");
    std::unordered_map<std::string, int> polarity;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": expected 'word,polarity'");
        const std::string word = line.substr(0, comma);
        const std::string pol = line.substr(comma + 1);
        if (pol != "1" && pol != "-1")
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": polarity must be 1 or -1");
        polarity[word] = pol == "1" ? 1 : -1;
    }
    return Lexicon(std::move(polarity));
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = [] {
        static const char* positive[] = {
            "amazing", "awesome",  "best",      "better",   "bold",     "breakthrough",
            "bright",  "calm",     "celebrate", "champion", "clean",    "clever",
            "confident", "deal",   "delight",   "eager",    "easy",     "effective",
            "excellent", "fair",   "famous",    "fast",     "favorite", "fine",
            "fresh",   "friendly", "gain",      "generous", "good",     "great",
            "growth",  "happy",    "healthy",   "helpful",  "hope",     "impressive",
            "improve", "innovative", "inspire", "joy",      "kind",     "lead",
            "love",    "lucky",    "modern",    "nice",     "optimistic", "peace",
            "popular", "positive", "powerful",  "praise",   "profit",   "progress",
            "promising", "proud",  "recover",   "reliable", "rescue",   "rich",
            "right",   "safe",     "secure",    "smart",    "smooth",   "stable",
            "strong",  "succeed",  "success",   "support",  "surge",    "thrive",
            "top",     "triumph",  "trust",     "useful",   "victory",  "warm",
            "welcome", "win",      "winner",    "wise",     "wonderful", "worthy"};
        static const char* negative[] = {
            "abuse",   "afraid",   "angry",    "attack",   "awful",    "bad",
            "blame",   "break",    "broken",   "chaos",    "cheat",    "collapse",
            "concern", "conflict", "corrupt",  "crash",    "crime",    "crisis",
            "critical", "cruel",   "damage",   "danger",   "dark",     "dead",
            "decline", "defeat",   "deficit",  "dirty",    "disaster", "doubt",
            "drop",    "fail",     "failure",  "fake",     "fall",     "fear",
            "fight",   "fraud",    "grim",     "harm",     "hate",     "hurt",
            "illegal", "injury",   "kill",     "lose",     "loss",     "lost",
            "mess",    "mistake",  "negative", "pain",     "panic",    "poor",
            "problem", "protest",  "risk",     "sad",      "scandal",  "scare",
            "shock",   "sick",     "slow",     "struggle", "suffer",   "terrible",
            "threat",  "toxic",    "tragedy",  "trouble",  "ugly",     "unfair",
            "unsafe",  "violence", "violent",  "war",      "warn",     "waste",
            "weak",    "worry",    "worse",    "worst"};
        std::unordered_map<std::string, int> polarity;
        for (const char* w : positive) polarity[w] = 1;
        for (const char* w : negative) polarity[w] = -1;
        return Lexicon(std::move(polarity));
    }();
    return lex;
}

int Vocabulary::index_of(const std::string& term) const {
    auto it = std::find(terms.begin(), terms.end(), term);
    return it == terms.end() ? -1 : static_cast<int>(it - terms.begin());
}

Vocabulary build_vocabulary(const std::vector<NewsItem>& train_items, std::size_t max_terms) {
    if (train_items.empty()) throw ValidationError("build_vocabulary: no training items");
    std::map<std::string, int> df;  // ordered map gives the lexicographic tie-break for free
    for (const NewsItem& it : train_items) {
        std::vector<std::string> toks = vocab_tokens(it.headline);
        std::sort(toks.begin(), toks.end());
        toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
        for (const std::string& t : toks) ++df[t];
    }
    if (df.empty())
        throw ValidationError("build_vocabulary: no headline survives tokenization");

    std::vector<std::pair<std::string, int>> terms(df.begin(), df.end());
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (terms.size() > max_terms) terms.resize(max_terms);

    Vocabulary vocab;
    vocab.terms.reserve(terms.size());
    vocab.doc_freq.reserve(terms.size());
    for (auto& [term, freq] : terms) {
        vocab.terms.push_back(std::move(term));
        vocab.doc_freq.push_back(freq);
    }
    return vocab;
}

double sentiment(const std::string& text, const Lexicon& lexicon) {
    const std::vector<std::string> tokens = tokenize(text);
    if (tokens.empty()) return 0.0;
    double sum = 0.0;
    std::vector<bool> spent(tokens.size(), false);  // each negator flips at most one hit
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        int pol = lexicon.polarity_of(tokens[i]);
        if (pol == 0) continue;
        for (std::size_t back = 1; back <= 2 && back <= i; ++back) {
            const std::size_t j = i - back;
            if (!spent[j] && is_negator(tokens[j])) {
                pol = -pol;
                spent[j] = true;
                break;
            }
        }
        sum += pol;
    }
    return sum / std::sqrt(static_cast<double>(tokens.size()));
}

std::vector<std::string> feature_names_for(const Vocabulary& vocab) {
    std::vector<std::string> names;
    names.reserve(vocab.size() + 2);
    for (const std::string& t : vocab.terms) names.push_back("tf:" + t);
    names.push_back("sent_title");
    names.push_back("sent_headline");
    return names;
}

namespace {

FeatureMatrix featurize_impl(const std::vector<NewsItem>& items, const Vocabulary& vocab,
                             const Lexicon& lexicon) {
    FeatureMatrix m;
    m.feature_names = feature_names_for(vocab);
    m.n_cols = m.feature_names.size();
    m.n_rows = items.size();
    m.x.assign(m.n_rows * m.n_cols, 0.0);
    m.ids.reserve(items.size());

    std::unordered_map<std::string, std::size_t> term_index;
    term_index.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) term_index[vocab.terms[i]] = i;

    for (std::size_t r = 0; r < items.size(); ++r) {
        const NewsItem& it = items[r];
        double* row = m.x.data() + r * m.n_cols;
        for (const std::string& tok : tokenize(it.headline)) {
            auto f = term_index.find(tok);
            if (f != term_index.end()) row[f->second] += 1.0;
        }
        row[m.n_cols - 2] = sentiment(it.title, lexicon);
        row[m.n_cols - 1] = sentiment(it.headline, lexicon);
        m.ids.push_back(it.id);
    }
    return m;
}

}  // namespace

Dataset featurize(const std::vector<NewsItem>& items, const Vocabulary& vocab,
                  const Lexicon& lexicon) {
    Dataset d;
    static_cast<FeatureMatrix&>(d) = featurize_impl(items, vocab, lexicon);
    d.y.reserve(items.size());
    for (const NewsItem& it : items) {
        if (!it.has_count())
            throw Error("featurize: item '" + it.id + "' has unknown tweet count");
        d.y.push_back(static_cast<double>(*it.n_tweets_2d));
    }
    return d;
}

FeatureMatrix featurize_matrix(const std::vector<NewsItem>& items, const Vocabulary& vocab,
                               const Lexicon& lexicon) {
    return featurize_impl(items, vocab, lexicon);
}

}  // namespace newsrank

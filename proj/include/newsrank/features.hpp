#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "newsrank/corpus.hpp"

namespace newsrank {

// Lowercased tokens split on non-alphanumeric runs (apostrophes are kept so
// contractions like "don't" survive for negation handling).
std::vector<std::string> tokenize(const std::string& text);

// tokenize() plus the bag-of-words filters: tokens shorter than 3 chars and
// stopwords are dropped.
std::vector<std::string> vocab_tokens(const std::string& text);

bool is_stopword(const std::string& token);

// word -> polarity in {-1, +1}
class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(std::unordered_map<std::string, int> polarity);

    static Lexicon load(const std::string& path);  // CSV word,polarity
    static const Lexicon& builtin();               // small list compiled in

    int polarity_of(const std::string& word) const {  // 0 when absent
        auto it = polarity_.find(word);
        return it == polarity_.end() ? 0 : it->second;
    }
    std::size_t size() const { return polarity_.size(); }

private:
    std::unordered_map<std::string, int> polarity_;
};

// Built from training headlines only; terms ordered by document frequency
// (descending, ties lexicographic).
struct Vocabulary {
    std::vector<std::string> terms;
    std::vector<int> doc_freq;

    std::size_t size() const { return terms.size(); }
    int index_of(const std::string& term) const;  // -1 when absent
};

Vocabulary build_vocabulary(const std::vector<NewsItem>& train_items, std::size_t max_terms);

// Signed lexicon hits over sqrt(token count); a hit's sign flips when a
// negator appears within the two preceding tokens. Empty text scores 0.
double sentiment(const std::string& text, const Lexicon& lexicon);

// Rows of [tf per vocabulary term..., sent_title, sent_headline], aligned
// with ids. No targets; see Dataset for the supervised variant.
struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<double> x;  // row-major, n_rows * n_cols
    std::vector<std::string> ids;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(x.data() + r * n_cols, n_cols);
    }
    double at(std::size_t r, std::size_t c) const { return x[r * n_cols + c]; }
};

struct Dataset : FeatureMatrix {
    std::vector<double> y;
};

std::vector<std::string> feature_names_for(const Vocabulary& vocab);

// Training featurization: every item must have a known target.
Dataset featurize(const std::vector<NewsItem>& items, const Vocabulary& vocab,
                  const Lexicon& lexicon);

// Prediction-time featurization: targets may be unknown.
FeatureMatrix featurize_matrix(const std::vector<NewsItem>& items, const Vocabulary& vocab,
                               const Lexicon& lexicon);

}  // namespace newsrank

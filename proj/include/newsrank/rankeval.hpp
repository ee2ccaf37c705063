#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "newsrank/ranking.hpp"

namespace newsrank {

// Per-query relevance: binary (relevant iff in the ground-truth top 10) and
// graded in {0,1,2,3} for NDCG.
struct RelevanceJudgments {
    std::unordered_set<std::string> relevant;
    std::unordered_map<std::string, int> grades;  // ids absent => grade 0

    // Grade buckets by ground-truth rank: 1-3, 4-6, 7-10 (upper bounds).
    struct GradeBreaks {
        int g3 = 3;
        int g2 = 6;
        int g1 = 10;
    };

    static RelevanceJudgments from_ground_truth(const RankedList& truth);
    static RelevanceJudgments from_ground_truth(const RankedList& truth, GradeBreaks breaks);

    bool is_relevant(const std::string& id) const { return relevant.count(id) != 0; }
    int grade_of(const std::string& id) const {
        auto it = grades.find(id);
        return it == grades.end() ? 0 : it->second;
    }
    int n_relevant() const { return static_cast<int>(relevant.size()); }
};

// Rankings shorter than k count as padded with irrelevant items: the
// denominator stays k.
double p_at_k(const RankedList& ranking, const RelevanceJudgments& judg, int k);

// Sum of P@k over relevant ranks, divided by the number of relevant items
// for the query (retrieved or not). Absent when the query has none.
std::optional<double> average_precision(const RankedList& ranking,
                                        const RelevanceJudgments& judg);

// P@R with R = number of relevant items for the query. Absent when R = 0.
std::optional<double> r_precision(const RankedList& ranking, const RelevanceJudgments& judg);

// 1 / rank of the first relevant item; 0 when none is retrieved.
double reciprocal_rank(const RankedList& ranking, const RelevanceJudgments& judg);

// DCG@k = sum (2^grade - 1) / log2(1 + i); normalized by the ideal ordering
// of the judged grades. Absent when every grade is 0.
std::optional<double> ndcg_at_k(const RankedList& ranking, const RelevanceJudgments& judg,
                                int k);

// Set-overlap F1 of the two top-10s (full pool when smaller than 10).
// Absent on an empty pool.
std::optional<double> f1_top10(const RankedList& system, const RankedList& truth);

struct MeanResult {
    std::optional<double> mean;
    int n_defined = 0;
    int n_dropped = 0;
};

// Arithmetic mean of the defined entries; dropped entries are counted, not
// imputed.
MeanResult mean_over_queries(const std::vector<std::optional<double>>& per_query);

}  // namespace newsrank

#include "newsrank/rankeval.hpp"

#include <algorithm>
#include <cmath>

#include "newsrank/error.hpp"

namespace newsrank {

RelevanceJudgments RelevanceJudgments::from_ground_truth(const RankedList& truth) {
    return from_ground_truth(truth, GradeBreaks());
}

RelevanceJudgments RelevanceJudgments::from_ground_truth(const RankedList& truth,
                                                         GradeBreaks breaks) {
    RelevanceJudgments j;
    for (std::size_t i = 0; i < truth.entries.size(); ++i) {
        const int rank = static_cast<int>(i) + 1;
        if (rank > breaks.g1) break;
        j.relevant.insert(truth.entries[i].id);
        j.grades[truth.entries[i].id] = rank <= breaks.g3 ? 3 : rank <= breaks.g2 ? 2 : 1;
    }
    return j;
}

double p_at_k(const RankedList& ranking, const RelevanceJudgments& judg, int k) {
    if (k < 1) throw Error("p_at_k: k must be >= 1");
    int hits = 0;
    for (std::size_t i = 0; i < ranking.entries.size() && i < static_cast<std::size_t>(k); ++i)
        hits += judg.is_relevant(ranking.entries[i].id);
    return static_cast<double>(hits) / static_cast<double>(k);
}

std::optional<double> average_precision(const RankedList& ranking,
                                        const RelevanceJudgments& judg) {
    const int n_rel = judg.n_relevant();
    if (n_rel == 0) return std::nullopt;
    double sum = 0.0;
    int hits = 0;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        if (judg.is_relevant(ranking.entries[i].id)) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(n_rel);
}

std::optional<double> r_precision(const RankedList& ranking, const RelevanceJudgments& judg) {
    const int n_rel = judg.n_relevant();
    if (n_rel == 0) return std::nullopt;
    return p_at_k(ranking, judg, n_rel);
}

double reciprocal_rank(const RankedList& ranking, const RelevanceJudgments& judg) {
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        if (judg.is_relevant(ranking.entries[i].id))
            return 1.0 / static_cast<double>(i + 1);
    }
    return 0.0;
}

std::optional<double> ndcg_at_k(const RankedList& ranking, const RelevanceJudgments& judg,
                                int k) {
    if (k < 1) throw Error("ndcg_at_k: k must be >= 1");
    std::vector<int> all_grades;
    all_grades.reserve(judg.grades.size());
    for (const auto& [id, g] : judg.grades)
        if (g > 0) all_grades.push_back(g);
    if (all_grades.empty()) return std::nullopt;

    double dcg = 0.0;
    for (std::size_t i = 0; i < ranking.entries.size() && i < static_cast<std::size_t>(k); ++i) {
        const int g = judg.grade_of(ranking.entries[i].id);
        dcg += (std::exp2(g) - 1.0) / std::log2(static_cast<double>(i + 2));
    }
    std::sort(all_grades.begin(), all_grades.end(), std::greater<int>());
    double ideal = 0.0;
    for (std::size_t i = 0; i < all_grades.size() && i < static_cast<std::size_t>(k); ++i)
        ideal += (std::exp2(all_grades[i]) - 1.0) / std::log2(static_cast<double>(i + 2));
    return dcg / ideal;
}

std::optional<double> f1_top10(const RankedList& system, const RankedList& truth) {
    if (truth.entries.empty() || system.entries.empty()) return std::nullopt;
    const std::size_t k = std::min<std::size_t>(10, truth.entries.size());
    const std::vector<std::string> sys_top = system.top_ids(k);
    const std::vector<std::string> truth_top = truth.top_ids(k);
    std::unordered_set<std::string> truth_set(truth_top.begin(), truth_top.end());
    int overlap = 0;
    for (const std::string& id : sys_top) overlap += truth_set.count(id);
    const double p = static_cast<double>(overlap) / static_cast<double>(sys_top.size());
    const double r = static_cast<double>(overlap) / static_cast<double>(truth_top.size());
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

MeanResult mean_over_queries(const std::vector<std::optional<double>>& per_query) {
    MeanResult res;
    double sum = 0.0;
    for (const auto& v : per_query) {
        if (v) {
            sum += *v;
            ++res.n_defined;
        } else {
            ++res.n_dropped;
        }
    }
    if (res.n_defined > 0) res.mean = sum / res.n_defined;
    return res;
}

}  // namespace newsrank

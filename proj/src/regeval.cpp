#include "newsrank/regeval.hpp"

#include "newsrank/error.hpp"

namespace newsrank {

RegScores utility_prf(const std::vector<double>& y_true, const std::vector<double>& y_pred,
                      const RelevanceFn& rel) {
    if (y_true.size() != y_pred.size())
        throw Error("utility_prf: y_true and y_pred lengths differ");
    if (y_true.empty()) throw Error("utility_prf: empty input");

    int both = 0, true_rare = 0, pred_rare = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool t = rel.is_rare(y_true[i]);
        const bool p = rel.is_rare(y_pred[i]);
        true_rare += t;
        pred_rare += p;
        both += t && p;
    }

    RegScores s;
    s.n_rare_true = true_rare;
    s.n_rare_pred = pred_rare;
    if (pred_rare > 0) s.precision = static_cast<double>(both) / pred_rare;
    if (true_rare > 0) s.recall = static_cast<double>(both) / true_rare;
    if (s.precision && s.recall) {
        const double pr = *s.precision + *s.recall;
        s.f1 = pr > 0 ? 2.0 * *s.precision * *s.recall / pr : 0.0;
    }
    return s;
}

}  // namespace newsrank

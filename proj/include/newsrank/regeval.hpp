#pragma once

#include <optional>
#include <vector>

#include "newsrank/relevance.hpp"

namespace newsrank {

// Event-thresholded precision/recall/F1 over rare cases. A metric is absent
// (nullopt) when its denominator is empty; F1 is absent when either
// component is, and 0 when P + R == 0.
struct RegScores {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    int n_rare_true = 0;
    int n_rare_pred = 0;
};

RegScores utility_prf(const std::vector<double>& y_true, const std::vector<double>& y_pred,
                      const RelevanceFn& rel);

}  // namespace newsrank

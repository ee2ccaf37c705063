#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "newsrank/features.hpp"
#include "newsrank/relevance.hpp"

namespace newsrank {

enum class ResampleStrategy { NONE, SMOTER, UNDER };

const char* strategy_name(ResampleStrategy s);
ResampleStrategy strategy_from_name(const std::string& name);

struct ResampleParams {
    ResampleStrategy strategy = ResampleStrategy::SMOTER;
    double over_pct = 2.0;     // synthetic cases per rare case (SMOTER)
    double under_ratio = 1.0;  // retained normal cases per (possibly oversampled) rare case
    int k_neighbors = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

// One SMOTEr interpolation step, exposed for direct testing. x_new lies at
// fraction u along the segment seed -> neighbor; y_new is the average of the
// endpoint targets weighted by inverse distance from x_new (endpoint value
// when one distance is zero, plain mean when both are).
std::pair<std::vector<double>, double> interpolate_case(std::span<const double> x_seed,
                                                        double y_seed,
                                                        std::span<const double> x_neighbor,
                                                        double y_neighbor, double u);

// All rare cases, plus floor(over_pct * |D_r|) synthetic rare cases built by
// interpolating between k-nearest rare neighbours (Euclidean distance on
// z-standardized features), plus under_ratio * |D_r| * (1 + over_pct) normal
// cases sampled without replacement. Deterministic for a fixed seed.
Dataset smoter(const Dataset& dataset, const RelevanceFn& rel, const ResampleParams& params);

// All rare cases plus min(|D_i|, floor(under_ratio * |D_r|)) normal cases
// sampled without replacement. Deterministic for a fixed seed.
Dataset undersample(const Dataset& dataset, const RelevanceFn& rel, const ResampleParams& params);

// Dispatch on params.strategy; NONE returns the dataset unchanged.
Dataset resample(const Dataset& dataset, const RelevanceFn& rel, const ResampleParams& params);

}  // namespace newsrank

#pragma once

#include <utility>
#include <vector>

#include "newsrank/features.hpp"

namespace newsrank {

// Monotone map from target values to [0, 1]; values at or above the
// threshold are the "rare" cases the evaluation cares about. Piecewise
// cubic Hermite between control points, flat (slope 0) at each point,
// clamped to the first/last value outside the covered range.
class RelevanceFn {
public:
    struct ControlPoint {
        double y;
        double phi;
        double slope;
    };

    // Points must be strictly increasing in y, non-decreasing in phi,
    // start at phi = 0 and end at phi = 1.
    static RelevanceFn from_points(const std::vector<std::pair<double, double>>& points,
                                   double threshold = 0.9);

    double operator()(double y) const;
    double threshold() const { return threshold_; }
    bool is_rare(double y) const { return (*this)(y) >= threshold_; }
    const std::vector<ControlPoint>& control_points() const { return points_; }

private:
    RelevanceFn(std::vector<ControlPoint> points, double threshold)
        : points_(std::move(points)), threshold_(threshold) {}

    std::vector<ControlPoint> points_;
    double threshold_ = 0.9;
};

// Box-plot construction: phi = 0 at the median, phi = 1 at Q3 + 1.5 IQR
// (quantiles by linear interpolation). Requires at least 4 values and a
// nonzero IQR; pass explicit control points otherwise.
RelevanceFn build_relevance(const std::vector<double>& y_train, double threshold = 0.9);

// (D_r, D_i): rows whose target is rare under rel, and the rest. Row order
// within each part preserves the input order.
std::pair<Dataset, Dataset> partition(const Dataset& dataset, const RelevanceFn& rel);

}  // namespace newsrank

#include "newsrank/relevance.hpp"

#include <algorithm>
#include <cmath>

#include "newsrank/error.hpp"

namespace newsrank {

RelevanceFn RelevanceFn::from_points(const std::vector<std::pair<double, double>>& points,
                                     double threshold) {
    if (points.size() < 2) throw ValidationError("relevance needs at least 2 control points");
    if (threshold <= 0.0 || threshold >= 1.0)
        throw ValidationError("relevance threshold must be in (0, 1)");
    std::vector<ControlPoint> cps;
    cps.reserve(points.size());
    for (const auto& [y, phi] : points) {
        if (!cps.empty()) {
            if (y <= cps.back().y)
                throw ValidationError("relevance control points must be strictly increasing in y");
            if (phi < cps.back().phi)
                throw ValidationError("relevance control points must be non-decreasing in phi");
        }
        if (phi < 0.0 || phi > 1.0)
            throw ValidationError("relevance control phi out of [0, 1]");
        cps.push_back({y, phi, 0.0});
    }
    if (cps.front().phi != 0.0 || cps.back().phi != 1.0)
        throw ValidationError("relevance control points must start at phi=0 and end at phi=1");
    return RelevanceFn(std::move(cps), threshold);
}

double RelevanceFn::operator()(double y) const {
    if (y <= points_.front().y) return points_.front().phi;
    if (y >= points_.back().y) return points_.back().phi;
    // find the segment containing y
    std::size_t hi = 1;
    while (points_[hi].y < y) ++hi;
    const ControlPoint& a = points_[hi - 1];
    const ControlPoint& b = points_[hi];
    const double h = b.y - a.y;
    const double s = (y - a.y) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    // cubic Hermite basis
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    const double v = h00 * a.phi + h10 * h * a.slope + h01 * b.phi + h11 * h * b.slope;
    return std::clamp(v, 0.0, 1.0);
}

namespace {

// Linear-interpolation quantile (R type 7) on a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

RelevanceFn build_relevance(const std::vector<double>& y_train, double threshold) {
    if (y_train.size() < 4)
        throw ValidationError("build_relevance: need at least 4 target values");
    std::vector<double> sorted(y_train);
    std::sort(sorted.begin(), sorted.end());
    const double median = quantile_sorted(sorted, 0.5);
    const double q1 = quantile_sorted(sorted, 0.25);
    const double q3 = quantile_sorted(sorted, 0.75);
    const double iqr = q3 - q1;
    if (iqr <= 0.0)
        throw ValidationError(
            "build_relevance: zero IQR; provide explicit control points instead");
    const double upper = q3 + 1.5 * iqr;
    return RelevanceFn::from_points({{median, 0.0}, {upper, 1.0}}, threshold);
}

std::pair<Dataset, Dataset> partition(const Dataset& dataset, const RelevanceFn& rel) {
    Dataset rare, normal;
    for (Dataset* part : {&rare, &normal}) {
        part->feature_names = dataset.feature_names;
        part->n_cols = dataset.n_cols;
    }
    for (std::size_t r = 0; r < dataset.n_rows; ++r) {
        Dataset& dst = rel.is_rare(dataset.y[r]) ? rare : normal;
        const auto row = dataset.row(r);
        dst.x.insert(dst.x.end(), row.begin(), row.end());
        dst.y.push_back(dataset.y[r]);
        dst.ids.push_back(dataset.ids[r]);
        ++dst.n_rows;
    }
    return {std::move(rare), std::move(normal)};
}

}  // namespace newsrank

#include "newsrank/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "newsrank/error.hpp"
#include "newsrank/rng.hpp"

namespace newsrank {

const char* strategy_name(ResampleStrategy s) {
    switch (s) {
        case ResampleStrategy::NONE: return "none";
        case ResampleStrategy::SMOTER: return "smoter";
        case ResampleStrategy::UNDER: return "under";
    }
    return "?";
}

ResampleStrategy strategy_from_name(const std::string& name) {
    if (name == "none") return ResampleStrategy::NONE;
    if (name == "smoter") return ResampleStrategy::SMOTER;
    if (name == "under") return ResampleStrategy::UNDER;
    throw ValidationError("unknown resample strategy '" + name + "'");
}

void ResampleParams::validate() const {
    if (over_pct < 0) throw ValidationError("over_pct must be >= 0");
    if (under_ratio <= 0) throw ValidationError("under_ratio must be > 0");
    if (k_neighbors < 1) throw ValidationError("k_neighbors must be >= 1");
}

namespace {

void append_row(Dataset& dst, std::span<const double> row, double y, std::string id) {
    dst.x.insert(dst.x.end(), row.begin(), row.end());
    dst.y.push_back(y);
    dst.ids.push_back(std::move(id));
    ++dst.n_rows;
}

Dataset empty_like(const Dataset& src) {
    Dataset d;
    d.feature_names = src.feature_names;
    d.n_cols = src.n_cols;
    return d;
}

// Column means and standard deviations of the whole input dataset, used to
// put count-scale tf columns and sentiment columns on one distance scale.
struct Standardizer {
    std::vector<double> mean, stddev;

    explicit Standardizer(const Dataset& d) : mean(d.n_cols, 0.0), stddev(d.n_cols, 0.0) {
        for (std::size_t r = 0; r < d.n_rows; ++r) {
            for (std::size_t c = 0; c < d.n_cols; ++c) mean[c] += d.at(r, c);
        }
        for (double& m : mean) m /= static_cast<double>(d.n_rows);
        for (std::size_t r = 0; r < d.n_rows; ++r) {
            for (std::size_t c = 0; c < d.n_cols; ++c) {
                const double dev = d.at(r, c) - mean[c];
                stddev[c] += dev * dev;
            }
        }
        for (double& s : stddev) {
            s = std::sqrt(s / static_cast<double>(d.n_rows));
            if (s == 0.0) s = 1.0;  // constant column: distance contribution 0 either way
        }
    }

    double dist(std::span<const double> a, std::span<const double> b) const {
        double sum = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) {
            const double dv = (a[c] - b[c]) / stddev[c];
            sum += dv * dv;
        }
        return std::sqrt(sum);
    }
};

std::vector<std::size_t> sample_rows(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> picked = rng.sample_indices(n, k);
    std::sort(picked.begin(), picked.end());  // keep input order in the output
    return picked;
}

}  // namespace

std::pair<std::vector<double>, double> interpolate_case(std::span<const double> x_seed,
                                                        double y_seed,
                                                        std::span<const double> x_neighbor,
                                                        double y_neighbor, double u) {
    std::vector<double> x_new(x_seed.size());
    for (std::size_t c = 0; c < x_seed.size(); ++c)
        x_new[c] = x_seed[c] + u * (x_neighbor[c] - x_seed[c]);

    auto euclid = [](std::span<const double> a, std::span<const double> b) {
        double sum = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) {
            const double dv = a[c] - b[c];
            sum += dv * dv;
        }
        return std::sqrt(sum);
    };
    const double d_seed = euclid(x_new, x_seed);
    const double d_neighbor = euclid(x_new, x_neighbor);

    double y_new;
    if (d_seed == 0.0 && d_neighbor == 0.0) {
        y_new = 0.5 * (y_seed + y_neighbor);
    } else if (d_seed == 0.0) {
        y_new = y_seed;
    } else if (d_neighbor == 0.0) {
        y_new = y_neighbor;
    } else {
        const double w_seed = 1.0 / d_seed;
        const double w_neighbor = 1.0 / d_neighbor;
        y_new = (w_seed * y_seed + w_neighbor * y_neighbor) / (w_seed + w_neighbor);
    }
    return {std::move(x_new), y_new};
}

Dataset smoter(const Dataset& dataset, const RelevanceFn& rel, const ResampleParams& params) {
    params.validate();
    if (dataset.n_rows == 0) throw Error("smoter: empty dataset");
    auto [rare, normal] = partition(dataset, rel);
    if (rare.n_rows < 2) throw Error("smoter: insufficient rare cases (" +
                                     std::to_string(rare.n_rows) + " < 2)");
    if (static_cast<std::size_t>(params.k_neighbors) > rare.n_rows - 1)
        throw Error("smoter: k_neighbors=" + std::to_string(params.k_neighbors) +
                    " but only " + std::to_string(rare.n_rows - 1) + " rare neighbours exist");

    const Standardizer std_stats(dataset);

    // k nearest rare neighbours per rare case; ties resolved by row index.
    const std::size_t k = static_cast<std::size_t>(params.k_neighbors);
    std::vector<std::vector<std::size_t>> neighbors(rare.n_rows);
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < rare.n_rows; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < rare.n_rows; ++j) {
            if (j == i) continue;
            cand.emplace_back(std_stats.dist(rare.row(i), rare.row(j)), j);
        }
        std::sort(cand.begin(), cand.end());
        neighbors[i].reserve(k);
        for (std::size_t m = 0; m < k; ++m) neighbors[i].push_back(cand[m].second);
    }

    Rng rng = Rng::derive(params.seed, 0x5307E);
    Dataset out = empty_like(dataset);
    for (std::size_t i = 0; i < rare.n_rows; ++i)
        append_row(out, rare.row(i), rare.y[i], rare.ids[i]);

    const std::size_t n_synth =
        static_cast<std::size_t>(params.over_pct * static_cast<double>(rare.n_rows));
    for (std::size_t s = 0; s < n_synth; ++s) {
        const std::size_t seed_idx = s % rare.n_rows;  // round-robin over rare cases
        const std::size_t nb_idx = neighbors[seed_idx][rng.below(k)];
        const double u = rng.next_unit();
        auto [x_new, y_new] = interpolate_case(rare.row(seed_idx), rare.y[seed_idx],
                                               rare.row(nb_idx), rare.y[nb_idx], u);
        append_row(out, x_new, y_new, "synth-" + std::to_string(s));
    }

    std::size_t n_normal = static_cast<std::size_t>(
        params.under_ratio * static_cast<double>(rare.n_rows) * (1.0 + params.over_pct));
    n_normal = std::min(n_normal, normal.n_rows);
    for (std::size_t i : sample_rows(rng, normal.n_rows, n_normal))
        append_row(out, normal.row(i), normal.y[i], normal.ids[i]);
    return out;
}

Dataset undersample(const Dataset& dataset, const RelevanceFn& rel,
                    const ResampleParams& params) {
    params.validate();
    if (dataset.n_rows == 0) throw Error("undersample: empty dataset");
    auto [rare, normal] = partition(dataset, rel);
    if (rare.n_rows == 0) throw Error("undersample: no rare cases in dataset");

    Rng rng = Rng::derive(params.seed, 0x0DE2);
    Dataset out = empty_like(dataset);
    for (std::size_t i = 0; i < rare.n_rows; ++i)
        append_row(out, rare.row(i), rare.y[i], rare.ids[i]);

    std::size_t n_normal =
        static_cast<std::size_t>(params.under_ratio * static_cast<double>(rare.n_rows));
    n_normal = std::min(n_normal, normal.n_rows);
    for (std::size_t i : sample_rows(rng, normal.n_rows, n_normal))
        append_row(out, normal.row(i), normal.y[i], normal.ids[i]);
    return out;
}

Dataset resample(const Dataset& dataset, const RelevanceFn& rel, const ResampleParams& params) {
    switch (params.strategy) {
        case ResampleStrategy::NONE: return dataset;
        case ResampleStrategy::SMOTER: return smoter(dataset, rel, params);
        case ResampleStrategy::UNDER: return undersample(dataset, rel, params);
    }
    throw Error("resample: bad strategy");
}

}  // namespace newsrank

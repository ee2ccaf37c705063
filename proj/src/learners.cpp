#include "newsrank/learners.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "newsrank/error.hpp"
#include "newsrank/rng.hpp"

namespace newsrank {

const char* learner_name(LearnerKind kind) {
    return kind == LearnerKind::LINEAR ? "lm" : "rf";
}

LearnerKind learner_from_name(const std::string& name) {
    if (name == "lm" || name == "linear") return LearnerKind::LINEAR;
    if (name == "rf" || name == "random_forest") return LearnerKind::RANDOM_FOREST;
    throw ValidationError("unknown learner '" + name + "'");
}

LearnerSpec LearnerSpec::linear(std::uint64_t seed) {
    LearnerSpec s;
    s.kind = LearnerKind::LINEAR;
    s.seed = seed;
    return s;
}

LearnerSpec LearnerSpec::random_forest(std::uint64_t seed) {
    LearnerSpec s;
    s.kind = LearnerKind::RANDOM_FOREST;
    s.seed = seed;
    return s;
}

void LearnerSpec::validate() const {
    if (kind == LearnerKind::LINEAR) {
        if (ridge_lambda < 0) throw ValidationError("ridge_lambda must be >= 0");
    } else {
        if (n_trees < 1) throw ValidationError("n_trees must be >= 1");
        if (mtry < 0) throw ValidationError("mtry must be >= 0");
        if (min_leaf < 1) throw ValidationError("min_leaf must be >= 1");
    }
}

namespace {

// Rows reordered to the canonical (id, index) order so every RNG-driven
// choice below is invariant to ingestion order.
struct CanonicalData {
    std::vector<double> x;  // row-major
    std::vector<double> y;
    std::size_t n = 0, p = 0;

    explicit CanonicalData(const Dataset& d) : n(d.n_rows), p(d.n_cols) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (d.ids[a] != d.ids[b]) return d.ids[a] < d.ids[b];
            return a < b;
        });
        x.resize(n * p);
        y.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = d.row(order[r]);
            std::copy(row.begin(), row.end(), x.begin() + static_cast<std::ptrdiff_t>(r * p));
            y[r] = d.y[order[r]];
        }
    }

    double at(std::size_t r, std::size_t c) const { return x[r * p + c]; }
};

// Forest construction on presorted feature orders. Bootstrap resampling is
// expressed as integer row weights, so the per-feature sorted orders are
// computed once per fit and only filtered per tree.
class ForestBuilder {
public:
    ForestBuilder(const CanonicalData& data, const LearnerSpec& spec)
        : d_(data), spec_(spec), mtry_(spec.mtry > 0 ? spec.mtry
                                                     : static_cast<int>((data.p + 2) / 3)) {
        mtry_ = std::min<int>(mtry_, static_cast<int>(d_.p));
        global_order_.resize(d_.p);
        for (std::size_t f = 0; f < d_.p; ++f) {
            std::vector<int>& ord = global_order_[f];
            ord.resize(d_.n);
            std::iota(ord.begin(), ord.end(), 0);
            std::sort(ord.begin(), ord.end(), [&](int a, int b) {
                const double xa = d_.at(static_cast<std::size_t>(a), f);
                const double xb = d_.at(static_cast<std::size_t>(b), f);
                if (xa != xb) return xa < xb;
                return a < b;
            });
        }
    }

    Model::Tree build_tree(Rng& rng) const {
        const std::size_t n = d_.n;
        std::vector<std::int64_t> w(n, 1);
        if (spec_.bootstrap) {
            std::fill(w.begin(), w.end(), 0);
            for (std::size_t i = 0; i < n; ++i) ++w[rng.below(n)];
        }

        // In-bag rows in per-feature sorted order.
        std::vector<std::vector<int>> buf(d_.p);
        std::size_t m = 0;
        for (std::size_t f = 0; f < d_.p; ++f) {
            buf[f].reserve(n);
            for (int r : global_order_[f]) {
                if (w[static_cast<std::size_t>(r)] > 0) buf[f].push_back(r);
            }
        }
        m = buf[0].size();

        Model::Tree tree;
        tree.push_back({});
        struct Pending {
            std::size_t start, end;
            int node;
        };
        std::vector<Pending> queue;
        queue.push_back({0, m, 0});
        std::vector<int> scratch(m);
        std::vector<std::uint8_t> side(n);

        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const auto [start, end, node_id] = queue[qi];
            std::int64_t total_w = 0;
            double total_s = 0.0;
            double y_min = 0.0, y_max = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const int r = buf[0][i];
                const double yv = d_.y[static_cast<std::size_t>(r)];
                const std::int64_t wr = w[static_cast<std::size_t>(r)];
                total_w += wr;
                total_s += static_cast<double>(wr) * yv;
                if (i == start) {
                    y_min = y_max = yv;
                } else {
                    y_min = std::min(y_min, yv);
                    y_max = std::max(y_max, yv);
                }
            }
            const double node_mean = total_s / static_cast<double>(total_w);
            if (total_w < 2 * spec_.min_leaf || y_min == y_max) {
                tree[static_cast<std::size_t>(node_id)] = {-1, 0.0, -1, -1, node_mean};
                continue;
            }

            // Split search over a fresh feature subsample, indices ascending
            // so ties resolve to the lowest feature and threshold.
            std::vector<std::size_t> feats = rng.sample_indices(d_.p, static_cast<std::size_t>(mtry_));
            std::sort(feats.begin(), feats.end());

            const double base = total_s * total_s / static_cast<double>(total_w);
            double best_score = base;
            int best_feature = -1;
            double best_threshold = 0.0;
            for (std::size_t f : feats) {
                const std::vector<int>& ord = buf[f];
                std::int64_t lw = 0;
                double ls = 0.0;
                for (std::size_t i = start; i + 1 < end; ++i) {
                    const int r = ord[i];
                    const std::int64_t wr = w[static_cast<std::size_t>(r)];
                    lw += wr;
                    ls += static_cast<double>(wr) * d_.y[static_cast<std::size_t>(r)];
                    const double xv = d_.at(static_cast<std::size_t>(r), f);
                    const double xn = d_.at(static_cast<std::size_t>(ord[i + 1]), f);
                    if (xv == xn) continue;
                    if (lw < spec_.min_leaf || total_w - lw < spec_.min_leaf) continue;
                    const double rs = total_s - ls;
                    const double score = ls * ls / static_cast<double>(lw) +
                                         rs * rs / static_cast<double>(total_w - lw);
                    if (score > best_score) {
                        best_score = score;
                        best_feature = static_cast<int>(f);
                        best_threshold = 0.5 * (xv + xn);
                    }
                }
            }

            if (best_feature < 0) {
                tree[static_cast<std::size_t>(node_id)] = {-1, 0.0, -1, -1, node_mean};
                continue;
            }

            // Stable-partition every feature order by the chosen side.
            std::size_t n_left = 0;
            for (std::size_t i = start; i < end; ++i) {
                const int r = buf[0][i];
                const bool left =
                    d_.at(static_cast<std::size_t>(r), static_cast<std::size_t>(best_feature)) <=
                    best_threshold;
                side[static_cast<std::size_t>(r)] = left ? 1 : 0;
                if (left) ++n_left;
            }
            for (std::size_t f = 0; f < d_.p; ++f) {
                std::vector<int>& ord = buf[f];
                std::size_t li = 0, ri = 0;
                const std::size_t len = end - start;
                for (std::size_t i = start; i < end; ++i) {
                    const int r = ord[i];
                    if (side[static_cast<std::size_t>(r)]) {
                        scratch[li++] = r;
                    } else {
                        scratch[n_left + ri++] = r;
                    }
                }
                std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(len),
                          ord.begin() + static_cast<std::ptrdiff_t>(start));
            }

            const int left_id = static_cast<int>(tree.size());
            tree.push_back({});
            const int right_id = static_cast<int>(tree.size());
            tree.push_back({});
            tree[static_cast<std::size_t>(node_id)] = {best_feature, best_threshold, left_id,
                                                       right_id, 0.0};
            queue.push_back({start, start + n_left, left_id});
            queue.push_back({start + n_left, end, right_id});
        }
        return tree;
    }

private:
    const CanonicalData& d_;
    const LearnerSpec& spec_;
    int mtry_;
    std::vector<std::vector<int>> global_order_;
};

}  // namespace

Model fit(const LearnerSpec& spec, const Dataset& train) {
    spec.validate();
    if (train.n_rows == 0) throw Error("fit: empty training set");
    const double y0 = train.y[0];
    if (std::all_of(train.y.begin(), train.y.end(), [&](double v) { return v == y0; }))
        throw Error("fit: constant target; nothing to learn");

    const CanonicalData data(train);
    Model model;
    model.spec_ = spec;
    model.feature_names_ = train.feature_names;

    if (spec.kind == LearnerKind::LINEAR) {
        const std::size_t n = data.n, p = data.p;
        model.mean_.assign(p, 0.0);
        model.stddev_.assign(p, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < p; ++c) model.mean_[c] += data.at(r, c);
        for (double& v : model.mean_) v /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < p; ++c) {
                const double dv = data.at(r, c) - model.mean_[c];
                model.stddev_[c] += dv * dv;
            }
        for (double& v : model.stddev_) {
            v = std::sqrt(v / static_cast<double>(n));
            if (v == 0.0) v = 1.0;  // constant column; its coefficient comes out 0
        }
        model.y_mean_ = std::accumulate(data.y.begin(), data.y.end(), 0.0) /
                        static_cast<double>(n);

        Eigen::MatrixXd z(n, p);
        Eigen::VectorXd yc(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < p; ++c)
                z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    (data.at(r, c) - model.mean_[c]) / model.stddev_[c];
            yc(static_cast<Eigen::Index>(r)) = data.y[r] - model.y_mean_;
        }
        Eigen::MatrixXd gram = z.transpose() * z;
        gram.diagonal().array() += spec.ridge_lambda;
        const Eigen::VectorXd beta = gram.ldlt().solve(z.transpose() * yc);
        model.beta_.assign(beta.data(), beta.data() + p);
        return model;
    }

    const ForestBuilder builder(data, spec);
    model.trees_.reserve(static_cast<std::size_t>(spec.n_trees));
    for (int t = 0; t < spec.n_trees; ++t) {
        Rng rng = Rng::derive(spec.seed, static_cast<std::uint64_t>(t) + 0xF03E57);
        model.trees_.push_back(builder.build_tree(rng));
    }
    return model;
}

double Model::predict_row(const double* row) const {
    if (spec_.kind == LearnerKind::LINEAR) {
        double v = y_mean_;
        for (std::size_t c = 0; c < beta_.size(); ++c)
            v += beta_[c] * (row[c] - mean_[c]) / stddev_[c];
        return std::max(0.0, v);
    }
    double sum = 0.0;
    for (const Tree& tree : trees_) {
        int node = 0;
        while (tree[static_cast<std::size_t>(node)].feature >= 0) {
            const TreeNode& nd = tree[static_cast<std::size_t>(node)];
            node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        sum += tree[static_cast<std::size_t>(node)].value;
    }
    return std::max(0.0, sum / static_cast<double>(trees_.size()));
}

std::vector<double> Model::predict(const FeatureMatrix& rows) const {
    if (rows.feature_names != feature_names_) {
        std::set<std::string> trained(feature_names_.begin(), feature_names_.end());
        std::set<std::string> given(rows.feature_names.begin(), rows.feature_names.end());
        std::string missing, extra;
        for (const std::string& f : trained)
            if (!given.count(f)) missing += (missing.empty() ? "" : ", ") + f;
        for (const std::string& f : given)
            if (!trained.count(f)) extra += (extra.empty() ? "" : ", ") + f;
        std::string msg = "predict: feature schema mismatch";
        if (!missing.empty()) msg += "; missing: " + missing;
        if (!extra.empty()) msg += "; extra: " + extra;
        if (missing.empty() && extra.empty()) msg += "; feature order differs";
        throw Error(msg);
    }
    std::vector<double> out;
    out.reserve(rows.n_rows);
    for (std::size_t r = 0; r < rows.n_rows; ++r)
        out.push_back(predict_row(rows.x.data() + r * rows.n_cols));
    return out;
}

std::vector<double> Model::coefficients() const {
    if (spec_.kind != LearnerKind::LINEAR) throw Error("coefficients: not a linear model");
    std::vector<double> coef(beta_.size());
    for (std::size_t c = 0; c < beta_.size(); ++c) coef[c] = beta_[c] / stddev_[c];
    return coef;
}

double Model::intercept() const {
    if (spec_.kind != LearnerKind::LINEAR) throw Error("intercept: not a linear model");
    double v = y_mean_;
    for (std::size_t c = 0; c < beta_.size(); ++c)
        v -= beta_[c] * mean_[c] / stddev_[c];
    return v;
}

nlohmann::ordered_json Model::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "newsrank.model";
    j["version"] = 1;
    j["kind"] = learner_name(spec_.kind);
    j["seed"] = spec_.seed;
    j["feature_names"] = feature_names_;
    if (spec_.kind == LearnerKind::LINEAR) {
        j["ridge_lambda"] = spec_.ridge_lambda;
        j["mean"] = mean_;
        j["stddev"] = stddev_;
        j["beta"] = beta_;
        j["y_mean"] = y_mean_;
    } else {
        j["n_trees"] = spec_.n_trees;
        j["mtry"] = spec_.mtry;
        j["min_leaf"] = spec_.min_leaf;
        j["bootstrap"] = spec_.bootstrap;
        nlohmann::ordered_json trees = nlohmann::ordered_json::array();
        for (const Tree& tree : trees_) {
            nlohmann::ordered_json t;
            std::vector<int> feature, left, right;
            std::vector<double> threshold, value;
            for (const TreeNode& nd : tree) {
                feature.push_back(nd.feature);
                threshold.push_back(nd.threshold);
                left.push_back(nd.left);
                right.push_back(nd.right);
                value.push_back(nd.value);
            }
            t["feature"] = feature;
            t["threshold"] = threshold;
            t["left"] = left;
            t["right"] = right;
            t["value"] = value;
            trees.push_back(std::move(t));
        }
        j["trees"] = std::move(trees);
    }
    return j;
}

Model Model::from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j["format"] != "newsrank.model")
        throw ValidationError("not a newsrank model file");
    if (j.value("version", 0) != 1)
        throw ValidationError("unsupported model version");
    Model m;
    m.spec_.kind = learner_from_name(j.at("kind").get<std::string>());
    m.spec_.seed = j.at("seed").get<std::uint64_t>();
    m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
    if (m.spec_.kind == LearnerKind::LINEAR) {
        m.spec_.ridge_lambda = j.at("ridge_lambda").get<double>();
        m.mean_ = j.at("mean").get<std::vector<double>>();
        m.stddev_ = j.at("stddev").get<std::vector<double>>();
        m.beta_ = j.at("beta").get<std::vector<double>>();
        m.y_mean_ = j.at("y_mean").get<double>();
        if (m.mean_.size() != m.feature_names_.size() || m.stddev_.size() != m.mean_.size() ||
            m.beta_.size() != m.mean_.size())
            throw ValidationError("model file: inconsistent linear state");
    } else {
        m.spec_.n_trees = j.at("n_trees").get<int>();
        m.spec_.mtry = j.at("mtry").get<int>();
        m.spec_.min_leaf = j.at("min_leaf").get<int>();
        m.spec_.bootstrap = j.at("bootstrap").get<bool>();
        for (const auto& t : j.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<int>>();
            const auto right = t.at("right").get<std::vector<int>>();
            const auto value = t.at("value").get<std::vector<double>>();
            if (feature.size() != threshold.size() || feature.size() != left.size() ||
                feature.size() != right.size() || feature.size() != value.size())
                throw ValidationError("model file: inconsistent tree arrays");
            Tree tree(feature.size());
            for (std::size_t i = 0; i < tree.size(); ++i)
                tree[i] = {feature[i], threshold[i], left[i], right[i], value[i]};
            m.trees_.push_back(std::move(tree));
        }
        if (m.trees_.empty()) throw ValidationError("model file: forest with no trees");
    }
    return m;
}

void Model::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write model to '" + path + "'");
    out << to_json().dump() << '\n';
}

Model Model::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": malformed model JSON (" + std::string(e.what()) + ")");
    }
    return from_json(j);
}

}  // namespace newsrank

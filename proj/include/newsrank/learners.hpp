#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsrank/features.hpp"

namespace newsrank {

enum class LearnerKind { LINEAR, RANDOM_FOREST };

const char* learner_name(LearnerKind kind);  // "lm" / "rf"
LearnerKind learner_from_name(const std::string& name);

struct LearnerSpec {
    LearnerKind kind = LearnerKind::RANDOM_FOREST;
    std::uint64_t seed = 0;

    // LINEAR: least squares with a small ridge stabilizer on standardized
    // features, so a singular design is never fatal.
    double ridge_lambda = 1e-6;

    // RANDOM_FOREST: bagged variance-reduction regression trees.
    int n_trees = 500;
    int mtry = 0;  // features tried per split; 0 means ceil(p / 3)
    int min_leaf = 5;
    bool bootstrap = true;

    static LearnerSpec linear(std::uint64_t seed = 0);
    static LearnerSpec random_forest(std::uint64_t seed = 0);
    void validate() const;
};

// A fitted model. Immutable; predict is pure and rejects rows whose feature
// schema does not match the one seen at training time.
class Model {
public:
    std::vector<double> predict(const FeatureMatrix& rows) const;

    const LearnerSpec& spec() const { return spec_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    // LINEAR only: slope per feature on the original scale, and intercept.
    std::vector<double> coefficients() const;
    double intercept() const;

    nlohmann::ordered_json to_json() const;
    static Model from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static Model load(const std::string& path);

    struct TreeNode {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    using Tree = std::vector<TreeNode>;

private:
    friend Model fit(const LearnerSpec&, const Dataset&);
    Model() = default;

    LearnerSpec spec_;
    std::vector<std::string> feature_names_;

    // linear state
    std::vector<double> mean_, stddev_, beta_;
    double y_mean_ = 0.0;

    // forest state
    std::vector<Tree> trees_;

    double predict_row(const double* row) const;
};

// Training requires at least two distinct target values. Bootstrap draws are
// made after a canonical sort of the rows by id, so the fitted model does not
// depend on the order rows were ingested in.
Model fit(const LearnerSpec& spec, const Dataset& train);

}  // namespace newsrank

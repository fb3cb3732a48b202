#pragma once

// Per-kind entry points behind fit/predict_proba/to_json.

#include <vector>

#include "sevpred/classifiers.hpp"
#include "sevpred/rng.hpp"

namespace sevpred::detail {

using json = nlohmann::json;

ClassMask present_classes(const Labels& y);
int count_present(const ClassMask& mask);

/// Softmax of `scores` over the present classes; absent classes get 0.
Eigen::Matrix<double, 1, kNumClasses> masked_softmax(const Eigen::Matrix<double, 1, kNumClasses>& scores,
                                                     const ClassMask& present);

json matrix_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// Trees

struct TreeParams {
  int max_depth = 0;  // 0 = unlimited
  int min_samples_split = 2;
  int max_features = 0;  // 0 = all; otherwise a random subset per split
};

/// Weighted Gini CART over the rows with positive weight. Leaves hold the
/// normalized weighted class distribution. `rng` is needed only when
/// max_features restricts the search.
Tree fit_classification_tree(const Matrix& x, const Labels& y, const std::vector<double>& weight,
                             const TreeParams& params, Rng* rng);

/// Squared-error regression tree; leaves hold the mean target in value[0]
/// until the caller overwrites them.
Tree fit_regression_tree(const Matrix& x, const Vector& target, int max_depth);

/// Index of the leaf reached by each row.
std::vector<int> leaf_indices(const Tree& tree, const Matrix& x);

/// Argmax of a leaf's distribution, lowest class on ties.
int leaf_class(const TreeNode& node);

json tree_json(const Tree& tree);
Tree tree_from_json(const json& j);

// Kinds

KnnState fit_knn(const Hyperparameters& hp, const Matrix& x, const Labels& y);
ProbaMatrix proba_knn(const KnnState& s, const Matrix& x);
json knn_json(const KnnState& s);
KnnState knn_from_json(const json& j);

LinearSvmState fit_svm(const Hyperparameters& hp, const Matrix& x, const Labels& y);
ProbaMatrix proba_svm(const LinearSvmState& s, const Matrix& x);
json svm_json(const LinearSvmState& s);
LinearSvmState svm_from_json(const json& j);

NaiveBayesState fit_naive_bayes(const Hyperparameters& hp, const Matrix& x, const Labels& y);
ProbaMatrix proba_naive_bayes(const NaiveBayesState& s, const Matrix& x);
json naive_bayes_json(const NaiveBayesState& s);
NaiveBayesState naive_bayes_from_json(const json& j);

TreeState fit_decision_tree(const Hyperparameters& hp, const Matrix& x, const Labels& y);
ProbaMatrix proba_decision_tree(const TreeState& s, const Matrix& x);

ForestState fit_forest(const Hyperparameters& hp, std::uint64_t seed, const Matrix& x, const Labels& y);
ProbaMatrix proba_forest(const ForestState& s, const Matrix& x);

AdaBoostState fit_adaboost(const Hyperparameters& hp, const Matrix& x, const Labels& y);
ProbaMatrix proba_adaboost(const AdaBoostState& s, const Matrix& x);
json adaboost_json(const AdaBoostState& s);
AdaBoostState adaboost_from_json(const json& j);

GradientBoostingState fit_gbt(const Hyperparameters& hp, const Matrix& x, const Labels& y);
ProbaMatrix proba_gbt(const GradientBoostingState& s, const Matrix& x);
json gbt_json(const GradientBoostingState& s);
GradientBoostingState gbt_from_json(const json& j);

MlpState fit_mlp(const Hyperparameters& hp, std::uint64_t seed, const Matrix& x, const Labels& y);
ProbaMatrix proba_mlp(const MlpState& s, const Matrix& x);
json mlp_json(const MlpState& s);
MlpState mlp_from_json(const json& j);

}  // namespace sevpred::detail

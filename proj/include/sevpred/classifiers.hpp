#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sevpred/metrics.hpp"
#include "sevpred/types.hpp"

namespace sevpred {

enum class ClassifierKind {
  Knn,
  Svm,
  NaiveBayes,
  DecisionTree,
  RandomForest,
  AdaBoost,
  GradientBoostedTrees,
  Mlp,
};

/// Report order.
inline constexpr std::array<ClassifierKind, 8> kAllClassifiers = {
    ClassifierKind::Knn,          ClassifierKind::Svm,          ClassifierKind::NaiveBayes,
    ClassifierKind::DecisionTree, ClassifierKind::RandomForest, ClassifierKind::AdaBoost,
    ClassifierKind::GradientBoostedTrees, ClassifierKind::Mlp};

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view name);

/// Frozen defaults for every kind; each model reads only its own fields.
struct Hyperparameters {
  int knn_k = 5;

  double svm_c = 1.0;
  int svm_epochs = 1000;

  // Added to every variance, scaled by the largest feature variance.
  double nb_var_smoothing = 1e-9;

  int tree_max_depth = 0;  // 0 = unlimited
  int tree_min_samples_split = 2;

  int forest_trees = 100;

  int ada_stages = 50;

  int gbt_rounds = 100;
  int gbt_max_depth = 3;
  double gbt_learning_rate = 0.1;

  int mlp_hidden = 100;
  int mlp_epochs = 200;
  int mlp_batch = 32;
  double mlp_learning_rate = 0.01;
  double mlp_momentum = 0.9;
  double mlp_l2 = 1e-4;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Knn;
  Hyperparameters hp;
  std::uint64_t seed = 0;

  friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

/// The hyperparameters `spec.kind` actually uses, by name.
nlohmann::json hyperparameters_json(const ClassifierSpec& spec);

using ClassMask = std::array<bool, kNumClasses>;

// Fitted state per kind. Exposed so models can be inspected or assembled
// by hand.

struct KnnState {
  Matrix x;
  Labels y;
  int k = 5;
};

struct LinearSvmState {
  Matrix w;    // kNumClasses x (d + 1); last column is the intercept
  ClassMask present{};
};

struct NaiveBayesState {
  Matrix mean;      // kNumClasses x d
  Matrix variance;  // kNumClasses x d, smoothing included
  std::array<double, kNumClasses> log_prior{};
  ClassMask present{};
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  // Class distribution (classification) or value[0] (regression).
  std::array<double, kNumClasses> value{};

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at 0

  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Leaf reached by `row`.
template <typename Derived>
const TreeNode& tree_leaf(const Tree& tree, const Eigen::MatrixBase<Derived>& row) {
  int i = 0;
  while (tree.nodes[i].feature >= 0) {
    const TreeNode& n = tree.nodes[i];
    i = row(n.feature) <= n.threshold ? n.left : n.right;
  }
  return tree.nodes[i];
}

struct TreeState {
  Tree tree;
};

struct ForestState {
  std::vector<Tree> trees;
};

struct AdaBoostState {
  std::vector<Tree> stumps;
  std::vector<double> alpha;
  ClassMask present{};
};

struct GradientBoostingState {
  std::array<double, kNumClasses> init{};
  // rounds[m][c] is the regression tree for class c at round m.
  std::vector<std::array<Tree, kNumClasses>> rounds;
  double learning_rate = 0.1;
  ClassMask present{};
};

struct MlpState {
  Matrix w1;  // d x hidden
  Vector b1;
  Matrix w2;  // hidden x kNumClasses
  Vector b2;
  ClassMask present{};
  std::vector<double> loss_history;  // mean training cross-entropy per epoch
};

using ModelState = std::variant<std::monostate, KnnState, LinearSvmState, NaiveBayesState, TreeState,
                                ForestState, AdaBoostState, GradientBoostingState, MlpState>;

struct TrainedModel {
  ClassifierSpec spec;
  ModelState state;
  Eigen::Index n_features = 0;
  // Scaling fitted on the raw training metrics, when the model was trained
  // from raw rows.
  std::optional<RobustScaler<double>> scaler;
};

/// Train on scaled feature rows. Labels must lie in 0-3.
TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, const Labels& y);

/// Rows of 4 class probabilities summing to 1.
ProbaMatrix predict_proba(const TrainedModel& model, const Matrix& x);

/// Argmax of predict_proba, lowest class index on ties.
Labels predict(const TrainedModel& model, const Matrix& x);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace sevpred

#include <cmath>

#include "detail.hpp"

namespace sevpred::detail {

namespace {

using Row = Eigen::Matrix<double, 1, kNumClasses>;

Row raw_scores(const GradientBoostingState& s, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  Row f;
  for (int c = 0; c < kNumClasses; ++c) f(c) = s.init[c];
  for (const auto& round : s.rounds) {
    for (int c = 0; c < kNumClasses; ++c) {
      if (s.present[c]) f(c) += s.learning_rate * tree_leaf(round[c], x).value[0];
    }
  }
  return f;
}

}  // namespace

// Multinomial deviance boosting: per round and class, a regression tree on
// the residual y_c - p_c with Newton leaf values
//   (K-1)/K * sum(r) / sum(|r| (1 - |r|)).
GradientBoostingState fit_gbt(const Hyperparameters& hp, const Matrix& x, const Labels& y) {
  const Eigen::Index n = x.rows();
  GradientBoostingState s;
  s.present = present_classes(y);
  s.learning_rate = hp.gbt_learning_rate;
  const int k = count_present(s.present);
  for (int c = 0; c < kNumClasses; ++c) {
    const auto count = static_cast<double>((y.array() == c).count());
    s.init[c] = s.present[c] ? std::log(count / static_cast<double>(n)) : 0.0;
  }
  if (k < 2) return s;

  Matrix f(n, kNumClasses);
  for (int c = 0; c < kNumClasses; ++c) f.col(c).setConstant(s.init[c]);
  const double scale = static_cast<double>(k - 1) / k;

  for (int m = 0; m < hp.gbt_rounds; ++m) {
    Matrix p(n, kNumClasses);
    for (Eigen::Index i = 0; i < n; ++i) p.row(i) = masked_softmax(f.row(i), s.present);
    std::array<Tree, kNumClasses> round;
    for (int c = 0; c < kNumClasses; ++c) {
      if (!s.present[c]) continue;
      const Vector residual = (y.array() == c).cast<double>().matrix() - p.col(c);
      Tree tree = fit_regression_tree(x, residual, hp.gbt_max_depth);
      const std::vector<int> leaves = leaf_indices(tree, x);
      std::vector<double> num(tree.nodes.size(), 0.0), den(tree.nodes.size(), 0.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto leaf = static_cast<std::size_t>(leaves[static_cast<std::size_t>(i)]);
        const double r = residual(i);
        num[leaf] += r;
        den[leaf] += std::abs(r) * (1.0 - std::abs(r));
      }
      for (std::size_t l = 0; l < tree.nodes.size(); ++l) {
        if (tree.nodes[l].feature >= 0) continue;
        tree.nodes[l].value[0] = den[l] > 1e-150 ? scale * num[l] / den[l] : 0.0;
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        f(i, c) += s.learning_rate * tree.nodes[static_cast<std::size_t>(leaves[static_cast<std::size_t>(i)])].value[0];
      }
      round[c] = std::move(tree);
    }
    s.rounds.push_back(std::move(round));
  }
  return s;
}

ProbaMatrix proba_gbt(const GradientBoostingState& s, const Matrix& x) {
  ProbaMatrix out(x.rows(), kNumClasses);
  for (Eigen::Index r = 0; r < x.rows(); ++r) out.row(r) = masked_softmax(raw_scores(s, x.row(r)), s.present);
  return out;
}

json gbt_json(const GradientBoostingState& s) {
  json rounds = json::array();
  for (const auto& round : s.rounds) {
    json trees = json::array();
    for (int c = 0; c < kNumClasses; ++c) trees.push_back(s.present[c] ? tree_json(round[c]) : json(nullptr));
    rounds.push_back(trees);
  }
  return {{"init", s.init}, {"learning_rate", s.learning_rate}, {"present", s.present}, {"rounds", rounds}};
}

GradientBoostingState gbt_from_json(const json& j) {
  GradientBoostingState s;
  s.init = j.at("init").get<std::array<double, kNumClasses>>();
  s.learning_rate = j.at("learning_rate");
  s.present = j.at("present").get<ClassMask>();
  for (const auto& round : j.at("rounds")) {
    std::array<Tree, kNumClasses> trees;
    for (int c = 0; c < kNumClasses; ++c) {
      if (s.present[c]) trees[c] = tree_from_json(round.at(c));
    }
    s.rounds.push_back(std::move(trees));
  }
  return s;
}

}  // namespace sevpred::detail

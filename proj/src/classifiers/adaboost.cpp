#include <cmath>

#include "detail.hpp"

namespace sevpred::detail {

// SAMME over K present classes with weighted Gini stumps.
AdaBoostState fit_adaboost(const Hyperparameters& hp, const Matrix& x, const Labels& y) {
  const auto n = static_cast<std::size_t>(x.rows());
  AdaBoostState s;
  s.present = present_classes(y);
  const int k = count_present(s.present);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  TreeParams stump;
  stump.max_depth = 1;

  for (int m = 0; m < hp.ada_stages; ++m) {
    Tree tree = fit_classification_tree(x, y, w, stump, nullptr);
    const std::vector<int> leaves = leaf_indices(tree, x);
    std::vector<bool> miss(n);
    double err = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      miss[i] = leaf_class(tree.nodes[static_cast<std::size_t>(leaves[i])]) != y(static_cast<Eigen::Index>(i));
      if (miss[i]) err += w[i];
      total += w[i];
    }
    err /= total;

    if (err <= 0.0 || k < 2) {
      // A perfect stump settles the ensemble.
      s.stumps.push_back(std::move(tree));
      s.alpha.push_back(1.0);
      break;
    }
    if (err >= 1.0 - 1.0 / k) {
      // No better than chance; keep a first stump so the model is usable.
      if (s.stumps.empty()) {
        s.stumps.push_back(std::move(tree));
        s.alpha.push_back(1.0);
      }
      break;
    }
    const double alpha = std::log((1.0 - err) / err) + std::log(static_cast<double>(k - 1));
    s.stumps.push_back(std::move(tree));
    s.alpha.push_back(alpha);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (miss[i]) w[i] *= std::exp(alpha);
      sum += w[i];
    }
    for (double& v : w) v /= sum;
  }
  return s;
}

ProbaMatrix proba_adaboost(const AdaBoostState& s, const Matrix& x) {
  const int k = count_present(s.present);
  ProbaMatrix out(x.rows(), kNumClasses);
  double alpha_sum = 0.0;
  for (double a : s.alpha) alpha_sum += a;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    // Symmetric SAMME codes: +1 for the voted class, -1/(K-1) elsewhere.
    Eigen::Matrix<double, 1, kNumClasses> decision = Eigen::Matrix<double, 1, kNumClasses>::Zero();
    for (std::size_t m = 0; m < s.stumps.size(); ++m) {
      const int voted = leaf_class(tree_leaf(s.stumps[m], x.row(r)));
      for (int c = 0; c < kNumClasses; ++c) {
        decision(c) += s.alpha[m] * (c == voted ? 1.0 : (k > 1 ? -1.0 / (k - 1) : 0.0));
      }
    }
    decision /= alpha_sum;
    out.row(r) = masked_softmax(k > 1 ? Eigen::Matrix<double, 1, kNumClasses>(decision / (k - 1)) : decision,
                                s.present);
  }
  return out;
}

json adaboost_json(const AdaBoostState& s) {
  json stumps = json::array();
  for (const Tree& t : s.stumps) stumps.push_back(tree_json(t));
  return {{"stumps", stumps}, {"alpha", s.alpha}, {"present", s.present}};
}

AdaBoostState adaboost_from_json(const json& j) {
  AdaBoostState s;
  for (const auto& t : j.at("stumps")) s.stumps.push_back(tree_from_json(t));
  s.alpha = j.at("alpha").get<std::vector<double>>();
  s.present = j.at("present").get<ClassMask>();
  return s;
}

}  // namespace sevpred::detail

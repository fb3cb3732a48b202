#include <cmath>

#include "detail.hpp"

namespace sevpred::detail {

// Each tree sees a bootstrap sample, expressed as per-row draw counts, and
// picks among floor(sqrt(d)) random features per split. All draws come from
// one seeded stream, so resampling is keyed to the training row order.
ForestState fit_forest(const Hyperparameters& hp, std::uint64_t seed, const Matrix& x, const Labels& y) {
  Rng rng = Rng::substream(seed, "random_forest");
  const auto n = static_cast<std::size_t>(x.rows());
  TreeParams p;
  p.max_depth = hp.tree_max_depth;
  p.min_samples_split = hp.tree_min_samples_split;
  p.max_features = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(x.cols())))));
  ForestState s;
  for (int t = 0; t < hp.forest_trees; ++t) {
    std::vector<double> counts(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) counts[rng.below(n)] += 1.0;
    s.trees.push_back(fit_classification_tree(x, y, counts, p, &rng));
  }
  return s;
}

ProbaMatrix proba_forest(const ForestState& s, const Matrix& x) {
  ProbaMatrix out = ProbaMatrix::Zero(x.rows(), kNumClasses);
  for (const Tree& tree : s.trees) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const TreeNode& leaf = tree_leaf(tree, x.row(r));
      for (int c = 0; c < kNumClasses; ++c) out(r, c) += leaf.value[c];
    }
  }
  return out / static_cast<double>(s.trees.size());
}

}  // namespace sevpred::detail

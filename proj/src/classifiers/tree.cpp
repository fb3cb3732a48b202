#include <algorithm>
#include <numeric>

#include "detail.hpp"
#include "sevpred/error.hpp"

namespace sevpred::detail {

namespace {

using Rows = std::vector<Eigen::Index>;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double cost = 0.0;
};

double midpoint(double a, double b) {
  const double m = a + (b - a) / 2.0;
  return m < b ? m : a;  // adjacent doubles
}

void sort_by_feature(const Matrix& x, Rows& rows, int f) {
  std::sort(rows.begin(), rows.end(), [&](Eigen::Index a, Eigen::Index b) {
    return x(a, f) < x(b, f) || (x(a, f) == x(b, f) && a < b);
  });
}

class ClassificationBuilder {
 public:
  ClassificationBuilder(const Matrix& x, const Labels& y, const std::vector<double>& w, const TreeParams& p,
                        Rng* rng)
      : x_(x), y_(y), w_(w), p_(p), rng_(rng) {}

  Tree build(Rows rows) {
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  using Dist = std::array<double, kNumClasses>;

  static double weighted_gini(const Dist& d, double total) {
    // total * gini = total - sum(d_c^2) / total
    double sq = 0.0;
    for (double v : d) sq += v * v;
    return total - sq / total;
  }

  // Best split on one feature, or none when every value is equal.
  void scan(Rows& rows, int f, const Dist& all, double total, Split& best) {
    sort_by_feature(x_, rows, f);
    Dist left{};
    double left_total = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const Eigen::Index r = rows[i];
      left[static_cast<std::size_t>(y_(r))] += w_[static_cast<std::size_t>(r)];
      left_total += w_[static_cast<std::size_t>(r)];
      const double here = x_(r, f);
      const double next = x_(rows[i + 1], f);
      if (!(here < next)) continue;
      Dist right;
      for (int c = 0; c < kNumClasses; ++c) right[c] = all[c] - left[c];
      const double right_total = total - left_total;
      if (left_total <= 0.0 || right_total <= 0.0) continue;
      const double cost = weighted_gini(left, left_total) + weighted_gini(right, right_total);
      if (best.feature < 0 || cost < best.cost) best = {f, midpoint(here, next), cost};
    }
  }

  int grow(Rows& rows, int depth) {
    Dist dist{};
    double total = 0.0;
    for (Eigen::Index r : rows) {
      dist[static_cast<std::size_t>(y_(r))] += w_[static_cast<std::size_t>(r)];
      total += w_[static_cast<std::size_t>(r)];
    }
    const int index = static_cast<int>(tree_.nodes.size());
    TreeNode node;
    for (int c = 0; c < kNumClasses; ++c) node.value[c] = dist[c] / total;
    tree_.nodes.push_back(node);

    int classes = 0;
    for (double v : dist) classes += v > 0.0;
    const bool depth_limited = p_.max_depth > 0 && depth >= p_.max_depth;
    if (classes <= 1 || depth_limited || static_cast<int>(rows.size()) < p_.min_samples_split) return index;

    const int d = static_cast<int>(x_.cols());
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    int budget = d;
    if (p_.max_features > 0 && p_.max_features < d) {
      rng_->shuffle(features);
      budget = p_.max_features;
    }
    Split best;
    for (int k = 0; k < d; ++k) {
      // Past the feature budget, keep drawing only until a split exists.
      if (k >= budget && best.feature >= 0) break;
      scan(rows, features[static_cast<std::size_t>(k)], dist, total, best);
    }
    if (best.feature < 0) return index;

    Rows left, right;
    for (Eigen::Index r : rows) (x_(r, best.feature) <= best.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left, depth + 1);
    const int rr = grow(right, depth + 1);
    TreeNode& n = tree_.nodes[static_cast<std::size_t>(index)];
    n.feature = best.feature;
    n.threshold = best.threshold;
    n.left = l;
    n.right = rr;
    return index;
  }

  const Matrix& x_;
  const Labels& y_;
  const std::vector<double>& w_;
  TreeParams p_;
  Rng* rng_;
  Tree tree_;
};

class RegressionBuilder {
 public:
  RegressionBuilder(const Matrix& x, const Vector& t, int max_depth) : x_(x), t_(t), max_depth_(max_depth) {}

  Tree build(Rows rows) {
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int grow(Rows& rows, int depth) {
    double sum = 0.0;
    double lo = t_(rows.front());
    double hi = lo;
    for (Eigen::Index r : rows) {
      sum += t_(r);
      lo = std::min(lo, t_(r));
      hi = std::max(hi, t_(r));
    }
    const auto n = static_cast<double>(rows.size());
    const int index = static_cast<int>(tree_.nodes.size());
    TreeNode node;
    node.value[0] = sum / n;
    tree_.nodes.push_back(node);
    if (lo == hi || rows.size() < 2 || (max_depth_ > 0 && depth >= max_depth_)) return index;

    // Minimizing squared error = maximizing S_L^2/n_L + S_R^2/n_R.
    Split best;
    for (int f = 0; f < static_cast<int>(x_.cols()); ++f) {
      sort_by_feature(x_, rows, f);
      double left = 0.0;
      for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        left += t_(rows[i]);
        const double here = x_(rows[i], f);
        const double next = x_(rows[i + 1], f);
        if (!(here < next)) continue;
        const auto nl = static_cast<double>(i + 1);
        const double right = sum - left;
        const double score = -(left * left / nl + right * right / (n - nl));
        if (best.feature < 0 || score < best.cost) best = {f, midpoint(here, next), score};
      }
    }
    if (best.feature < 0) return index;

    Rows l, r;
    for (Eigen::Index i : rows) (x_(i, best.feature) <= best.threshold ? l : r).push_back(i);
    const int li = grow(l, depth + 1);
    const int ri = grow(r, depth + 1);
    TreeNode& nd = tree_.nodes[static_cast<std::size_t>(index)];
    nd.feature = best.feature;
    nd.threshold = best.threshold;
    nd.left = li;
    nd.right = ri;
    return index;
  }

  const Matrix& x_;
  const Vector& t_;
  int max_depth_;
  Tree tree_;
};

}  // namespace

Tree fit_classification_tree(const Matrix& x, const Labels& y, const std::vector<double>& weight,
                             const TreeParams& params, Rng* rng) {
  Rows rows;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (weight[static_cast<std::size_t>(i)] > 0.0) rows.push_back(i);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyFit, "tree has no weighted rows");
  return ClassificationBuilder(x, y, weight, params, rng).build(std::move(rows));
}

Tree fit_regression_tree(const Matrix& x, const Vector& target, int max_depth) {
  Rows rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return RegressionBuilder(x, target, max_depth).build(std::move(rows));
}

std::vector<int> leaf_indices(const Tree& tree, const Matrix& x) {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    int i = 0;
    while (tree.nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const TreeNode& n = tree.nodes[static_cast<std::size_t>(i)];
      i = x(r, n.feature) <= n.threshold ? n.left : n.right;
    }
    out[static_cast<std::size_t>(r)] = i;
  }
  return out;
}

int leaf_class(const TreeNode& node) {
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (node.value[c] > node.value[best]) best = c;
  }
  return best;
}

TreeState fit_decision_tree(const Hyperparameters& hp, const Matrix& x, const Labels& y) {
  const std::vector<double> ones(static_cast<std::size_t>(x.rows()), 1.0);
  TreeParams p;
  p.max_depth = hp.tree_max_depth;
  p.min_samples_split = hp.tree_min_samples_split;
  return TreeState{fit_classification_tree(x, y, ones, p, nullptr)};
}

ProbaMatrix proba_decision_tree(const TreeState& s, const Matrix& x) {
  ProbaMatrix out(x.rows(), kNumClasses);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const TreeNode& leaf = tree_leaf(s.tree, x.row(r));
    for (int c = 0; c < kNumClasses; ++c) out(r, c) = leaf.value[c];
  }
  return out;
}

// Compact column layout: one array per node field.
json tree_json(const Tree& tree) {
  json j;
  std::vector<int> feature, left, right;
  std::vector<double> threshold;
  std::vector<std::array<double, kNumClasses>> value;
  for (const TreeNode& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  j["feature"] = feature;
  j["threshold"] = threshold;
  j["left"] = left;
  j["right"] = right;
  j["value"] = value;
  return j;
}

Tree tree_from_json(const json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<std::array<double, kNumClasses>>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || n == 0) {
    throw Error(ErrorCode::Format, "tree arrays disagree in length");
  }
  Tree t;
  for (std::size_t i = 0; i < n; ++i) {
    const bool leaf = feature[i] < 0;
    const auto in_range = [&](int k) { return k > static_cast<int>(i) && k < static_cast<int>(n); };
    if (!leaf && (!in_range(left[i]) || !in_range(right[i]))) throw Error(ErrorCode::Format, "tree child index");
    t.nodes.push_back({feature[i], threshold[i], left[i], right[i], value[i]});
  }
  return t;
}

}  // namespace sevpred::detail

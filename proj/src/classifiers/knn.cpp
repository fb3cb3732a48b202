#include <algorithm>
#include <numeric>

#include "detail.hpp"

namespace sevpred::detail {

KnnState fit_knn(const Hyperparameters& hp, const Matrix& x, const Labels& y) {
  return KnnState{x, y, std::max(1, hp.knn_k)};
}

ProbaMatrix proba_knn(const KnnState& s, const Matrix& x) {
  const auto n = static_cast<std::size_t>(s.x.rows());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(s.k), n);
  ProbaMatrix out = ProbaMatrix::Zero(x.rows(), kNumClasses);
  std::vector<std::pair<double, int>> neighbours(n);
  for (Eigen::Index q = 0; q < x.rows(); ++q) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      neighbours[i] = {(s.x.row(r) - x.row(q)).squaredNorm(), s.y(r)};
    }
    // Ordering by (distance, label) keeps the vote independent of the
    // training row order.
    std::partial_sort(neighbours.begin(), neighbours.begin() + static_cast<std::ptrdiff_t>(k), neighbours.end());
    for (std::size_t i = 0; i < k; ++i) out(q, neighbours[i].second) += 1.0;
    out.row(q) /= static_cast<double>(k);
  }
  return out;
}

json knn_json(const KnnState& s) {
  return {{"k", s.k}, {"x", matrix_json(s.x)}, {"y", std::vector<int>(s.y.data(), s.y.data() + s.y.size())}};
}

KnnState knn_from_json(const json& j) {
  KnnState s;
  s.k = j.at("k");
  s.x = matrix_from_json(j.at("x"));
  const auto y = j.at("y").get<std::vector<int>>();
  s.y = Eigen::Map<const Labels>(y.data(), static_cast<Eigen::Index>(y.size()));
  return s;
}

}  // namespace sevpred::detail

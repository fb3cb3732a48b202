#include <cmath>
#include <numeric>

#include "detail.hpp"

namespace sevpred::detail {

namespace {

Matrix glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.uniform(-limit, limit);
  return m;
}

struct Forward {
  Matrix hidden;
  Matrix proba;
};

Forward forward(const MlpState& s, const Matrix& x) {
  Forward out;
  out.hidden = ((x * s.w1).rowwise() + s.b1.transpose()).cwiseMax(0.0);
  const Matrix logits = (out.hidden * s.w2).rowwise() + s.b2.transpose();
  out.proba.resize(x.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.proba.row(i) = masked_softmax(logits.row(i), s.present);
  }
  return out;
}

double cross_entropy(const Matrix& proba, const Labels& y) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) loss -= std::log(std::max(proba(i, y(i)), 1e-300));
  return loss / static_cast<double>(y.size());
}

}  // namespace

// One ReLU hidden layer, softmax output, cross-entropy with L2, minibatch
// SGD with classical momentum at a constant rate. Rows are reshuffled each
// epoch from the seeded stream.
MlpState fit_mlp(const Hyperparameters& hp, std::uint64_t seed, const Matrix& x, const Labels& y) {
  Rng rng = Rng::substream(seed, "mlp");
  const Eigen::Index d = x.cols();
  const Eigen::Index h = hp.mlp_hidden;
  MlpState s;
  s.present = present_classes(y);
  s.w1 = glorot(d, h, rng);
  s.b1 = Vector::Zero(h);
  s.w2 = glorot(h, kNumClasses, rng);
  s.b2 = Vector::Zero(kNumClasses);

  Matrix onehot = Matrix::Zero(x.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < y.size(); ++i) onehot(i, y(i)) = 1.0;

  Matrix vw1 = Matrix::Zero(d, h), vw2 = Matrix::Zero(h, kNumClasses);
  Vector vb1 = Vector::Zero(h), vb2 = Vector::Zero(kNumClasses);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto batch = static_cast<std::size_t>(std::max(1, hp.mlp_batch));

  for (int epoch = 0; epoch < hp.mlp_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      const std::vector<Eigen::Index> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(stop));
      const Matrix xb = x(rows, Eigen::all);
      const Forward f = forward(s, xb);
      const auto b = static_cast<double>(rows.size());
      const Matrix dz = (f.proba - onehot(rows, Eigen::all)) / b;
      const Matrix dh = ((dz * s.w2.transpose()).array() * (f.hidden.array() > 0.0).cast<double>()).matrix();

      const Matrix gw2 = f.hidden.transpose() * dz + hp.mlp_l2 * s.w2;
      const Vector gb2 = dz.colwise().sum().transpose();
      const Matrix gw1 = xb.transpose() * dh + hp.mlp_l2 * s.w1;
      const Vector gb1 = dh.colwise().sum().transpose();

      vw2 = hp.mlp_momentum * vw2 - hp.mlp_learning_rate * gw2;
      vb2 = hp.mlp_momentum * vb2 - hp.mlp_learning_rate * gb2;
      vw1 = hp.mlp_momentum * vw1 - hp.mlp_learning_rate * gw1;
      vb1 = hp.mlp_momentum * vb1 - hp.mlp_learning_rate * gb1;
      s.w2 += vw2;
      s.b2 += vb2;
      s.w1 += vw1;
      s.b1 += vb1;
    }
    s.loss_history.push_back(cross_entropy(forward(s, x).proba, y));
  }
  return s;
}

ProbaMatrix proba_mlp(const MlpState& s, const Matrix& x) { return forward(s, x).proba; }

json mlp_json(const MlpState& s) {
  return {{"w1", matrix_json(s.w1)},
          {"b1", std::vector<double>(s.b1.data(), s.b1.data() + s.b1.size())},
          {"w2", matrix_json(s.w2)},
          {"b2", std::vector<double>(s.b2.data(), s.b2.data() + s.b2.size())},
          {"present", s.present},
          {"loss_history", s.loss_history}};
}

MlpState mlp_from_json(const json& j) {
  MlpState s;
  s.w1 = matrix_from_json(j.at("w1"));
  s.w2 = matrix_from_json(j.at("w2"));
  const auto b1 = j.at("b1").get<std::vector<double>>();
  const auto b2 = j.at("b2").get<std::vector<double>>();
  s.b1 = Eigen::Map<const Vector>(b1.data(), static_cast<Eigen::Index>(b1.size()));
  s.b2 = Eigen::Map<const Vector>(b2.data(), static_cast<Eigen::Index>(b2.size()));
  s.present = j.at("present").get<ClassMask>();
  s.loss_history = j.at("loss_history").get<std::vector<double>>();
  return s;
}

}  // namespace sevpred::detail

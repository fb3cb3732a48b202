#include <cmath>

#include "detail.hpp"

namespace sevpred::detail {

namespace {

Matrix augment(const Matrix& x) {
  Matrix a(x.rows(), x.cols() + 1);
  a.leftCols(x.cols()) = x;
  a.col(x.cols()).setOnes();
  return a;
}

}  // namespace

// One-vs-rest linear SVMs, each minimizing
//   lambda/2 |w|^2 + mean(hinge(y_i w.x_i)),  lambda = 1 / (n C),
// by full-batch subgradient steps eta_t = 1 / (lambda t). The intercept is an
// appended constant feature and is regularized with the weights.
LinearSvmState fit_svm(const Hyperparameters& hp, const Matrix& x, const Labels& y) {
  const Matrix a = augment(x);
  const auto n = static_cast<double>(a.rows());
  const double lambda = 1.0 / (n * hp.svm_c);
  LinearSvmState s;
  s.present = present_classes(y);
  s.w = Matrix::Zero(kNumClasses, a.cols());
  for (int c = 0; c < kNumClasses; ++c) {
    if (!s.present[c]) continue;
    const Vector target = (y.array() == c).cast<double>() * 2.0 - 1.0;
    Vector w = Vector::Zero(a.cols());
    for (int t = 1; t <= hp.svm_epochs; ++t) {
      const Vector margin = target.cwiseProduct(a * w);
      const Vector active = (margin.array() < 1.0).select(target, 0.0);
      const Vector pull = a.transpose() * active;
      const double eta = 1.0 / (lambda * t);
      w = (1.0 - eta * lambda) * w + (eta / n) * pull;
      // Projection onto the ball that contains the optimum.
      const double radius = 1.0 / std::sqrt(lambda);
      const double norm = w.norm();
      if (norm > radius) w *= radius / norm;
    }
    s.w.row(c) = w.transpose();
  }
  return s;
}

ProbaMatrix proba_svm(const LinearSvmState& s, const Matrix& x) {
  const Matrix decision = augment(x) * s.w.transpose();
  ProbaMatrix out(x.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = masked_softmax(decision.row(i), s.present);
  return out;
}

json svm_json(const LinearSvmState& s) { return {{"w", matrix_json(s.w)}, {"present", s.present}}; }

LinearSvmState svm_from_json(const json& j) {
  LinearSvmState s;
  s.w = matrix_from_json(j.at("w"));
  s.present = j.at("present").get<ClassMask>();
  return s;
}

}  // namespace sevpred::detail

#include <cmath>
#include <limits>
#include <numbers>

#include "detail.hpp"

namespace sevpred::detail {

NaiveBayesState fit_naive_bayes(const Hyperparameters& hp, const Matrix& x, const Labels& y) {
  const Eigen::Index d = x.cols();
  const auto n = static_cast<double>(x.rows());
  NaiveBayesState s;
  s.present = present_classes(y);
  s.mean = Matrix::Zero(kNumClasses, d);
  s.variance = Matrix::Ones(kNumClasses, d);

  // Smoothing is relative to the widest feature so it is scale-free.
  const Eigen::RowVectorXd overall_mean = x.colwise().mean();
  const double widest = ((x.rowwise() - overall_mean).array().square().colwise().sum() / n).maxCoeff();
  const double epsilon = hp.nb_var_smoothing * (widest > 0.0 ? widest : 1.0);

  for (int c = 0; c < kNumClasses; ++c) {
    s.log_prior[c] = -std::numeric_limits<double>::infinity();
    if (!s.present[c]) continue;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (y(i) == c) rows.push_back(i);
    }
    const Matrix xc = x(rows, Eigen::all);
    const auto nc = static_cast<double>(rows.size());
    s.mean.row(c) = xc.colwise().mean();
    s.variance.row(c) = (xc.rowwise() - s.mean.row(c)).array().square().colwise().sum() / nc + epsilon;
    s.log_prior[c] = std::log(nc / n);
  }
  return s;
}

ProbaMatrix proba_naive_bayes(const NaiveBayesState& s, const Matrix& x) {
  ProbaMatrix out(x.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Matrix<double, 1, kNumClasses> joint = Eigen::Matrix<double, 1, kNumClasses>::Zero();
    for (int c = 0; c < kNumClasses; ++c) {
      if (!s.present[c]) continue;
      const auto var = s.variance.row(c).array();
      joint(c) = s.log_prior[c] - 0.5 * (2.0 * std::numbers::pi * var).log().sum() -
                 0.5 * ((x.row(i) - s.mean.row(c)).array().square() / var).sum();
    }
    out.row(i) = masked_softmax(joint, s.present);
  }
  return out;
}

json naive_bayes_json(const NaiveBayesState& s) {
  std::array<double, kNumClasses> prior{};
  for (int c = 0; c < kNumClasses; ++c) prior[c] = s.present[c] ? s.log_prior[c] : 0.0;
  return {{"mean", matrix_json(s.mean)},
          {"variance", matrix_json(s.variance)},
          {"log_prior", prior},
          {"present", s.present}};
}

NaiveBayesState naive_bayes_from_json(const json& j) {
  NaiveBayesState s;
  s.mean = matrix_from_json(j.at("mean"));
  s.variance = matrix_from_json(j.at("variance"));
  s.log_prior = j.at("log_prior").get<std::array<double, kNumClasses>>();
  s.present = j.at("present").get<ClassMask>();
  for (int c = 0; c < kNumClasses; ++c) {
    if (!s.present[c]) s.log_prior[c] = -std::numeric_limits<double>::infinity();
  }
  return s;
}

}  // namespace sevpred::detail

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "sevpred/types.hpp"

namespace sevpred {

/// Rows are actual classes, columns predicted classes.
using ConfusionMatrix = Eigen::Matrix<std::int64_t, kNumClasses, kNumClasses>;

ConfusionMatrix confusion_matrix(const Labels& y_true, const Labels& y_pred);

struct ClassScores {
  std::array<double, kNumClasses> precision{};
  std::array<double, kNumClasses> recall{};
  std::array<double, kNumClasses> f1{};
  std::array<std::int64_t, kNumClasses> support{};
  // Set where a zero denominator forced the metric to 0.
  std::array<bool, kNumClasses> zero_division{};

  double precision_w = 0.0;
  double recall_w = 0.0;
  double f1_w = 0.0;
};

/// Per-class precision/recall/F1 and their support-weighted means.
ClassScores weighted_prf(const Labels& y_true, const Labels& y_pred);
ClassScores weighted_prf(const ConfusionMatrix& cm);

/// Multiclass Matthews correlation (the R_K statistic); 0 when either
/// marginal has no variance.
double mcc(const Labels& y_true, const Labels& y_pred);
double mcc(const ConfusionMatrix& cm);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  // Score cut the point was taken at; +inf for the curve's origin.
  double threshold = std::numeric_limits<double>::infinity();

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// One-vs-rest ROC points (x = FPR, y = TPR) for `class_index`, one per
/// distinct score, from (0,0) to (1,1). A class with no positives or no
/// negatives yields just the two endpoints.
std::vector<CurvePoint> roc_curve(const Labels& y_true, const Vector& scores, int class_index);

/// One-vs-rest precision/recall points (x = recall, y = precision), one per
/// distinct score, after a (0, 1) origin.
std::vector<CurvePoint> pr_curve(const Labels& y_true, const Vector& scores, int class_index);

/// Trapezoidal area under a curve's own points.
double trapezoid_area(const std::vector<CurvePoint>& points);

/// Support-weighted mean of per-class one-vs-rest ROC AUCs; classes absent
/// from y_true carry no weight.
double auc_weighted(const Labels& y_true, const ProbaMatrix& proba);

struct EvalReport {
  ConfusionMatrix confusion = ConfusionMatrix::Zero();
  ClassScores scores;
  double precision_w = 0.0;
  double recall_w = 0.0;
  double f1_w = 0.0;
  std::array<double, kNumClasses> f1_per_class{};
  std::array<double, kNumClasses> auc_per_class{};
  double auc_w = 0.0;
  double mcc = 0.0;
  std::array<double, kNumClasses> prevalence{};  // no-skill precision level
  std::array<std::vector<CurvePoint>, kNumClasses> roc_curves;
  std::array<std::vector<CurvePoint>, kNumClasses> pr_curves;
};

EvalReport report(const Labels& y_true, const Labels& y_pred, const ProbaMatrix& proba);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

/// `class,kind,x,y,threshold` rows for every ROC and PR point.
std::string curves_csv(const EvalReport& report);

/// Row-wise argmax with the lowest class index winning ties.
Labels argmax_labels(const ProbaMatrix& proba);

}  // namespace sevpred

#include "sevpred/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sevpred/error.hpp"
#include "sevpred/io.hpp"

namespace sevpred {

namespace {

void check_labels(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::DimensionMismatch, "y_true and y_pred lengths differ");
  }
  if (y_true.size() == 0) throw Error(ErrorCode::EmptyInput, "no samples");
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    if (y_true(i) < 0 || y_true(i) >= kNumClasses || y_pred(i) < 0 || y_pred(i) >= kNumClasses) {
      throw Error(ErrorCode::LabelOutOfRange, "label outside 0-3 at index " + std::to_string(i));
    }
  }
}

double ratio(double num, double den, bool& zero) {
  if (den == 0.0) {
    zero = true;
    return 0.0;
  }
  return num / den;
}

}  // namespace

ConfusionMatrix confusion_matrix(const Labels& y_true, const Labels& y_pred) {
  check_labels(y_true, y_pred);
  ConfusionMatrix cm = ConfusionMatrix::Zero();
  for (Eigen::Index i = 0; i < y_true.size(); ++i) ++cm(y_true(i), y_pred(i));
  return cm;
}

ClassScores weighted_prf(const ConfusionMatrix& cm) {
  ClassScores s;
  const auto total = static_cast<double>(cm.sum());
  if (total == 0.0) throw Error(ErrorCode::EmptyInput, "empty confusion matrix");
  for (int c = 0; c < kNumClasses; ++c) {
    const auto tp = static_cast<double>(cm(c, c));
    const auto predicted = static_cast<double>(cm.col(c).sum());
    const auto actual = static_cast<double>(cm.row(c).sum());
    bool zero = false;
    s.precision[c] = ratio(tp, predicted, zero);
    s.recall[c] = ratio(tp, actual, zero);
    s.f1[c] = ratio(2.0 * s.precision[c] * s.recall[c], s.precision[c] + s.recall[c], zero);
    s.zero_division[c] = zero;
    s.support[c] = cm.row(c).sum();
    const double weight = actual / total;
    s.precision_w += weight * s.precision[c];
    s.recall_w += weight * s.recall[c];
    s.f1_w += weight * s.f1[c];
  }
  return s;
}

ClassScores weighted_prf(const Labels& y_true, const Labels& y_pred) {
  return weighted_prf(confusion_matrix(y_true, y_pred));
}

double mcc(const ConfusionMatrix& cm) {
  const auto m = cm.cast<double>();
  const double s = m.sum();
  const double c = m.trace();
  const Eigen::Matrix<double, 1, kNumClasses> p = m.colwise().sum();  // predicted
  const Eigen::Matrix<double, kNumClasses, 1> t = m.rowwise().sum();  // actual
  const double cov_pt = c * s - p.dot(t.transpose());
  const double cov_pp = s * s - p.squaredNorm();
  const double cov_tt = s * s - t.squaredNorm();
  if (cov_pp == 0.0 || cov_tt == 0.0) return 0.0;
  return cov_pt / std::sqrt(cov_pp * cov_tt);
}

double mcc(const Labels& y_true, const Labels& y_pred) { return mcc(confusion_matrix(y_true, y_pred)); }

namespace {

struct Ranked {
  std::vector<double> thresholds;  // distinct scores, descending
  std::vector<double> tp;          // positives with score >= threshold
  std::vector<double> fp;
  double positives = 0;
  double negatives = 0;
};

Ranked rank(const Labels& y_true, const Vector& scores, int class_index) {
  if (y_true.size() != scores.size()) {
    throw Error(ErrorCode::DimensionMismatch, "labels and scores lengths differ");
  }
  if (y_true.size() == 0) throw Error(ErrorCode::EmptyInput, "no samples");
  if (class_index < 0 || class_index >= kNumClasses) {
    throw Error(ErrorCode::LabelOutOfRange, "class index " + std::to_string(class_index));
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(y_true.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores(a) > scores(b); });
  Ranked r;
  double tp = 0;
  double fp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Eigen::Index i = order[k];
    if (y_true(i) == class_index) {
      ++tp;
    } else {
      ++fp;
    }
    const bool last_of_score = k + 1 == order.size() || scores(order[k + 1]) != scores(i);
    if (last_of_score) {
      r.thresholds.push_back(scores(i));
      r.tp.push_back(tp);
      r.fp.push_back(fp);
    }
  }
  r.positives = tp;
  r.negatives = fp;
  return r;
}

}  // namespace

std::vector<CurvePoint> roc_curve(const Labels& y_true, const Vector& scores, int class_index) {
  const Ranked r = rank(y_true, scores, class_index);
  std::vector<CurvePoint> points{{0.0, 0.0}};
  if (r.positives == 0 || r.negatives == 0) {
    points.push_back({1.0, 1.0, r.thresholds.back()});
    return points;
  }
  for (std::size_t k = 0; k < r.thresholds.size(); ++k) {
    points.push_back({r.fp[k] / r.negatives, r.tp[k] / r.positives, r.thresholds[k]});
  }
  return points;
}

std::vector<CurvePoint> pr_curve(const Labels& y_true, const Vector& scores, int class_index) {
  const Ranked r = rank(y_true, scores, class_index);
  std::vector<CurvePoint> points{{0.0, 1.0}};
  for (std::size_t k = 0; k < r.thresholds.size(); ++k) {
    const double recall = r.positives > 0 ? r.tp[k] / r.positives : 0.0;
    const double precision = r.tp[k] / (r.tp[k] + r.fp[k]);
    points.push_back({recall, precision, r.thresholds[k]});
  }
  return points;
}

double trapezoid_area(const std::vector<CurvePoint>& points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    area += (points[k].x - points[k - 1].x) * (points[k].y + points[k - 1].y) / 2.0;
  }
  return area;
}

double auc_weighted(const Labels& y_true, const ProbaMatrix& proba) {
  if (proba.rows() != y_true.size()) {
    throw Error(ErrorCode::DimensionMismatch, "proba rows differ from label count");
  }
  double weighted = 0.0;
  double support_total = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto support = static_cast<double>((y_true.array() == c).count());
    if (support == 0) continue;
    weighted += support * trapezoid_area(roc_curve(y_true, proba.col(c), c));
    support_total += support;
  }
  if (support_total == 0) throw Error(ErrorCode::EmptyInput, "no samples");
  return weighted / support_total;
}

Labels argmax_labels(const ProbaMatrix& proba) {
  Labels out(proba.rows());
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
      if (proba(i, c) > proba(i, best)) best = c;
    }
    out(i) = best;
  }
  return out;
}

EvalReport report(const Labels& y_true, const Labels& y_pred, const ProbaMatrix& proba) {
  EvalReport r;
  r.confusion = confusion_matrix(y_true, y_pred);
  if (proba.rows() != y_true.size()) {
    throw Error(ErrorCode::DimensionMismatch, "proba rows differ from label count");
  }
  r.scores = weighted_prf(r.confusion);
  r.precision_w = r.scores.precision_w;
  r.recall_w = r.scores.recall_w;
  r.f1_w = r.scores.f1_w;
  r.f1_per_class = r.scores.f1;
  r.mcc = mcc(r.confusion);
  r.auc_w = auc_weighted(y_true, proba);
  const auto n = static_cast<double>(y_true.size());
  for (int c = 0; c < kNumClasses; ++c) {
    r.roc_curves[c] = roc_curve(y_true, proba.col(c), c);
    r.pr_curves[c] = pr_curve(y_true, proba.col(c), c);
    r.auc_per_class[c] = trapezoid_area(r.roc_curves[c]);
    r.prevalence[c] = static_cast<double>(r.scores.support[c]) / n;
  }
  return r;
}

namespace {

nlohmann::json points_json(const std::vector<CurvePoint>& points) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CurvePoint& p : points) {
    arr.push_back({p.x, p.y, std::isinf(p.threshold) ? nlohmann::json(nullptr) : nlohmann::json(p.threshold)});
  }
  return arr;
}

std::vector<CurvePoint> points_from_json(const nlohmann::json& arr) {
  std::vector<CurvePoint> points;
  for (const auto& p : arr) {
    CurvePoint cp{p.at(0).get<double>(), p.at(1).get<double>()};
    if (!p.at(2).is_null()) cp.threshold = p.at(2).get<double>();
    points.push_back(cp);
  }
  return points;
}

}  // namespace

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  nlohmann::json confusion = nlohmann::json::array();
  for (int i = 0; i < kNumClasses; ++i) {
    std::vector<std::int64_t> row(kNumClasses);
    for (int k = 0; k < kNumClasses; ++k) row[k] = r.confusion(i, k);
    confusion.push_back(row);
  }
  j["confusion"] = confusion;
  j["precision_w"] = r.precision_w;
  j["recall_w"] = r.recall_w;
  j["f1_w"] = r.f1_w;
  j["f1_per_class"] = r.f1_per_class;
  j["precision_per_class"] = r.scores.precision;
  j["recall_per_class"] = r.scores.recall;
  j["support"] = r.scores.support;
  j["zero_division"] = r.scores.zero_division;
  j["auc_w"] = r.auc_w;
  j["auc_per_class"] = r.auc_per_class;
  j["mcc"] = r.mcc;
  j["no_skill_precision"] = r.prevalence;
  nlohmann::json roc;
  nlohmann::json pr;
  for (int c = 0; c < kNumClasses; ++c) {
    roc[std::to_string(c)] = points_json(r.roc_curves[c]);
    pr[std::to_string(c)] = points_json(r.pr_curves[c]);
  }
  j["roc_curves"] = roc;
  j["pr_curves"] = pr;
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    for (int i = 0; i < kNumClasses; ++i)
      for (int k = 0; k < kNumClasses; ++k) r.confusion(i, k) = j.at("confusion").at(i).at(k).get<std::int64_t>();
    r.scores = weighted_prf(r.confusion);
    r.precision_w = j.at("precision_w").get<double>();
    r.recall_w = j.at("recall_w").get<double>();
    r.f1_w = j.at("f1_w").get<double>();
    r.f1_per_class = j.at("f1_per_class").get<std::array<double, kNumClasses>>();
    r.auc_w = j.at("auc_w").get<double>();
    r.auc_per_class = j.at("auc_per_class").get<std::array<double, kNumClasses>>();
    r.mcc = j.at("mcc").get<double>();
    r.prevalence = j.at("no_skill_precision").get<std::array<double, kNumClasses>>();
    for (int c = 0; c < kNumClasses; ++c) {
      r.roc_curves[c] = points_from_json(j.at("roc_curves").at(std::to_string(c)));
      r.pr_curves[c] = points_from_json(j.at("pr_curves").at(std::to_string(c)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, std::string("report json: ") + e.what());
  }
  return r;
}

std::string curves_csv(const EvalReport& r) {
  std::string out = "class,kind,x,y,threshold\n";
  auto emit = [&](int c, const char* kind, const std::vector<CurvePoint>& points) {
    for (const CurvePoint& p : points) {
      out += std::to_string(c) + "," + kind + "," + format_shortest(p.x) + "," + format_shortest(p.y) +
             "," + (std::isinf(p.threshold) ? std::string("inf") : format_shortest(p.threshold)) + "\n";
    }
  };
  for (int c = 0; c < kNumClasses; ++c) emit(c, "roc", r.roc_curves[c]);
  for (int c = 0; c < kNumClasses; ++c) emit(c, "pr", r.pr_curves[c]);
  return out;
}

}  // namespace sevpred

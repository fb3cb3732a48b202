#include <cmath>
#include <limits>

#include "detail.hpp"
#include "sevpred/error.hpp"

namespace sevpred {

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "knn", "svm", "naive_bayes", "decision_tree", "random_forest", "ada_boost", "gradient_boosted_trees", "mlp"};

void check_finite(const Matrix& x) {
  if (!x.allFinite()) throw Error(ErrorCode::NonFiniteFeature, "feature matrix contains NaN or infinity");
}

}  // namespace

std::string_view to_string(ClassifierKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

ClassifierKind parse_classifier_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ClassifierKind>(i);
  }
  throw Error(ErrorCode::Format, "unknown model kind '" + std::string(name) + "'");
}

nlohmann::json hyperparameters_json(const ClassifierSpec& spec) {
  const Hyperparameters& hp = spec.hp;
  switch (spec.kind) {
    case ClassifierKind::Knn:
      return {{"k", hp.knn_k}, {"metric", "euclidean"}, {"weights", "uniform"}};
    case ClassifierKind::Svm:
      return {{"C", hp.svm_c}, {"epochs", hp.svm_epochs}, {"multiclass", "one_vs_rest"}, {"loss", "hinge"}};
    case ClassifierKind::NaiveBayes:
      return {{"var_smoothing", hp.nb_var_smoothing}};
    case ClassifierKind::DecisionTree:
      return {{"criterion", "gini"},
              {"max_depth", hp.tree_max_depth == 0 ? nlohmann::json(nullptr) : nlohmann::json(hp.tree_max_depth)},
              {"min_samples_split", hp.tree_min_samples_split}};
    case ClassifierKind::RandomForest:
      return {{"n_estimators", hp.forest_trees}, {"bootstrap", true}, {"max_features", "sqrt"},
              {"criterion", "gini"}};
    case ClassifierKind::AdaBoost:
      return {{"algorithm", "SAMME"}, {"n_estimators", hp.ada_stages}, {"base", "stump"}};
    case ClassifierKind::GradientBoostedTrees:
      return {{"n_estimators", hp.gbt_rounds}, {"max_depth", hp.gbt_max_depth},
              {"learning_rate", hp.gbt_learning_rate}, {"objective", "softmax"}};
    case ClassifierKind::Mlp:
      return {{"hidden", hp.mlp_hidden},         {"activation", "relu"},
              {"epochs", hp.mlp_epochs},         {"batch_size", hp.mlp_batch},
              {"learning_rate", hp.mlp_learning_rate}, {"momentum", hp.mlp_momentum},
              {"l2", hp.mlp_l2}};
  }
  return {};
}

TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, const Labels& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) + " labels");
  }
  if (x.rows() < 4) throw Error(ErrorCode::EmptyFit, "need at least 4 training rows");
  if (x.cols() == 0) throw Error(ErrorCode::DimensionMismatch, "no feature columns");
  check_finite(x);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) < 0 || y(i) >= kNumClasses) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(y(i)) + " at row " + std::to_string(i));
    }
  }

  TrainedModel m;
  m.spec = spec;
  m.n_features = x.cols();
  const Hyperparameters& hp = spec.hp;
  switch (spec.kind) {
    case ClassifierKind::Knn: m.state = detail::fit_knn(hp, x, y); break;
    case ClassifierKind::Svm: m.state = detail::fit_svm(hp, x, y); break;
    case ClassifierKind::NaiveBayes: m.state = detail::fit_naive_bayes(hp, x, y); break;
    case ClassifierKind::DecisionTree: m.state = detail::fit_decision_tree(hp, x, y); break;
    case ClassifierKind::RandomForest: m.state = detail::fit_forest(hp, spec.seed, x, y); break;
    case ClassifierKind::AdaBoost: m.state = detail::fit_adaboost(hp, x, y); break;
    case ClassifierKind::GradientBoostedTrees: m.state = detail::fit_gbt(hp, x, y); break;
    case ClassifierKind::Mlp: m.state = detail::fit_mlp(hp, spec.seed, x, y); break;
  }
  return m;
}

ProbaMatrix predict_proba(const TrainedModel& model, const Matrix& x) {
  if (std::holds_alternative<std::monostate>(model.state)) {
    throw Error(ErrorCode::UnfittedModel, "model has not been fitted");
  }
  if (x.cols() != model.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.n_features) + " features, got " +
                                                  std::to_string(x.cols()));
  }
  check_finite(x);
  struct Visitor {
    const Matrix& x;
    ProbaMatrix operator()(const std::monostate&) const { return {}; }
    ProbaMatrix operator()(const KnnState& s) const { return detail::proba_knn(s, x); }
    ProbaMatrix operator()(const LinearSvmState& s) const { return detail::proba_svm(s, x); }
    ProbaMatrix operator()(const NaiveBayesState& s) const { return detail::proba_naive_bayes(s, x); }
    ProbaMatrix operator()(const TreeState& s) const { return detail::proba_decision_tree(s, x); }
    ProbaMatrix operator()(const ForestState& s) const { return detail::proba_forest(s, x); }
    ProbaMatrix operator()(const AdaBoostState& s) const { return detail::proba_adaboost(s, x); }
    ProbaMatrix operator()(const GradientBoostingState& s) const { return detail::proba_gbt(s, x); }
    ProbaMatrix operator()(const MlpState& s) const { return detail::proba_mlp(s, x); }
  };
  return std::visit(Visitor{x}, model.state);
}

Labels predict(const TrainedModel& model, const Matrix& x) {
  const ProbaMatrix p = predict_proba(model, x);
  Labels out(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
      if (p(i, c) > p(i, best)) best = c;
    }
    out(i) = best;
  }
  return out;
}

namespace {

nlohmann::json hp_full_json(const Hyperparameters& hp) {
  return {{"knn_k", hp.knn_k},
          {"svm_c", hp.svm_c},
          {"svm_epochs", hp.svm_epochs},
          {"nb_var_smoothing", hp.nb_var_smoothing},
          {"tree_max_depth", hp.tree_max_depth},
          {"tree_min_samples_split", hp.tree_min_samples_split},
          {"forest_trees", hp.forest_trees},
          {"ada_stages", hp.ada_stages},
          {"gbt_rounds", hp.gbt_rounds},
          {"gbt_max_depth", hp.gbt_max_depth},
          {"gbt_learning_rate", hp.gbt_learning_rate},
          {"mlp_hidden", hp.mlp_hidden},
          {"mlp_epochs", hp.mlp_epochs},
          {"mlp_batch", hp.mlp_batch},
          {"mlp_learning_rate", hp.mlp_learning_rate},
          {"mlp_momentum", hp.mlp_momentum},
          {"mlp_l2", hp.mlp_l2}};
}

Hyperparameters hp_from_json(const nlohmann::json& j) {
  Hyperparameters hp;
  hp.knn_k = j.at("knn_k");
  hp.svm_c = j.at("svm_c");
  hp.svm_epochs = j.at("svm_epochs");
  hp.nb_var_smoothing = j.at("nb_var_smoothing");
  hp.tree_max_depth = j.at("tree_max_depth");
  hp.tree_min_samples_split = j.at("tree_min_samples_split");
  hp.forest_trees = j.at("forest_trees");
  hp.ada_stages = j.at("ada_stages");
  hp.gbt_rounds = j.at("gbt_rounds");
  hp.gbt_max_depth = j.at("gbt_max_depth");
  hp.gbt_learning_rate = j.at("gbt_learning_rate");
  hp.mlp_hidden = j.at("mlp_hidden");
  hp.mlp_epochs = j.at("mlp_epochs");
  hp.mlp_batch = j.at("mlp_batch");
  hp.mlp_learning_rate = j.at("mlp_learning_rate");
  hp.mlp_momentum = j.at("mlp_momentum");
  hp.mlp_l2 = j.at("mlp_l2");
  return hp;
}

nlohmann::json row_json(const Eigen::Matrix<double, 1, Eigen::Dynamic>& r) {
  return std::vector<double>(r.data(), r.data() + r.size());
}

Eigen::Matrix<double, 1, Eigen::Dynamic> row_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  Eigen::Matrix<double, 1, Eigen::Dynamic> r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i];
  return r;
}

}  // namespace

nlohmann::json to_json(const TrainedModel& model) {
  if (std::holds_alternative<std::monostate>(model.state)) {
    throw Error(ErrorCode::UnfittedModel, "cannot serialize an unfitted model");
  }
  nlohmann::json j;
  j["format"] = "sevpred-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = to_string(model.spec.kind);
  j["seed"] = model.spec.seed;
  j["hyperparameters"] = hp_full_json(model.spec.hp);
  j["n_features"] = model.n_features;
  j["class_labels"] = {0, 1, 2, 3};
  if (model.scaler) {
    j["scaler"] = {{"median", row_json(model.scaler->median)}, {"iqr", row_json(model.scaler->iqr)}};
  }
  struct Visitor {
    nlohmann::json operator()(const std::monostate&) const { return nullptr; }
    nlohmann::json operator()(const KnnState& s) const { return detail::knn_json(s); }
    nlohmann::json operator()(const LinearSvmState& s) const { return detail::svm_json(s); }
    nlohmann::json operator()(const NaiveBayesState& s) const { return detail::naive_bayes_json(s); }
    nlohmann::json operator()(const TreeState& s) const { return detail::tree_json(s.tree); }
    nlohmann::json operator()(const ForestState& s) const {
      nlohmann::json trees = nlohmann::json::array();
      for (const Tree& t : s.trees) trees.push_back(detail::tree_json(t));
      return trees;
    }
    nlohmann::json operator()(const AdaBoostState& s) const { return detail::adaboost_json(s); }
    nlohmann::json operator()(const GradientBoostingState& s) const { return detail::gbt_json(s); }
    nlohmann::json operator()(const MlpState& s) const { return detail::mlp_json(s); }
  };
  j["state"] = std::visit(Visitor{}, model.state);
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  TrainedModel m;
  try {
    if (j.value("format", "") != "sevpred-model") throw Error(ErrorCode::Format, "not a model file");
    const int version = j.at("version");
    if (version != kModelFormatVersion) {
      throw Error(ErrorCode::Format, "unsupported model version " + std::to_string(version));
    }
    m.spec.kind = parse_classifier_kind(j.at("kind").get<std::string>());
    m.spec.seed = j.at("seed");
    m.spec.hp = hp_from_json(j.at("hyperparameters"));
    m.n_features = j.at("n_features");
    if (j.contains("scaler")) {
      m.scaler = RobustScaler<double>{row_from_json(j["scaler"].at("median")), row_from_json(j["scaler"].at("iqr"))};
    }
    const nlohmann::json& s = j.at("state");
    switch (m.spec.kind) {
      case ClassifierKind::Knn: m.state = detail::knn_from_json(s); break;
      case ClassifierKind::Svm: m.state = detail::svm_from_json(s); break;
      case ClassifierKind::NaiveBayes: m.state = detail::naive_bayes_from_json(s); break;
      case ClassifierKind::DecisionTree: m.state = TreeState{detail::tree_from_json(s)}; break;
      case ClassifierKind::RandomForest: {
        ForestState f;
        for (const auto& t : s) f.trees.push_back(detail::tree_from_json(t));
        m.state = std::move(f);
        break;
      }
      case ClassifierKind::AdaBoost: m.state = detail::adaboost_from_json(s); break;
      case ClassifierKind::GradientBoostedTrees: m.state = detail::gbt_from_json(s); break;
      case ClassifierKind::Mlp: m.state = detail::mlp_from_json(s); break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, std::string("model json: ") + e.what());
  }
  return m;
}

namespace detail {

ClassMask present_classes(const Labels& y) {
  ClassMask mask{};
  for (Eigen::Index i = 0; i < y.size(); ++i) mask[static_cast<std::size_t>(y(i))] = true;
  return mask;
}

int count_present(const ClassMask& mask) {
  int n = 0;
  for (bool b : mask) n += b;
  return n;
}

Eigen::Matrix<double, 1, kNumClasses> masked_softmax(const Eigen::Matrix<double, 1, kNumClasses>& scores,
                                                     const ClassMask& present) {
  double top = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < kNumClasses; ++c) {
    if (present[c]) top = std::max(top, scores(c));
  }
  Eigen::Matrix<double, 1, kNumClasses> out = Eigen::Matrix<double, 1, kNumClasses>::Zero();
  double total = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (!present[c]) continue;
    out(c) = std::exp(scores(c) - top);
    total += out(c);
  }
  return out / total;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  const json& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != m.rows()) throw Error(ErrorCode::Format, "matrix row count");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const json& row = data[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) throw Error(ErrorCode::Format, "matrix column count");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace detail

}  // namespace sevpred

#include "sevpred/pipeline.hpp"

#include <cmath>
#include <unordered_map>

#include "sevpred/error.hpp"
#include "sevpred/io.hpp"
#include "sevpred/metrics.hpp"
#include "sevpred/rng.hpp"

namespace sevpred {

namespace {

nlohmann::json row_json(const Eigen::Matrix<double, 1, Eigen::Dynamic>& r) {
  return std::vector<double>(r.data(), r.data() + r.size());
}

nlohmann::json confusion_json(const ConfusionMatrix& cm) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < kNumClasses; ++i) {
    rows.push_back({cm(i, 0), cm(i, 1), cm(i, 2), cm(i, 3)});
  }
  return rows;
}

nlohmann::json score_row(const EvalReport& r) {
  return {{"precision_w", r.precision_w}, {"recall_w", r.recall_w}, {"f1_w", r.f1_w},
          {"f1_per_class", r.f1_per_class}, {"auc_w", r.auc_w},       {"mcc", r.mcc},
          {"confusion", confusion_json(r.confusion)}};
}

// Constant predictor of the most frequent training class.
EvalReport majority_baseline(const Labels& y_train, const Labels& y_test) {
  ClassCounts counts{};
  for (Eigen::Index i = 0; i < y_train.size(); ++i) ++counts[static_cast<std::size_t>(y_train(i))];
  const auto top = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  ProbaMatrix p = ProbaMatrix::Zero(y_test.size(), kNumClasses);
  p.col(top).setOnes();
  return report(y_test, Labels::Constant(y_test.size(), top), p);
}

}  // namespace

nlohmann::json config_snapshot(const PipelineConfig& c) {
  nlohmann::json models = nlohmann::json::array();
  for (ClassifierKind k : c.models) models.push_back(to_string(k));
  return {{"tool_version", kToolVersion},
          {"seed", c.seed},
          {"corpus", c.corpus.generic_string()},
          {"models", models},
          {"scaling", c.scaling ? "robust" : "none"},
          {"ratios", c.ratios},
          {"paragraph_numbers", c.paragraph_style == NumberStyle::PerMetricKind ? "per_metric_kind" : "integral_bare"}};
}

std::uint64_t model_seed(std::uint64_t root, ClassifierKind kind) {
  return Rng::substream(root, "model:" + std::string(to_string(kind))).next();
}

MetricsTable extract_metrics(const std::vector<MethodRecord>& records) {
  MetricsTable t;
  t.values.resize(static_cast<Eigen::Index>(records.size()), kNumMetrics);
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      t.values.row(static_cast<Eigen::Index>(i)) = measure_source(records[i].source).transpose();
    } catch (const Error& e) {
      throw Error(e.code(), "record '" + records[i].id + "': " + e.what());
    }
    t.ids.push_back(records[i].id);
  }
  return t;
}

std::string metrics_csv(const MetricsTable& table) {
  std::string out = "id";
  for (auto name : kMetricNames) out += "," + std::string(name);
  out += "\n";
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    out += table.ids[i];
    for (int k = 0; k < kNumMetrics; ++k) out += "," + format_shortest(table.values(static_cast<Eigen::Index>(i), k));
    out += "\n";
  }
  return out;
}

MetricsTable read_metrics_csv(const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  const int id_col = csv.column("id");
  if (id_col < 0) throw Error(ErrorCode::Format, path.string() + ": missing id column");
  std::array<int, kNumMetrics> cols{};
  for (int k = 0; k < kNumMetrics; ++k) {
    cols[k] = csv.column(kMetricNames[k]);
    if (cols[k] < 0) throw Error(ErrorCode::Format, path.string() + ": missing column " + std::string(kMetricNames[k]));
  }
  MetricsTable t;
  t.values.resize(static_cast<Eigen::Index>(csv.rows.size()), kNumMetrics);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    t.ids.push_back(csv.rows[i][static_cast<std::size_t>(id_col)]);
    for (int k = 0; k < kNumMetrics; ++k) {
      const std::string& cell = csv.rows[i][static_cast<std::size_t>(cols[k])];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty()) {
        throw Error(ErrorCode::Format, path.string() + ": bad number '" + cell + "' for " + t.ids.back());
      }
      t.values(static_cast<Eigen::Index>(i), k) = v;
    }
  }
  return t;
}

Labels labels_for(const std::vector<std::string>& ids, const std::vector<MethodRecord>& records) {
  std::unordered_map<std::string, const MethodRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.id, &r);
  Labels y(static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto it = by_id.find(ids[i]);
    if (it == by_id.end()) throw Error(ErrorCode::MalformedRecord, "no labelled record for id '" + ids[i] + "'");
    if (!it->second->severity_class) throw Error(ErrorCode::MalformedRecord, "record '" + ids[i] + "' has no label");
    y(static_cast<Eigen::Index>(i)) = *it->second->severity_class;
  }
  return y;
}

TrainedModel train_model(const ClassifierSpec& spec, const Matrix& x, const Labels& y, bool scaling) {
  if (!scaling) return fit(spec, x, y);
  const RobustScaler<double> scaler = robust_scale_fit(x);
  TrainedModel m = fit(spec, robust_scale_transform(x, scaler).rows, y);
  m.scaler = scaler;
  return m;
}

ProbaMatrix score_raw(const TrainedModel& model, const Matrix& raw) {
  if (!model.scaler) return predict_proba(model, raw);
  return predict_proba(model, robust_scale_transform(raw, *model.scaler).rows);
}

std::string predictions_jsonl(const std::vector<std::string>& ids, const ProbaMatrix& proba) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    nlohmann::json j{{"id", ids[i]}, {"proba", {proba(r, 0), proba(r, 1), proba(r, 2), proba(r, 3)}}};
    out += j.dump() + "\n";
  }
  return out;
}

Predictions parse_predictions(std::string_view jsonl) {
  std::vector<std::string> ids;
  std::vector<std::array<double, kNumClasses>> rows;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    const std::string_view line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "predictions line " + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      const auto p = j.at("proba").get<std::vector<double>>();
      if (p.size() != kNumClasses) throw Error(ErrorCode::WrongArity, where + ": proba needs 4 values");
      for (double v : p) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::MalformedRecord, where + ": bad probability");
      }
      ids.push_back(j.at("id").get<std::string>());
      rows.push_back({p[0], p[1], p[2], p[3]});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRecord, where + ": " + e.what());
    }
  }
  Predictions out;
  out.ids = std::move(ids);
  out.proba.resize(static_cast<Eigen::Index>(rows.size()), kNumClasses);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < kNumClasses; ++c) out.proba(static_cast<Eigen::Index>(i), c) = rows[i][c];
  }
  return out;
}

EvalReport score_predictions(const Predictions& predictions, const std::vector<MethodRecord>& truth) {
  if (predictions.ids.size() != truth.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(predictions.ids.size()) + " predictions for " +
                                                  std::to_string(truth.size()) + " truth records");
  }
  std::unordered_map<std::string_view, int> seen;
  for (const auto& id : predictions.ids) {
    if (++seen[id] > 1) throw Error(ErrorCode::MalformedRecord, "duplicate prediction for id '" + id + "'");
  }
  const Labels y_true = labels_for(predictions.ids, truth);
  return report(y_true, argmax_labels(predictions.proba), predictions.proba);
}

EvalReport score_external(const std::filesystem::path& predictions, const std::filesystem::path& truth) {
  return score_predictions(parse_predictions(read_file(predictions)), ingest(truth).records);
}

Rq1Result run_rq1(const PipelineConfig& config, const Corpus& corpus) {
  const SplitSpec spec{config.seed, config.ratios};
  const Split parts = split(corpus, spec);
  const MetricsTable train = extract_metrics(parts.train);
  const MetricsTable test = extract_metrics(parts.test);
  const Labels y_train = labels_for(train.ids, parts.train);
  const Labels y_test = labels_for(test.ids, parts.test);

  Matrix x_train = train.values;
  Matrix x_test = test.values;
  nlohmann::json scaler_json = nullptr;
  if (config.scaling) {
    const RobustScaler<double> scaler = robust_scale_fit(train.values);
    x_train = robust_scale_transform(train.values, scaler).rows;
    x_test = robust_scale_transform(test.values, scaler).rows;
    scaler_json = {{"median", row_json(scaler.median)}, {"iqr", row_json(scaler.iqr)}};
  }

  Rq1Result result;
  nlohmann::json models = nlohmann::json::array();
  for (ClassifierKind kind : config.models) {
    ClassifierSpec cs;
    cs.kind = kind;
    cs.seed = model_seed(config.seed, kind);
    const TrainedModel m = fit(cs, x_train, y_train);
    const ProbaMatrix p = predict_proba(m, x_test);
    ModelRow row{kind, cs.seed, report(y_test, argmax_labels(p), p)};
    nlohmann::json j = score_row(row.report);
    j["model"] = to_string(kind);
    j["seed"] = cs.seed;
    j["hyperparameters"] = hyperparameters_json(cs);
    models.push_back(j);
    result.rows.push_back(std::move(row));
  }

  nlohmann::json baseline = score_row(majority_baseline(y_train, y_test));
  baseline["model"] = "majority";
  result.report = {{"tool_version", kToolVersion},
                   {"config", config_snapshot(config)},
                   {"split", split_report(parts, spec)},
                   {"scaler", scaler_json},
                   {"models", models},
                   {"majority_baseline", baseline}};
  return result;
}

Rq1Result run_rq1(const PipelineConfig& config) {
  Rq1Result r = run_rq1(config, ingest(config.corpus));
  write_file_atomic(config.out_dir / "config.json", config_snapshot(config).dump(2) + "\n");
  write_file_atomic(config.out_dir / "rq1_report.json", r.report.dump(2) + "\n");
  return r;
}

std::map<std::string, std::string> fusion_exports(const PipelineConfig& config, const Corpus& corpus) {
  const Split parts = split(corpus, {config.seed, config.ratios});
  const std::array<std::pair<const char*, const std::vector<MethodRecord>*>, 3> named = {
      {{"train", &parts.train}, {"valid", &parts.validation}, {"test", &parts.test}}};

  std::array<MetricsTable, 3> tables;
  for (std::size_t i = 0; i < 3; ++i) tables[i] = extract_metrics(*named[i].second);
  std::optional<RobustScaler<double>> scaler;
  if (config.scaling) scaler = robust_scale_fit(tables[0].values);

  std::map<std::string, std::string> files;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string part = named[i].first;
    const std::vector<MethodRecord>& records = *named[i].second;
    const Matrix x = scaler ? robust_scale_transform(tables[i].values, *scaler).rows : tables[i].values;
    files["plain_" + part + ".jsonl"] = export_plain(records);
    files["inline_" + part + ".jsonl"] = export_concat_inline(records, x, config.paragraph_style);
    files["cls_" + part + ".jsonl"] = export_concat_cls(records, x);
  }
  return files;
}

std::vector<std::filesystem::path> run_fusion_export(const PipelineConfig& config) {
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : fusion_exports(config, ingest(config.corpus))) {
    written.push_back(config.out_dir / name);
    write_file_atomic(written.back(), content);
  }
  write_file_atomic(config.out_dir / "config.json", config_snapshot(config).dump(2) + "\n");
  written.push_back(config.out_dir / "config.json");
  return written;
}

}  // namespace sevpred

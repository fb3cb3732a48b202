#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sevpred/classifiers.hpp"
#include "sevpred/corpus.hpp"
#include "sevpred/eval.hpp"
#include "sevpred/fusion.hpp"

namespace sevpred {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct PipelineConfig {
  std::uint64_t seed = 42;
  std::filesystem::path corpus;   // ingested corpus JSONL
  std::filesystem::path out_dir;  // reports and exports land here
  std::vector<ClassifierKind> models{kAllClassifiers.begin(), kAllClassifiers.end()};
  bool scaling = true;
  std::array<double, 3> ratios{0.70, 0.15, 0.15};
  NumberStyle paragraph_style = NumberStyle::PerMetricKind;
};

/// Everything that determines a run's outputs, plus the tool version.
nlohmann::json config_snapshot(const PipelineConfig& config);

/// Per-model seed derived from the root seed by model name.
std::uint64_t model_seed(std::uint64_t root, ClassifierKind kind);

struct MetricsTable {
  std::vector<std::string> ids;
  Matrix values;  // one MetricsVector per row
};

MetricsTable extract_metrics(const std::vector<MethodRecord>& records);
/// `id,lc,...,e` with shortest round-trip numbers.
std::string metrics_csv(const MetricsTable& table);
MetricsTable read_metrics_csv(const std::filesystem::path& path);

/// Labels for `ids` looked up in `records`; every id must be present and
/// labelled.
Labels labels_for(const std::vector<std::string>& ids, const std::vector<MethodRecord>& records);

/// Fit the scaler on `x` (when enabled), train, and keep the scaler in the
/// model so raw rows can be scored later.
TrainedModel train_model(const ClassifierSpec& spec, const Matrix& x, const Labels& y, bool scaling = true);

/// Probabilities for raw metric rows, scaled with the model's own scaler.
ProbaMatrix score_raw(const TrainedModel& model, const Matrix& raw);

/// `{id, proba: [p0..p3]}` per line.
std::string predictions_jsonl(const std::vector<std::string>& ids, const ProbaMatrix& proba);

struct Predictions {
  std::vector<std::string> ids;
  ProbaMatrix proba;
};
Predictions parse_predictions(std::string_view jsonl);

/// Score a predictions file against a labelled corpus JSONL, joined by id.
EvalReport score_external(const std::filesystem::path& predictions, const std::filesystem::path& truth);
EvalReport score_predictions(const Predictions& predictions, const std::vector<MethodRecord>& truth);

struct ModelRow {
  ClassifierKind kind;
  std::uint64_t seed;
  EvalReport report;
};

struct Rq1Result {
  std::vector<ModelRow> rows;
  nlohmann::json report;  // rq1_report.json contents
};

/// Split, extract, scale on train, fit every configured model, evaluate on
/// test. Pure: reads nothing from config paths.
Rq1Result run_rq1(const PipelineConfig& config, const Corpus& corpus);

/// Loads config.corpus, writes rq1_report.json and config.json to
/// config.out_dir.
Rq1Result run_rq1(const PipelineConfig& config);

/// File name -> JSONL content: {plain,inline,cls}_{train,valid,test}.jsonl.
/// Metrics are scaled with the train split's scaler.
std::map<std::string, std::string> fusion_exports(const PipelineConfig& config, const Corpus& corpus);

/// Loads config.corpus and writes the exports plus config.json.
std::vector<std::filesystem::path> run_fusion_export(const PipelineConfig& config);

}  // namespace sevpred

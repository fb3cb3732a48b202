// Command line front end for the severity prediction pipeline.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "sevpred/classifiers.hpp"
#include "sevpred/corpus.hpp"
#include "sevpred/error.hpp"
#include "sevpred/eval.hpp"
#include "sevpred/fusion.hpp"
#include "sevpred/io.hpp"
#include "sevpred/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sevpred;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

std::array<double, 3> parse_ratios(const std::vector<double>& r) {
  if (r.size() != 3) throw CLI::ValidationError("--ratios", "needs three values");
  return {r[0], r[1], r[2]};
}

nlohmann::json counts_json(const ClassCounts& c) { return std::vector<int>(c.begin(), c.end()); }

void corpus_build(const fs::path& in, const fs::path& out, bool dedup) {
  const Corpus raw = ingest(in);
  Corpus kept{dedup ? deduplicate(raw.records) : raw.records};
  write_file_atomic(out, serialize(kept));
  const nlohmann::json summary{{"records_in", raw.records.size()},
                               {"records_out", kept.records.size()},
                               {"class_counts", counts_json(class_counts(kept.records))}};
  std::cout << summary.dump() << "\n";
}

void corpus_split(const fs::path& corpus, std::uint64_t seed, const std::array<double, 3>& ratios,
                  const fs::path& out_dir) {
  const SplitSpec spec{seed, ratios};
  const Split s = split(ingest(corpus), spec);
  write_file_atomic(out_dir / "train.jsonl", serialize(s.train));
  write_file_atomic(out_dir / "valid.jsonl", serialize(s.validation));
  write_file_atomic(out_dir / "test.jsonl", serialize(s.test));
  const nlohmann::json report = split_report(s, spec);
  write_file_atomic(out_dir / "split_report.json", report.dump(2) + "\n");
  std::cout << report["sizes"].dump() << "\n";
}

void train(const std::string& kind, const fs::path& metrics, const fs::path& labels, std::uint64_t seed,
           bool scaling, const fs::path& out) {
  ClassifierSpec spec;
  spec.kind = parse_classifier_kind(kind);
  spec.seed = seed;
  const MetricsTable t = read_metrics_csv(metrics);
  const Labels y = labels_for(t.ids, ingest(labels).records);
  const TrainedModel m = train_model(spec, t.values, y, scaling);
  write_file_atomic(out, to_json(m).dump() + "\n");
}

void predict_cmd(const fs::path& model_path, const fs::path& metrics, const fs::path& out) {
  const TrainedModel m = model_from_json(nlohmann::json::parse(read_file(model_path)));
  const MetricsTable t = read_metrics_csv(metrics);
  write_file_atomic(out, predictions_jsonl(t.ids, score_raw(m, t.values)));
}

nlohmann::json parse_json_file(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, path.string() + ": " + e.what());
  }
}

void evaluate(const fs::path& pred, const fs::path& truth, const std::string& model_path, const fs::path& out) {
  nlohmann::json j = to_json(score_external(pred, truth));
  j["tool_version"] = kToolVersion;
  if (!model_path.empty()) {
    const TrainedModel m = model_from_json(parse_json_file(model_path));
    j["model"] = to_string(m.spec.kind);
    j["seed"] = m.spec.seed;
    j["hyperparameters"] = hyperparameters_json(m.spec);
  } else {
    j["hyperparameters"] = nullptr;
  }
  write_file_atomic(out, j.dump(2) + "\n");
  std::cout << nlohmann::json{{"f1_w", j["f1_w"]}, {"auc_w", j["auc_w"]}, {"mcc", j["mcc"]}}.dump() << "\n";
}

void fusion_export(const PipelineConfig& config, const std::string& mode, const std::string& part) {
  const auto files = fusion_exports(config, ingest(config.corpus));
  for (const auto& [name, content] : files) {
    const bool mode_ok = mode == "all" || name.rfind(mode + "_", 0) == 0;
    const bool part_ok = part == "all" || name.find("_" + part + ".") != std::string::npos;
    if (mode_ok && part_ok) write_file_atomic(config.out_dir / name, content);
  }
  write_file_atomic(config.out_dir / "config.json", config_snapshot(config).dump(2) + "\n");
}

void report_curves(const fs::path& report_path, const std::string& out) {
  const std::string csv = curves_csv(report_from_json(parse_json_file(report_path)));
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file_atomic(out, csv);
  }
}

void rq1(PipelineConfig config, const std::vector<std::string>& models) {
  if (!models.empty()) {
    config.models.clear();
    for (const auto& m : models) config.models.push_back(parse_classifier_kind(m));
  }
  const Rq1Result r = run_rq1(config);
  for (const ModelRow& row : r.rows) {
    std::printf("%-24s f1_w=%.4f auc_w=%.4f mcc=%.4f\n", std::string(to_string(row.kind)).c_str(), row.report.f1_w,
                row.report.auc_w, row.report.mcc);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bug severity prediction from method-level code metrics"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Build and split labelled method corpora");
  corpus->require_subcommand(1);
  fs::path build_in, build_out;
  bool keep_duplicates = false;
  auto* build = corpus->add_subcommand("build", "Ingest raw JSONL: strip comments, unify labels, deduplicate");
  build->add_option("--in", build_in, "Raw records (JSONL)")->required();
  build->add_option("--out", build_out, "Corpus output (JSONL)")->required();
  build->add_flag("--keep-duplicates", keep_duplicates, "Skip deduplication");

  fs::path split_corpus, split_out;
  std::uint64_t split_seed = 42;
  std::vector<double> split_ratios{0.70, 0.15, 0.15};
  auto* split_cmd = corpus->add_subcommand("split", "Seeded 70/15/15 train/valid/test split");
  split_cmd->add_option("--corpus", split_corpus, "Corpus (JSONL)")->required();
  split_cmd->add_option("--seed", split_seed, "Shuffle seed");
  split_cmd->add_option("--ratios", split_ratios, "Train, valid, test ratios")->expected(3)->delimiter(',');
  split_cmd->add_option("--out-dir", split_out, "Directory for train/valid/test.jsonl")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Source code metrics");
  metrics->require_subcommand(1);
  fs::path extract_corpus, extract_out;
  auto* extract = metrics->add_subcommand("extract", "Write the ten metrics per method as CSV");
  extract->add_option("--corpus", extract_corpus, "Corpus (JSONL)")->required();
  extract->add_option("--out", extract_out, "CSV output")->required();

  // train / predict
  std::string train_kind;
  fs::path train_csv, train_labels, train_out;
  std::uint64_t train_seed = 42;
  bool no_scaling = false;
  auto* train_cmd = app.add_subcommand("train", "Fit one classifier on a metrics CSV");
  train_cmd->add_option("--model", train_kind, "knn|svm|naive_bayes|decision_tree|random_forest|ada_boost|"
                                               "gradient_boosted_trees|mlp")
      ->required();
  train_cmd->add_option("--train", train_csv, "Metrics CSV from 'metrics extract'")->required();
  train_cmd->add_option("--corpus", train_labels, "Corpus JSONL holding the labels for those ids")->required();
  train_cmd->add_option("--seed", train_seed, "Model seed");
  train_cmd->add_flag("--no-scaling", no_scaling, "Train on raw metric values");
  train_cmd->add_option("--out", train_out, "Model file (JSON)")->required();

  fs::path predict_model, predict_csv, predict_out;
  auto* predict_sub = app.add_subcommand("predict", "Class probabilities for a metrics CSV");
  predict_sub->add_option("--model", predict_model, "Model file")->required();
  predict_sub->add_option("--metrics", predict_csv, "Metrics CSV")->required();
  predict_sub->add_option("--out", predict_out, "Predictions (JSONL)")->required();

  // evaluate
  fs::path eval_pred, eval_truth, eval_out;
  std::string eval_model;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a predictions file against labelled records");
  evaluate_cmd->add_option("--pred", eval_pred, "Predictions JSONL: {id, proba: [p0,p1,p2,p3]}")->required();
  evaluate_cmd->add_option("--truth", eval_truth, "Labelled corpus JSONL")->required();
  evaluate_cmd->add_option("--model", eval_model, "Model file whose hyperparameters go into the report");
  evaluate_cmd->add_option("--out", eval_out, "Report (JSON)")->required();

  // fusion
  auto* fusion = app.add_subcommand("fusion", "Inputs for code language model fine-tuning");
  fusion->require_subcommand(1);
  PipelineConfig fusion_config;
  std::string fusion_mode = "all", fusion_split = "all";
  bool integral_bare = false;
  auto* fexport = fusion->add_subcommand("export", "Write plain/inline/cls JSONL per split");
  fexport->add_option("--corpus", fusion_config.corpus, "Corpus (JSONL)")->required();
  fexport->add_option("--seed", fusion_config.seed, "Split seed");
  fexport->add_option("--mode", fusion_mode, "inline|cls|plain|all")
      ->check(CLI::IsMember({"inline", "cls", "plain", "all"}));
  fexport->add_option("--split", fusion_split, "train|valid|test|all")
      ->check(CLI::IsMember({"train", "valid", "test", "all"}));
  fexport->add_flag("--integral-bare", integral_bare, "Print every whole number without decimals");
  fexport->add_option("--out-dir", fusion_config.out_dir, "Output directory")->required();

  // report
  auto* report_cmd = app.add_subcommand("report", "Render saved reports");
  report_cmd->require_subcommand(1);
  fs::path curves_report;
  std::string curves_format = "csv", curves_out;
  auto* curves = report_cmd->add_subcommand("curves", "ROC and precision-recall points");
  curves->add_option("--report", curves_report, "Report from 'evaluate'")->required();
  curves->add_option("--format", curves_format, "Output format")->check(CLI::IsMember({"csv"}));
  curves->add_option("--out", curves_out, "Output file (default stdout)");

  // rq1
  PipelineConfig rq1_config;
  std::vector<std::string> rq1_models;
  auto* rq1_cmd = app.add_subcommand("rq1", "Train and evaluate all classic models end to end");
  rq1_cmd->add_option("--corpus", rq1_config.corpus, "Corpus (JSONL)")->required();
  rq1_cmd->add_option("--seed", rq1_config.seed, "Root seed");
  rq1_cmd->add_option("--models", rq1_models, "Subset of models")->delimiter(',');
  rq1_cmd->add_option("--out-dir", rq1_config.out_dir, "Directory for rq1_report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build) corpus_build(build_in, build_out, !keep_duplicates);
    else if (*split_cmd) corpus_split(split_corpus, split_seed, parse_ratios(split_ratios), split_out);
    else if (*extract) write_file_atomic(extract_out, metrics_csv(extract_metrics(ingest(extract_corpus).records)));
    else if (*train_cmd) train(train_kind, train_csv, train_labels, train_seed, !no_scaling, train_out);
    else if (*predict_sub) predict_cmd(predict_model, predict_csv, predict_out);
    else if (*evaluate_cmd) evaluate(eval_pred, eval_truth, eval_model, eval_out);
    else if (*fexport) {
      if (integral_bare) fusion_config.paragraph_style = NumberStyle::IntegralBare;
      fusion_export(fusion_config, fusion_mode, fusion_split);
    } else if (*curves) report_curves(curves_report, curves_out);
    else if (*rq1_cmd) rq1(rq1_config, rq1_models);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>

#include "blobs.hpp"
#include "naive_eval.hpp"
#include "oracle_corpus.hpp"
#include "sevpred/classifiers.hpp"
#include "sevpred/corpus.hpp"
#include "sevpred/error.hpp"
#include "sevpred/eval.hpp"
#include "sevpred/fusion.hpp"
#include "sevpred/io.hpp"
#include "sevpred/metrics.hpp"
#include "sevpred/pipeline.hpp"
#include "sevpred/rng.hpp"
#include "synthetic_corpus.hpp"

using namespace sevpred;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

Outcome metric_oracle() {
  Outcome out;
  const auto t0 = Clock::now();
  for (const auto& m : oracle::corpus()) {
    const MetricsVector v = measure_source(m.source);
    const oracle::Expected x = oracle::oracle_metrics(m);
    const std::string name = m.name;
    out.require(v(kLC) == x.lc && v(kMA) == x.ma && v(kNBD) == x.nbd && v(kML) == x.ml && v(kFO) == x.fo,
                name + ": integer metric mismatch");
    for (auto [got, want] : {std::pair{v(kPI), x.pi}, {v(kD), x.d}, {v(kMI), x.mi}, {v(kR), x.r}, {v(kE), x.e}}) {
      out.require(close_rel(got, want), name + ": real metric mismatch");
    }
  }
  const double s = seconds_since(t0);
  out.require(s < 1.0, "took longer than 1 s");
  out.detail = out.ok ? std::to_string(oracle::corpus().size()) + " methods in " + std::to_string(s * 1e3) + " ms"
                      : out.detail;
  return out;
}

Outcome halstead_identities() {
  Outcome out;
  Rng rng(20240601);
  int checked_mi = 0;
  for (int i = 0; i < 1000; ++i) {
    MethodShape shape;
    auto& c = shape.halstead_counts;
    c.distinct_operators = static_cast<int>(rng.below(40));
    c.distinct_operands = static_cast<int>(rng.below(80));
    c.total_operators = c.distinct_operators + static_cast<int>(rng.below(300));
    c.total_operands = c.distinct_operands + static_cast<int>(rng.below(400));
    const Halstead h = halstead(shape);
    out.require(close_rel(h.effort, h.difficulty * h.volume), "E != D*V");
    const int ma = 1 + static_cast<int>(rng.below(50));
    const int lc = 1 + static_cast<int>(rng.below(500));
    if (h.volume > 0) {
      ++checked_mi;
      const double want = 171.0 - 5.2 * std::log(h.volume) - 0.23 * ma - 16.2 * std::log(lc);
      out.require(close_rel(maintainability_index(h.volume, ma, lc), want), "MI formula mismatch");
    }
  }
  if (out.ok) out.detail = "1000 shapes, MI checked on " + std::to_string(checked_mi);
  return out;
}

Outcome eval_brute_force() {
  Outcome out;
  Rng rng(99);
  for (int round = 0; round < 1000; ++round) {
    const auto n = static_cast<Eigen::Index>(2 + rng.below(60));
    const auto classes = 1 + rng.below(4);
    Labels t(n), y(n);
    ProbaMatrix proba(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      t(i) = static_cast<int>(rng.below(classes));
      y(i) = static_cast<int>(rng.below(4));
      for (int c = 0; c < 4; ++c) proba(i, c) = static_cast<double>(rng.below(11)) / 10.0;
    }
    const ClassScores s = weighted_prf(t, y);
    const naive::Naive ref = naive::prf(t, y);
    for (int c = 0; c < 4; ++c) {
      out.require(std::abs(s.precision[c] - ref.p[c]) < 1e-9 && std::abs(s.recall[c] - ref.r[c]) < 1e-9 &&
                      std::abs(s.f1[c] - ref.f[c]) < 1e-9,
                  "per-class P/R/F1 mismatch");
    }
    out.require(std::abs(s.precision_w - ref.pw) < 1e-9 && std::abs(s.recall_w - ref.rw) < 1e-9 &&
                    std::abs(s.f1_w - ref.fw) < 1e-9,
                "weighted P/R/F1 mismatch");
    out.require(std::abs(mcc(t, y) - naive::mcc(t, y)) < 1e-9, "MCC mismatch");
    for (int c = 0; c < 4; ++c) {
      const auto support = (t.array() == c).count();
      if (support == 0 || support == n) continue;
      out.require(std::abs(trapezoid_area(roc_curve(t, proba.col(c), c)) - naive::auc(t, proba.col(c), c)) < 1e-9,
                  "AUC mismatch");
    }
  }
  // A constant predictor has MCC exactly 0.
  Labels t(8);
  t << 0, 1, 2, 3, 1, 1, 2, 0;
  for (int k = 0; k < 4; ++k) out.require(mcc(t, Labels::Constant(8, k)) == 0.0, "constant predictor MCC != 0");
  if (out.ok) out.detail = "1000 draws; constant predictor MCC = 0";
  return out;
}

Outcome label_unification() {
  Outcome out;
  const std::pair<const char*, int> table[] = {{"Critical", 0}, {"Blocker", 0}, {"Major", 1},
                                               {"High", 1},     {"Medium", 2},  {"Low", 3},
                                               {"Trivial", 3},  {"Minor", 3}};
  int covered = 0;
  for (auto [label, cls] : table) {
    out.require(unify_severity(label) == cls, std::string(label) + " mapped wrongly");
    covered += unify_severity(label) == cls;
  }
  for (const char* other : {"Normal", "P1", "", "Severe", "Major!"}) {
    bool raised = false;
    try {
      unify_severity(other);
    } catch (const Error& e) {
      raised = e.code() == ErrorCode::UnknownSeverityLabel;
    }
    out.require(raised, std::string("'") + other + "' accepted");
  }
  if (out.ok) out.detail = std::to_string(covered) + "/8 table rows; unknown labels rejected";
  return out;
}

Outcome split_contract() {
  Outcome out;
  Corpus corpus;
  Rng rng(5);
  for (int i = 0; i < 3342; ++i) {
    MethodRecord r;
    r.id = "rec-" + std::to_string(i);
    r.project = "p";
    r.issue_id = "I-" + std::to_string(i);
    r.severity_raw = "Major";
    r.severity_class = static_cast<int>(rng.below(4));
    r.source = "void m" + std::to_string(i) + "() {}";
    corpus.records.push_back(std::move(r));
  }
  const Split a = split(corpus, {42});
  const Split b = split(corpus, {42});
  const std::array<double, 3> want{0.70 * 3342, 0.15 * 3342, 0.15 * 3342};
  const std::array<std::size_t, 3> got{a.train.size(), a.validation.size(), a.test.size()};
  for (int k = 0; k < 3; ++k) out.require(std::abs(static_cast<double>(got[k]) - want[k]) <= 1.0, "size off by > 1");
  std::set<std::string> ids;
  for (const auto* part : {&a.train, &a.validation, &a.test}) {
    for (const auto& r : *part) out.require(ids.insert(r.id).second, "record in two parts");
  }
  out.require(ids.size() == corpus.records.size(), "not a partition");
  const std::string bytes_a = serialize(a.train) + serialize(a.validation) + serialize(a.test);
  const std::string bytes_b = serialize(b.train) + serialize(b.validation) + serialize(b.test);
  out.require(bytes_a == bytes_b, "two runs differ");
  if (out.ok) {
    out.detail = std::to_string(got[0]) + "/" + std::to_string(got[1]) + "/" + std::to_string(got[2]) +
                 ", byte-identical reruns";
  }
  return out;
}

Outcome classifier_sanity() {
  Outcome out;
  const auto t0 = Clock::now();
  const blobs::Dataset train = blobs::make(1);
  const blobs::Dataset test = blobs::make(2);
  double f1_forest = 0, f1_tree = 0, worst_mcc = 1;
  std::string worst;
  for (ClassifierKind kind : kAllClassifiers) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.seed = 7;
    const TrainedModel m = train_model(spec, train.x, train.y);
    const ProbaMatrix p = score_raw(m, test.x);
    const EvalReport r = report(test.y, argmax_labels(p), p);
    if (r.mcc < worst_mcc) {
      worst_mcc = r.mcc;
      worst = std::string(to_string(kind));
    }
    out.require(r.mcc > 0.9, std::string(to_string(kind)) + " MCC " + std::to_string(r.mcc));
    if (kind == ClassifierKind::RandomForest) f1_forest = r.f1_w;
    if (kind == ClassifierKind::DecisionTree) f1_tree = r.f1_w;
  }
  ClassCounts counts{};
  for (Eigen::Index i = 0; i < train.y.size(); ++i) ++counts[static_cast<std::size_t>(train.y(i))];
  const int top = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  const double f1_majority = weighted_prf(test.y, Labels::Constant(test.y.size(), top)).f1_w;
  out.require(f1_forest >= f1_tree, "forest F1w below tree");
  out.require(f1_tree >= f1_majority, "tree F1w below majority");
  const double s = seconds_since(t0);
  out.require(s < 60.0, "took longer than 60 s");
  if (out.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "min MCC %.3f (%s); F1w forest %.3f >= tree %.3f >= majority %.3f; %.1f s",
                  worst_mcc, worst.c_str(), f1_forest, f1_tree, f1_majority, s);
    out.detail = buf;
  }
  return out;
}

Outcome table_v() {
  Outcome out;
  const std::string want =
      "The code contains 1 lines and its complexity metrics values are 2, 3 and 4. The nested block depth is 5, "
      "and the difficulty of this code is 6. The maintainability score is 7 and this method calls 8 number of "
      "methods while its readability and effort metrics values are 9, 10";
  const std::string got =
      render_metric_paragraph(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, NumberStyle::IntegralBare);
  out.require(got == want, "paragraph differs");
  if (out.ok) out.detail = std::to_string(got.size()) + " bytes identical";
  return out;
}

std::string random_text(Rng& rng, int tokens) {
  static const char* const kPieces[] = {"x",  "value", "getName", "7", "3.14", "(",  ")",      "{", "}",
                                        ";",  "=",     "+=",      ".", "\"a b\"", "if", "return", "<=", ","};
  static const char* const kGaps[] = {"", " ", "   ", "\n", "\n\t", "\t"};
  std::string out;
  for (int i = 0; i < tokens; ++i) {
    out += kGaps[rng.below(6)];
    out += kPieces[rng.below(18)];
  }
  return out;
}

Outcome payload_policy() {
  Outcome out;
  Rng rng(8);
  int cases = 0, truncated = 0;
  while (cases < 500) {
    const std::string nl = random_text(rng, static_cast<int>(rng.below(350)));
    if (estimate_tokens(nl) > kTokenBudget - kSpecialTokens) continue;
    const std::string pl = random_text(rng, static_cast<int>(rng.below(1000)));
    ++cases;
    const FusionPayload p = build_payload(nl, pl);
    out.require(p.nl_text == nl, "nl altered");
    out.require(pl.compare(0, p.pl_text.size(), p.pl_text) == 0, "pl not a prefix");
    out.require(p.estimated_tokens <= kTokenBudget, "over budget");
    truncated += p.truncated;
  }
  if (out.ok) out.detail = "500 cases, " + std::to_string(truncated) + " tail-truncated";
  return out;
}

Outcome rq1_determinism() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / "sevpred_acceptance_rq1";
  fs::remove_all(dir);
  write_file_atomic(dir / "corpus.jsonl", serialize(synthetic::make(300, 11)));
  std::array<std::string, 2> bytes;
  for (int run = 0; run < 2; ++run) {
    PipelineConfig config;
    config.seed = 2024;
    config.corpus = dir / "corpus.jsonl";
    config.out_dir = dir / ("run" + std::to_string(run));
    run_rq1(config);
    bytes[static_cast<std::size_t>(run)] = read_file(config.out_dir / "rq1_report.json");
  }
  const std::size_t h0 = std::hash<std::string>{}(bytes[0]);
  const std::size_t h1 = std::hash<std::string>{}(bytes[1]);
  out.require(h0 == h1 && bytes[0] == bytes[1], "reports differ");
  if (out.ok) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "report hash %016zx", h0);
    out.detail = buf;
  }
  fs::remove_all(dir);
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"metric oracle suite", metric_oracle},
      {"Halstead/MI identities", halstead_identities},
      {"evaluation brute-force equivalence", eval_brute_force},
      {"label unification", label_unification},
      {"split contract", split_contract},
      {"classifier sanity on Gaussian blobs", classifier_sanity},
      {"inline metric paragraph", table_v},
      {"payload policy", payload_policy},
      {"end-to-end determinism", rq1_determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.ok;
    std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sevpred/method_parser.hpp"
#include "sevpred/types.hpp"

namespace sevpred {

inline constexpr int kTokenBudget = 512;
inline constexpr int kSpecialTokens = 3;  // [CLS], [SEP], [EOS]
inline constexpr int kEmbeddingWidth = 768;
inline constexpr int kFusedWidth = kEmbeddingWidth + kNumMetrics;

enum class NumberStyle {
  // Count metrics (LC, MA, NBD, ML, FO) bare when integral; everything
  // else with 2 decimals.
  PerMetricKind,
  // Any integral value bare; others with 2 decimals.
  IntegralBare,
};

/// The metrics paragraph; values in MetricsVector order. Throws WrongArity
/// unless exactly 10 values are given.
std::string render_metric_paragraph(const std::vector<double>& values,
                                    NumberStyle style = NumberStyle::PerMetricKind);
std::string render_metric_paragraph(const MetricsVector& values, NumberStyle style = NumberStyle::PerMetricKind);

/// Surrogate subword count: word runs ([A-Za-z0-9_]+) plus every other
/// non-space character, times 1.3, rounded up.
int estimate_tokens(std::string_view text);

struct FusionPayload {
  std::string nl_text;
  std::string pl_text;  // possibly tail-truncated
  bool truncated = false;
  bool padded = false;  // estimate below the budget
  int estimated_tokens = 0;  // including specials

  /// [CLS] nl [SEP] pl [EOS]; the nl segment is omitted when empty.
  std::vector<std::string> segments() const;
};

/// Keep nl whole and cut pl at a token boundary until the estimate fits the
/// budget. Throws NLTooLarge when nl alone does not fit.
FusionPayload build_payload(std::string nl, std::string_view pl);

struct InlineRecord {
  std::string id;
  std::string nl_text;
  std::string pl_text;
  std::optional<int> label;

  friend bool operator==(const InlineRecord&, const InlineRecord&) = default;
};

struct ClsRecord {
  std::string id;
  std::string pl_text;
  std::vector<double> metrics;
  std::optional<int> label;

  friend bool operator==(const ClsRecord&, const ClsRecord&) = default;
};

// Exports pair records[i] with metrics.row(i) (scaled). pl_text is the full
// source: the model-side tokenizer applies the exact cut, and build_payload
// has already checked that the paragraph fits.

std::string export_concat_inline(const std::vector<MethodRecord>& records, const Matrix& metrics,
                                 NumberStyle style = NumberStyle::PerMetricKind);
std::string export_concat_cls(const std::vector<MethodRecord>& records, const Matrix& metrics);
/// Code only, empty nl_text.
std::string export_plain(const std::vector<MethodRecord>& records);

std::vector<InlineRecord> import_inline(std::string_view jsonl);
std::vector<ClsRecord> import_cls(std::string_view jsonl);

}  // namespace sevpred

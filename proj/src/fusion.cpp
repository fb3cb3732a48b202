#include "sevpred/fusion.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "sevpred/error.hpp"

namespace sevpred {

namespace {

std::string format_value(double v, bool bare) {
  char buf[64];
  std::snprintf(buf, sizeof buf, bare ? "%.0f" : "%.2f", v);
  std::string s(buf);
  if (s == "-0" || s == "-0.00") s.erase(0, 1);
  return s;
}

bool is_word(unsigned char c) { return std::isalnum(c) || c == '_'; }

// End offsets of each raw token in `text`.
std::vector<std::size_t> token_ends(std::string_view text) {
  std::vector<std::size_t> ends;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (is_word(c)) {
      while (i < text.size() && is_word(static_cast<unsigned char>(text[i]))) ++i;
      ends.push_back(i);
    } else {
      ends.push_back(++i);
    }
  }
  return ends;
}

// ceil(1.3 * raw) in integers.
int scaled(std::size_t raw) { return static_cast<int>((13 * raw + 9) / 10); }

std::optional<int> label_of(const MethodRecord& r) { return r.severity_class; }

nlohmann::json label_json(const std::optional<int>& label) {
  return label ? nlohmann::json(*label) : nlohmann::json(nullptr);
}

void check_rows(const std::vector<MethodRecord>& records, const Matrix& metrics) {
  if (metrics.rows() != static_cast<Eigen::Index>(records.size()) || metrics.cols() != kNumMetrics) {
    throw Error(ErrorCode::DimensionMismatch, "metrics matrix must be " + std::to_string(records.size()) + " x " +
                                                  std::to_string(kNumMetrics));
  }
}

template <typename Fn>
void for_each_json_line(std::string_view text, Fn fn) {
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        fn(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

std::optional<int> label_from(const nlohmann::json& j) {
  const auto& l = j.at("label");
  if (l.is_null()) return std::nullopt;
  return l.get<int>();
}

}  // namespace

std::string render_metric_paragraph(const std::vector<double>& values, NumberStyle style) {
  if (values.size() != kNumMetrics) {
    throw Error(ErrorCode::WrongArity, "expected 10 metric values, got " + std::to_string(values.size()));
  }
  std::array<std::string, kNumMetrics> v;
  for (int i = 0; i < kNumMetrics; ++i) {
    const double x = values[static_cast<std::size_t>(i)];
    const bool integral = std::isfinite(x) && x == std::trunc(x);
    const bool bare = integral && (style == NumberStyle::IntegralBare || kIntegerMetric[i]);
    v[i] = format_value(x, bare);
  }
  return "The code contains " + v[kLC] + " lines and its complexity metrics values are " + v[kPI] + ", " +
         v[kMA] + " and " + v[kNBD] + ". The nested block depth is " + v[kML] +
         ", and the difficulty of this code is " + v[kD] + ". The maintainability score is " + v[kMI] +
         " and this method calls " + v[kFO] +
         " number of methods while its readability and effort metrics values are " + v[kR] + ", " + v[kE];
}

std::string render_metric_paragraph(const MetricsVector& values, NumberStyle style) {
  return render_metric_paragraph(std::vector<double>(values.data(), values.data() + kNumMetrics), style);
}

int estimate_tokens(std::string_view text) { return scaled(token_ends(text).size()); }

std::vector<std::string> FusionPayload::segments() const {
  if (nl_text.empty()) return {"[CLS]", "[SEP]", pl_text, "[EOS]"};
  return {"[CLS]", nl_text, "[SEP]", pl_text, "[EOS]"};
}

FusionPayload build_payload(std::string nl, std::string_view pl) {
  const int nl_tokens = estimate_tokens(nl);
  const int room = kTokenBudget - kSpecialTokens - nl_tokens;
  if (room < 0) {
    throw Error(ErrorCode::NLTooLarge, "paragraph needs " + std::to_string(nl_tokens) + " of " +
                                           std::to_string(kTokenBudget - kSpecialTokens) + " tokens");
  }
  FusionPayload p;
  p.nl_text = std::move(nl);
  const std::vector<std::size_t> ends = token_ends(pl);
  std::size_t keep = ends.size();
  while (keep > 0 && scaled(keep) > room) --keep;
  if (keep == ends.size()) {
    p.pl_text = std::string(pl);
  } else {
    p.truncated = true;
    p.pl_text = std::string(pl.substr(0, keep == 0 ? 0 : ends[keep - 1]));
  }
  p.estimated_tokens = nl_tokens + kSpecialTokens + scaled(keep);
  p.padded = p.estimated_tokens < kTokenBudget;
  return p;
}

std::string export_concat_inline(const std::vector<MethodRecord>& records, const Matrix& metrics,
                                 NumberStyle style) {
  check_rows(records, metrics);
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const MethodRecord& r = records[i];
    const Eigen::RowVectorXd row = metrics.row(static_cast<Eigen::Index>(i));
    const std::vector<double> values(row.data(), row.data() + row.size());
    const FusionPayload p = build_payload(render_metric_paragraph(values, style), r.source);
    nlohmann::json j{{"id", r.id}, {"nl_text", p.nl_text}, {"pl_text", r.source}, {"label", label_json(label_of(r))}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string export_concat_cls(const std::vector<MethodRecord>& records, const Matrix& metrics) {
  check_rows(records, metrics);
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const MethodRecord& r = records[i];
    const Eigen::RowVectorXd row = metrics.row(static_cast<Eigen::Index>(i));
    nlohmann::json j{{"id", r.id},
                     {"pl_text", r.source},
                     {"metrics", std::vector<double>(row.data(), row.data() + row.size())},
                     {"label", label_json(label_of(r))}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string export_plain(const std::vector<MethodRecord>& records) {
  std::string out;
  for (const MethodRecord& r : records) {
    nlohmann::json j{{"id", r.id}, {"nl_text", ""}, {"pl_text", r.source}, {"label", label_json(label_of(r))}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<InlineRecord> import_inline(std::string_view jsonl) {
  std::vector<InlineRecord> out;
  for_each_json_line(jsonl, [&](const nlohmann::json& j) {
    out.push_back({j.at("id").get<std::string>(), j.at("nl_text").get<std::string>(),
                   j.at("pl_text").get<std::string>(), label_from(j)});
  });
  return out;
}

std::vector<ClsRecord> import_cls(std::string_view jsonl) {
  std::vector<ClsRecord> out;
  for_each_json_line(jsonl, [&](const nlohmann::json& j) {
    ClsRecord r{j.at("id").get<std::string>(), j.at("pl_text").get<std::string>(),
                j.at("metrics").get<std::vector<double>>(), label_from(j)};
    if (r.metrics.size() != kNumMetrics) {
      throw Error(ErrorCode::WrongArity, "record " + r.id + " has " + std::to_string(r.metrics.size()) + " metrics");
    }
    out.push_back(std::move(r));
  });
  return out;
}

}  // namespace sevpred

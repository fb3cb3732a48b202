#include "sevpred/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "sevpred/error.hpp"
#include "sevpred/io.hpp"
#include "sevpred/rng.hpp"

namespace sevpred {

int unify_severity(std::string_view raw) {
  std::string label;
  for (char c : raw) label.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  const auto first = label.find_first_not_of(" \t\r\n");
  const auto last = label.find_last_not_of(" \t\r\n");
  label = first == std::string::npos ? "" : label.substr(first, last - first + 1);

  if (label == "critical" || label == "blocker") return 0;
  if (label == "major" || label == "high") return 1;
  if (label == "medium") return 2;
  if (label == "low" || label == "trivial" || label == "minor") return 3;
  throw Error(ErrorCode::UnknownSeverityLabel, "'" + std::string(raw) + "'");
}

std::string normalized_source(std::string_view source) {
  const std::string clean = strip_comments(source);
  std::string out;
  bool pending_space = false;
  for (char c : clean) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<MethodRecord> deduplicate(const std::vector<MethodRecord>& records) {
  std::unordered_set<std::string> seen;
  std::vector<MethodRecord> kept;
  for (const MethodRecord& r : records) {
    if (seen.insert(normalized_source(r.source)).second) kept.push_back(r);
  }
  return kept;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  // Integer weights avoid floating ties such as 0.15 * 10 != 1.5.
  std::array<std::uint64_t, 3> weight{};
  for (int i = 0; i < 3; ++i) weight[i] = static_cast<std::uint64_t>(std::llround(ratios[i] * 1e6));
  const std::uint64_t total = weight[0] + weight[1] + weight[2];
  std::array<std::size_t, 3> size{};
  std::array<std::uint64_t, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t scaled = static_cast<std::uint64_t>(n) * weight[i];
    size[i] = static_cast<std::size_t>(scaled / total);
    remainder[i] = scaled % total;
    assigned += size[i];
  }
  std::array<int, 3> order{2, 1, 0};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++size[order[k % 3]];
  return size;
}

ClassCounts class_counts(const std::vector<MethodRecord>& records) {
  ClassCounts counts{};
  for (const MethodRecord& r : records) {
    if (r.severity_class && *r.severity_class >= 0 && *r.severity_class < kNumClasses) {
      ++counts[static_cast<std::size_t>(*r.severity_class)];
    }
  }
  return counts;
}

Split split(const Corpus& corpus, const SplitSpec& spec) {
  const std::size_t n = corpus.records.size();
  if (n < 10) throw Error(ErrorCode::CorpusTooSmall, std::to_string(n) + " records, need >= 10");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::substream(spec.seed, "split");
  rng.shuffle(order);

  const auto sizes = split_sizes(n, spec.ratios);
  Split out;
  for (std::size_t k = 0; k < n; ++k) {
    const MethodRecord& r = corpus.records[order[k]];
    if (k < sizes[0]) {
      out.train.push_back(r);
    } else if (k < sizes[0] + sizes[1]) {
      out.validation.push_back(r);
    } else {
      out.test.push_back(r);
    }
  }
  out.train_counts = class_counts(out.train);
  out.validation_counts = class_counts(out.validation);
  out.test_counts = class_counts(out.test);
  return out;
}

nlohmann::json record_to_json(const MethodRecord& r) {
  nlohmann::json out;
  out["id"] = r.id;
  out["project"] = r.project;
  out["dataset_origin"] = std::string(to_string(r.dataset_origin));
  out["issue_id"] = r.issue_id;
  out["severity_raw"] = r.severity_raw;
  out["severity_class"] = r.severity_class ? nlohmann::json(*r.severity_class) : nlohmann::json(nullptr);
  out["source"] = r.source;
  return out;
}

MethodRecord record_from_json(const nlohmann::json& j) {
  auto text = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::MalformedRecord, std::string("field '") + key + "' missing or not a string");
    }
    return j[key].get<std::string>();
  };
  if (!j.is_object()) throw Error(ErrorCode::MalformedRecord, "record is not an object");
  MethodRecord r;
  r.id = text("id");
  r.project = text("project");
  try {
    r.dataset_origin = parse_dataset_origin(text("dataset_origin"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedRecord) throw;
    throw Error(ErrorCode::MalformedRecord, e.what());
  }
  r.issue_id = text("issue_id");
  r.severity_raw = text("severity_raw");
  r.source = text("source");
  if (!j.contains("severity_class")) {
    throw Error(ErrorCode::MalformedRecord, "field 'severity_class' missing");
  }
  const auto& cls = j["severity_class"];
  if (!cls.is_null()) {
    if (!cls.is_number_integer() || cls.get<int>() < 0 || cls.get<int>() >= kNumClasses) {
      throw Error(ErrorCode::MalformedRecord, "severity_class must be null or 0-3");
    }
    r.severity_class = cls.get<int>();
  }
  return r;
}

Corpus ingest_text(std::string_view jsonl) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  int number = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    start = end + 1;
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::string where = "line " + std::to_string(number);
    MethodRecord r;
    try {
      r = record_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRecord, where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedRecord, where + ": " + e.what());
    }
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::MalformedRecord, where + ": duplicate id '" + r.id + "'");
    }
    try {
      r.source = strip_comments(r.source);
      if (!r.severity_class) r.severity_class = unify_severity(r.severity_raw);
    } catch (const Error& e) {
      throw Error(e.code(), "record '" + r.id + "' (" + where + "): " + e.what());
    }
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

Corpus ingest(const std::filesystem::path& path) { return ingest_text(read_file(path)); }

std::string serialize(const std::vector<MethodRecord>& records) {
  std::string out;
  for (const MethodRecord& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

nlohmann::json split_report(const Split& s, const SplitSpec& spec) {
  ClassCounts all{};
  for (int c = 0; c < kNumClasses; ++c) {
    all[c] = s.train_counts[c] + s.validation_counts[c] + s.test_counts[c];
  }
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["ratios"] = spec.ratios;
  j["sizes"] = {{"train", s.train.size()}, {"valid", s.validation.size()}, {"test", s.test.size()}};
  j["class_counts"] = {{"train", s.train_counts},
                       {"valid", s.validation_counts},
                       {"test", s.test_counts},
                       {"all", all}};
  return j;
}

}  // namespace sevpred

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sevpred/method_parser.hpp"
#include "sevpred/types.hpp"

namespace sevpred {

/// Labeled, comment-free buggy methods. After ingest every record carries a
/// severity_class.
struct Corpus {
  std::vector<MethodRecord> records;
};

/// Map a tracker severity label to its class: critical/blocker 0,
/// major/high 1, medium 2, low/trivial/minor 3. Case and surrounding
/// whitespace are ignored.
int unify_severity(std::string_view raw);

/// Source with comments stripped and whitespace runs collapsed to a space.
std::string normalized_source(std::string_view source);

/// Keep the first record of every normalized-source group, in input order.
std::vector<MethodRecord> deduplicate(const std::vector<MethodRecord>& records);

struct SplitSpec {
  std::uint64_t seed = 0;
  std::array<double, 3> ratios{0.70, 0.15, 0.15};
};

using ClassCounts = std::array<int, kNumClasses>;

struct Split {
  std::vector<MethodRecord> train;
  std::vector<MethodRecord> validation;
  std::vector<MethodRecord> test;

  ClassCounts train_counts{};
  ClassCounts validation_counts{};
  ClassCounts test_counts{};
};

/// Part sizes for n items: largest-remainder apportionment of the ratios,
/// ties going to the later part.
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios);

/// Seeded shuffle followed by a contiguous train/validation/test cut.
Split split(const Corpus& corpus, const SplitSpec& spec);

ClassCounts class_counts(const std::vector<MethodRecord>& records);

nlohmann::json record_to_json(const MethodRecord& record);
/// Throws MalformedRecord on missing or mistyped fields.
MethodRecord record_from_json(const nlohmann::json& j);

/// Parse JSONL, strip comments from every source and unify labels that have
/// no severity_class yet.
Corpus ingest(const std::filesystem::path& path);
Corpus ingest_text(std::string_view jsonl);

std::string serialize(const std::vector<MethodRecord>& records);
inline std::string serialize(const Corpus& corpus) { return serialize(corpus.records); }

nlohmann::json split_report(const Split& split, const SplitSpec& spec);

}  // namespace sevpred

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sevpred {

enum class DatasetOrigin { Defects4j, Bugsjar, Other };

std::string_view to_string(DatasetOrigin origin);
DatasetOrigin parse_dataset_origin(std::string_view text);

/// One buggy method and its labels.
struct MethodRecord {
  std::string id;
  std::string project;
  DatasetOrigin dataset_origin = DatasetOrigin::Other;
  std::string issue_id;
  std::string severity_raw;
  std::optional<int> severity_class;
  std::string source;

  friend bool operator==(const MethodRecord&, const MethodRecord&) = default;
};

enum class TokenClass { Operator, Operand, Keyword, Punctuation };

struct Token {
  std::string lexeme;
  TokenClass cls;
  int line = 0;  // zero-based physical line of the first character

  bool is(std::string_view text) const { return lexeme == text; }
  bool is_identifier() const;
};

/// A condition expression of an if/while/for/do/switch/ternary.
struct Predicate {
  int comparison_count = 0;
  std::set<std::string> control_variables;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Distinct (n1, n2) and total (N1, N2) operator/operand counts.
struct HalsteadCounts {
  int distinct_operators = 0;
  int distinct_operands = 0;
  int total_operators = 0;
  int total_operands = 0;
};

/// Everything the ten metrics need from one method, derived lexically.
struct MethodShape {
  int logical_lines = 0;
  std::vector<Token> tokens;
  std::vector<Predicate> predicates;
  int decision_points = 0;
  int max_nesting_depth = 0;
  std::map<std::string, int> call_sites;  // callee -> occurrences
  std::vector<int> indent_per_line;       // indentation units per logical line
  HalsteadCounts halstead_counts;

  // Layout features per logical line, used by the readability score.
  std::vector<int> line_widths;        // tabs expanded, trailing blanks trimmed
  std::vector<int> identifiers_per_line;
  std::vector<int> parentheses_per_line;
};

/// Remove `//`, `/* */` and `/** */` comments. Literal contents and line
/// breaks (including those inside removed block comments) are kept.
std::string strip_comments(std::string_view source);

/// Lex comment-free Java text into classified tokens.
std::vector<Token> tokenize(std::string_view source);

/// Parse one comment-free method (signature plus body).
MethodShape parse_method(std::string_view source);

/// True for the reserved words of Java. Contextual words such as `var`,
/// `yield` and `record` lex as identifiers.
bool is_java_keyword(std::string_view word);

}  // namespace sevpred

#include "sevpred/method_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <unordered_set>

#include "sevpred/error.hpp"

namespace sevpred {

std::string_view to_string(DatasetOrigin origin) {
  switch (origin) {
    case DatasetOrigin::Defects4j: return "defects4j";
    case DatasetOrigin::Bugsjar: return "bugsjar";
    case DatasetOrigin::Other: return "other";
  }
  return "other";
}

DatasetOrigin parse_dataset_origin(std::string_view text) {
  if (text == "defects4j") return DatasetOrigin::Defects4j;
  if (text == "bugsjar") return DatasetOrigin::Bugsjar;
  if (text == "other") return DatasetOrigin::Other;
  throw Error(ErrorCode::Format, "unknown dataset_origin '" + std::string(text) + "'");
}

namespace {

constexpr int kTabWidth = 4;

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

bool starts_with(std::string_view s, std::size_t pos, std::string_view prefix) {
  return s.substr(pos, prefix.size()) == prefix;
}

// Scan a string/char literal or text block starting at `pos`; returns the
// index one past its closing delimiter. Newlines are only legal inside text
// blocks.
std::size_t skip_literal(std::string_view s, std::size_t pos) {
  if (starts_with(s, pos, "\"\"\"")) {
    std::size_t i = pos + 3;
    while (i < s.size()) {
      if (s[i] == '\\') {
        i += 2;
      } else if (starts_with(s, i, "\"\"\"")) {
        return i + 3;
      } else {
        ++i;
      }
    }
    throw Error(ErrorCode::UnterminatedLiteral, "text block never closes");
  }
  const char quote = s[pos];
  std::size_t i = pos + 1;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\\') {
      i += 2;
    } else if (c == quote) {
      return i + 1;
    } else if (c == '\n') {
      break;
    } else {
      ++i;
    }
  }
  throw Error(ErrorCode::UnterminatedLiteral,
              std::string(quote == '"' ? "string" : "char") + " literal never closes");
}

const std::unordered_set<std::string_view>& keywords() {
  static const std::unordered_set<std::string_view> set = {
      "abstract", "assert",     "boolean",   "break",     "byte",      "case",
      "catch",    "char",       "class",     "const",     "continue",  "default",
      "do",       "double",     "else",      "enum",      "extends",   "final",
      "finally",  "float",      "for",       "goto",      "if",        "implements",
      "import",   "instanceof", "int",       "interface", "long",      "native",
      "new",      "package",    "private",   "protected", "public",    "return",
      "short",    "static",     "strictfp",  "super",     "switch",    "synchronized",
      "this",     "throw",      "throws",    "transient", "try",       "void",
      "volatile", "while"};
  return set;
}

// Longest match first.
constexpr std::array<std::string_view, 41> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||",
    "==",   "!=",  "<=",  ">=",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=",
    "^=",   "<<",  ">>",  "+",   "-",   "*",  "/",  "%",  "=",  "<",  ">",
    "!",    "~",   "?",   ":",   "&",   "|",  "^",  "."};

constexpr std::string_view kPunctuation = ";,(){}[]@";

bool is_comparison(std::string_view op) {
  return op == "<" || op == ">" || op == "<=" || op == ">=" || op == "==" || op == "!=";
}

bool is_primitive(std::string_view w) {
  return w == "int" || w == "long" || w == "short" || w == "byte" || w == "char" ||
         w == "boolean" || w == "float" || w == "double" || w == "void";
}

}  // namespace

bool is_java_keyword(std::string_view word) { return keywords().contains(word); }

bool Token::is_identifier() const {
  return cls == TokenClass::Operand && !lexeme.empty() &&
         is_ident_start(static_cast<unsigned char>(lexeme[0])) && lexeme != "true" &&
         lexeme != "false" && lexeme != "null";
}

std::string strip_comments(std::string_view source) {
  std::string out;
  out.reserve(source.size());
  std::size_t i = 0;
  while (i < source.size()) {
    const char c = source[i];
    if (c == '"' || c == '\'') {
      const std::size_t end = skip_literal(source, i);
      out.append(source.substr(i, end - i));
      i = end;
    } else if (starts_with(source, i, "//")) {
      while (i < source.size() && source[i] != '\n') ++i;
    } else if (starts_with(source, i, "/*")) {
      const std::size_t close = source.find("*/", i + 2);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::UnterminatedComment, "block comment never closes");
      }
      for (std::size_t k = i; k < close; ++k) {
        if (source[k] == '\n') out.push_back('\n');
      }
      i = close + 2;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  int line = 0;
  std::size_t i = 0;
  auto push = [&](std::size_t begin, std::size_t end, TokenClass cls) {
    tokens.push_back(Token{std::string(s.substr(begin, end - begin)), cls, line});
  };
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(c)) {
      ++i;
    } else if (c == '"' || c == '\'') {
      // A text block is attributed to the line it opens on.
      const std::size_t end = skip_literal(s, i);
      push(i, end, TokenClass::Operand);
      line += static_cast<int>(std::count(s.begin() + i, s.begin() + end, '\n'));
      i = end;
    } else if (is_ident_start(c)) {
      std::size_t end = i + 1;
      while (end < s.size() && is_ident_char(static_cast<unsigned char>(s[end]))) ++end;
      const std::string_view word = s.substr(i, end - i);
      push(i, end, is_java_keyword(word) ? TokenClass::Keyword : TokenClass::Operand);
      i = end;
    } else if (std::isdigit(c) ||
               (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t end = i + 1;
      const bool hex = c == '0' && end < s.size() && (s[end] == 'x' || s[end] == 'X');
      while (end < s.size()) {
        const auto d = static_cast<unsigned char>(s[end]);
        if (std::isalnum(d) || d == '_' || d == '.') {
          ++end;
        } else if ((d == '+' || d == '-') &&
                   (hex ? (s[end - 1] == 'p' || s[end - 1] == 'P')
                        : (s[end - 1] == 'e' || s[end - 1] == 'E'))) {
          ++end;
        } else {
          break;
        }
      }
      push(i, end, TokenClass::Operand);
      i = end;
    } else if (kPunctuation.find(static_cast<char>(c)) != std::string_view::npos) {
      push(i, i + 1, TokenClass::Punctuation);
      ++i;
    } else {
      const auto op = std::find_if(kOperators.begin(), kOperators.end(),
                                   [&](std::string_view o) { return starts_with(s, i, o); });
      // Bytes outside Java's operator set (a stray backslash, say) still
      // land in some class.
      const std::size_t len = op != kOperators.end() ? op->size() : 1;
      push(i, i + len, op != kOperators.end() ? TokenClass::Operator : TokenClass::Punctuation);
      i += len;
    }
  }
  return tokens;
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

class ShapeBuilder {
 public:
  explicit ShapeBuilder(std::vector<Token> tokens) : t_(std::move(tokens)) {}

  MethodShape build(std::string_view text);

 private:
  bool at(std::size_t i, std::string_view lexeme) const {
    return i < t_.size() && t_[i].lexeme == lexeme;
  }
  bool keyword_at(std::size_t i, std::string_view word) const {
    return i < t_.size() && t_[i].cls == TokenClass::Keyword && t_[i].lexeme == word;
  }

  // Index of the bracket matching the opener at `open`, or npos.
  std::size_t match(std::size_t open) const;
  // If `open` starts a generic argument list `<...>`, index of its last
  // token; otherwise npos.
  std::size_t generic_close(std::size_t open) const;
  bool is_wildcard(std::size_t i) const;

  void mark_generics();
  void mark_do_terminators();
  void check_braces() const;
  void measure_nesting(MethodShape& shape) const;
  std::size_t walk_block(std::size_t open, int depth, int& deepest) const;
  std::size_t walk_statement(std::size_t pos, int depth, int& deepest) const;
  std::size_t walk_body(std::size_t pos, int depth, int& deepest) const;
  std::size_t skip_parens(std::size_t pos) const;
  void count_decisions(MethodShape& shape) const;
  void collect_predicates(MethodShape& shape) const;
  void collect_calls(MethodShape& shape) const;

  Predicate predicate_over(std::size_t begin, std::size_t end) const;
  std::size_t ternary_condition_start(std::size_t question) const;
  int switch_case_labels(std::size_t body_open) const;

  std::vector<Token> t_;
  std::vector<bool> generic_;       // token is part of a generic argument list
  std::vector<bool> do_while_;      // `while` that closes a do statement
};

std::size_t ShapeBuilder::match(std::size_t open) const {
  const std::string& o = t_[open].lexeme;
  const std::string_view close = o == "(" ? ")" : o == "{" ? "}" : "]";
  int depth = 0;
  for (std::size_t i = open; i < t_.size(); ++i) {
    if (t_[i].cls != TokenClass::Punctuation) continue;
    if (t_[i].lexeme == o) {
      ++depth;
    } else if (t_[i].lexeme == close) {
      if (--depth == 0) return i;
    }
  }
  return npos;
}

std::size_t ShapeBuilder::generic_close(std::size_t open) const {
  if (!at(open, "<") || open == 0) return npos;
  const Token& prev = t_[open - 1];
  if (!(prev.is_identifier() || prev.is(".") || prev.is("new"))) return npos;
  int depth = 0;
  for (std::size_t i = open; i < t_.size(); ++i) {
    const Token& tok = t_[i];
    if (tok.is("<")) {
      ++depth;
    } else if (tok.is(">") || tok.is(">>") || tok.is(">>>")) {
      depth -= static_cast<int>(tok.lexeme.size());
      if (depth <= 0) return depth == 0 ? i : npos;
    } else if (tok.is("?")) {
      if (!(t_[i - 1].is("<") || t_[i - 1].is(","))) return npos;
    } else if (tok.is_identifier() || tok.is(",") || tok.is(".") || tok.is("&") ||
               tok.is("[") || tok.is("]") || tok.is("extends") || tok.is("super") ||
               (tok.cls == TokenClass::Keyword && is_primitive(tok.lexeme))) {
      continue;
    } else {
      return npos;
    }
  }
  return npos;
}

void ShapeBuilder::mark_generics() {
  generic_.assign(t_.size(), false);
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (generic_[i]) continue;
    const std::size_t close = generic_close(i);
    if (close == npos) continue;
    for (std::size_t k = i; k <= close; ++k) generic_[k] = true;
  }
}

bool ShapeBuilder::is_wildcard(std::size_t i) const {
  if (!at(i, "?")) return false;
  return generic_[i];
}

void ShapeBuilder::mark_do_terminators() {
  do_while_.assign(t_.size(), false);
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!keyword_at(i, "do")) continue;
    std::size_t end = npos;
    if (at(i + 1, "{")) {
      end = match(i + 1);
    } else {
      // Unbraced body: the statement runs to the first top-level `;`.
      int depth = 0;
      for (std::size_t k = i + 1; k < t_.size(); ++k) {
        if (t_[k].is("(") || t_[k].is("{") || t_[k].is("[")) ++depth;
        if (t_[k].is(")") || t_[k].is("}") || t_[k].is("]")) --depth;
        if (depth == 0 && t_[k].is(";")) {
          end = k;
          break;
        }
      }
    }
    if (end != npos && keyword_at(end + 1, "while")) do_while_[end + 1] = true;
  }
}

void ShapeBuilder::check_braces() const {
  int depth = 0;
  int paren = 0;
  bool has_body = false;
  for (const Token& tok : t_) {
    if (tok.cls != TokenClass::Punctuation) continue;
    if (tok.is("(")) ++paren;
    if (tok.is(")")) --paren;
    if (tok.is("{")) {
      if (paren == 0) has_body = true;
      ++depth;
    } else if (tok.is("}")) {
      if (--depth < 0) throw Error(ErrorCode::UnbalancedBraces, "unexpected '}'");
    }
  }
  if (depth != 0) throw Error(ErrorCode::UnbalancedBraces, "unclosed '{'");
  if (!has_body) throw Error(ErrorCode::EmptyMethod, "no body block found");
}

// Nesting follows statement structure: a block is one level deeper than the
// statement holding it, and the unbraced body of if/else/for/while/do counts
// as a block of its own. `else if` chains stay at one level.
void ShapeBuilder::measure_nesting(MethodShape& shape) const {
  std::size_t body = 0;
  int paren = 0;
  for (; body < t_.size(); ++body) {
    if (t_[body].is("(")) ++paren;
    if (t_[body].is(")")) --paren;
    if (paren == 0 && t_[body].is("{")) break;
  }
  int deepest = 0;
  walk_block(body, 0, deepest);
  shape.max_nesting_depth = deepest;
}

std::size_t ShapeBuilder::skip_parens(std::size_t pos) const {
  if (!at(pos, "(")) return pos;
  const std::size_t close = match(pos);
  return close == npos ? t_.size() : close + 1;
}

std::size_t ShapeBuilder::walk_block(std::size_t open, int depth, int& deepest) const {
  const int inner = depth + 1;
  deepest = std::max(deepest, inner);
  std::size_t pos = open + 1;
  while (pos < t_.size() && !at(pos, "}")) {
    const std::size_t next = walk_statement(pos, inner, deepest);
    pos = next > pos ? next : pos + 1;
  }
  return std::min(pos + 1, t_.size());
}

std::size_t ShapeBuilder::walk_body(std::size_t pos, int depth, int& deepest) const {
  if (at(pos, "{")) return walk_block(pos, depth, deepest);
  deepest = std::max(deepest, depth + 1);
  return walk_statement(pos, depth + 1, deepest);
}

std::size_t ShapeBuilder::walk_statement(std::size_t pos, int depth, int& deepest) const {
  if (pos >= t_.size()) return pos;
  const Token& tok = t_[pos];
  if (tok.is("{")) return walk_block(pos, depth, deepest);
  if (tok.is(";")) return pos + 1;

  if (tok.cls == TokenClass::Keyword) {
    if (tok.is("if")) {
      std::size_t next = walk_body(skip_parens(pos + 1), depth, deepest);
      if (keyword_at(next, "else")) {
        next = keyword_at(next + 1, "if") ? walk_statement(next + 1, depth, deepest)
                                          : walk_body(next + 1, depth, deepest);
      }
      return next;
    }
    if (tok.is("for") || (tok.is("while") && !do_while_[pos])) {
      return walk_body(skip_parens(pos + 1), depth, deepest);
    }
    if (tok.is("switch") || tok.is("synchronized")) {
      const std::size_t next = skip_parens(pos + 1);
      return at(next, "{") ? walk_block(next, depth, deepest) : next;
    }
    if (tok.is("do")) {
      std::size_t next = walk_body(pos + 1, depth, deepest);
      if (keyword_at(next, "while")) next = skip_parens(next + 1);
      return at(next, ";") ? next + 1 : next;
    }
    if (tok.is("try")) {
      std::size_t next = skip_parens(pos + 1);
      if (at(next, "{")) next = walk_block(next, depth, deepest);
      while (keyword_at(next, "catch")) {
        next = skip_parens(next + 1);
        if (at(next, "{")) next = walk_block(next, depth, deepest);
      }
      if (keyword_at(next, "finally") && at(next + 1, "{")) {
        next = walk_block(next + 1, depth, deepest);
      }
      return next;
    }
    if (tok.is("case") || tok.is("default")) {
      int paren = 0;
      int pending_ternary = 0;
      for (std::size_t k = pos + 1; k < t_.size(); ++k) {
        if (t_[k].is("(")) ++paren;
        if (t_[k].is(")")) --paren;
        if (paren != 0) continue;
        if (t_[k].is("?") && !is_wildcard(k)) ++pending_ternary;
        if (t_[k].is("->")) return walk_statement(k + 1, depth, deepest);
        if (t_[k].is(":")) {
          if (pending_ternary == 0) return k + 1;
          --pending_ternary;
        }
        if (t_[k].is(";") || t_[k].is("{") || t_[k].is("}")) return k;
      }
      return t_.size();
    }
    if (tok.is("else")) return pos + 1;
  }

  // Labelled statement.
  if (tok.is_identifier() && at(pos + 1, ":")) return walk_statement(pos + 2, depth, deepest);

  // Expression or declaration: runs to `;` or to the enclosing `}`. Blocks
  // met on the way (lambdas, anonymous classes, initialisers) nest one
  // level below this statement.
  int paren = 0;
  std::size_t k = pos;
  while (k < t_.size()) {
    const Token& cur = t_[k];
    if (cur.is("(") || cur.is("[")) {
      ++paren;
    } else if (cur.is(")") || cur.is("]")) {
      if (--paren < 0) return k;
    } else if (cur.is("{")) {
      k = walk_block(k, depth, deepest);
      continue;
    } else if (cur.is("}")) {
      return k;
    } else if (cur.is(";") && paren == 0) {
      return k + 1;
    }
    ++k;
  }
  return k;
}

void ShapeBuilder::count_decisions(MethodShape& shape) const {
  int points = 0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const Token& tok = t_[i];
    if (tok.cls == TokenClass::Keyword) {
      if (tok.is("if") || tok.is("for") || tok.is("do") || tok.is("case") || tok.is("catch") ||
          (tok.is("while") && !do_while_[i])) {
        ++points;
      }
    } else if (tok.cls == TokenClass::Operator) {
      if (tok.is("&&") || tok.is("||") || (tok.is("?") && !is_wildcard(i))) ++points;
    }
  }
  shape.decision_points = points;
}

Predicate ShapeBuilder::predicate_over(std::size_t begin, std::size_t end) const {
  Predicate p;
  for (std::size_t i = begin; i < end && i < t_.size(); ++i) {
    const Token& tok = t_[i];
    if (tok.cls == TokenClass::Operator && is_comparison(tok.lexeme) && !generic_[i]) {
      ++p.comparison_count;
      continue;
    }
    if (!tok.is_identifier() || generic_[i]) continue;
    if (at(i + 1, "(")) continue;  // callee, not a variable
    if (i > 0) {
      const Token& prev = t_[i - 1];
      if (prev.is("@") || prev.is("new") || prev.is("instanceof")) continue;
      if (prev.is(".") && !(i > 1 && (t_[i - 2].is("this") || t_[i - 2].is("super")))) continue;
    }
    // `Type.member`: an upper-case qualifier names a type, not a variable.
    if (at(i + 1, ".") && std::isupper(static_cast<unsigned char>(tok.lexeme[0]))) continue;
    p.control_variables.insert(tok.lexeme);
  }
  return p;
}

std::size_t ShapeBuilder::ternary_condition_start(std::size_t question) const {
  int depth = 0;
  std::size_t i = question;
  while (i > 0) {
    const Token& tok = t_[i - 1];
    if (tok.is(")") || tok.is("]")) {
      ++depth;
    } else if (tok.is("(") || tok.is("[")) {
      if (depth == 0) return i;
      --depth;
    } else if (depth == 0) {
      if (tok.is(";") || tok.is("{") || tok.is("}") || tok.is(",") || tok.is("?") ||
          tok.is(":") || tok.is("->") || tok.is("return") || tok.is("throw") ||
          tok.is("yield") || tok.is("assert") ||
          (tok.cls == TokenClass::Operator && tok.lexeme.back() == '=' &&
           !is_comparison(tok.lexeme))) {
        return i;
      }
    }
    --i;
  }
  return 0;
}

int ShapeBuilder::switch_case_labels(std::size_t body_open) const {
  const std::size_t body_close = match(body_open);
  if (body_close == npos) return 0;
  int labels = 0;
  for (std::size_t i = body_open + 1; i < body_close; ++i) {
    if (keyword_at(i, "switch")) {
      // Skip a nested switch's body; its labels belong to it.
      const std::size_t sel = at(i + 1, "(") ? match(i + 1) : npos;
      if (sel != npos && at(sel + 1, "{")) {
        const std::size_t nested = match(sel + 1);
        if (nested != npos) i = nested;
      }
    } else if (keyword_at(i, "case")) {
      ++labels;
    }
  }
  return labels;
}

void ShapeBuilder::collect_predicates(MethodShape& shape) const {
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const Token& tok = t_[i];
    if (tok.cls == TokenClass::Operator && tok.is("?") && !is_wildcard(i)) {
      shape.predicates.push_back(predicate_over(ternary_condition_start(i), i));
      continue;
    }
    if (tok.cls != TokenClass::Keyword) continue;
    const bool conditional = tok.is("if") || tok.is("while") || tok.is("switch") || tok.is("for");
    if (!conditional || !at(i + 1, "(")) continue;
    const std::size_t close = match(i + 1);
    if (close == npos) continue;

    if (tok.is("for")) {
      std::vector<std::size_t> semis;
      std::size_t colon = npos;
      int depth = 0;
      for (std::size_t k = i + 2; k < close; ++k) {
        if (t_[k].is("(") || t_[k].is("[") || t_[k].is("{")) ++depth;
        if (t_[k].is(")") || t_[k].is("]") || t_[k].is("}")) --depth;
        if (depth != 0) continue;
        if (t_[k].is(";")) semis.push_back(k);
        if (t_[k].is(":") && colon == npos) colon = k;
      }
      if (semis.size() >= 2) {
        shape.predicates.push_back(predicate_over(semis[0] + 1, semis[1]));
      } else if (colon != npos && colon > i + 2 && t_[colon - 1].is_identifier()) {
        // Enhanced for: no comparison, the loop variable is the control.
        Predicate p;
        p.control_variables.insert(t_[colon - 1].lexeme);
        shape.predicates.push_back(std::move(p));
      }
    } else if (tok.is("switch")) {
      Predicate p = predicate_over(i + 2, close);
      if (at(close + 1, "{")) p.comparison_count += switch_case_labels(close + 1);
      shape.predicates.push_back(std::move(p));
    } else {
      // if, while, and the `while` that closes a do statement.
      shape.predicates.push_back(predicate_over(i + 2, close));
    }
  }
}

void ShapeBuilder::collect_calls(MethodShape& shape) const {
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const Token& tok = t_[i];
    if (!tok.is_identifier()) continue;
    std::size_t open = i + 1;
    if (at(open, "<") && generic_[open]) {
      // `new Box<T>(...)` / `new Box<>(...)`
      std::size_t k = open;
      while (k < t_.size() && generic_[k]) ++k;
      open = k;
    }
    if (!at(open, "(")) continue;
    const Token* prev = i > 0 ? &t_[i - 1] : nullptr;
    if (prev && prev->is("@")) continue;  // annotation
    if (open != i + 1) {
      // generic arguments before `(` only form a call in a creation expression
      std::size_t k = i;
      while (k >= 2 && t_[k - 1].is(".") && t_[k - 2].is_identifier()) k -= 2;
      if (k == 0 || !t_[k - 1].is("new")) continue;
    }
    const std::size_t close = match(open);
    const bool declaration = close != npos && (at(close + 1, "{") || keyword_at(close + 1, "throws")) &&
                             !(prev && (prev->is("new") || prev->is(".")));
    if (declaration) continue;
    ++shape.call_sites[tok.lexeme];
  }
}

MethodShape ShapeBuilder::build(std::string_view text) {
  MethodShape shape;
  mark_generics();
  mark_do_terminators();
  check_braces();
  measure_nesting(shape);
  count_decisions(shape);
  collect_predicates(shape);
  collect_calls(shape);

  std::set<std::string> operators;
  std::set<std::string> operands;
  for (const Token& tok : t_) {
    if (tok.cls == TokenClass::Operator) {
      operators.insert(tok.lexeme);
      ++shape.halstead_counts.total_operators;
    } else if (tok.cls == TokenClass::Operand) {
      operands.insert(tok.lexeme);
      ++shape.halstead_counts.total_operands;
    }
  }
  shape.halstead_counts.distinct_operators = static_cast<int>(operators.size());
  shape.halstead_counts.distinct_operands = static_cast<int>(operands.size());

  // Line layout. Physical lines are numbered as in the tokenizer.
  std::vector<int> widths;
  std::vector<int> physical;  // physical index of each logical line
  std::vector<int> line_width;
  {
    int line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view row = text.substr(start, end - start);
      int indent = 0;
      int width = 0;
      int last_visible = 0;
      bool seen_text = false;
      for (char ch : row) {
        const int step = ch == '\t' ? kTabWidth : 1;
        width += step;
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v') {
          if (!seen_text) indent += step;
        } else {
          seen_text = true;
          last_visible = width;
        }
      }
      if (seen_text) {
        widths.push_back(indent);
        physical.push_back(line);
        line_width.push_back(last_visible);
      }
      ++line;
      if (end == text.size()) break;
      start = end + 1;
    }
  }
  shape.logical_lines = static_cast<int>(widths.size());

  int unit = 0;
  for (int w : widths) unit = std::gcd(unit, w);
  if (unit == 0) unit = 1;
  for (int w : widths) shape.indent_per_line.push_back(w / unit);
  shape.line_widths = line_width;

  std::vector<int> logical_of(physical.empty() ? 0 : physical.back() + 1, -1);
  for (std::size_t k = 0; k < physical.size(); ++k) logical_of[physical[k]] = static_cast<int>(k);
  shape.identifiers_per_line.assign(widths.size(), 0);
  shape.parentheses_per_line.assign(widths.size(), 0);
  for (const Token& tok : t_) {
    if (tok.line < 0 || tok.line >= static_cast<int>(logical_of.size())) continue;
    const int row = logical_of[tok.line];
    if (row < 0) continue;
    if (tok.is_identifier()) ++shape.identifiers_per_line[row];
    if (tok.cls == TokenClass::Punctuation && (tok.is("(") || tok.is(")"))) {
      ++shape.parentheses_per_line[row];
    }
  }

  shape.tokens = std::move(t_);
  return shape;
}

}  // namespace

MethodShape parse_method(std::string_view source) {
  ShapeBuilder builder(tokenize(source));
  return builder.build(source);
}

}  // namespace sevpred

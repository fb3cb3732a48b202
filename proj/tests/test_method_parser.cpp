#include <doctest.h>

#include <string>

#include "sevpred/error.hpp"
#include "sevpred/method_parser.hpp"
#include "sevpred/rng.hpp"

using namespace sevpred;

namespace {

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

std::set<std::string> vars(std::initializer_list<const char*> names) {
  return {names.begin(), names.end()};
}

}  // namespace

TEST_CASE("strip_comments examples") {
  CHECK(strip_comments("int x = 1;") == "int x = 1;");
  CHECK(strip_comments("int x = 1; // set x") == "int x = 1; ");
  CHECK(strip_comments("String u = \"http://a\"; /*c*/ int y;") == "String u = \"http://a\";  int y;");
  CHECK(strip_comments("/** doc */\nvoid f() {}") == "\nvoid f() {}");
  CHECK(strip_comments("a /* x\ny */ b") == "a \n b");
  CHECK(strip_comments("char c = '/'; char d = '\\''; // q") == "char c = '/'; char d = '\\''; ");
  CHECK(strip_comments("String t = \"\"\"\n  // kept\n  \"\"\";") ==
        "String t = \"\"\"\n  // kept\n  \"\"\";");
}

TEST_CASE("strip_comments errors") {
  CHECK(error_of([] { strip_comments("String s = \"abc;\nint y;"); }) ==
        ErrorCode::UnterminatedLiteral);
  CHECK(error_of([] { strip_comments("char c = 'a;"); }) == ErrorCode::UnterminatedLiteral);
  CHECK(error_of([] { strip_comments("int x; /* open"); }) == ErrorCode::UnterminatedComment);
}

TEST_CASE("strip_comments property: literals survive, comments vanish, idempotent") {
  Rng rng(20231016);
  const char* literal_bodies[] = {"//", "/*", "*/", "http://x", "a/*b*/c", "\\\"//", " /** */ "};
  const char* code_bits[] = {"int a = 1;", "f(x);", "return b;", "x = y + z;", "{", "}", " ", "\t"};
  for (int round = 0; round < 500; ++round) {
    std::string source;
    std::string expected;
    const int parts = 1 + static_cast<int>(rng.below(12));
    for (int p = 0; p < parts; ++p) {
      switch (rng.below(6)) {
        case 0: {
          std::string lit = "\"" + std::string(literal_bodies[rng.below(7)]) + "\"";
          source += lit;
          expected += lit;
          break;
        }
        case 1: {
          std::string lit = rng.below(2) ? "'/'" : "'*'";
          source += lit;
          expected += lit;
          break;
        }
        case 2:
          source += " // note \"quoted\" /* x\n";
          expected += " \n";
          break;
        case 3:
          source += " /* block // \" ' \n more */ ";
          expected += " \n ";
          break;
        case 4:
          source += "\n";
          expected += "\n";
          break;
        default: {
          std::string bit = code_bits[rng.below(8)];
          source += bit;
          expected += bit;
          break;
        }
      }
    }
    const std::string once = strip_comments(source);
    REQUIRE(once == expected);
    CHECK(strip_comments(once) == once);
  }
}

TEST_CASE("tokenize classifies every token") {
  const auto tokens = tokenize("public int f(int[] a) { return a.length >>> 2 != 0x1F ? -1 : 3.5e-2; }");
  for (const Token& t : tokens) CHECK(!t.lexeme.empty());
  CHECK(tokens[0].cls == TokenClass::Keyword);
  CHECK(tokens[2].lexeme == "f");
  CHECK(tokens[2].cls == TokenClass::Operand);
  bool saw_shift = false;
  bool saw_sci = false;
  for (const Token& t : tokens) {
    saw_shift |= t.lexeme == ">>>" && t.cls == TokenClass::Operator;
    saw_sci |= t.lexeme == "3.5e-2" && t.cls == TokenClass::Operand;
  }
  CHECK(saw_shift);
  CHECK(saw_sci);
}

TEST_CASE("parse_method: empty body") {
  const MethodShape s = parse_method("void f() {}");
  CHECK(s.decision_points == 0);
  CHECK(s.max_nesting_depth == 1);
  CHECK(s.call_sites.empty());
  CHECK(s.logical_lines == 1);
}

TEST_CASE("parse_method: single if with call") {
  const MethodShape s = parse_method("void f() { if (a < b) g(); }");
  CHECK(s.decision_points == 1);
  REQUIRE(s.predicates.size() == 1);
  CHECK(s.predicates[0] == Predicate{1, vars({"a", "b"})});
  CHECK(s.call_sites == std::map<std::string, int>{{"g", 1}});
  CHECK(s.max_nesting_depth == 2);
}

TEST_CASE("parse_method: while with && and repeated calls") {
  const MethodShape s = parse_method("void f() { while (i < n && ok) { h(i); h(n); } }");
  CHECK(s.decision_points == 2);
  REQUIRE(s.predicates.size() == 1);
  CHECK(s.predicates[0] == Predicate{1, vars({"i", "n", "ok"})});
  CHECK(s.call_sites == std::map<std::string, int>{{"h", 2}});
  CHECK(s.max_nesting_depth == 2);
}

TEST_CASE("parse_method: decision point rules") {
  SUBCASE("case counts, default does not") {
    const auto s = parse_method(
        "int f(int k) { switch (k) { case 1: return 1; case 2: return 2; case 3: return 3; "
        "default: return 0; } }");
    CHECK(s.decision_points == 3);
    REQUIRE(s.predicates.size() == 1);
    CHECK(s.predicates[0] == Predicate{3, vars({"k"})});
  }
  SUBCASE("catch counts, finally does not") {
    const auto s = parse_method("void f() { try { g(); } catch (E e) { h(); } finally { k(); } }");
    CHECK(s.decision_points == 1);
    CHECK(s.max_nesting_depth == 2);
  }
  SUBCASE("do-while counts once") {
    const auto s = parse_method("void f() { do { i++; } while (i < 10); }");
    CHECK(s.decision_points == 1);
    REQUIRE(s.predicates.size() == 1);
    CHECK(s.predicates[0] == Predicate{1, vars({"i"})});
  }
  SUBCASE("ternary counts, wildcard does not") {
    const auto s = parse_method("int f(List<?> xs) { return xs.isEmpty() ? 0 : n > 1 ? 2 : 1; }");
    CHECK(s.decision_points == 2);
    REQUIRE(s.predicates.size() == 2);
    CHECK(s.predicates[0] == Predicate{0, vars({"xs"})});
    CHECK(s.predicates[1] == Predicate{1, vars({"n"})});
  }
  SUBCASE("generic angle brackets are not comparisons") {
    const auto s = parse_method("void f() { Map<String, List<Integer>> m = new HashMap<>(); }");
    CHECK(s.decision_points == 0);
    CHECK(s.predicates.empty());
    CHECK(s.call_sites == std::map<std::string, int>{{"HashMap", 1}});
  }
  SUBCASE("for loops") {
    const auto s = parse_method(
        "void f(int[] a) { for (int i = 0; i < a.length; i++) { for (int x : a) { use(x); } } }");
    CHECK(s.decision_points == 2);
    REQUIRE(s.predicates.size() == 2);
    CHECK(s.predicates[0] == Predicate{1, vars({"i", "a"})});
    CHECK(s.predicates[1] == Predicate{0, vars({"x"})});
    CHECK(s.max_nesting_depth == 3);
  }
}

TEST_CASE("parse_method: call sites") {
  SUBCASE("recursive call counts, declaration does not") {
    const auto s = parse_method("int fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }");
    CHECK(s.call_sites == std::map<std::string, int>{{"fact", 1}});
  }
  SUBCASE("keywords and annotations are not calls") {
    const auto s = parse_method(
        "@SuppressWarnings(\"x\") void f() { synchronized (lock) { if (ok()) this.g(); } }");
    CHECK(s.call_sites == std::map<std::string, int>{{"g", 1}, {"ok", 1}});
  }
  SUBCASE("anonymous class method declarations are not calls") {
    const auto s = parse_method(
        "void f() { run(new Runnable() { public void run() { go(); } }); }");
    CHECK(s.call_sites == std::map<std::string, int>{{"Runnable", 1}, {"go", 1}, {"run", 1}});
    CHECK(s.max_nesting_depth == 3);
  }
}

TEST_CASE("parse_method: nesting") {
  CHECK(parse_method("void f() { if (a) { for (;;) { x(); } } }").max_nesting_depth == 3);
  CHECK(parse_method("void f() { if (a) for (;;) x(); }").max_nesting_depth == 3);
  CHECK(parse_method("void f() { if (a) x(); else if (b) y(); else z(); }").max_nesting_depth == 2);
  CHECK(parse_method("void f() { int[] a = {1, 2}; }").max_nesting_depth == 2);
  CHECK(parse_method("void f() { xs.forEach(x -> { if (x) g(); }); }").max_nesting_depth == 3);
  CHECK(parse_method("void f() { outer: for (;;) { break outer; } }").max_nesting_depth == 2);
  CHECK(parse_method("int f(int k) { return switch (k) { case 1 -> { yield 2; } default -> 0; }; }")
            .max_nesting_depth == 3);
}

TEST_CASE("parse_method: lines and indentation") {
  const auto s = parse_method("void f() {\n    if (a) {\n        g();\n\n    }\n}\n");
  CHECK(s.logical_lines == 5);
  CHECK(s.indent_per_line == std::vector<int>{0, 1, 2, 1, 0});
  const auto tabs = parse_method("void f() {\n\tg();\n\t\th();\n}");
  CHECK(tabs.indent_per_line == std::vector<int>{0, 1, 2, 0});
}

TEST_CASE("parse_method errors") {
  CHECK(error_of([] { parse_method("void f() { if (a) { }"); }) == ErrorCode::UnbalancedBraces);
  CHECK(error_of([] { parse_method("void f() } {"); }) == ErrorCode::UnbalancedBraces);
  CHECK(error_of([] { parse_method("abstract void f();"); }) == ErrorCode::EmptyMethod);
}

TEST_CASE("property: token classes partition the token stream") {
  Rng rng(7);
  const char* pieces[] = {"a", "b1", "+", "=", "(", ")", ";", "if", "while", "&&", "||", "?",
                          ":", "1", "\"s\"", "<", ">=", "return", ",", ".", "x", "!", "new"};
  for (int round = 0; round < 300; ++round) {
    std::string body;
    const int n = static_cast<int>(rng.below(40));
    for (int k = 0; k < n; ++k) body += std::string(pieces[rng.below(23)]) + " ";
    const std::string src = "void f() { " + body + " }";
    const MethodShape s = parse_method(src);
    int keywords = 0;
    int punctuation = 0;
    for (const Token& t : s.tokens) {
      keywords += t.cls == TokenClass::Keyword;
      punctuation += t.cls == TokenClass::Punctuation;
    }
    const auto& h = s.halstead_counts;
    CHECK(h.total_operators + h.total_operands + keywords + punctuation ==
          static_cast<int>(s.tokens.size()));
    CHECK(h.total_operators >= h.distinct_operators);
    CHECK(h.total_operands >= h.distinct_operands);

    bool branching = false;
    for (const Token& t : s.tokens) {
      branching |= (t.cls == TokenClass::Keyword &&
                    (t.is("if") || t.is("while") || t.is("for") || t.is("do") ||
                     t.is("case") || t.is("catch"))) ||
                   t.is("&&") || t.is("||") || t.is("?");
    }
    CHECK((s.decision_points == 0) == !branching);
  }
}

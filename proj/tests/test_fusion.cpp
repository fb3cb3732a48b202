#include <doctest.h>

#include "sevpred/error.hpp"
#include "sevpred/fusion.hpp"
#include "sevpred/rng.hpp"

using namespace sevpred;

namespace {

const char* const kTableV =
    "The code contains 1 lines and its complexity metrics values are 2, 3 and 4. The nested block depth is 5, "
    "and the difficulty of this code is 6. The maintainability score is 7 and this method calls 8 number of "
    "methods while its readability and effort metrics values are 9, 10";

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

// Random code-ish text: identifiers, numbers, punctuation and whitespace.
std::string random_text(Rng& rng, int tokens) {
  static const char* const kPieces[] = {"x", "foo", "bar_1", "42", "(", ")", "{", "}", ";", "=", "+", ".", "<",
                                        "\"s\"", "return", "if"};
  static const char* const kGaps[] = {"", " ", "  ", "\n", "\n    ", "\t"};
  std::string out;
  for (int i = 0; i < tokens; ++i) {
    out += kGaps[rng.below(6)];
    out += kPieces[rng.below(16)];
  }
  return out;
}

std::string words(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? " w" : "w") + std::to_string(i);
  return s;
}

}  // namespace

TEST_CASE("metric paragraph") {
  std::vector<double> one_to_ten(10);
  for (int i = 0; i < 10; ++i) one_to_ten[i] = i + 1;
  CHECK(render_metric_paragraph(one_to_ten, NumberStyle::IntegralBare) == kTableV);

  const std::vector<double> example{3, 0.5, 2, 2, 1, 1.5, 109.06, 2, 0.81, 15.0};
  const std::string text = render_metric_paragraph(example);
  CHECK(text ==
        "The code contains 3 lines and its complexity metrics values are 0.50, 2 and 2. The nested block depth is "
        "1, and the difficulty of this code is 1.50. The maintainability score is 109.06 and this method calls 2 "
        "number of methods while its readability and effort metrics values are 0.81, 15.00");
  CHECK(render_metric_paragraph(example) == text);

  MetricsVector v;
  for (int i = 0; i < 10; ++i) v(i) = example[i];
  CHECK(render_metric_paragraph(v) == text);

  // Scaled values are rarely integral; negatives keep their sign, -0 does not.
  const std::string scaled =
      render_metric_paragraph(std::vector<double>{-0.333, -0.001, 1.0, 0.0, 2.5, -1.25, 0.004, -3.0, 0.5, 12.345});
  CHECK(scaled.find("contains -0.33 lines") != std::string::npos);
  CHECK(scaled.find("are 0.00, 1 and 0.") != std::string::npos);
  CHECK(scaled.find("calls -3 number") != std::string::npos);

  CHECK(error_of([] { render_metric_paragraph(std::vector<double>(9, 1.0)); }) == ErrorCode::WrongArity);
  CHECK(error_of([] { render_metric_paragraph(std::vector<double>(11, 1.0)); }) == ErrorCode::WrongArity);
}

TEST_CASE("token estimate") {
  CHECK(estimate_tokens("") == 0);
  CHECK(estimate_tokens("   \n\t") == 0);
  CHECK(estimate_tokens("a") == 2);  // ceil(1.3)
  CHECK(estimate_tokens("foo(bar);") == 7);  // 5 raw, ceil(6.5)
  CHECK(estimate_tokens(words(10)) == 13);
  CHECK(estimate_tokens(words(100)) == 130);
}

TEST_CASE("payload budget") {
  SUBCASE("short input is padded, not cut") {
    const FusionPayload p = build_payload("nl text", "void f() {}");
    CHECK_FALSE(p.truncated);
    CHECK(p.padded);
    CHECK(p.pl_text == "void f() {}");
    CHECK(p.segments() == std::vector<std::string>{"[CLS]", "nl text", "[SEP]", "void f() {}", "[EOS]"});
  }
  SUBCASE("a ~100-token paragraph leaves the rest for code") {
    // 1.3 x raw never lands on 100 exactly; 76 words estimate to 99.
    const std::string nl = words(76);
    REQUIRE(estimate_tokens(nl) == 99);
    const FusionPayload p = build_payload(nl, words(600));
    CHECK(p.truncated);
    CHECK(p.nl_text == nl);
    const int pl_tokens = estimate_tokens(p.pl_text);
    CHECK(pl_tokens <= 512 - 99 - 3);
    CHECK(pl_tokens >= 512 - 99 - 3 - 1);
    CHECK(p.pl_text == words(315));  // floor(410 / 1.3)
    CHECK(p.estimated_tokens <= 512);
  }
  SUBCASE("empty paragraph") {
    const FusionPayload p = build_payload("", words(600));
    CHECK(p.segments().size() == 4);
    CHECK(p.segments()[1] == "[SEP]");
    CHECK(estimate_tokens(p.pl_text) <= 509);
    CHECK(p.pl_text == words(391));  // floor(509 / 1.3) raw tokens
  }
  SUBCASE("paragraph too large") {
    CHECK(error_of([] { build_payload(words(392), "x"); }) == ErrorCode::NLTooLarge);
    const FusionPayload full = build_payload(words(391), "x y");
    CHECK(full.pl_text.empty());
    CHECK(full.truncated);
  }
}

TEST_CASE("payload property: nl kept, pl only tail-cut") {
  Rng rng(77);
  int checked = 0;
  for (int round = 0; round < 500; ++round) {
    const std::string nl = random_text(rng, static_cast<int>(rng.below(420)));
    const std::string pl = random_text(rng, static_cast<int>(rng.below(900)));
    if (estimate_tokens(nl) > 509) {
      CHECK(error_of([&] { build_payload(nl, pl); }) == ErrorCode::NLTooLarge);
      continue;
    }
    ++checked;
    const FusionPayload p = build_payload(nl, pl);
    CHECK(p.nl_text == nl);
    CHECK(pl.compare(0, p.pl_text.size(), p.pl_text) == 0);
    CHECK(p.estimated_tokens <= 512);
    CHECK(p.truncated == (p.pl_text != pl));
    CHECK(p.padded == (p.estimated_tokens < 512));

    // Extending the code never shrinks what is kept.
    const std::string longer = pl + " " + random_text(rng, static_cast<int>(rng.below(200)));
    const FusionPayload q = build_payload(nl, longer);
    CHECK(q.pl_text.size() >= p.pl_text.size());
    CHECK(q.pl_text.compare(0, p.pl_text.size(), p.pl_text) == 0);
  }
  CHECK(checked > 300);
}

TEST_CASE("exports") {
  std::vector<MethodRecord> records;
  Matrix metrics(6, kNumMetrics);
  for (int i = 0; i < 6; ++i) {
    MethodRecord r;
    r.id = "m" + std::to_string(i);
    r.source = "int f" + std::to_string(i) + "() { return " + std::to_string(i) + "; }";
    r.severity_class = i % 4;
    if (i == 5) r.severity_class.reset();
    records.push_back(r);
    for (int k = 0; k < kNumMetrics; ++k) metrics(i, k) = 0.25 * (i - k) + 1e-3 * k;
  }

  const auto cls = import_cls(export_concat_cls(records, metrics));
  REQUIRE(cls.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(cls[i].id == records[i].id);
    CHECK(cls[i].label == records[i].severity_class);
    CHECK(cls[i].pl_text == records[i].source);
    REQUIRE(cls[i].metrics.size() == 10);
    for (int k = 0; k < kNumMetrics; ++k) CHECK(cls[i].metrics[k] == metrics(i, k));
  }

  const auto inl = import_inline(export_concat_inline(records, metrics));
  REQUIRE(inl.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(inl[i].id == records[i].id);
    CHECK(inl[i].label == records[i].severity_class);
    CHECK(inl[i].nl_text == render_metric_paragraph(MetricsVector(metrics.row(i).transpose())));
    CHECK(inl[i].pl_text == records[i].source);
  }

  const auto plain = import_inline(export_plain(records));
  REQUIRE(plain.size() == 6);
  CHECK(plain[2].nl_text.empty());
  CHECK(plain[2].pl_text == records[2].source);

  CHECK(error_of([&] { export_concat_cls(records, Matrix::Zero(5, 10)); }) == ErrorCode::DimensionMismatch);
  CHECK(error_of([] { import_cls("{\"id\":\"a\",\"pl_text\":\"\",\"metrics\":[1,2],\"label\":0}\n"); }) ==
        ErrorCode::WrongArity);
  CHECK(error_of([] { import_inline("\n{bad\n"); }) == ErrorCode::MalformedRecord);
  CHECK(kFusedWidth == 778);
}

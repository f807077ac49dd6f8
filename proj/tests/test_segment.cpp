#include <catch2/catch_amalgamated.hpp>

#include "cgec/segment.hpp"
#include "support/helpers.hpp"

using namespace cgec;

namespace {

std::vector<std::string> surfaces(const Segmentation& seg) {
  std::vector<std::string> out;
  for (const auto& t : seg.tokens) out.push_back(t.surface);
  return out;
}

}  // namespace

TEST_CASE("segment_chars yields one token per code point") {
  const Segmentation seg = segment_chars("我以前");  // 我以前
  CHECK(seg.granularity == Granularity::character);
  CHECK(surfaces(seg) == std::vector<std::string>{"我", "以", "前"});
  for (const auto& t : seg.tokens) CHECK(t.char_end == t.char_start + 1);
}

TEST_CASE("segment_chars skips whitespace but keeps original offsets") {
  const Segmentation seg = segment_chars("一前 没");  // 一前 没
  REQUIRE(seg.size() == 3);
  CHECK(seg.tokens[0].char_start == 0);
  CHECK(seg.tokens[1].char_start == 1);
  CHECK(seg.tokens[2].char_start == 3);  // the space occupies index 2
  CHECK(seg.text() == "一前没");
}

TEST_CASE("segment_chars rejects empty input") {
  CHECK_THROWS_AS(segment_chars(""), data_error);
  CHECK_THROWS_AS(segment_chars("   "), data_error);
}

TEST_CASE("segment_words uses greedy forward maximum match") {
  const auto& lex = testsup::resources().lexicon;
  // 我以前没住过: 以前 and 住 are lexicon words
  const Segmentation seg = segment_words("我以前没住过", lex);
  CHECK(seg.granularity == Granularity::word);
  CHECK(surfaces(seg) == std::vector<std::string>{"我", "以前", "没",
                                                  "住", "过"});
}

TEST_CASE("segment_words: unknown characters become single-char X tokens") {
  const auto& lex = testsup::resources().lexicon;
  const Segmentation seg = segment_words("魂魄", lex);  // not in lexicon
  REQUIRE(seg.size() == 2);
  CHECK(seg.tokens[0].pos == "X");
  CHECK(seg.tokens[1].pos == "X");
}

TEST_CASE("segment_words: longest lexicon word wins") {
  const auto& lex = testsup::resources().lexicon;
  // lexicon contains both 欧洲 and 欧洲人
  const Segmentation seg = segment_words("欧洲人", lex);
  CHECK(surfaces(seg) == std::vector<std::string>{"欧洲人"});
}

TEST_CASE("segment_words matches the enumeration oracle") {
  const auto& lex = testsup::resources().lexicon;
  std::mt19937 rng(7781);
  for (int iter = 0; iter < 300; ++iter) {
    const std::string text = testsup::random_sentence(rng, 1, 24);
    const Segmentation seg = segment_words(text, lex);
    CHECK(surfaces(seg) == testsup::oracle_greedy_segment(text, lex));
  }
}

TEST_CASE("parse_presegmented splits the NLPCC example into 12 tokens") {
  const Segmentation seg = parse_presegmented(
      "另外 ， 冬 阴功 对 外国人 的 "
      "喜爱 不断 地 增加 。");
  CHECK(seg.size() == 12);
  CHECK(seg.granularity == Granularity::word);
}

TEST_CASE("parse_presegmented single token and double spaces") {
  CHECK(parse_presegmented("我").size() == 1);
  const Segmentation seg = parse_presegmented("我  以前");
  REQUIRE(seg.size() == 2);
  CHECK(seg.tokens[0].surface == "我");
  CHECK(seg.tokens[1].surface == "以前");
  // offsets are against the whitespace-stripped text
  CHECK(seg.tokens[1].char_start == 1);
  CHECK(seg.tokens[1].char_end == 3);
}

TEST_CASE("concatenation invariant holds for every operation") {
  const auto& lex = testsup::resources().lexicon;
  std::mt19937 rng(133);
  for (int iter = 0; iter < 200; ++iter) {
    std::string text = testsup::random_sentence(rng, 1, 30);
    if (iter % 3 == 0) text.insert(text.size() / 2, " ");
    const std::string stripped = utf8::strip_whitespace(text);
    CHECK(segment_chars(text).text() == stripped);
    CHECK(segment_words(text, lex).text() == stripped);
    CHECK(parse_presegmented(text).text() == stripped);
  }
}

TEST_CASE("lexicon file loading") {
  const auto& lex = testsup::resources().lexicon;
  CHECK(lex.contains("以前"));
  CHECK(lex.pos("了") == "PART");
  CHECK(lex.pos("魂魄") == "X");  // absent
  CHECK(lex.max_word_len() >= 3);
}

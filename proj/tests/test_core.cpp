#include <catch2/catch_amalgamated.hpp>

#include "cgec/core.hpp"
#include "cgec/segment.hpp"
#include "support/helpers.hpp"

using namespace cgec;

TEST_CASE("label constraints are enforced") {
  CHECK_NOTHROW(make_label(Op::R, "PINYIN"));
  CHECK_NOTHROW(make_label(Op::R, "DE"));
  CHECK_NOTHROW(make_label(Op::M, "DE"));
  CHECK_NOTHROW(make_label(Op::WO));
  CHECK_NOTHROW(make_label(Op::U, "PART"));
  CHECK_THROWS_AS(make_label(Op::M, "PINYIN"), data_error);
  CHECK_THROWS_AS(make_label(Op::U, "SHAPE"), data_error);
  CHECK_THROWS_AS(make_label(Op::U, "DE"), data_error);
  CHECK_THROWS_AS(make_label(Op::WO, "NOUN"), data_error);
}

TEST_CASE("edit shape determines the operation") {
  Edit insertion{2, 2, "的", make_label(Op::M, "DE"), 0};
  CHECK(structural_op(insertion) == Op::M);
  Edit deletion{2, 3, "", make_label(Op::U, "PART"), 0};
  CHECK(structural_op(deletion) == Op::U);
  Edit replacement{1, 3, "以前", make_label(Op::R, "PINYIN"), 0};
  CHECK(structural_op(replacement) == Op::R);

  const Segmentation seg = segment_chars("我一前没");
  CHECK_THROWS_AS(validate_edit(Edit{3, 5, "x", make_label(Op::R, "OTHER"), 0},
                                seg.size()),
                  data_error);
  CHECK_THROWS_AS(validate_edit(Edit{2, 2, "", make_label(Op::M, "DE"), 0},
                                seg.size()),
                  data_error);
}

TEST_CASE("apply_edits replaces a span") {
  // 我 一 前 没 with [1,3) -> 以前
  const Segmentation seg = segment_chars("我一前没");
  std::vector<Edit> edits{{1, 3, "以前", make_label(Op::R, "PINYIN"), 0}};
  CHECK(apply_edits(seg, edits) == "我以前没");
}

TEST_CASE("apply_edits with no edits returns the original text") {
  const Segmentation seg = segment_chars("我以前 没");
  CHECK(apply_edits(seg, {}) == "我以前没");
}

TEST_CASE("apply_edits deletes a redundant span") {
  // 慶祝慶祝 with [2,4) deleted -> 慶祝
  const Segmentation seg = segment_chars("慶祝慶祝");
  std::vector<Edit> edits{{2, 4, "", make_label(Op::U, "OTHER"), 0}};
  CHECK(apply_edits(seg, edits) == "慶祝");
}

TEST_CASE("apply_edits stacks insertions at one position in order") {
  const Segmentation seg = segment_chars("我没");
  std::vector<Edit> edits{{1, 1, "以", make_label(Op::M, "OTHER"), 0},
                          {1, 1, "前", make_label(Op::M, "OTHER"), 0}};
  CHECK(apply_edits(seg, edits) == "我以前没");
}

TEST_CASE("apply_edits rejects overlapping spans naming both edits") {
  const Segmentation seg = segment_chars("我一前没");
  std::vector<Edit> edits{{0, 2, "你", make_label(Op::R, "OTHER"), 0},
                          {1, 3, "他", make_label(Op::R, "OTHER"), 0}};
  try {
    apply_edits(seg, edits);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    const std::string what = e.what();
    CHECK(what.find("[0,2)") != std::string::npos);
    CHECK(what.find("[1,3)") != std::string::npos);
  }
}

TEST_CASE("round trip: re-extracting after apply yields the same correction") {
  std::mt19937 rng(20240811);
  const auto& res = testsup::resources();
  for (int iter = 0; iter < 200; ++iter) {
    const std::string source = testsup::random_sentence(rng, 4, 18);
    const std::string target = testsup::mutate(source, rng, 1 + iter % 4);
    const Segmentation src = segment_chars(source);
    const Segmentation tgt = segment_chars(target);
    const auto ops = align(src, tgt, {}, &res.pinyin, &res.shape);
    const auto edits = merge_edits(ops, src, tgt, res.lexicon);
    const std::string rebuilt = apply_edits(src, edits);
    REQUIRE(rebuilt == utf8::strip_whitespace(target));

    // re-align the rebuilt sentence and re-extract: same net effect
    const Segmentation again = segment_chars(rebuilt.empty() ? target : rebuilt);
    const auto ops2 = align(src, again, {}, &res.pinyin, &res.shape);
    const auto edits2 = merge_edits(ops2, src, again, res.lexicon);
    REQUIRE(apply_edits(src, edits2) == rebuilt);
  }
}

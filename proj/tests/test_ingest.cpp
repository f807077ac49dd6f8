#include <catch2/catch_amalgamated.hpp>

#include "cgec/ingest.hpp"
#include "support/helpers.hpp"

using namespace cgec;

namespace {

std::string fixture(const std::string& name) {
  return testsup::read_file(testsup::fixture_path(name));
}

// Every parser with span information must reconstruct its reference.
void check_reconstruction(const ParsedCorpus& corpus, std::size_t index) {
  REQUIRE(index < corpus.pairs.size());
  REQUIRE_FALSE(corpus.pairs[index].references.empty());
  const auto seg = segment_chars(corpus.pairs[index].source);
  const std::string rebuilt = apply_edits(seg, corpus.gold_edits[index]);
  CHECK(rebuilt ==
        utf8::strip_whitespace(corpus.pairs[index].references.front()));
}

}  // namespace

TEST_CASE("CGED 2014: sentences joined to their mistakes") {
  const auto corpus = parse_cged(fixture("cged2014.xml"), CorpusFormat::cged2014);
  REQUIRE(corpus.pairs.size() == 2);
  CHECK(corpus.pairs[0].id == "A2-0018-1");
  CHECK(corpus.pairs[0].meta.at("type") == "Selection");
  CHECK(corpus.pairs[1].meta.at("type") == "Redundant");
  REQUIRE(corpus.pairs[0].references.size() == 1);
  check_reconstruction(corpus, 0);
  check_reconstruction(corpus, 1);
  // the Redundant fix deletes the duplicated 慶祝
  CHECK(utf8::length(corpus.pairs[1].source) ==
        utf8::length(corpus.pairs[1].references[0]) + 2);
}

TEST_CASE("CGED 2015: offsets convert to 0-based spans") {
  const auto corpus = parse_cged(fixture("cged2015.xml"), CorpusFormat::cged2015);
  REQUIRE(corpus.pairs.size() == 1);
  REQUIRE(corpus.gold_spans[0].size() == 1);
  CHECK(corpus.gold_spans[0][0].type == "Missing");
  CHECK(corpus.gold_spans[0][0].start == 10);
  CHECK(corpus.gold_spans[0][0].end == 11);
  CHECK(corpus.pairs[0].meta.at("errors") == "11-11:Missing");
  check_reconstruction(corpus, 0);
}

TEST_CASE("CGED 2016: four typed errors, first span 9-11") {
  const auto corpus =
      parse_cged(fixture("cged2016.xml"), CorpusFormat::cged2016plus);
  REQUIRE(corpus.pairs.size() == 1);
  const auto& spans = corpus.gold_spans[0];
  REQUIRE(spans.size() == 4);
  CHECK(spans[0].type == "R");
  CHECK(spans[1].type == "M");
  CHECK(spans[2].type == "M");
  CHECK(spans[3].type == "S");
  CHECK(spans[0].start == 8);  // 1-based 9..11 over visible characters
  CHECK(spans[0].end == 11);
  check_reconstruction(corpus, 0);
}

TEST_CASE("CGED 2020: answer attribute carries alternatives") {
  const auto corpus = parse_cged(fixture("cged2020.xml"), CorpusFormat::cged2020);
  REQUIRE(corpus.pairs.size() == 1);
  const auto& pair = corpus.pairs[0];
  const auto& spans = corpus.gold_spans[0];
  REQUIRE(spans.size() == 5);
  CHECK(spans[0].start == 5);
  CHECK(spans[0].end == 8);
  CHECK(pair.meta.at("answer0") == "邻居们");
  CHECK(spans[2].start == 25);
  CHECK(spans[2].end == 27);
  CHECK(pair.meta.at("answer2") ==
        "纷纷,一起,都");  // 纷纷,一起,都
  check_reconstruction(corpus, 0);
}

TEST_CASE("CGED: zero ERROR elements give a clean pair") {
  const std::string xml =
      "<DOC>\n<TEXT id=\"1\">我们。</TEXT>\n"
      "<CORRECTION>我们。</CORRECTION>\n</DOC>\n";
  const auto corpus = parse_cged(xml, CorpusFormat::cged2016plus);
  REQUIRE(corpus.pairs.size() == 1);
  CHECK(corpus.gold_spans[0].empty());
  CHECK(corpus.gold_edits[0].empty());
}

TEST_CASE("CGED errors: unknown TYPE and out-of-range offsets") {
  const std::string bad_type =
      "<DOC>\n<SENTENCE id=\"1\">我们</SENTENCE>\n"
      "<MISTAKE start_off=\"1\" end_off=\"1\">\n<TYPE>Bogus</TYPE>\n"
      "<CORRECTION>我们</CORRECTION>\n</MISTAKE>\n</DOC>\n";
  try {
    parse_cged(bad_type, CorpusFormat::cged2015);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    CHECK(std::string(e.what()).find("Bogus") != std::string::npos);
  }
  const std::string bad_offset =
      "<DOC>\n<SENTENCE id=\"1\">我们</SENTENCE>\n"
      "<MISTAKE start_off=\"5\" end_off=\"9\">\n<TYPE>Missing</TYPE>\n"
      "<CORRECTION>我们</CORRECTION>\n</MISTAKE>\n</DOC>\n";
  CHECK_THROWS_AS(parse_cged(bad_offset, CorpusFormat::cged2015), data_error);
}

TEST_CASE("NLPCC training lines") {
  const auto one = parse_nlpcc_train_line(
      "1\t1\t我在家里一个人学习中文"
      "。\t我在家里自学中文。");
  CHECK(one.references.size() == 1);
  const auto zero = parse_nlpcc_train_line(
      "1\t0\t她创造的不是画稿。");
  CHECK(zero.references.empty());
  const auto two = parse_nlpcc_train_line("7\t2\tA\tB\tC");
  CHECK(two.references.size() == 2);
  CHECK_THROWS_AS(parse_nlpcc_train_line("1\t3\tA\tB"), parse_error);
  const auto corpus = parse_nlpcc_train(fixture("nlpcc_train.txt"));
  REQUIRE(corpus.pairs.size() == 3);
  CHECK(corpus.pairs[2].references.size() == 2);
}

TEST_CASE("FCGEC: operations reproduce the reference correction") {
  const auto corpus = parse_fcgec(fixture("fcgec.json"));
  REQUIRE(corpus.pairs.size() == 1);
  const auto& pair = corpus.pairs[0];
  CHECK(pair.id == "ea28d89d9ba25ff2118087259f581dc8");
  CHECK(pair.meta.at("error_type") == "ILL");
  REQUIRE(pair.references.size() == 1);
  CHECK(pair.references[0] ==
        "中央政法委书记罗干同志"
        "对因公殉职的公安干警表"
        "示崇高的敬意并对他们的"
        "家属致以亲切的慰问。");
  REQUIRE(corpus.gold_edits[0].size() == 2);
  CHECK(corpus.gold_edits[0][0].label.op == Op::U);
  CHECK(corpus.gold_edits[0][1].label.op == Op::M);
  check_reconstruction(corpus, 0);
}

TEST_CASE("FCGEC: error_flag 0 mirrors the source") {
  const std::string json =
      "{\"k\": {\"sentence\": \"我们。\", \"error_flag\": 0, "
      "\"error_type\": \"*\", \"operation\": \"[]\"}}";
  const auto corpus = parse_fcgec(json);
  REQUIRE(corpus.pairs.size() == 1);
  CHECK(corpus.pairs[0].references == std::vector<std::string>{"我们。"});
  CHECK(corpus.gold_edits[0].empty());
}

TEST_CASE("FCGEC: Switch becomes a single WO edit") {
  // 书猫叫。 with Switch [1,0] -> 猫书叫。
  const std::string json =
      "{\"k\": {\"sentence\": \"书猫叫。\", \"error_flag\": 1, "
      "\"error_type\": \"IWO\", \"operation\": \"[{\\\"Switch\\\": [1, 0]}]\"}}";
  const auto corpus = parse_fcgec(json);
  REQUIRE(corpus.gold_edits[0].size() == 1);
  CHECK(corpus.gold_edits[0][0].label.op == Op::WO);
  CHECK(corpus.pairs[0].references[0] == "猫书叫。");
  check_reconstruction(corpus, 0);
}

TEST_CASE("FCGEC: positions beyond the sentence are rejected") {
  const std::string json =
      "{\"k\": {\"sentence\": \"我们\", \"error_flag\": 1, "
      "\"operation\": \"[{\\\"Delete\\\": [9]}]\"}}";
  CHECK_THROWS_AS(parse_fcgec(json), data_error);
}

TEST_CASE("FlaCGEC: two verbatim-typed edits reconstruct the target") {
  const auto corpus = parse_flacgec(fixture("flacgec.json"));
  REQUIRE(corpus.pairs.size() == 1);
  const auto& edits = corpus.gold_edits[0];
  REQUIRE(edits.size() == 2);
  CHECK(edits[0].start == 7);
  CHECK(edits[0].end == 9);
  CHECK(edits[0].replacement == "再");
  CHECK(edits[0].label.raw == "S-频率、重复副词");
  CHECK(edits[1].start == 15);
  CHECK(edits[1].end == 17);
  CHECK(edits[1].replacement == "总是");
  check_reconstruction(corpus, 0);
  CHECK(corpus.warnings.empty());
}

TEST_CASE("FlaCGEC: empty annotation gives zero edits, mismatch warns") {
  const std::string json =
      "{\"1\": {\"source\": \"我们。\", \"target\": "
      "\"我们。\", \"operation\": \"[]\", \"annotation\": \"\"}}";
  const auto corpus = parse_flacgec(json);
  CHECK(corpus.gold_edits[0].empty());
  const std::string mismatch =
      "{\"1\": {\"source\": \"我了。\", \"target\": "
      "\"我。\", \"operation\": \"[[(0, 0, 'x'), 'T', 'S', ('null', "
      "'null', 'y')], [(1, 1, 'x'), 'T', 'S', ('null', 'null', 'y')]]\", "
      "\"annotation\": \"1 1|||T|||\"}}";
  const auto warned = parse_flacgec(mismatch);
  CHECK(warned.warnings.size() == 1);
}

TEST_CASE("YACLC: grammatical references and fluency meta") {
  const auto corpus = parse_yaclc(fixture("yaclc.json"));
  REQUIRE(corpus.pairs.size() == 1);
  const auto& pair = corpus.pairs[0];
  CHECK(pair.id == "4308");
  CHECK(pair.references.size() == 3);
  CHECK(pair.meta.at("annotators") == "10");
  CHECK(pair.meta.at("ref0_annotators") == "6");
  CHECK(pair.meta.count("fluency_ref0") == 1);
  CHECK(pair.meta.at("fluency_ref0_annotators") == "2");
}

TEST_CASE("YACLC: duplicate corrections stay distinct entries") {
  const std::string json =
      "{\"sentence_id\": 1, \"sentence_text\": \"我们。\", "
      "\"sentence_annos\": ["
      "{\"is_grammatical\": 1, \"correction\": \"我。\", "
      "\"annotator_count\": 4},"
      "{\"is_grammatical\": 1, \"correction\": \"我。\", "
      "\"annotator_count\": 2}]}";
  const auto corpus = parse_yaclc(json);
  REQUIRE(corpus.pairs[0].references.size() == 2);
  CHECK(corpus.pairs[0].meta.at("ref0_annotators") == "4");
  CHECK(corpus.pairs[0].meta.at("ref1_annotators") == "2");
}

TEST_CASE("CCTC: the deletion at position 31") {
  const auto corpus = parse_cctc(fixture("cctc.json"));
  REQUIRE(corpus.pairs.size() == 2);
  CHECK(corpus.gold_edits[0].empty());
  const auto& edits = corpus.gold_edits[1];
  REQUIRE(edits.size() == 1);
  CHECK(edits[0].label.op == Op::U);
  CHECK(edits[0].start == 30);  // 1-based position 31
  CHECK(edits[0].end == 31);
  CHECK(corpus.pairs[1].meta.at("doc_id") == "11851");
  check_reconstruction(corpus, 1);
  CHECK(corpus.pairs[1].references[0] ==
        "一是为了避免不必要麻烦,"
        "二是一旦被认出来难免需"
        "要签名或者合影,会耽误明"
        "星自己的时间。");
}

TEST_CASE("CCTC: old-text mismatch is an error") {
  const std::string json =
      "{\"doc_id\": \"d\", \"sentences\": [\"我们。\"], "
      "\"corrections\": [[[1, \"R\", \"你\", \"\"]]]}";
  try {
    parse_cctc(json);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    CHECK(std::string(e.what()).find("position 1") != std::string::npos);
  }
}

TEST_CASE("NaCGEC records") {
  const auto corpus = parse_nacgec(fixture("nacgec.json"));
  REQUIRE(corpus.pairs.size() == 2);
  CHECK(corpus.pairs[0].meta.at("error_type") == "搭配不当");
  CHECK(corpus.pairs[0].references.size() == 1);
  CHECK(corpus.pairs[1].meta.at("error_type") == "正确");
  CHECK(corpus.pairs[1].references[0] == corpus.pairs[1].source);
  // multi-target record
  const std::string json =
      "[{\"source\": \"A\", \"target\": [\"B\", \"C\"], \"error_type\": \"X\"}]";
  CHECK(parse_nacgec(json).pairs[0].references.size() == 2);
}

TEST_CASE("CEFE records") {
  const auto corpus = parse_cefe(fixture("cefe.json"));
  REQUIRE(corpus.pairs.size() == 1);
  CHECK(corpus.pairs[0].id == "3202");
  CHECK(corpus.pairs[0].references.size() == 1);
  // error-free pair
  const std::string same =
      "[{\"sent_id\": \"1\", \"sent\": \"我。\", \"revisedSent\": "
      "\"我。\"}]";
  CHECK(parse_cefe(same).pairs[0].references[0] == "我。");
  // missing revisedSent
  const std::string missing = "[{\"sent_id\": \"1\", \"sent\": \"我。\"}]";
  CHECK_THROWS_AS(parse_cefe(missing), data_error);
}

TEST_CASE("text passes through unmutated") {
  const auto corpus = parse_cctc(fixture("cctc.json"));
  // fullwidth and halfwidth punctuation preserved as-is
  CHECK(corpus.pairs[1].source.find(",") != std::string::npos);
  CHECK(corpus.pairs[1].source.find("。") != std::string::npos);
  const auto nacgec = parse_nacgec(fixture("nacgec.json"));
  CHECK(nacgec.pairs[0].source.find("，") != std::string::npos);
}

TEST_CASE("unified parallel rendering") {
  const auto corpus = parse_nlpcc_train(fixture("nlpcc_train.txt"));
  const std::string out = render_parallel(corpus);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  CHECK(line.find("1\t我在家里") == 0);
  std::getline(lines, line);
  CHECK(line.find('\t') != std::string::npos);
}

TEST_CASE("nlpcc-seg: presegmented sources, zero references") {
  const auto corpus = parse_nlpcc_seg(fixture("nlpcc_seg.txt"));
  REQUIRE(corpus.pairs.size() == 1);
  CHECK(corpus.pairs[0].references.empty());
  CHECK(parse_presegmented(corpus.pairs[0].source).size() == 12);
}

TEST_CASE("NLPCC: trailing empty fields are tolerated and dropped") {
  const auto pair = parse_nlpcc_train_line("9\t1\tA\tB\t\t");
  CHECK(pair.references == std::vector<std::string>{"B"});
}

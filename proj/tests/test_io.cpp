#include <doctest.h>

#include <filesystem>
#include <set>

#include "fcr/error.hpp"
#include "fcr/io.hpp"
#include "fcr/serialize.hpp"
#include "test_support.hpp"

using namespace fcr;
using test_support::bundled_corpus;
using test_support::data_path;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("fcr_test_io_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

} // namespace

TEST_CASE("bundled corpus has ten classes of ten") {
    const auto& corpus = bundled_corpus();
    REQUIRE(corpus.size() == 100);
    std::map<std::string, int> per_class;
    for (const auto& f : corpus) ++per_class[f.label.value()];
    const std::set<std::string> expected{"KGE", "EFE", "ME", "SE", "HE", "BE", "NSL", "HUP", "SLT", "CL"};
    CHECK(per_class.size() == 10);
    for (const auto& [label, n] : per_class) {
        CHECK(expected.count(label) == 1);
        CHECK(n == 10);
    }
    CHECK(corpus.front().id == "KGE-1");
    CHECK(corpus.front().concept_qid == "Q868967");
}

TEST_CASE("bundled corpus re-emits byte-identically") {
    const std::string original = read_file(data_path("corpus.jsonl"));
    CHECK(emit_corpus(parse_corpus(original)) == original);
}

TEST_CASE("corpus parsing edge cases") {
    CHECK(parse_corpus("").empty());
    CHECK(parse_corpus("\n\n").empty());

    const std::string dup = R"({"id":"a","latex":"x"})" "\n" R"({"id":"a","latex":"y"})" "\n";
    CHECK_THROWS_WITH(parse_corpus(dup), doctest::Contains("'a'"));
    CHECK(code_of([&] { parse_corpus(dup); }) == ErrorCode::CorpusFormatError);

    const std::string bad = R"({"id":"a","latex":"x"})" "\n" R"({"id":"b","latex":)" "\n";
    CHECK_THROWS_WITH(parse_corpus(bad), doctest::Contains("line 2"));
    CHECK_THROWS_WITH(parse_corpus(R"({"id":"a","latex":"  "})"), doctest::Contains("line 1"));
    CHECK_THROWS_WITH(parse_corpus(R"({"id":"a","latex":"x","concept_qid":"X1"})"), doctest::Contains("line 1"));
}

TEST_CASE("formula json round trip with every optional field") {
    Formula f{.id = "doc#12",
              .latex = "E=mc^2",
              .label = "EMC",
              .concept_qid = "Q35875",
              .doc_id = "doc",
              .context = "energy … equivalence",
              .context_offset = 3,
              .constituents = ConstituentSet{{{TokenKind::Identifier, "E"}, {TokenKind::Operator, "="}}}};
    const std::vector<Formula> one{f};
    const auto back = parse_corpus(emit_corpus(one));
    REQUIRE(back.size() == 1);
    CHECK(back[0] == f);

    Formula bare{.id = "x", .latex = "x"};
    CHECK(parse_corpus(emit_corpus(std::vector<Formula>{bare}))[0] == bare);
}

TEST_CASE("domain records round trip through json") {
    RankingReport report{.mr = 1.5, .mrr = 0.5, .topk_recall = {{1, 1.0 / 3}, {10, 2.0 / 3}},
                         .per_query_ranks = {1, 2, std::nullopt}};
    Json j = report;
    const auto r2 = j.get<RankingReport>();
    CHECK(r2.mr == report.mr);
    CHECK(r2.mrr == report.mrr);
    CHECK(r2.topk_recall == report.topk_recall);
    CHECK(r2.per_query_ranks == report.per_query_ranks);

    SimilarityMatrix m{.labels = {"a", "b"}, .values = {100, 40, 40, 100}, .measure = Measure::Fuzzy,
                       .permutation = {1, 0}};
    const auto m2 = Json(m).get<SimilarityMatrix>();
    CHECK(m2.labels == m.labels);
    CHECK(m2.values == m.values);
    CHECK(m2.measure == m.measure);
    CHECK(m2.permutation == m.permutation);

    ClusterReport c{.assignments = {0, 1, 1}, .purity = 5.0 / 6, .mean_centroid_distance = std::nullopt, .k = 2,
                    .iterations = 3, .wcss_trace = {2.0, 1.0}};
    const auto c2 = Json(c).get<ClusterReport>();
    CHECK(c2.assignments == c.assignments);
    CHECK(c2.purity == c.purity);
    CHECK_FALSE(c2.mean_centroid_distance.has_value());
    CHECK(c2.wcss_trace == c.wcss_trace);

    DuplicateRecord d{"H=\\dot{a}/a", 32, 32, "x"};
    CHECK(Json(d).get<DuplicateRecord>() == d);
    for (const auto& kind : all_encoding_kinds()) CHECK(Json(kind).get<EncodingKind>() == kind);

    KnnConfig config;
    config.k = 4;
    const auto config2 = Json(config).get<KnnConfig>();
    CHECK(config2.k == 4);
    CHECK(config2.max_len == 30);
}

TEST_CASE("annotation file parsing") {
    const std::string tsv =
        "formula_id\ttoken\tname\tqid\n"
        "KGE-1\tc\tspeed of light\tQ2111\n"
        "# comment\n"
        "EFE-1\tR\tRicci curvature\tQ1195879\n"
        "CL-4\tR\tdistance\tQ126017\n";
    const auto map = parse_annotations(tsv);
    CHECK(map.resolve("KGE-1", "c") == "Q2111");
    CHECK(map.alternatives("R").size() == 2);
    CHECK(parse_annotations(emit_annotations(map)) == map);

    CHECK(parse_annotations("").empty());
    CHECK_THROWS_WITH(parse_annotations("a\tb\tname\tQ12x\n"), doctest::Contains("line 1"));
    CHECK(code_of([] { parse_annotations("h\n\na\tb\tname\n"); }) == ErrorCode::AnnotationFormatError);
}

TEST_CASE("file helpers report io errors") {
    CHECK(code_of([] { read_file("/nonexistent/fcr/file"); }) == ErrorCode::IoError);
    const auto dir = scratch_dir("files");
    save_corpus(dir / "c.jsonl", bundled_corpus());
    CHECK(load_corpus(dir / "c.jsonl") == bundled_corpus());
}

TEST_CASE("document ingestion") {
    const std::string doc = R"(<html xmlns="http://www.w3.org/1999/xhtml"><head><title>t</title></head><body>
<p>The Hubble parameter <math alttext="H=\dot{a}/a"><mi>H</mi><mo>=</mo><mover><mi>a</mi><mo>˙</mo></mover><mo>/</mo><mi>a</mi></math> sets the rate.</p>
<p>Then <math><mi>x</mi></math> and <math alttext="42"><mn>42</mn></math>.</p>
</body></html>)";
    const auto formulas = ingest_document(doc, "paper1");
    REQUIRE(formulas.size() == 3);
    for (const auto& f : formulas) {
        CHECK(f.doc_id == "paper1");
        CHECK(f.id.rfind("paper1#", 0) == 0);
        REQUIRE(f.context.has_value());
        REQUIRE(f.context_offset.has_value());
    }
    CHECK(formulas[0].latex == "H=\\dot{a}/a");
    CHECK(formulas[0].context->substr(0, *formulas[0].context_offset).find("Hubble parameter") != std::string::npos);
    CHECK(formulas[0].constituents->unique_identifiers() == std::vector<std::string>{"H", "a"});
    CHECK(formulas[1].latex == "x");
    CHECK(formulas[2].constituents->content_tokens().empty());
    CHECK(formulas[2].constituents->numbers() == std::vector<std::string>{"42"});

    IngestOptions narrow{.context_window = 5};
    const auto clipped = ingest_document(doc, "paper1", narrow);
    CHECK(clipped[0].context->size() <= 10);
    CHECK(ingest_document(doc, "paper1") == formulas);
}

TEST_CASE("directory ingestion is sorted, skips bad files, rejects empty trees") {
    const auto dir = scratch_dir("ntcir");
    const std::string row1 = R"(<math alttext="H=\dot{a}/a"><mi>H</mi><mo>=</mo><mi>a</mi><mo>/</mo><mi>a</mi></math>)";
    write_file(dir / "b.xhtml", "<html><body><p>" + row1 + " twice " + row1 + "</p></body></html>");
    write_file(dir / "a" / "nested.xhtml", "<html><body><p>" + row1 + "</p></body></html>");
    write_file(dir / "broken.xhtml", "<html><body><p></html>");
    write_file(dir / "notes.txt", row1);

    std::vector<std::string> warnings;
    const auto corpus = ingest_ntcir(dir, {}, &warnings);
    REQUIRE(corpus.size() == 3);
    CHECK(corpus[0].doc_id == "nested");
    CHECK(corpus[1].doc_id == "b");
    CHECK(corpus[2].doc_id == "b");
    CHECK(corpus[1].id != corpus[2].id);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("broken.xhtml") != std::string::npos);
    CHECK(ingest_ntcir(dir) == corpus);

    const auto empty = scratch_dir("ntcir_empty");
    write_file(empty / "plain.xhtml", "<html><body>no math</body></html>");
    CHECK(code_of([&] { ingest_ntcir(empty); }) == ErrorCode::IngestEmpty);
}

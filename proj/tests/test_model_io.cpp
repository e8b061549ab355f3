#include <doctest.h>

#include <filesystem>

#include "fcr/error.hpp"
#include "fcr/model_io.hpp"
#include "test_support.hpp"

using namespace fcr;
using test_support::bundled_annotations;

namespace {

void check_same(const EncodingSpace& a, const EncodingSpace& b) {
    CHECK(a.kind == b.kind);
    CHECK(a.ids == b.ids);
    CHECK(a.vectors == b.vectors);
    CHECK(static_cast<bool>(a.tfidf) == static_cast<bool>(b.tfidf));
    CHECK(static_cast<bool>(a.embedding) == static_cast<bool>(b.embedding));
}

} // namespace

TEST_CASE("encoding spaces round trip bit for bit") {
    const auto corpus = test_support::subset30();
    EncodingOptions options;
    options.embedding.epochs = 10;
    for (const auto kind : all_encoding_kinds()) {
        const auto space = build_encoding_space(corpus, bundled_annotations(), kind, options);
        const auto back = encoding_space_from_json(Json::parse(encoding_space_to_json(space).dump()));
        check_same(space, back);
        if (space.tfidf) {
            CHECK(back.tfidf->vocabulary == space.tfidf->vocabulary);
            CHECK(back.tfidf->idf == space.tfidf->idf);
            const Document doc{"=", "c", "\\partial"};
            CHECK(encode_tfidf(*back.tfidf, doc) == encode_tfidf(*space.tfidf, doc));
        }
        if (space.embedding) {
            CHECK(back.embedding->token_vectors == space.embedding->token_vectors);
            CHECK(back.embedding->seed == space.embedding->seed);
            const Document doc{"=", "c", "\\partial"};
            CHECK(encode_embedding(*back.embedding, doc) == encode_embedding(*space.embedding, doc));
        }
    }
}

TEST_CASE("encoding space files") {
    const auto path = std::filesystem::temp_directory_path() / "fcr_test_space.json";
    const auto space = build_encoding_space(test_support::subset30(), bundled_annotations(), {Axis::Content, Method::Tfidf});
    save_encoding_space(path, space);
    check_same(space, load_encoding_space(path));
}

TEST_CASE("foreign or future files are rejected") {
    auto j = encoding_space_to_json(
        build_encoding_space(test_support::subset30(), bundled_annotations(), {Axis::Content, Method::Tfidf}));
    auto future = j;
    future["version"] = kModelFormatVersion + 1;
    CHECK_THROWS_AS(encoding_space_from_json(future), Error);
    auto foreign = j;
    foreign["format"] = "something else";
    CHECK_THROWS_AS(encoding_space_from_json(foreign), Error);
    auto ragged = j;
    ragged["vectors"][0].erase(0);
    CHECK_THROWS_AS(encoding_space_from_json(ragged), Error);
    auto short_ids = j;
    short_ids["ids"].erase(0);
    CHECK_THROWS_AS(encoding_space_from_json(short_ids), Error);
}

TEST_CASE("id list files") {
    const auto lists = parse_id_lists(R"({"q1": ["a", "b"], "q2": []})");
    CHECK(lists.at("q1") == std::vector<std::string>{"a", "b"});
    CHECK(lists.at("q2").empty());
    CHECK(parse_judgments(R"({"q": ["b", "a", "b"]})").at("q") == std::set<std::string>{"a", "b"});
    for (const char* bad : {"[1,2]", R"({"q": "a"})", R"({"q": [1]})", "{"}) {
        try {
            parse_id_lists(bad);
            FAIL("accepted " << bad);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::CorpusFormatError);
        }
    }
}

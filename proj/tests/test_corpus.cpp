#include "spamlab/corpus.hpp"
#include "spamlab/error.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace spamlab;
namespace fs = std::filesystem;

namespace {

std::string message(const std::string& subject, const std::string& body = "hello") {
    return "Subject: " + subject + "\nContent-Type: text/plain\n\n" + body + "\n";
}

std::size_t count_label(const Corpus& c, Label label) {
    std::size_t n = 0;
    for (const auto& e : c.entries) n += e.label == label;
    return n;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("two-directory layout") {
    test::TempDir dir("two");
    for (int i = 0; i < 3; ++i) test::write_file(dir.path() / "spam" / ("s" + std::to_string(i)), message("WIN"));
    for (int i = 0; i < 2; ++i) test::write_file(dir.path() / "ham" / ("h" + std::to_string(i)), message("lunch"));
    test::write_file(dir.path() / "spam" / ".hidden", "ignored");
    const auto c = ingest(dir.path());
    REQUIRE(c.entries.size() == 5);
    CHECK(count_label(c, Label::spam) == 3);
    CHECK(count_label(c, Label::ham) == 2);
    CHECK(c.entries.front().raw.source_id == "ham/h0");
    CHECK(c.entries.back().raw.source_id == "spam/s2");
    CHECK(c.failures.empty());
    CHECK(c.manifest.find("two-dirs") != std::string::npos);
}

TEST_CASE("mbox pair layout") {
    test::TempDir dir("mbox");
    test::write_file(dir.path() / "spam.mbox", "From a\n" + message("one") + "From b\n" + message("two"));
    test::write_file(dir.path() / "ham.mbox", "From c\n" + message("three"));
    const auto c = ingest(dir.path());
    REQUIRE(c.entries.size() == 3);
    CHECK(count_label(c, Label::spam) == 2);
    CHECK(c.entries[0].raw.source_id == "ham.mbox#1");
    CHECK(c.entries[1].parsed.subject == "one");
    CHECK(ingest(dir.path(), CorpusLayout::mbox_pair).entries.size() == 3);
}

TEST_CASE("manifest layout") {
    test::TempDir dir("manifest");
    test::write_file(dir.path() / "m" / "a.eml", message("a"));
    test::write_file(dir.path() / "m" / "b.eml", message("b"));
    test::write_file(dir.path() / "m" / "c.eml", message("c"));
    test::write_file(dir.path() / "list.txt", "# comment\nspam\tm/a.eml\nham\tm/b.eml\r\nunlabeled\tm/c.eml\n");
    const auto c = ingest(dir.path() / "list.txt");
    REQUIRE(c.entries.size() == 3);
    CHECK(c.entries[0].label == Label::spam);
    CHECK(c.entries[1].label == Label::ham);
    CHECK_FALSE(c.entries[2].label.has_value());

    test::write_file(dir.path() / "bad.txt", "spam\tm/missing.eml\n");
    CHECK(code_of([&] { ingest(dir.path() / "bad.txt", CorpusLayout::manifest_file); }) == ErrorCode::Io);
}

TEST_CASE("unlabeled inputs") {
    test::TempDir dir("unlabeled");
    test::write_file(dir.path() / "one.eml", message("x"));
    const auto single = ingest(dir.path() / "one.eml");
    REQUIRE(single.entries.size() == 1);
    CHECK_FALSE(single.entries[0].label.has_value());
    CHECK(single.entries[0].raw.source_id == "one.eml");

    test::write_file(dir.path() / "box" / "all.mbox", "From a\n" + message("1") + "From b\n" + message("2"));
    CHECK(ingest(dir.path() / "box" / "all.mbox").entries.size() == 2);
    CHECK(ingest(dir.path() / "box", CorpusLayout::unlabeled).entries.size() == 1);
}

TEST_CASE("empty directory and missing path") {
    test::TempDir dir("empty");
    CHECK(code_of([&] { ingest(dir.path()); }) == ErrorCode::NoMessagesFound);
    fs::create_directories(dir.path() / "spam");
    fs::create_directories(dir.path() / "ham");
    CHECK(code_of([&] { ingest(dir.path()); }) == ErrorCode::NoMessagesFound);
    CHECK(code_of([&] { ingest(dir.path() / "nope"); }) == ErrorCode::Io);
    CHECK(code_of([&] { ingest(dir.path(), CorpusLayout::mbox_pair); }) == ErrorCode::Io);
}

TEST_CASE("one malformed file among ten is isolated") {
    test::TempDir dir("malformed");
    for (int i = 0; i < 9; ++i) test::write_file(dir.path() / "ham" / ("m" + std::to_string(i)), message("ok"));
    test::write_file(dir.path() / "spam" / "broken", "this is not mail at all\n");
    const auto c = ingest(dir.path(), CorpusLayout::two_dirs, 3);
    CHECK(c.entries.size() == 9);
    REQUIRE(c.failures.size() == 1);
    CHECK(c.failures[0].source_id == "spam/broken");
    CHECK(c.failures[0].reason.find("MalformedMessage") != std::string::npos);
}

TEST_CASE("layout names") {
    CHECK(parse_layout("auto") == CorpusLayout::automatic);
    CHECK(parse_layout("two-dirs") == CorpusLayout::two_dirs);
    CHECK(parse_layout("mbox-pair") == CorpusLayout::mbox_pair);
    CHECK(parse_layout("manifest") == CorpusLayout::manifest_file);
    CHECK(parse_layout("unlabeled") == CorpusLayout::unlabeled);
    CHECK_THROWS_AS(parse_layout("zip"), Error);
}

TEST_CASE("dataset from a balanced synthetic corpus") {
    const auto c = synth_corpus(200, 0.5, 1);
    CHECK(count_label(c, Label::spam) == 100);
    CHECK(count_label(c, Label::ham) == 100);
    const auto d = build_dataset(c);
    CHECK(d.vectors.size() == 200);
    CHECK(d.feature_indices.size() == kFeatureCount);
    for (const auto& v : d.vectors) CHECK(v.values.size() == kFeatureCount);
    const auto t = to_training_set(d);
    CHECK(t.classes == std::vector<std::string>{"ham", "spam"});
    CHECK(t.size() == 200);
    CHECK(build_dataset(c, 4) == d);
}

TEST_CASE("empty corpus gives an empty dataset") {
    const auto d = build_dataset(Corpus{});
    CHECK(d.vectors.empty());
    CHECK(d.feature_indices.size() == kFeatureCount);
}

TEST_CASE("projection and labels") {
    auto d = build_dataset(synth_corpus(20, 0.5, 3));
    const std::vector<std::size_t> subset{8, 12, 18};
    const auto p = project_dataset(d, subset);
    CHECK(p.feature_indices == subset);
    CHECK(p.feature_names() == std::vector<std::string>{"f8", "f12", "f18"});
    CHECK(p.vectors[0].values[1] == d.vectors[0].values[11]);

    const std::vector<std::size_t> wider{8, 9};
    try {
        project_dataset(p, wider);
        FAIL("expected FeatureMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FeatureMismatch);
        CHECK(std::string(e.what()).find("{f8,f9}") != std::string::npos);
    }

    d.vectors[3].label.reset();
    try {
        to_training_set(d);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("labels required") != std::string::npos);
    }
}

TEST_CASE("CSV round-trip is exact") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, 40);
    for (int round = 0; round < 50; ++round) {
        Dataset d;
        d.feature_indices = {3, 9, 10, 17};
        for (int i = 0; i < 10; ++i) {
            FeatureVector v;
            v.values = {static_cast<double>(count(rng)), value(rng), 1.0 / (1 + count(rng)), 1e-9 * value(rng)};
            if (i % 3 != 0) v.label = i % 2 ? Label::spam : Label::ham;
            v.source_id = i == 4 ? "odd, \"id\"\nx" : "m" + std::to_string(i);
            d.vectors.push_back(v);
        }
        std::stringstream s;
        write_csv(s, d);
        CHECK(read_csv(s) == d);
    }
}

TEST_CASE("CSV layout") {
    Dataset d;
    d.feature_indices = {8, 9};
    d.vectors.push_back({{1.0, 0.5}, Label::spam, "a"});
    std::stringstream s;
    write_csv(s, d);
    CHECK(s.str() == "f8,f9,label,source_id\n1,0.500000,spam,a\n");

    std::stringstream bad("f8,label,source_id\nxyz,spam,a\n");
    CHECK_THROWS_AS(read_csv(bad), Error);
    std::stringstream no_header("f8,f9\n");
    CHECK_THROWS_AS(read_csv(no_header), Error);
}

TEST_CASE("CSV files on disk") {
    test::TempDir dir("csv");
    const auto d = build_dataset(synth_corpus(30, 0.4, 9));
    save_csv(dir.path() / "d.csv", d);
    CHECK(load_csv(dir.path() / "d.csv") == d);
    CHECK_THROWS_AS(load_csv(dir.path() / "missing.csv"), Error);
}

TEST_CASE("synthetic corpus determinism") {
    const auto a = synth_corpus(60, 0.5, 42);
    const auto b = synth_corpus(60, 0.5, 42);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].raw.bytes == b.entries[i].raw.bytes);
        CHECK(a.entries[i].raw.source_id == b.entries[i].raw.source_id);
        CHECK(a.entries[i].label == b.entries[i].label);
    }
    const auto c = synth_corpus(60, 0.5, 43);
    bool differs = false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) differs |= a.entries[i].raw.bytes != c.entries[i].raw.bytes;
    CHECK(differs);
    CHECK(count_label(synth_corpus(10, 0.25, 1), Label::spam) == 3);  // round(2.5) away from zero
}

TEST_CASE("white text is planted only in spam") {
    const auto d = build_dataset(synth_corpus(300, 0.5, 7));
    std::size_t white_spam = 0;
    for (const auto& v : d.vectors) {
        if (v.values[15] == 1) {
            CHECK(v.label == Label::spam);
            ++white_spam;
        }
    }
    CHECK(white_spam > 0);

    SynthConfig everywhere;
    everywhere.white_text_in_ham = true;
    everywhere.white_text_rate = 1.0;
    std::size_t white_ham = 0;
    for (const auto& v : build_dataset(synth_corpus(100, 0.5, 7, everywhere)).vectors) {
        white_ham += v.label == Label::ham && v.values[15] == 1;
    }
    CHECK(white_ham > 0);
}

TEST_CASE("written corpus ingests back identically") {
    test::TempDir dir("synth");
    const auto c = synth_corpus(24, 0.5, 5);
    write_two_dirs(c, dir.path());
    const auto back = ingest(dir.path());
    REQUIRE(back.entries.size() == c.entries.size());
    CHECK(build_dataset(back).vectors.size() == 24);
    std::size_t spam = 0;
    for (const auto& e : back.entries) spam += e.label == Label::spam;
    CHECK(spam == 12);
}

}

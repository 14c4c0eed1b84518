#include "spamlab/email_parser.hpp"
#include "spamlab/error.hpp"

#include <doctest.h>

#include <random>

using namespace spamlab;

namespace {

ParsedEmail parse(std::string bytes) { return parse_email(RawEmail{std::move(bytes), "t"}); }

std::vector<std::string> strings(const std::vector<std::string_view>& views) {
    return {views.begin(), views.end()};
}

}  // namespace

TEST_SUITE("email_parser") {

TEST_CASE("minimal message") {
    const auto e = parse("Subject: hi\n\nbody");
    CHECK(e.subject == "hi");
    CHECK(e.body == "body");
    CHECK_FALSE(e.content_type_raw.has_value());
    CHECK_FALSE(e.priority_raw.has_value());
    CHECK(e.header_names == std::vector<std::string>{"subject"});
}

TEST_CASE("folded subject and parameterised content type") {
    const auto e = parse("Subject: a\n b\nContent-Type: text/html; charset=x\n\n.");
    CHECK(e.subject == "a b");
    REQUIRE(e.content_type_raw.has_value());
    CHECK(*e.content_type_raw == "text/html");
    CHECK(e.body == ".");
}

TEST_CASE("tab continuation and multiple folds") {
    const auto e = parse("Subject: one\n\ttwo\n   three\nX: y\n\n");
    CHECK(e.subject == "one two three");
}

TEST_CASE("content type is lower-cased and trimmed") {
    const auto e = parse("Content-Type:   Multipart/Alternative ; boundary=\"x\"\n\n");
    CHECK(*e.content_type_raw == "multipart/alternative");
}

TEST_CASE("no header field is malformed") {
    CHECK_THROWS_AS(parse("no colon anywhere\n\n"), Error);
    try {
        parse("no colon anywhere\n\n");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedMessage);
    }
    CHECK_THROWS_AS(parse("\n\nSubject: late"), Error);
    CHECK_THROWS_AS(parse_email(RawEmail{"", "empty"}), Error);
}

TEST_CASE("header names are case-insensitive") {
    const auto e = parse("SUBJECT: Loud\ncontent-TYPE: TEXT/PLAIN\n\n");
    CHECK(e.subject == "Loud");
    CHECK(*e.content_type_raw == "text/plain");
    CHECK(e.header_names == std::vector<std::string>{"subject", "content-type"});
}

TEST_CASE("priority header preference") {
    CHECK(*parse("Importance: high\nPriority: urgent\nX-Priority: 2\n\n").priority_raw == "2");
    CHECK(*parse("Importance: high\nPriority: urgent\n\n").priority_raw == "urgent");
    CHECK(*parse("Importance: low\n\n").priority_raw == "low");
}

TEST_CASE("first occurrence of a repeated header wins") {
    const auto e = parse("Subject: first\nSubject: second\n\n");
    CHECK(e.subject == "first");
}

TEST_CASE("CRLF line endings") {
    const auto e = parse("Subject: hi\r\nContent-Type: text/html\r\n\r\n<b>x</b>\r\n");
    CHECK(e.subject == "hi");
    CHECK(*e.content_type_raw == "text/html");
    CHECK(e.body == "<b>x</b>\r\n");
}

TEST_CASE("body keeps markup and later blank lines") {
    const auto e = parse("Subject: s\n\nline1\n\nline2 <a href=x>\n");
    CHECK(e.body == "line1\n\nline2 <a href=x>\n");
}

TEST_CASE("message without a body") {
    const auto e = parse("Subject: only headers");
    CHECK(e.subject == "only headers");
    CHECK(e.body.empty());
}

TEST_CASE("mbox envelope line is skipped") {
    const auto e = parse("From someone@example.org Mon Jan  5 10:00:00 2009\nSubject: s\n\nb");
    CHECK(e.header_names == std::vector<std::string>{"subject"});
}

TEST_CASE("invalid bytes become the replacement character") {
    const auto e = parse("Subject: caf\xE9\n\nbad \xFF\xFE end");
    CHECK(e.subject == "caf\xEF\xBF\xBD");
    CHECK(e.body == "bad \xEF\xBF\xBD\xEF\xBF\xBD end");
    // Valid multi-byte text passes through.
    CHECK(parse("Subject: na\xC3\xAFve\n\n").subject == "na\xC3\xAFve");
}

TEST_CASE("sanitize and decode") {
    CHECK(sanitize_utf8("ok") == "ok");
    CHECK(sanitize_utf8("\xC0\xAF") == "\xEF\xBF\xBD\xEF\xBF\xBD");  // overlong
    CHECK(sanitize_utf8("\xED\xA0\x80") == "\xEF\xBF\xBD\xEF\xBF\xBD\xEF\xBF\xBD");  // surrogate
    CHECK(sanitize_utf8("\xF0\x9F\x98\x80") == "\xF0\x9F\x98\x80");
    CHECK(decode_utf8("a\xC3\xA9\xF0\x9F\x98\x80") == std::u32string{U'a', U'é', U'\U0001F600'});
}

TEST_CASE("parse is deterministic and sanitised output is valid UTF-8") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int round = 0; round < 200; ++round) {
        std::string raw = "Subject: ";
        for (int i = 0; i < 40; ++i) raw.push_back(static_cast<char>(byte(rng)));
        raw += "\n\n";
        for (int i = 0; i < 80; ++i) raw.push_back(static_cast<char>(byte(rng)));
        const RawEmail email{raw, "fuzz"};
        ParsedEmail a;
        try {
            a = parse_email(email);
        } catch (const Error&) {
            continue;  // random bytes may include a newline that breaks the header
        }
        CHECK(parse_email(email) == a);
        CHECK(sanitize_utf8(a.subject) == a.subject);
        CHECK(sanitize_utf8(a.body) == a.body);
    }
}

TEST_CASE("tokenize") {
    CHECK(strings(tokenize("hello  world")) == std::vector<std::string>{"hello", "world"});
    CHECK(tokenize("").empty());
    CHECK(strings(tokenize(" a\tb\nc ")) == std::vector<std::string>{"a", "b", "c"});
    CHECK(strings(tokenize("x\r\ny")) == std::vector<std::string>{"x", "y"});
    CHECK(tokenize(" \t\r\n ").empty());
}

TEST_CASE("tokenize round-trips a single-space join and yields substrings") {
    std::mt19937_64 rng(11);
    const std::string alphabet = "ab'!9 \t\r\nXYZ<>";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 60);
    for (int round = 0; round < 500; ++round) {
        std::string text;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) text.push_back(alphabet[pick(rng)]);
        const auto tokens = tokenize(text);
        std::string joined;
        for (const auto t : tokens) {
            CHECK_FALSE(t.empty());
            CHECK(t.find_first_of(" \t\r\n") == std::string_view::npos);
            CHECK(t.data() >= text.data());
            CHECK(t.data() + t.size() <= text.data() + text.size());
            joined += (joined.empty() ? "" : " ") + std::string(t);
        }
        CHECK(strings(tokenize(joined)) == strings(tokens));
    }
}

TEST_CASE("alphabetic words") {
    CHECK(is_alphabetic_word("don't"));
    CHECK(is_alphabetic_word("Hello"));
    CHECK_FALSE(is_alphabetic_word("win99"));
    CHECK_FALSE(is_alphabetic_word("FREE!!!"));
    CHECK_FALSE(is_alphabetic_word("don\xE2\x80\x99t"));  // typographic apostrophe
    CHECK_FALSE(is_alphabetic_word("caf\xC3\xA9"));
}

TEST_CASE("split mbox") {
    const auto msgs = split_mbox("From a@x Mon\nSubject: 1\n\none\nFrom b@x Tue\nSubject: 2\n\ntwo\n");
    REQUIRE(msgs.size() == 2);
    CHECK(msgs[0] == "Subject: 1\n\none\n");
    CHECK(msgs[1] == "Subject: 2\n\ntwo\n");
    // ">From" quoting and "From" mid-line do not split.
    CHECK(split_mbox("From a\nSubject: x\n\n>From here\nsaid From me\n").size() == 1);
    CHECK(split_mbox("Subject: no envelope\n\nbody").size() == 1);
}

}

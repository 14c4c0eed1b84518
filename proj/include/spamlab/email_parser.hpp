#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spamlab {

/// An undecoded message file as read from disk or an mbox slice.
struct RawEmail {
    std::string bytes;
    std::string source_id;
};

/// Headers of interest plus the raw body.
///
/// All text is valid UTF-8: invalid byte sequences in the input are replaced
/// with U+FFFD during parsing.
struct ParsedEmail {
    std::string subject;
    std::optional<std::string> priority_raw;
    /// Lower-cased media type of the top-level Content-Type, parameters removed.
    std::optional<std::string> content_type_raw;
    /// Everything after the first blank line, HTML and MIME boundaries included.
    std::string body;
    std::vector<std::string> header_names;

    bool operator==(const ParsedEmail&) const = default;
};

/// Splits the header block from the body and unfolds continuation lines.
/// Throws Error(MalformedMessage) when no header field can be identified.
ParsedEmail parse_email(const RawEmail& raw);

/// Whitespace-delimited substrings (space, tab, CR, LF), in input order.
std::vector<std::string_view> tokenize(std::string_view text);

/// True iff every byte is an ASCII letter or the ASCII apostrophe.
bool is_alphabetic_word(std::string_view token);

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

/// Decodes well-formed UTF-8 (as produced by sanitize_utf8) to code points.
std::u32string decode_utf8(std::string_view text);

/// Splits mbox text on lines starting with "From " at column 0. The envelope
/// line itself is dropped from each message.
std::vector<std::string> split_mbox(std::string_view mbox);

}  // namespace spamlab

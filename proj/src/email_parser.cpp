#include "spamlab/email_parser.hpp"

#include "spamlab/error.hpp"
#include "text_util.hpp"

#include <cstdint>

namespace spamlab {

namespace {

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Length of the well-formed UTF-8 sequence starting at `pos`, or 0 if invalid.
std::size_t valid_sequence_length(std::string_view s, std::size_t pos) {
    const auto at = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char lead = at(pos);
    const std::size_t left = s.size() - pos;
    if (lead < 0x80) return 1;
    if (lead >= 0xC2 && lead <= 0xDF) {
        return left >= 2 && is_continuation(at(pos + 1)) ? 2 : 0;
    }
    if (lead >= 0xE0 && lead <= 0xEF) {
        if (left < 3) return 0;
        const unsigned char b1 = at(pos + 1);
        if (lead == 0xE0 && b1 < 0xA0) return 0;
        if (lead == 0xED && b1 > 0x9F) return 0;
        return is_continuation(b1) && is_continuation(at(pos + 2)) ? 3 : 0;
    }
    if (lead >= 0xF0 && lead <= 0xF4) {
        if (left < 4) return 0;
        const unsigned char b1 = at(pos + 1);
        if (lead == 0xF0 && b1 < 0x90) return 0;
        if (lead == 0xF4 && b1 > 0x8F) return 0;
        return is_continuation(b1) && is_continuation(at(pos + 2)) &&
                       is_continuation(at(pos + 3))
                   ? 4
                   : 0;
    }
    return 0;
}

bool is_blank(unsigned char c) { return c == ' ' || c == '\t'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && detail::is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && detail::is_space(s.back())) s.remove_suffix(1);
    return s;
}

struct Header {
    std::string name;  // lower-cased
    std::string value;
};

}  // namespace

std::string sanitize_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const std::size_t len = valid_sequence_length(bytes, pos);
        if (len == 0) {
            out.append(kReplacement);
            ++pos;
        } else {
            out.append(bytes.substr(pos, len));
            pos += len;
        }
    }
    return out;
}

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto lead = static_cast<unsigned char>(text[pos]);
        std::size_t len = valid_sequence_length(text, pos);
        if (len == 0) {
            out.push_back(U'\uFFFD');
            ++pos;
            continue;
        }
        char32_t cp = 0;
        switch (len) {
            case 1: cp = lead; break;
            case 2: cp = lead & 0x1F; break;
            case 3: cp = lead & 0x0F; break;
            default: cp = lead & 0x07; break;
        }
        for (std::size_t i = 1; i < len; ++i) {
            cp = (cp << 6) | (static_cast<unsigned char>(text[pos + i]) & 0x3F);
        }
        out.push_back(cp);
        pos += len;
    }
    return out;
}

ParsedEmail parse_email(const RawEmail& raw) {
    if (raw.bytes.empty()) {
        throw Error(ErrorCode::MalformedMessage, "empty message: " + raw.source_id);
    }
    const std::string text = sanitize_utf8(raw.bytes);

    std::vector<Header> headers;
    bool in_header = false;  // whether a continuation line may extend headers.back()
    std::size_t pos = 0;
    std::size_t body_start = text.size();
    bool first_line = true;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        const std::size_t next = eol == std::string::npos ? text.size() : eol + 1;
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = next;

        if (line.empty()) {
            body_start = pos;
            break;
        }
        // mbox envelope line
        if (first_line && line.starts_with("From ")) {
            first_line = false;
            continue;
        }
        first_line = false;

        if (is_blank(static_cast<unsigned char>(line.front()))) {
            if (in_header) {
                const auto piece = trim(line);
                if (!piece.empty()) {
                    auto& value = headers.back().value;
                    if (!value.empty()) value.push_back(' ');
                    value.append(piece);
                }
            }
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            in_header = false;
            continue;
        }
        headers.push_back({detail::to_lower(trim(line.substr(0, colon))),
                           std::string(trim(line.substr(colon + 1)))});
        in_header = true;
    }

    if (headers.empty()) {
        throw Error(ErrorCode::MalformedMessage,
                    "no header section found in " +
                        (raw.source_id.empty() ? std::string("<input>") : raw.source_id));
    }

    ParsedEmail parsed;
    parsed.body = text.substr(std::min(body_start, text.size()));
    const auto first_value = [&](std::string_view name) -> const std::string* {
        for (const auto& h : headers) {
            if (h.name == name) return &h.value;
        }
        return nullptr;
    };
    if (const auto* subject = first_value("subject")) parsed.subject = *subject;
    for (std::string_view name : {"x-priority", "priority", "importance"}) {
        if (const auto* value = first_value(name)) {
            parsed.priority_raw = *value;
            break;
        }
    }
    if (const auto* ct = first_value("content-type")) {
        std::string_view media = *ct;
        media = trim(media.substr(0, media.find(';')));
        parsed.content_type_raw = detail::to_lower(media);
    }
    parsed.header_names.reserve(headers.size());
    for (auto& h : headers) parsed.header_names.push_back(std::move(h.name));
    return parsed;
}

std::vector<std::string_view> tokenize(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && detail::is_space(text[pos])) ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && !detail::is_space(text[pos])) ++pos;
        if (pos > start) tokens.push_back(text.substr(start, pos - start));
    }
    return tokens;
}

bool is_alphabetic_word(std::string_view token) {
    if (token.empty()) return false;
    for (const char c : token) {
        if (!detail::is_ascii_alpha(c) && c != '\'') return false;
    }
    return true;
}

std::vector<std::string> split_mbox(std::string_view mbox) {
    std::vector<std::string> messages;
    std::string current;
    bool open = false;
    std::size_t pos = 0;
    while (pos < mbox.size()) {
        std::size_t eol = mbox.find('\n', pos);
        const std::size_t next = eol == std::string_view::npos ? mbox.size() : eol + 1;
        const std::string_view line = mbox.substr(pos, next - pos);
        pos = next;
        if (line.starts_with("From ")) {
            if (open && !current.empty()) messages.push_back(std::move(current));
            current.clear();
            open = true;
            continue;
        }
        // Text before the first envelope line is kept only if no envelope follows.
        current.append(line);
    }
    if (!current.empty()) messages.push_back(std::move(current));
    return messages;
}

}  // namespace spamlab

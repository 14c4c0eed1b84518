#include "spamlab/features.hpp"

#include "spamlab/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace spamlab {

namespace {

using detail::ascii_lower;
using detail::count_occurrences;
using detail::is_ascii_alpha;
using detail::is_ascii_digit;
using detail::is_space;

bool is_vowel(char c) {
    switch (ascii_lower(c)) {
        case 'a': case 'e': case 'i': case 'o': case 'u': return true;
        default: return false;
    }
}

bool is_rare_letter(char c) {
    switch (ascii_lower(c)) {
        case 'j': case 'k': case 'q': case 'x': case 'z': return true;
        default: return false;
    }
}

std::size_t rare_letter_count(std::string_view word) {
    return static_cast<std::size_t>(std::count_if(word.begin(), word.end(), is_rare_letter));
}

bool has_letter(std::string_view word) { return std::any_of(word.begin(), word.end(), is_ascii_alpha); }

bool has_vowel(std::string_view word) { return std::any_of(word.begin(), word.end(), is_vowel); }

bool is_allowed_word_char(char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || c == U'\'';
}

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || is_ascii_digit(c) || c == '-' || c == '_';
}

// ---- Category 1: subject -------------------------------------------------

double repeated_characters(std::string_view subject) {
    const std::u32string chars = decode_utf8(subject);
    std::size_t run = 0;
    for (std::size_t i = 0; i < chars.size(); ++i) {
        const char32_t c = chars[i];
        const bool white = c == U' ' || c == U'\t' || c == U'\r' || c == U'\n';
        run = (i > 0 && chars[i - 1] == c) ? run + 1 : 1;
        if (!white && run >= 3) return 1.0;
    }
    return 0.0;
}

bool all_letters_uppercase(std::string_view token) {
    bool any = false;
    for (const char c : token) {
        if (!is_ascii_alpha(c)) continue;
        any = true;
        if (c >= 'a' && c <= 'z') return false;
    }
    return any;
}

// Any character outside [A-Za-z'] at a position other than the last.
bool has_inner_special(std::string_view token) {
    const std::u32string chars = decode_utf8(token);
    for (std::size_t i = 0; i + 1 < chars.size(); ++i) {
        if (!is_allowed_word_char(chars[i])) return true;
    }
    return false;
}

// ---- Category 2: headers -------------------------------------------------

double nonstandard_priority(const std::optional<std::string>& priority) {
    if (!priority) return 0.0;
    const std::string value = detail::to_lower(*priority);
    std::string_view v = value;
    while (!v.empty() && is_space(v.front())) v.remove_prefix(1);
    while (!v.empty() && is_space(v.back())) v.remove_suffix(1);
    if (v == "3" || v.find("normal") != std::string_view::npos ||
        v.find("medium") != std::string_view::npos) {
        return 0.0;
    }
    return 1.0;
}

double html_or_missing_content_type(const std::optional<std::string>& content_type) {
    return (!content_type || *content_type == "text/html") ? 1.0 : 0.0;
}

// ---- Category 3: body ----------------------------------------------------

bool is_white(std::string value) {
    std::erase_if(value, [](char c) { return is_space(c) || c == '"' || c == '\''; });
    if (value.ends_with("!important")) value.resize(value.size() - 10);
    return value == "white" || value == "#fff" || value == "#ffffff" || value == "rgb(255,255,255)";
}

// Value of an HTML attribute starting at `pos` (just past '=').
std::string attribute_value(std::string_view html, std::size_t pos) {
    while (pos < html.size() && is_space(html[pos])) ++pos;
    if (pos >= html.size()) return {};
    const char quote = html[pos];
    if (quote == '"' || quote == '\'') {
        const std::size_t end = html.find(quote, pos + 1);
        return std::string(html.substr(pos + 1, end == std::string_view::npos ? std::string_view::npos
                                                                               : end - pos - 1));
    }
    std::size_t end = pos;
    while (end < html.size() && !is_space(html[end]) && html[end] != '>') ++end;
    return std::string(html.substr(pos, end - pos));
}

// Value of a CSS declaration starting at `pos` (just past ':').
std::string css_value(std::string_view html, std::size_t pos) {
    constexpr std::string_view kStops = ";}\"'<>\r\n";
    const std::size_t end = html.find_first_of(kStops, pos);
    return std::string(html.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
}

bool is_color_attribute(std::string_view name) {
    constexpr std::array<std::string_view, 6> kNames = {"color", "bgcolor", "text", "link", "vlink", "alink"};
    return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

bool is_color_property(std::string_view name) {
    return name == "color" || name == "bgcolor" || name.ends_with("-color");
}

struct ColorScan {
    std::size_t color_elements = 0;
    bool white_text = false;
};

// Finds `name=` attributes (preceded by whitespace) and `name:` CSS
// declarations (preceded by start, whitespace, '{', ';' or a quote).
ColorScan scan_colors(std::string_view lower) {
    ColorScan scan;
    std::size_t i = 0;
    while (i < lower.size()) {
        if (!(lower[i] >= 'a' && lower[i] <= 'z') || (i > 0 && is_name_char(lower[i - 1]))) {
            ++i;
            continue;
        }
        const char before = i > 0 ? lower[i - 1] : ' ';
        std::size_t end = i;
        while (end < lower.size() && is_name_char(lower[end])) ++end;
        const std::string_view name = lower.substr(i, end - i);
        std::size_t delim = end;
        while (delim < lower.size() && is_space(lower[delim])) ++delim;
        i = end;
        if (delim >= lower.size()) break;

        if (lower[delim] == '=' && is_space(before)) {
            if (is_color_attribute(name)) {
                ++scan.color_elements;
                if ((name == "color" || name == "text") && is_white(attribute_value(lower, delim + 1))) {
                    scan.white_text = true;
                }
            }
        } else if (lower[delim] == ':' &&
                   (is_space(before) || before == '{' || before == ';' || before == '"' || before == '\'')) {
            if (is_color_property(name)) {
                ++scan.color_elements;
                if (name == "color" && is_white(css_value(lower, delim + 1))) scan.white_text = true;
            }
        }
    }
    return scan;
}

bool tag_boundary(std::string_view s, std::size_t pos) {
    return pos >= s.size() || is_space(s[pos]) || s[pos] == '>' || s[pos] == '/';
}

std::size_t find_tag(std::string_view lower, std::string_view tag, std::size_t from) {
    for (std::size_t pos = lower.find(tag, from); pos != std::string_view::npos;
         pos = lower.find(tag, pos + 1)) {
        if (tag_boundary(lower, pos + tag.size())) return pos;
    }
    return std::string_view::npos;
}

double images_inside_anchors(std::string_view lower) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = find_tag(lower, "<a", pos);
        if (open == std::string_view::npos) break;
        const std::size_t close = find_tag(lower, "</a", open + 2);
        const std::size_t end = close == std::string_view::npos ? lower.size() : close;
        count += count_occurrences(lower.substr(open, end - open), "<img");
        if (close == std::string_view::npos) break;
        pos = close + 3;
    }
    return static_cast<double>(count);
}

double suspicious_urls(std::string_view lower) {
    constexpr std::string_view kHref = "href=";
    std::size_t count = 0;
    for (std::size_t pos = lower.find(kHref); pos != std::string_view::npos;
         pos = lower.find(kHref, pos + kHref.size())) {
        const std::string url = attribute_value(lower, pos + kHref.size());
        const bool suspicious = std::any_of(url.begin(), url.end(), [](char c) {
            return is_ascii_digit(c) || c == '&' || c == '%' || c == '@';
        });
        if (suspicious) ++count;
    }
    return static_cast<double>(count);
}

bool has_stylesheet_link(std::string_view lower) {
    for (std::size_t pos = lower.find("rel"); pos != std::string_view::npos; pos = lower.find("rel", pos + 3)) {
        std::size_t p = pos + 3;
        while (p < lower.size() && is_space(lower[p])) ++p;
        if (p >= lower.size() || lower[p] != '=') continue;
        ++p;
        while (p < lower.size() && is_space(lower[p])) ++p;
        if (p < lower.size() && (lower[p] == '"' || lower[p] == '\'')) ++p;
        if (lower.substr(p).starts_with("stylesheet")) return true;
    }
    return false;
}

bool contains(std::string_view s, std::string_view needle) { return s.find(needle) != std::string_view::npos; }

double flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

std::string_view to_string(Label label) { return label == Label::spam ? "spam" : "ham"; }

std::optional<Label> parse_label(std::string_view text) {
    if (text == "spam") return Label::spam;
    if (text == "ham") return Label::ham;
    return std::nullopt;
}

std::vector<std::size_t> category_indices(FeatureCategory category) {
    std::size_t first = 1;
    std::size_t last = 6;
    switch (category) {
        case FeatureCategory::Subject: break;
        case FeatureCategory::Headers: first = 7; last = 8; break;
        case FeatureCategory::Body: first = 9; last = 21; break;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = first; i <= last; ++i) out.push_back(i);
    return out;
}

FeatureVector extract(const ParsedEmail& email) {
    FeatureVector v;
    v.values.assign(kFeatureCount, 0.0);
    auto f = [&](std::size_t index) -> double& { return v.values[index - 1]; };

    f(1) = repeated_characters(email.subject);
    for (const auto token : tokenize(email.subject)) {
        if (all_letters_uppercase(token)) f(2) += 1;
        if (decode_utf8(token).size() >= 15) f(3) += 1;
        if (rare_letter_count(token) >= 2) f(4) += 1;
        if (has_letter(token) && !has_vowel(token)) f(5) += 1;
        if (has_inner_special(token)) f(6) += 1;
    }

    f(7) = nonstandard_priority(email.priority_raw);
    f(8) = html_or_missing_content_type(email.content_type_raw);

    const std::string_view body = email.body;
    std::size_t words = 0;
    std::size_t no_vowel_long = 0;
    std::size_t rare = 0;
    std::size_t very_long = 0;
    for (const auto token : tokenize(body)) {
        if (!is_alphabetic_word(token)) continue;
        ++words;
        if (!has_vowel(token) && token.size() >= 7) ++no_vowel_long;
        if (rare_letter_count(token) >= 2) ++rare;
        if (token.size() >= 15) ++very_long;
    }
    if (words > 0) {
        const auto n = static_cast<double>(words);
        f(9) = static_cast<double>(no_vowel_long) / n;
        f(10) = static_cast<double>(rare) / n;
        f(11) = static_cast<double>(very_long) / n;
    }
    f(12) = flag(contains(body, "From:") && contains(body, "To:"));

    const std::string lower = detail::to_lower(body);
    f(13) = static_cast<double>(count_occurrences(lower, "<!--"));
    f(14) = static_cast<double>(count_occurrences(lower, "href="));
    f(15) = images_inside_anchors(lower);
    const ColorScan colors = scan_colors(lower);
    f(16) = flag(colors.white_text);
    f(17) = suspicious_urls(lower);
    f(18) = static_cast<double>(colors.color_elements);
    f(19) = flag(contains(lower, "<script") || contains(lower, "javascript:"));
    f(20) = flag(contains(lower, "<style") || contains(lower, "style=") || has_stylesheet_link(lower));
    f(21) = flag(contains(lower, "<table"));
    return v;
}

void validate_subset(std::span<const std::size_t> subset, std::size_t n) {
    if (subset.empty()) throw Error(ErrorCode::InvalidSubset, "feature subset is empty");
    std::vector<bool> seen(n + 1, false);
    for (const auto index : subset) {
        if (index < 1 || index > n) {
            throw Error(ErrorCode::InvalidSubset,
                        "feature index " + std::to_string(index) + " outside 1.." + std::to_string(n));
        }
        if (seen[index]) throw Error(ErrorCode::InvalidSubset, "duplicate feature index " + std::to_string(index));
        seen[index] = true;
    }
}

FeatureVector project(const FeatureVector& v, std::span<const std::size_t> subset) {
    validate_subset(subset, v.values.size());
    FeatureVector out;
    out.label = v.label;
    out.source_id = v.source_id;
    out.values.reserve(subset.size());
    for (const auto index : subset) out.values.push_back(v.values[index - 1]);
    return out;
}

std::string feature_name(std::size_t index) { return "f" + std::to_string(index); }

std::optional<std::size_t> parse_feature_name(std::string_view name) {
    if (name.size() < 2 || name.front() != 'f') return std::nullopt;
    std::size_t index = 0;
    const auto* first = name.data() + 1;
    const auto* last = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(first, last, index);
    if (ec != std::errc{} || ptr != last || index == 0) return std::nullopt;
    return index;
}

std::vector<std::size_t> parse_feature_spec(std::string_view spec) {
    std::vector<std::size_t> out;
    const auto parse_index = [&](std::string_view s) {
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw Error(ErrorCode::InvalidSubset, "bad feature index '" + std::string(s) + "'");
        }
        return value;
    };
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string_view::npos) comma = spec.size();
        std::string_view item = spec.substr(pos, comma - pos);
        while (!item.empty() && is_space(item.front())) item.remove_prefix(1);
        while (!item.empty() && is_space(item.back())) item.remove_suffix(1);
        pos = comma + 1;
        if (item.empty()) continue;

        const std::string lowered = detail::to_lower(item);
        if (lowered == "all") {
            for (std::size_t i = 1; i <= kFeatureCount; ++i) out.push_back(i);
        } else if (lowered == "cat1" || lowered == "cat2" || lowered == "cat3") {
            const auto cat = lowered == "cat1"   ? FeatureCategory::Subject
                             : lowered == "cat2" ? FeatureCategory::Headers
                                                 : FeatureCategory::Body;
            for (const auto i : category_indices(cat)) out.push_back(i);
        } else if (const auto dash = item.find('-'); dash != std::string_view::npos) {
            const auto lo = parse_index(item.substr(0, dash));
            const auto hi = parse_index(item.substr(dash + 1));
            if (lo > hi) throw Error(ErrorCode::InvalidSubset, "empty range '" + std::string(item) + "'");
            for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
        } else {
            out.push_back(parse_index(item));
        }
    }
    std::sort(out.begin(), out.end());
    validate_subset(out, kFeatureCount);
    return out;
}

}  // namespace spamlab

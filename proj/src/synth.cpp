#include "spamlab/corpus.hpp"

#include "spamlab/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace spamlab {

namespace {

constexpr std::array kProse = {
    "the", "meeting", "agenda", "for", "next", "week", "please", "review", "attached", "notes",
    "and", "let", "me", "know", "if", "anything", "is", "missing", "we", "should", "discuss",
    "budget", "project", "timeline", "before", "friday", "thanks", "again", "your", "help",
    "report", "draft", "schedule", "lunch", "team", "update", "question", "about", "release",
    "server", "migration", "tomorrow", "morning", "call", "document", "comments", "changes",
    "quiz", "jazz", "kayak", "family", "weekend", "photos", "holiday", "travel", "plans", "it's",
    "don't", "we'll", "afternoon", "library", "seminar", "students", "grades", "homework",
};

constexpr std::array kSpamWords = {
    "free", "offer", "limited", "time", "click", "here", "now", "winner", "cash", "prize",
    "guaranteed", "cheap", "meds", "save", "discount", "exclusive", "deal", "act", "fast",
    "risk", "bonus", "credit", "loan", "approved", "investment", "profit", "you", "have",
    "been", "selected", "claim", "reward", "today", "order", "unsubscribe", "money", "back",
};

constexpr std::array kHamSubjects = {
    "Meeting notes", "Re: project timeline", "Lunch tomorrow?", "Weekly update", "Draft report attached",
    "Question about the release", "Fwd: seminar schedule", "Holiday plans", "Re: budget review",
    "Photos from the weekend", "Server migration FYI", "Homework grades", "Call at 3pm",
};

constexpr std::array kSpamSubjects = {
    "Limited time offer", "You have been selected", "Claim your reward", "Cheap meds online",
    "Exclusive deal inside", "Your loan is approved", "Act fast", "Winner notification",
    "Guaranteed profit", "Save big today", "Free bonus credit", "Re: your order",
};

constexpr std::array kHamColors = {"#333333", "navy", "black", "#003366", "gray"};
constexpr std::array kSpamColors = {"red", "#ff0000", "blue", "green", "#00ff00", "yellow"};

class Generator {
public:
    Generator(std::uint64_t seed, const SynthConfig& config) : rng_(seed), config_(config) {}

    std::string spam(std::size_t id);
    std::string ham(std::size_t id);

private:
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    template <typename Array>
    std::string pick(const Array& items) {
        return items[uniform(0, items.size() - 1)];
    }

    std::string consonant_word(std::size_t length);
    std::string rare_letter_word();
    std::string prose(std::size_t words);
    std::string spam_text(std::size_t words, bool gibberish);
    std::string common_headers(std::size_t id, bool spam);

    std::mt19937_64 rng_;
    SynthConfig config_;
};

std::string Generator::consonant_word(std::size_t length) {
    static constexpr std::string_view kConsonants = "bcdfghlmnprstvwxz";
    std::string w;
    for (std::size_t i = 0; i < length; ++i) w.push_back(kConsonants[uniform(0, kConsonants.size() - 1)]);
    return w;
}

std::string Generator::rare_letter_word() {
    static constexpr std::string_view kRare = "jkqxz";
    static constexpr std::string_view kVowels = "aeiou";
    std::string w;
    const std::size_t length = uniform(4, 8);
    for (std::size_t i = 0; i < length; ++i) {
        w.push_back(i % 2 == 0 ? kRare[uniform(0, 4)] : kVowels[uniform(0, 4)]);
    }
    return w;
}

std::string Generator::prose(std::size_t words) {
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        text += pick(kProse);
        text += (i + 1) % 12 == 0 ? ".\n" : " ";
    }
    return text;
}

std::string Generator::spam_text(std::size_t words, bool gibberish) {
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        if (gibberish && chance(0.15)) {
            text += chance(0.5) ? consonant_word(uniform(7, 11)) : rare_letter_word();
        } else if (chance(0.05)) {
            text += "unbelievablysavings";
        } else {
            text += pick(kSpamWords);
        }
        text += (i + 1) % 10 == 0 ? "\n" : " ";
    }
    return text;
}

std::string Generator::common_headers(std::size_t id, bool spam) {
    std::ostringstream h;
    h << "From: " << (spam ? "promo" : "colleague") << id << "@" << (spam ? "deals-mail.biz" : "example.org") << "\n"
      << "To: user@example.org\n"
      << "Date: Mon, " << (1 + id % 28) << " Feb 2009 10:" << std::setw(2) << std::setfill('0') << id % 60
      << ":00 +0000\n"
      << "Message-ID: <" << id << (spam ? ".s" : ".h") << "@synth>\n";
    return h.str();
}

std::string Generator::spam(std::size_t id) {
    std::string subject = pick(kSpamSubjects);
    if (chance(config_.shouting_subject_rate)) {
        for (auto& c : subject) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        subject += chance(0.5) ? "!!!" : " $$$";
    }
    if (chance(0.2)) subject += " " + consonant_word(uniform(3, 6));
    if (chance(0.15)) subject = "V1AGRA " + subject;

    std::ostringstream m;
    m << common_headers(id, true) << "Subject: " << subject << "\n";
    if (chance(config_.high_priority_rate)) m << "X-Priority: 1 (Highest)\n";

    const bool html = chance(config_.html_rate);
    if (html) {
        m << "MIME-Version: 1.0\n";
        if (chance(0.85)) m << "Content-Type: text/html; charset=\"iso-8859-1\"\n";
    } else if (chance(0.5)) {
        m << "Content-Type: text/plain; charset=us-ascii\n";
    }
    m << "\n";

    const bool gibberish = chance(config_.gibberish_rate);
    if (!html) {
        m << spam_text(uniform(25, 60), gibberish);
        if (chance(config_.hyperlink_rate)) m << "\nhttp://deals" << uniform(10, 99) << ".biz/?id=" << id << "\n";
        return m.str();
    }

    m << "<html><head>";
    if (chance(0.4)) m << "<style>body { background-color: #ffffcc; }</style>";
    if (chance(0.15)) m << "<script type=\"text/javascript\">window.status='';</script>";
    m << "</head><body>\n";
    if (chance(0.4)) m << "<!-- " << consonant_word(uniform(8, 16)) << " -->\n";
    const bool table = chance(0.5);
    if (table) m << "<table width=\"600\" bgcolor=\"" << pick(kSpamColors) << "\"><tr><td>\n";
    m << "<font color=\"" << pick(kSpamColors) << "\" size=\"4\">" << spam_text(uniform(20, 45), gibberish)
      << "</font>\n";
    if (chance(config_.hyperlink_rate)) {
        const std::size_t links = uniform(1, 4);
        for (std::size_t i = 0; i < links; ++i) {
            m << "<a href=\"http://" << consonant_word(5) << uniform(1, 999) << ".biz/r?u=" << id << "&c=" << i
              << "\">";
            if (chance(0.5)) {
                m << "<img src=\"http://img.biz/b" << i << ".gif\">";
            } else {
                m << pick(kSpamWords);
            }
            m << "</a>\n";
        }
    }
    if (chance(0.3)) m << "<!-- " << spam_text(5, true) << " -->\n";
    if (chance(config_.white_text_rate)) {
        m << "<p style=\"color: #ffffff\">" << prose(uniform(10, 30)) << "</p>\n";
    }
    if (table) m << "</td></tr></table>\n";
    m << "</body></html>\n";
    return m.str();
}

std::string Generator::ham(std::size_t id) {
    std::string subject = pick(kHamSubjects);
    if (chance(0.1)) subject += "...";

    std::ostringstream m;
    m << common_headers(id, false) << "Subject: " << subject << "\n";
    if (chance(0.15)) m << "X-Priority: 3 (Normal)\n";
    if (chance(0.03)) m << "Importance: high\n";

    const bool html = chance(0.12);
    if (html) {
        m << "Content-Type: text/html; charset=utf-8\n\n";
        m << "<html><head><style>p { color: " << pick(kHamColors) << "; }</style></head><body>\n";
        if (chance(0.3)) m << "<table><tr><td>\n";
        m << "<p>" << prose(uniform(30, 80)) << "</p>\n";
        m << "<p><a href=\"https://example.org/newsletter\">Read online</a></p>\n";
        if (config_.white_text_in_ham && chance(config_.white_text_rate)) {
            m << "<span style=\"color:white\">" << prose(5) << "</span>\n";
        }
        m << "</body></html>\n";
        return m.str();
    }
    if (chance(0.85)) m << "Content-Type: text/plain; charset=us-ascii\n";
    m << "\n" << prose(uniform(30, 120)) << "\n";
    if (chance(0.15)) {
        m << "\n-----Original Message-----\nFrom: someone@example.org\nTo: user@example.org\n"
          << prose(uniform(10, 30)) << "\n";
    }
    if (chance(0.1)) m << "\nSee https://intranet.example.org/wiki\n";
    return m.str();
}

}  // namespace

Corpus synth_corpus(std::size_t n, double spam_rate, std::uint64_t seed, const SynthConfig& config) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "synthetic corpus needs n >= 2");
    if (!(spam_rate > 0.0 && spam_rate < 1.0)) throw Error(ErrorCode::InvalidArgument, "spam_rate must lie in (0, 1)");

    const auto n_spam = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spam_rate));
    std::vector<Label> labels(n, Label::ham);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_spam), Label::spam);
    std::mt19937_64 order_rng(seed);
    std::shuffle(labels.begin(), labels.end(), order_rng);

    Generator gen(seed + 1, config);
    std::vector<std::pair<RawEmail, std::optional<Label>>> messages;
    messages.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::ostringstream id;
        id << "synth-" << std::setw(5) << std::setfill('0') << i + 1;
        std::string bytes = labels[i] == Label::spam ? gen.spam(i + 1) : gen.ham(i + 1);
        messages.push_back({RawEmail{std::move(bytes), id.str()}, labels[i]});
    }
    std::ostringstream manifest;
    manifest << "synthetic:n=" << n << ",spam_rate=" << spam_rate << ",seed=" << seed;
    return make_corpus(std::move(messages), manifest.str());
}

}  // namespace spamlab

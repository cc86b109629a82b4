// Porter, "An algorithm for suffix stripping" (1980), rule for rule. Steps
// choose the longest matching suffix and stop there whether or not the
// measure condition holds.

#include <string>
#include <string_view>

#include "wnsearch/text.hpp"

namespace wnsearch {

namespace {

class Stemmer {
public:
    explicit Stemmer(std::string_view word) : b_(word) {}

    std::string run() && {
        if (b_.size() <= 2) return std::move(b_);
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return std::move(b_);
    }

private:
    bool consonant(std::size_t i) const {
        switch (b_[i]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u': return false;
        case 'y': return i == 0 || !consonant(i - 1);
        default: return true;
        }
    }

    // Number of VC sequences in b_[0, len).
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && consonant(i)) ++i;
        while (i < len) {
            while (i < len && !consonant(i)) ++i;
            if (i >= len) break;
            while (i < len && consonant(i)) ++i;
            ++m;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i) {
            if (!consonant(i)) return true;
        }
        return false;
    }

    bool double_consonant(std::size_t len) const {
        return len >= 2 && b_[len - 1] == b_[len - 2] && consonant(len - 1);
    }

    // cvc where the final c is not w, x or y.
    bool cvc(std::size_t len) const {
        if (len < 3 || !consonant(len - 3) || consonant(len - 2) || !consonant(len - 1)) return false;
        char c = b_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view suffix) const { return b_.size() >= suffix.size() && std::string_view(b_).ends_with(suffix); }

    std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

    void replace(std::string_view suffix, std::string_view with) {
        b_.resize(stem_len(suffix));
        b_ += with;
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    // Longest-match rule table gated on measure(stem) > min_measure.
    template <std::size_t N>
    void apply_measure_rules(const Rule (&rules)[N], int min_measure) {
        const Rule* best = nullptr;
        for (const Rule& r : rules) {
            if (ends(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
        }
        if (best && measure(stem_len(best->suffix)) > min_measure) replace(best->suffix, best->replacement);
    }

    void step1a() {
        if (ends("sses")) replace("sses", "ss");
        else if (ends("ies")) replace("ies", "i");
        else if (ends("ss")) return;
        else if (ends("s")) replace("s", "");
    }

    void step1b() {
        if (ends("eed")) {
            if (measure(stem_len("eed")) > 0) replace("eed", "ee");
            return;
        }
        bool stripped = false;
        if (ends("ed") && has_vowel(stem_len("ed"))) {
            replace("ed", "");
            stripped = true;
        } else if (ends("ing") && has_vowel(stem_len("ing"))) {
            replace("ing", "");
            stripped = true;
        }
        if (!stripped) return;
        if (ends("at")) replace("at", "ate");
        else if (ends("bl")) replace("bl", "ble");
        else if (ends("iz")) replace("iz", "ize");
        else if (double_consonant(b_.size())) {
            char c = b_.back();
            if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
        } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
            b_ += 'e';
        }
    }

    void step1c() {
        if (ends("y") && has_vowel(stem_len("y"))) b_.back() = 'i';
    }

    void step2() {
        static constexpr Rule rules[] = {
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},   {"izer", "ize"},
            {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},       {"ousli", "ous"},
            {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
            {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
        };
        apply_measure_rules(rules, 0);
    }

    void step3() {
        static constexpr Rule rules[] = {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        };
        apply_measure_rules(rules, 0);
    }

    void step4() {
        static constexpr std::string_view suffixes[] = {
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
            "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
        };
        std::string_view best;
        for (std::string_view s : suffixes) {
            if (ends(s) && s.size() > best.size()) best = s;
        }
        if (best.empty()) return;
        std::size_t len = stem_len(best);
        if (measure(len) <= 1) return;
        if (best == "ion" && (len == 0 || (b_[len - 1] != 's' && b_[len - 1] != 't'))) return;
        b_.resize(len);
    }

    void step5a() {
        if (!ends("e")) return;
        std::size_t len = stem_len("e");
        int m = measure(len);
        if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
    }

    void step5b() {
        if (measure(b_.size()) > 1 && double_consonant(b_.size()) && b_.back() == 'l') b_.pop_back();
    }

    std::string b_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
    return Stemmer(word).run();
}

}  // namespace wnsearch

#include "wnsearch/text.hpp"

#include <algorithm>

#include "wnsearch/wordnet.hpp"

namespace wnsearch {

namespace {

bool is_word_byte(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

struct WordSpan {
    std::size_t begin;
    std::size_t end;
    std::string lower;
};

std::vector<WordSpan> split_words(std::string_view text) {
    std::vector<WordSpan> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_word_byte(text[i])) ++i;
        if (i >= text.size()) break;
        std::size_t start = i;
        std::string lower;
        while (i < text.size() && is_word_byte(text[i])) lower.push_back(to_lower(text[i++]));
        words.push_back(WordSpan{start, i, std::move(lower)});
    }
    return words;
}

}  // namespace

// ---------------------------------------------------------------------------
// TermMultiset

TermMultiset::TermMultiset(std::initializer_list<std::pair<const std::string, std::uint32_t>> init) {
    for (const auto& [term, n] : init) add(term, n);
}

void TermMultiset::add(std::string_view term, std::uint32_t n) {
    if (n == 0) return;
    counts_[std::string(term)] += n;
    total_ += n;
}

void TermMultiset::merge(const TermMultiset& other) {
    for (const auto& [term, n] : other) add(term, n);
}

std::uint32_t TermMultiset::count(std::string_view term) const {
    auto it = counts_.find(std::string(term));
    return it == counts_.end() ? 0 : it->second;
}

std::uint64_t overlap(const TermMultiset& a, const TermMultiset& b) {
    const TermMultiset& small = a.distinct() <= b.distinct() ? a : b;
    const TermMultiset& large = &small == &a ? b : a;
    std::uint64_t total = 0;
    for (const auto& [term, n] : small) total += std::min(n, large.count(term));
    return total;
}

std::vector<std::string_view> split_underscore(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('_', start);
        if (end == std::string_view::npos) end = text.size();
        if (end > start) parts.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

// ---------------------------------------------------------------------------
// Tokenizer

Tokenizer::Tokenizer(const StopWords& stopwords, const Lexicon* lexicon, std::size_t max_compound_words)
    : stopwords_(&stopwords), lexicon_(lexicon), max_compound_words_(std::max<std::size_t>(1, max_compound_words)) {}

bool Tokenizer::is_compound(std::string_view joined) const {
    for (Pos pos : kAllPos) {
        if (normalize_form(joined, pos, *lexicon_)) return true;
    }
    return false;
}

std::vector<Token> Tokenizer::tokenize(std::string_view text) const {
    const std::vector<WordSpan> words = split_words(text);
    std::vector<Token> tokens;
    tokens.reserve(words.size());
    std::size_t i = 0;
    while (i < words.size()) {
        std::size_t span = 1;
        if (lexicon_ && max_compound_words_ > 1 && lexicon_->starts_compound(words[i].lower)) {
            const std::size_t longest = std::min(max_compound_words_, words.size() - i);
            for (std::size_t n = longest; n >= 2; --n) {
                bool any_content = false;
                std::string joined = words[i].lower;
                for (std::size_t j = 1; j < n; ++j) joined += "_" + words[i + j].lower;
                for (std::size_t j = 0; j < n; ++j) any_content |= !stopwords_->contains(words[i + j].lower);
                if (any_content && is_compound(joined)) {
                    span = n;
                    break;
                }
            }
        }

        Token token;
        token.position = tokens.size();
        token.word_count = span;
        token.surface = std::string(text.substr(words[i].begin, words[i + span - 1].end - words[i].begin));
        if (span == 1) {
            token.form = words[i].lower;
            token.is_stopword = stopwords_->contains(token.form);
            token.stem = token.is_stopword ? token.form : porter_stem(token.form);
        } else {
            for (std::size_t j = 0; j < span; ++j) {
                const std::string& w = words[i + j].lower;
                token.form += (j ? "_" : "") + w;
                if (stopwords_->contains(w)) continue;
                token.stem += (token.stem.empty() ? "" : "_") + porter_stem(w);
            }
        }
        tokens.push_back(std::move(token));
        i += span;
    }
    return tokens;
}

std::vector<std::string> Tokenizer::form_stems(std::string_view form) const {
    std::string spaced(form);
    std::replace(spaced.begin(), spaced.end(), '_', ' ');
    std::vector<std::string> stems;
    for (const WordSpan& w : split_words(spaced)) {
        if (!stopwords_->contains(w.lower)) stems.push_back(porter_stem(w.lower));
    }
    return stems;
}

void Tokenizer::add_stems(std::string_view text, TermMultiset& bag) const {
    for (const WordSpan& w : split_words(text)) {
        if (!stopwords_->contains(w.lower)) bag.add(porter_stem(w.lower));
    }
}

std::vector<Token> tokenize(std::string_view text) {
    static const Tokenizer plain;
    return plain.tokenize(text);
}

}  // namespace wnsearch

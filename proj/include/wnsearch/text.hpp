#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace wnsearch {

class Lexicon;

/// Porter's suffix-stripping stemmer, original 1980 rule set.
/// Input must already be lowercase ASCII; other bytes pass through untouched.
std::string porter_stem(std::string_view word);

class StopWords {
public:
    StopWords() = default;
    explicit StopWords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// The bundled English list (see src/stopwords.cpp).
    static const StopWords& english();
    /// One word per line; blank lines and lines starting with '#' are ignored.
    static StopWords from_file(const std::filesystem::path& path);

    bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Bag of stems with multiplicities.
class TermMultiset {
public:
    using Map = std::unordered_map<std::string, std::uint32_t>;

    TermMultiset() = default;
    TermMultiset(std::initializer_list<std::pair<const std::string, std::uint32_t>> init);

    void add(std::string_view term, std::uint32_t n = 1);
    void merge(const TermMultiset& other);
    std::uint32_t count(std::string_view term) const;
    std::uint64_t total() const noexcept { return total_; }
    std::size_t distinct() const noexcept { return counts_.size(); }
    bool empty() const noexcept { return counts_.empty(); }

    Map::const_iterator begin() const { return counts_.begin(); }
    Map::const_iterator end() const { return counts_.end(); }

    friend bool operator==(const TermMultiset& a, const TermMultiset& b) {
        return a.counts_ == b.counts_;
    }

private:
    Map counts_;
    std::uint64_t total_ = 0;
};

/// Multiset intersection size: sum over shared terms of the smaller count.
std::uint64_t overlap(const TermMultiset& a, const TermMultiset& b);

struct Token {
    std::string surface;        // original text span
    std::string form;           // lowercase, words joined by '_'
    std::string stem;           // Porter stem; compounds join the stems of their content words with '_'
    std::size_t position = 0;   // index in the token stream
    bool is_stopword = false;
    std::size_t word_count = 1;
};

/// Splits a token stem (or WordNet form) on '_' into its parts.
std::vector<std::string_view> split_underscore(std::string_view text);

/// Splits text on non-alphanumeric bytes, lowercases, marks stop-words and
/// stems content words. When a lexicon is attached, runs of up to
/// `max_compound_words` words that form a WordNet lemma are merged into one
/// token, longest match first.
class Tokenizer {
public:
    explicit Tokenizer(const StopWords& stopwords = StopWords::english(),
                       const Lexicon* lexicon = nullptr,
                       std::size_t max_compound_words = 4);

    std::vector<Token> tokenize(std::string_view text) const;

    /// Keyword stems for a WordNet form: one stem per non-stop word, so
    /// "malus_pumila" yields {"malu", "pumila"}.
    std::vector<std::string> form_stems(std::string_view form) const;

    /// Adds the single-word stems of every content token in `text`.
    void add_stems(std::string_view text, TermMultiset& bag) const;

    const StopWords& stopwords() const noexcept { return *stopwords_; }
    const Lexicon* lexicon() const noexcept { return lexicon_; }

private:
    bool is_compound(std::string_view joined) const;

    const StopWords* stopwords_;
    const Lexicon* lexicon_;
    std::size_t max_compound_words_;
};

/// Tokenizes with the bundled stop-word list and no compound detection.
std::vector<Token> tokenize(std::string_view text);

}  // namespace wnsearch

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wnsearch/text.hpp"
#include "wnsearch/wordnet.hpp"

namespace wnsearch {

inline constexpr unsigned kDefaultWindow = 10;

/// Stems of the content tokens around `target_position`: up to `window`
/// non-stop-word tokens on each side, the target itself excluded. Compound
/// tokens contribute each of their content-word stems.
/// Throws ArgumentError if target_position is out of range.
TermMultiset context_bag(std::span<const Token> tokens, std::size_t target_position, unsigned window);

/// Lesk overlap: multiset intersection size of sense_bag(id) and `context`.
std::uint64_t lesk_score(const Lexicon& lexicon, SynsetId id, const TermMultiset& context);

struct UniqueSense {
    SenseRef sense;
};

struct TiedSenses {
    std::vector<SenseRef> senses;  // sense-number order, at least two
    SynsetSet msc;                 // msc_hypernyms of the tied synsets
};

struct NotInWordNet {
    std::string keyword_stem;
};

struct DisambiguationResult {
    std::variant<UniqueSense, TiedSenses, NotInWordNet> value;

    bool is_unique() const { return std::holds_alternative<UniqueSense>(value); }
    bool is_tied() const { return std::holds_alternative<TiedSenses>(value); }
    bool in_wordnet() const { return !std::holds_alternative<NotInWordNet>(value); }
    const UniqueSense& unique() const { return std::get<UniqueSense>(value); }
    const TiedSenses& tied() const { return std::get<TiedSenses>(value); }
};

/// Thread-safe memo of sense bags. The lexicon is never modified; the cache
/// only avoids re-tokenizing glosses for frequent senses.
class SenseBagCache {
public:
    SenseBagCache(const Lexicon& lexicon, const Tokenizer& tokenizer)
        : lexicon_(&lexicon), tokenizer_(&tokenizer) {}

    const TermMultiset& get(SynsetId id) const;

private:
    const Lexicon* lexicon_;
    const Tokenizer* tokenizer_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<SynsetId, std::unique_ptr<TermMultiset>, SynsetIdHash> bags_;
};

class Disambiguator {
public:
    Disambiguator(const Lexicon& lexicon, const Tokenizer& tokenizer)
        : lexicon_(&lexicon), tokenizer_(&tokenizer), cache_(lexicon, tokenizer) {}

    std::uint64_t score(SynsetId id, const TermMultiset& context) const {
        return overlap(cache_.get(id), context);
    }

    /// Scores every sense of `form`; a strict maximum gives UniqueSense, a
    /// shared maximum (including all zeros) gives TiedSenses.
    DisambiguationResult disambiguate(std::string_view form, Pos pos, const TermMultiset& context) const;

    /// Disambiguation over an explicit candidate list (used for manual
    /// query annotations). One candidate is Unique; several are Tied.
    DisambiguationResult from_candidates(std::string_view form, std::span<const SynsetId> candidates) const;

    const Lexicon& lexicon() const noexcept { return *lexicon_; }

private:
    const Lexicon* lexicon_;
    const Tokenizer* tokenizer_;
    SenseBagCache cache_;
};

DisambiguationResult disambiguate(const Lexicon& lexicon, std::string_view form, Pos pos,
                                  const TermMultiset& context);

/// First part of speech in `order` under which `form` normalizes to a
/// WordNet entry, with the normalized form.
struct ResolvedForm {
    Pos pos;
    std::string form;
};
std::optional<ResolvedForm> resolve_form(const Lexicon& lexicon, std::string_view form, std::span<const Pos> order);

}  // namespace wnsearch

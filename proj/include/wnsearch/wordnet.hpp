#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wnsearch/text.hpp"

namespace wnsearch {

enum class Pos : std::uint8_t { noun = 0, verb = 1, adjective = 2, adverb = 3 };

inline constexpr std::array<Pos, 4> kAllPos{Pos::noun, Pos::verb, Pos::adjective, Pos::adverb};

/// 'n', 'v', 'a', 'r'.
char pos_letter(Pos pos) noexcept;
/// Accepts n, v, a, s (adjective satellite) and r.
std::optional<Pos> pos_from_letter(char c) noexcept;
/// "noun", "verb", "adj", "adv" -- the suffix of the WordNet file names.
std::string_view pos_file_suffix(Pos pos) noexcept;
std::string_view pos_name(Pos pos) noexcept;

/// A synset is addressed by its byte offset in data.<pos> plus its part of speech.
struct SynsetId {
    std::uint32_t offset = 0;
    Pos pos = Pos::noun;

    friend auto operator<=>(const SynsetId&, const SynsetId&) = default;
};

/// "#07739125-noun"
std::string to_string(SynsetId id);

struct SynsetIdHash {
    std::size_t operator()(SynsetId id) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{id.offset} << 2) |
                                          static_cast<std::uint64_t>(id.pos));
    }
};

/// Sorted, duplicate-free set of synset ids.
using SynsetSet = std::vector<SynsetId>;

struct Synset {
    SynsetId id;
    std::vector<std::string> lemmas;  // lowercase, '_' for spaces, file order
    std::string gloss;
    SynsetSet hypernyms;  // '@' and '@i'
    SynsetSet hyponyms;   // '~' and '~i'
};

struct SenseRef {
    std::string form;
    SynsetId id;
    int sense_number = 0;  // 1-based rank in the index file

    friend bool operator==(const SenseRef&, const SenseRef&) = default;
};

/// Parsed WordNet database. Immutable once loaded; all accessors are safe for
/// concurrent use.
class Lexicon {
public:
    const Synset& synset(SynsetId id) const;  // throws NotFoundError
    const Synset* find(SynsetId id) const noexcept;
    bool contains(SynsetId id) const noexcept { return find(id) != nullptr; }

    /// Synset ids for an exact (already normalized) form, in sense-number order.
    std::span<const SynsetId> sense_ids(std::string_view form, Pos pos) const noexcept;
    bool has_form(std::string_view form, Pos pos) const noexcept;
    /// Base forms listed for an irregular inflection in <pos>.exc.
    std::span<const std::string> exception_bases(std::string_view inflected, Pos pos) const noexcept;
    /// True if some multi-word lemma (or exception entry) starts with `word`.
    bool starts_compound(std::string_view word) const noexcept;

    std::size_t synset_count() const noexcept { return synsets_.size(); }
    std::size_t synset_count(Pos pos) const noexcept;
    std::size_t form_count(Pos pos) const noexcept;

    void for_each_synset(const std::function<void(const Synset&)>& fn) const;

    /// (child, parent) hypernym edges dropped at load time to break cycles
    /// outside the noun graph.
    const std::vector<std::pair<SynsetId, SynsetId>>& removed_hypernym_edges() const noexcept {
        return removed_hypernym_edges_;
    }

private:
    friend class LexiconLoader;

    std::unordered_map<SynsetId, Synset, SynsetIdHash> synsets_;
    std::array<std::unordered_map<std::string, std::vector<SynsetId>>, 4> sense_index_;
    std::array<std::unordered_map<std::string, std::vector<std::string>>, 4> exceptions_;
    std::unordered_set<std::string> compound_heads_;
    std::vector<std::pair<SynsetId, SynsetId>> removed_hypernym_edges_;
};

/// Reads data.*, index.* and *.exc from a WordNet dict directory.
/// Throws LoadError (missing file), ParseError (bad record, with byte offset)
/// or IntegrityError (dangling pointer, noun hypernym cycle). Cycles in the
/// other parts of speech are broken and listed in removed_hypernym_edges().
Lexicon load_lexicon(const std::filesystem::path& dict_dir);

/// One hypernym cycle in child -> hypernym order, or empty for a DAG.
std::vector<SynsetId> find_hypernym_cycle(const Lexicon& lexicon);

/// Verifies that the hypernym relation of every part of speech is acyclic.
/// Throws IntegrityError naming one cycle.
void check_hypernym_dag(const Lexicon& lexicon);

/// Base form of `surface` for `pos`: exact match, then the exception list,
/// then the WordNet detachment rules. Absent if nothing is in the index.
std::optional<std::string> normalize_form(std::string_view surface, Pos pos, const Lexicon& lexicon);

std::vector<SenseRef> senses_of(const Lexicon& lexicon, std::string_view form, Pos pos);

/// Strict transitive hypernyms of `id` (excludes `id`). `max_depth` limits the
/// number of hypernym edges followed; absent means unlimited.
SynsetSet hypernym_closure(const Lexicon& lexicon, SynsetId id,
                           std::optional<unsigned> max_depth = std::nullopt);

/// Strict transitive hyponyms up to `max_depth` edges.
SynsetSet hyponym_closure(const Lexicon& lexicon, SynsetId id, unsigned max_depth);

/// Most specific common hypernyms: the minimal elements of the intersection
/// of the strict hypernym closures of `senses`. May be empty or contain
/// several incomparable synsets.
SynsetSet msc_hypernyms(const Lexicon& lexicon, std::span<const SynsetId> senses);

/// Gloss and lemmas of the synset and of its direct hypernyms and hyponyms,
/// tokenized, stop-word filtered and stemmed.
TermMultiset sense_bag(const Lexicon& lexicon, SynsetId id, const Tokenizer& tokenizer);
TermMultiset sense_bag(const Lexicon& lexicon, SynsetId id);

}  // namespace wnsearch

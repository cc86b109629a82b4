#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wnsearch/terms.hpp"
#include "wnsearch/text.hpp"
#include "wnsearch/wordnet.hpp"
#include "wnsearch/wsd.hpp"

namespace wnsearch {

/// The seven retrieval models. Which side (query or document) each one
/// enriches, and with which WordNet features:
///
///   Lexical       keywords only
///   QE_Syn        query += forms of the query word's sense
///   QE_Syn_Hypo   QE_Syn + forms of hyponyms (hyponym_depth levels)
///   DE_Syn        document += forms of the word's sense
///   DE_Syn_Hyper  DE_Syn + forms of every hypernym
///   DE_Id_Hyper   document word replaced by its sense id, += hypernym forms;
///                 query carries sense ids
///   DE_MscHyper   senses, forms, hypernyms and form/hypernym pairs; a word
///                 whose senses tie is represented by form/msc_hypernym pairs
enum class StrategyName : std::uint8_t {
    lexical,
    qe_syn,
    qe_syn_hypo,
    de_syn,
    de_syn_hyper,
    de_id_hyper,
    de_msc_hyper,
};

inline constexpr std::array<StrategyName, 7> kAllStrategies{
    StrategyName::lexical,      StrategyName::qe_syn,      StrategyName::qe_syn_hypo,  StrategyName::de_syn,
    StrategyName::de_syn_hyper, StrategyName::de_id_hyper, StrategyName::de_msc_hyper,
};

/// "Lexical", "QE_Syn", ..., "DE_MscHyper".
std::string_view strategy_label(StrategyName name) noexcept;
/// Accepts the labels verbatim. Throws ConfigError otherwise.
StrategyName parse_strategy(std::string_view label);

struct Strategy {
    StrategyName name = StrategyName::lexical;
    std::optional<unsigned> hypernym_depth;  // absent: full closure
    unsigned hyponym_depth = 1;
};

/// Generalized-term counts for one document or query, keyed by canonical_key.
struct TermBag {
    std::map<std::string, std::uint32_t> counts;
    std::size_t source_length = 0;  // content words in the source text (a compound counts each word)

    void add(const GeneralizedTerm& term, std::uint32_t n = 1) { add_key(canonical_key(term), n); }
    void add_key(const std::string& key, std::uint32_t n = 1) {
        if (n) counts[key] += n;
    }
    std::uint32_t count(const std::string& key) const {
        auto it = counts.find(key);
        return it == counts.end() ? 0 : it->second;
    }
    std::uint32_t count(const GeneralizedTerm& term) const { return count(canonical_key(term)); }
    bool contains(const GeneralizedTerm& term) const { return count(term) > 0; }

    friend bool operator==(const TermBag&, const TermBag&) = default;
};

/// Manual sense choices for one query, by token position. One synset makes
/// the word unambiguous; several are treated as its tied sense set.
struct QueryOverrides {
    std::map<std::size_t, std::vector<SynsetId>> senses_at;
};

/// Keyed by query (topic) id.
using OverrideTable = std::map<int, QueryOverrides>;

/// Lines "query_id<TAB>token_index<TAB>offset<TAB>pos_letter". Blank lines
/// and '#' comments are skipped. Throws ParseError with the line number.
OverrideTable parse_overrides(std::string_view content, const std::string& source = "<overrides>");
OverrideTable load_overrides(const std::filesystem::path& path);

/// "n,v,a,r" -> {noun, verb, adjective, adverb}. Throws ConfigError.
std::vector<Pos> parse_pos_order(std::string_view order_text);

struct PipelineOptions {
    Strategy strategy;
    unsigned window = kDefaultWindow;
    std::vector<Pos> pos_order{Pos::noun, Pos::verb, Pos::adjective, Pos::adverb};
    std::size_t max_compound_words = 4;
};

/// Turns raw query and document text into TermBags under one strategy.
/// Thread-safe: concurrent calls share only the immutable lexicon and an
/// internally synchronized sense-bag cache.
class Annotator {
public:
    /// `lexicon` may be null only for the Lexical strategy.
    Annotator(const Lexicon* lexicon, PipelineOptions options, const StopWords& stopwords = StopWords::english());

    TermBag annotate_query(std::string_view text, const QueryOverrides& overrides = {}) const;
    TermBag expand_document(std::string_view text) const;

    const PipelineOptions& options() const noexcept { return options_; }
    const Tokenizer& tokenizer() const noexcept { return *tokenizer_; }

private:
    using KeySet = std::vector<std::string>;

    void expand_word(const std::vector<Token>& tokens, const Token& token, KeySet& keys) const;
    void annotate_word(const std::vector<Token>& tokens, const Token& token, const QueryOverrides& overrides,
                       KeySet& keys) const;
    void add_keywords(const Token& token, KeySet& keys) const;
    void add_form_keywords(SynsetId id, KeySet& keys) const;
    SynsetSet hypernyms_of(SynsetId id) const;

    const Lexicon* lexicon_;
    PipelineOptions options_;
    std::unique_ptr<StopWords> stopwords_;
    std::unique_ptr<Tokenizer> tokenizer_;
    std::unique_ptr<Disambiguator> disambiguator_;
};

TermBag annotate_query(const Lexicon& lexicon, const Strategy& strategy, std::string_view text,
                       const QueryOverrides& overrides = {});
TermBag expand_document(const Lexicon& lexicon, const Strategy& strategy, std::string_view text);

/// Expands a batch of documents across the OpenMP team. Output order
/// matches input order.
std::vector<TermBag> expand_documents(const Annotator& annotator, std::span<const std::string> texts);
/// Single-threaded reference for expand_documents.
std::vector<TermBag> expand_documents_serial(const Annotator& annotator, std::span<const std::string> texts);

}  // namespace wnsearch

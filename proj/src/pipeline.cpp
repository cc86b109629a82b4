#include "wnsearch/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wnsearch/error.hpp"
#include "wnsearch/parallel.hpp"

namespace wnsearch {

namespace {

constexpr std::array<std::string_view, 7> kLabels{
    "Lexical", "QE_Syn", "QE_Syn_Hypo", "DE_Syn", "DE_Syn_Hyper", "DE_Id_Hyper", "DE_MscHyper",
};

bool expands_documents(StrategyName name) {
    return name == StrategyName::de_syn || name == StrategyName::de_syn_hyper || name == StrategyName::de_id_hyper ||
           name == StrategyName::de_msc_hyper;
}

bool annotates_queries(StrategyName name) {
    return name == StrategyName::qe_syn || name == StrategyName::qe_syn_hypo || name == StrategyName::de_id_hyper ||
           name == StrategyName::de_msc_hyper;
}

// First-ranked sense; tied words fall back to the lowest sense number.
const SenseRef& first_sense(const DisambiguationResult& r) {
    return r.is_unique() ? r.unique().sense : r.tied().senses.front();
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto end = line.find(sep, start);
        out.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && !text.empty();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view strategy_label(StrategyName name) noexcept {
    return kLabels[static_cast<std::size_t>(name)];
}

StrategyName parse_strategy(std::string_view label) {
    for (std::size_t i = 0; i < kLabels.size(); ++i) {
        if (kLabels[i] == label) return static_cast<StrategyName>(i);
    }
    std::string known;
    for (auto l : kLabels) known += (known.empty() ? "" : ", ") + std::string(l);
    throw ConfigError("unknown strategy '" + std::string(label) + "' (expected one of " + known + ")");
}

OverrideTable parse_overrides(std::string_view content, const std::string& source) {
    OverrideTable table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = trim(content.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        auto fields = split_fields(line, '\t');
        auto fail = [&](const std::string& what) {
            throw ParseError(source, line_no, what);
        };
        if (fields.size() != 4) fail("expected 4 tab-separated fields, found " + std::to_string(fields.size()));
        int qid = 0;
        std::size_t token = 0;
        std::uint32_t offset = 0;
        if (!parse_number(trim(fields[0]), qid)) fail("bad query id '" + std::string(fields[0]) + "'");
        if (!parse_number(trim(fields[1]), token)) fail("bad token index '" + std::string(fields[1]) + "'");
        if (!parse_number(trim(fields[2]), offset)) fail("bad synset offset '" + std::string(fields[2]) + "'");
        auto pos_field = trim(fields[3]);
        auto pos = pos_field.size() == 1 ? pos_from_letter(pos_field.front()) : std::nullopt;
        if (!pos) fail("bad part of speech '" + std::string(pos_field) + "'");

        auto& ids = table[qid].senses_at[token];
        SynsetId id{offset, *pos};
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    return table;
}

OverrideTable load_overrides(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open overrides file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_overrides(buffer.str(), path.string());
}

std::vector<Pos> parse_pos_order(std::string_view order_text) {
    std::vector<Pos> order;
    for (std::string_view field : split_fields(order_text, ',')) {
        field = trim(field);
        auto pos = field.size() == 1 && field.front() != 's' ? pos_from_letter(field.front()) : std::nullopt;
        if (!pos) throw ConfigError("bad part of speech '" + std::string(field) + "' in pos order '" + std::string(order_text) + "'");
        if (std::find(order.begin(), order.end(), *pos) != order.end()) {
            throw ConfigError("part of speech '" + std::string(field) + "' repeated in pos order");
        }
        order.push_back(*pos);
    }
    return order;
}

Annotator::Annotator(const Lexicon* lexicon, PipelineOptions options, const StopWords& stopwords)
    : lexicon_(lexicon),
      options_(std::move(options)),
      stopwords_(std::make_unique<StopWords>(stopwords)) {
    if (!lexicon_ && options_.strategy.name != StrategyName::lexical) {
        throw ArgumentError(std::string(strategy_label(options_.strategy.name)) + " requires a WordNet lexicon");
    }
    if (options_.strategy.hypernym_depth && *options_.strategy.hypernym_depth == 0) {
        throw ConfigError("hypernym depth must be positive");
    }
    if (options_.pos_order.empty()) throw ConfigError("pos order is empty");
    tokenizer_ = std::make_unique<Tokenizer>(*stopwords_, lexicon_, options_.max_compound_words);
    if (lexicon_) disambiguator_ = std::make_unique<Disambiguator>(*lexicon_, *tokenizer_);
}

void Annotator::add_keywords(const Token& token, KeySet& keys) const {
    for (std::string_view part : split_underscore(token.stem)) keys.push_back(canonical_key(Keyword{std::string(part)}));
}

void Annotator::add_form_keywords(SynsetId id, KeySet& keys) const {
    for (const std::string& lemma : lexicon_->synset(id).lemmas) {
        for (std::string& stem : tokenizer_->form_stems(lemma)) keys.push_back(canonical_key(Keyword{std::move(stem)}));
    }
}

SynsetSet Annotator::hypernyms_of(SynsetId id) const {
    return hypernym_closure(*lexicon_, id, options_.strategy.hypernym_depth);
}

void Annotator::expand_word(const std::vector<Token>& tokens, const Token& token, KeySet& keys) const {
    const StrategyName name = options_.strategy.name;
    auto resolved = expands_documents(name) ? resolve_form(*lexicon_, token.form, options_.pos_order) : std::nullopt;
    if (!resolved) {
        add_keywords(token, keys);
        return;
    }
    TermMultiset context = context_bag(tokens, token.position, options_.window);
    DisambiguationResult result = disambiguator_->disambiguate(resolved->form, resolved->pos, context);
    if (!result.in_wordnet()) {
        add_keywords(token, keys);
        return;
    }

    if (name != StrategyName::de_msc_hyper) {
        const SynsetId s = first_sense(result).id;
        if (name == StrategyName::de_id_hyper) {
            keys.push_back(canonical_key(Sense{s}));
        } else {
            add_keywords(token, keys);
            add_form_keywords(s, keys);
        }
        if (name != StrategyName::de_syn) {
            for (SynsetId h : hypernyms_of(s)) add_form_keywords(h, keys);
        }
        return;
    }

    add_keywords(token, keys);
    if (result.is_unique()) {
        const SynsetId s = result.unique().sense.id;
        const Synset& synset = lexicon_->synset(s);
        keys.push_back(canonical_key(Sense{s}));
        add_form_keywords(s, keys);
        for (SynsetId h : hypernyms_of(s)) {
            keys.push_back(canonical_key(Sense{h}));
            add_form_keywords(h, keys);
            for (const std::string& form : synset.lemmas) keys.push_back(canonical_key(FormSensePair{form, h}));
        }
        return;
    }
    const std::string& f = resolved->form;
    for (SynsetId m : result.tied().msc) {
        keys.push_back(canonical_key(FormSensePair{f, m}));
        keys.push_back(canonical_key(Sense{m}));
        add_form_keywords(m, keys);
        for (SynsetId h : hypernyms_of(m)) {
            keys.push_back(canonical_key(Sense{h}));
            add_form_keywords(h, keys);
            keys.push_back(canonical_key(FormSensePair{f, h}));
        }
    }
}

void Annotator::annotate_word(const std::vector<Token>& tokens, const Token& token, const QueryOverrides& overrides,
                              KeySet& keys) const {
    add_keywords(token, keys);
    const StrategyName name = options_.strategy.name;
    if (!annotates_queries(name)) return;

    auto resolved = resolve_form(*lexicon_, token.form, options_.pos_order);
    std::optional<DisambiguationResult> result;
    if (auto it = overrides.senses_at.find(token.position); it != overrides.senses_at.end()) {
        result = disambiguator_->from_candidates(resolved ? resolved->form : token.form, it->second);
    } else if (resolved) {
        result = disambiguator_->disambiguate(resolved->form, resolved->pos,
                                              context_bag(tokens, token.position, options_.window));
    }
    if (!result || !result->in_wordnet()) return;

    switch (name) {
    case StrategyName::qe_syn:
    case StrategyName::qe_syn_hypo: {
        const SynsetId s = first_sense(*result).id;
        add_form_keywords(s, keys);
        if (name == StrategyName::qe_syn_hypo) {
            for (SynsetId h : hyponym_closure(*lexicon_, s, options_.strategy.hyponym_depth)) add_form_keywords(h, keys);
        }
        break;
    }
    case StrategyName::de_id_hyper:
        keys.push_back(canonical_key(Sense{first_sense(*result).id}));
        break;
    case StrategyName::de_msc_hyper:
        if (result->is_unique()) {
            keys.push_back(canonical_key(Sense{result->unique().sense.id}));
        } else {
            const std::string f = resolved ? resolved->form : token.form;
            for (SynsetId m : result->tied().msc) keys.push_back(canonical_key(FormSensePair{f, m}));
        }
        break;
    default:
        break;
    }
}

TermBag Annotator::annotate_query(std::string_view text, const QueryOverrides& overrides) const {
    std::vector<Token> tokens = tokenizer_->tokenize(text);
    for (const auto& [position, ids] : overrides.senses_at) {
        if (position >= tokens.size()) {
            throw ArgumentError("sense override for token " + std::to_string(position) + " but the query has " +
                                std::to_string(tokens.size()) + " tokens");
        }
        if (ids.empty()) throw ArgumentError("empty sense override for token " + std::to_string(position));
    }
    TermBag bag;
    KeySet keys;
    for (const Token& token : tokens) {
        if (token.is_stopword) continue;
        bag.source_length += split_underscore(token.stem).size();
        keys.clear();
        annotate_word(tokens, token, overrides, keys);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (const std::string& key : keys) bag.add_key(key);
    }
    return bag;
}

TermBag Annotator::expand_document(std::string_view text) const {
    std::vector<Token> tokens = tokenizer_->tokenize(text);
    TermBag bag;
    KeySet keys;
    for (const Token& token : tokens) {
        if (token.is_stopword) continue;
        bag.source_length += split_underscore(token.stem).size();
        keys.clear();
        expand_word(tokens, token, keys);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (const std::string& key : keys) bag.add_key(key);
    }
    return bag;
}

TermBag annotate_query(const Lexicon& lexicon, const Strategy& strategy, std::string_view text,
                       const QueryOverrides& overrides) {
    PipelineOptions options;
    options.strategy = strategy;
    return Annotator(&lexicon, options).annotate_query(text, overrides);
}

TermBag expand_document(const Lexicon& lexicon, const Strategy& strategy, std::string_view text) {
    PipelineOptions options;
    options.strategy = strategy;
    return Annotator(&lexicon, options).expand_document(text);
}

std::vector<TermBag> expand_documents(const Annotator& annotator, std::span<const std::string> texts) {
    std::vector<TermBag> out(texts.size());
    parallel::for_each_index(texts.size(), [&](std::size_t i) { out[i] = annotator.expand_document(texts[i]); }, 8);
    return out;
}

std::vector<TermBag> expand_documents_serial(const Annotator& annotator, std::span<const std::string> texts) {
    std::vector<TermBag> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) out.push_back(annotator.expand_document(text));
    return out;
}

}  // namespace wnsearch

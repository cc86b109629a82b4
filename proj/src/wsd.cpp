#include "wnsearch/wsd.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>

#include "wnsearch/error.hpp"

namespace wnsearch {

TermMultiset context_bag(std::span<const Token> tokens, std::size_t target_position, unsigned window) {
    if (target_position >= tokens.size()) {
        throw ArgumentError("context target " + std::to_string(target_position) + " outside stream of " +
                            std::to_string(tokens.size()) + " tokens");
    }
    TermMultiset bag;
    auto take = [&bag](const Token& t) {
        for (std::string_view part : split_underscore(t.stem)) bag.add(part);
    };
    unsigned taken = 0;
    for (std::size_t i = target_position; i-- > 0 && taken < window;) {
        if (tokens[i].is_stopword || tokens[i].stem.empty()) continue;
        take(tokens[i]);
        ++taken;
    }
    taken = 0;
    for (std::size_t i = target_position + 1; i < tokens.size() && taken < window; ++i) {
        if (tokens[i].is_stopword || tokens[i].stem.empty()) continue;
        take(tokens[i]);
        ++taken;
    }
    return bag;
}

std::uint64_t lesk_score(const Lexicon& lexicon, SynsetId id, const TermMultiset& context) {
    return overlap(sense_bag(lexicon, id), context);
}

const TermMultiset& SenseBagCache::get(SynsetId id) const {
    {
        std::shared_lock lock(mutex_);
        if (auto it = bags_.find(id); it != bags_.end()) return *it->second;
    }
    auto bag = std::make_unique<TermMultiset>(sense_bag(*lexicon_, id, *tokenizer_));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = bags_.try_emplace(id, std::move(bag));
    return *it->second;
}

DisambiguationResult Disambiguator::disambiguate(std::string_view form, Pos pos, const TermMultiset& context) const {
    std::vector<SenseRef> senses = senses_of(*lexicon_, form, pos);
    if (senses.empty()) {
        std::vector<std::string> stems = tokenizer_->form_stems(form);
        std::string joined;
        for (const std::string& s : stems) joined += (joined.empty() ? "" : "_") + s;
        return {NotInWordNet{std::move(joined)}};
    }
    if (senses.size() == 1) return {UniqueSense{std::move(senses.front())}};

    std::vector<std::uint64_t> scores;
    scores.reserve(senses.size());
    for (const SenseRef& s : senses) scores.push_back(score(s.id, context));
    const std::uint64_t best = *std::max_element(scores.begin(), scores.end());

    std::vector<SenseRef> winners;
    for (std::size_t i = 0; i < senses.size(); ++i) {
        if (scores[i] == best) winners.push_back(senses[i]);
    }
    if (winners.size() == 1) return {UniqueSense{std::move(winners.front())}};

    std::vector<SynsetId> ids;
    for (const SenseRef& s : winners) ids.push_back(s.id);
    SynsetSet msc = msc_hypernyms(*lexicon_, ids);
    return {TiedSenses{std::move(winners), std::move(msc)}};
}

DisambiguationResult Disambiguator::from_candidates(std::string_view form, std::span<const SynsetId> candidates) const {
    if (candidates.empty()) throw ArgumentError("no candidate senses for '" + std::string(form) + "'");
    std::vector<SenseRef> ranked = senses_of(*lexicon_, form, candidates.front().pos);
    std::vector<SenseRef> chosen;
    for (SynsetId id : candidates) {
        lexicon_->synset(id);
        auto it = std::find_if(ranked.begin(), ranked.end(), [id](const SenseRef& s) { return s.id == id; });
        // A manual annotation may name a synset the form is not listed under.
        chosen.push_back(it != ranked.end() ? *it : SenseRef{std::string(form), id, 0});
    }
    auto rank = [](const SenseRef& s) { return std::tuple(s.sense_number == 0, s.sense_number, s.id); };
    std::sort(chosen.begin(), chosen.end(), [&](const SenseRef& a, const SenseRef& b) { return rank(a) < rank(b); });
    chosen.erase(std::unique(chosen.begin(), chosen.end(), [](const SenseRef& a, const SenseRef& b) { return a.id == b.id; }),
                 chosen.end());
    if (chosen.size() == 1) return {UniqueSense{std::move(chosen.front())}};
    std::vector<SynsetId> ids;
    for (const SenseRef& s : chosen) ids.push_back(s.id);
    SynsetSet msc = msc_hypernyms(*lexicon_, ids);
    return {TiedSenses{std::move(chosen), std::move(msc)}};
}

DisambiguationResult disambiguate(const Lexicon& lexicon, std::string_view form, Pos pos, const TermMultiset& context) {
    Tokenizer tokenizer(StopWords::english(), &lexicon);
    return Disambiguator(lexicon, tokenizer).disambiguate(form, pos, context);
}

std::optional<ResolvedForm> resolve_form(const Lexicon& lexicon, std::string_view form, std::span<const Pos> order) {
    for (Pos pos : order) {
        if (auto normalized = normalize_form(form, pos, lexicon)) return ResolvedForm{pos, std::move(*normalized)};
    }
    return std::nullopt;
}

}  // namespace wnsearch

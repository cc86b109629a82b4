#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "wnsearch/wordnet.hpp"

namespace wnsearch {

/// Plain keyword, indexed by its stem.
struct Keyword {
    std::string stem;
    friend bool operator==(const Keyword&, const Keyword&) = default;
};

/// A WordNet sense.
struct Sense {
    SynsetId id;
    friend bool operator==(const Sense&, const Sense&) = default;
};

/// A word form qualified by a (hypernym) sense: "movement/event_1".
struct FormSensePair {
    std::string form;
    SynsetId id;
    friend bool operator==(const FormSensePair&, const FormSensePair&) = default;
};

using GeneralizedTerm = std::variant<Keyword, Sense, FormSensePair>;

/// Namespaced index key:
///   Keyword        -> "k:<stem>"
///   Sense          -> "s:<8-digit offset><pos letter>"
///   FormSensePair  -> "p:<form>|<8-digit offset><pos letter>"
std::string canonical_key(const GeneralizedTerm& term);

/// Inverse of canonical_key. Throws ArgumentError on malformed keys.
GeneralizedTerm decode_key(std::string_view key);

}  // namespace wnsearch

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "wnsearch/error.hpp"
#include "wnsearch/terms.hpp"

namespace {

using namespace wnsearch;

TEST(CanonicalKey, Namespaces) {
    EXPECT_EQ(canonical_key(Keyword{"appl"}), "k:appl");
    EXPECT_EQ(canonical_key(Sense{SynsetId{7739125, Pos::noun}}), "s:07739125n");
    EXPECT_EQ(canonical_key(FormSensePair{"movement", SynsetId{29378, Pos::noun}}), "p:movement|00029378n");
    EXPECT_EQ(canonical_key(Sense{SynsetId{362, Pos::verb}}), "s:00000362v");
    EXPECT_EQ(canonical_key(Sense{SynsetId{264, Pos::adjective}}), "s:00000264a");
}

TEST(CanonicalKey, NamespacesNeverCollide) {
    // A keyword that looks like a sense key stays in the keyword namespace.
    EXPECT_NE(canonical_key(Keyword{"00000176n"}), canonical_key(Sense{SynsetId{176, Pos::noun}}));
    EXPECT_NE(canonical_key(Sense{SynsetId{176, Pos::noun}}), canonical_key(Sense{SynsetId{176, Pos::verb}}));
}

TEST(DecodeKey, RoundTrips) {
    const GeneralizedTerm terms[] = {
        Keyword{"rainfal"},
        Keyword{""},
        Sense{SynsetId{0, Pos::adverb}},
        Sense{SynsetId{99999999, Pos::noun}},
        FormSensePair{"apple_tree", SynsetId{1150, Pos::noun}},
        FormSensePair{"a|b", SynsetId{1, Pos::verb}},
    };
    for (const auto& t : terms) EXPECT_EQ(decode_key(canonical_key(t)), t) << canonical_key(t);
}

TEST(DecodeKey, RejectsMalformed) {
    for (const char* key : {"", "k", "x:abc", "s:", "s:1234567n", "s:0000017xn", "s:00000176q", "s:00000176s",
                            "p:movement", "p:movement|0002937n", "kx"}) {
        EXPECT_THROW(decode_key(key), ArgumentError) << key;
    }
}

TEST(DecodeKey, RandomRoundTrip) {
    std::mt19937_64 rng(42);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyz_0123456789-'.";
    auto random_text = [&](std::size_t max_len) {
        std::string s;
        const std::size_t n = 1 + rng() % max_len;
        for (std::size_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
        return s;
    };
    for (int i = 0; i < 5000; ++i) {
        const SynsetId id{static_cast<std::uint32_t>(rng() % 100000000), kAllPos[rng() % 4]};
        GeneralizedTerm t;
        switch (rng() % 3) {
        case 0: t = Keyword{random_text(12)}; break;
        case 1: t = Sense{id}; break;
        default: t = FormSensePair{random_text(20), id}; break;
        }
        const std::string key = canonical_key(t);
        ASSERT_EQ(decode_key(key), t) << key;
        ASSERT_EQ(canonical_key(decode_key(key)), key);
    }
}

}  // namespace

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wnsearch/error.hpp"
#include "wnsearch/wordnet.hpp"

namespace {

using namespace wnsearch;
using wnsearch::testing::fixture_dict;
using wnsearch::testing::fixture_lexicon;
using wnsearch::testing::noun;
using wnsearch::testing::noun_sense;
using wnsearch::testing::RawGraph;
using wnsearch::testing::TempDir;

// Fixture offsets (tests/fixtures/wordnet/data.noun).
constexpr std::uint32_t kEntity = 176, kPhysicalEntity = 288, kAbstraction = 477, kFruit = 643, kAppleFruit = 740,
                        kGala = 882, kAppleTree = 960, kAppleRed = 1105, kTree = 1150, kPlant = 1286,
                        kOrganism = 1413, kPerson = 1598, kAppleseed = 1696, kFurniture = 1968, kCouch = 2108,
                        kBed = 2247, kFuton = 2384, kDaybed = 2482, kEvent = 3873, kChange = 4127,
                        kHappening = 4248, kMovement1 = 4480, kMovement2 = 4613, kMovement3 = 4713,
                        kMovement4 = 4856;

std::vector<SynsetId> all_nouns(const Lexicon& lex) {
    std::vector<SynsetId> ids;
    lex.for_each_synset([&](const Synset& s) {
        if (s.id.pos == Pos::noun) ids.push_back(s.id);
    });
    std::sort(ids.begin(), ids.end());
    return ids;
}

// Minimal elements of the intersected ancestor sets, computed on the raw
// graph: intersect, then delete any member that is an ancestor of another.
std::set<std::uint32_t> brute_force_msc(const RawGraph& g, const std::vector<std::uint32_t>& senses) {
    std::set<std::uint32_t> common;
    {
        auto first = g.ancestors(senses.front());
        common.insert(first.begin(), first.end());
    }
    for (std::size_t i = 1; i < senses.size(); ++i) {
        auto anc = g.ancestors(senses[i]);
        std::set<std::uint32_t> kept;
        for (auto a : anc) {
            if (common.contains(a)) kept.insert(a);
        }
        common = std::move(kept);
    }
    std::set<std::uint32_t> out;
    for (auto m : common) {
        bool dominated = false;
        for (auto other : common) {
            if (other == m) continue;
            auto anc = g.ancestors(other);
            if (std::binary_search(anc.begin(), anc.end(), m)) dominated = true;
        }
        if (!dominated) out.insert(m);
    }
    return out;
}

std::set<std::uint32_t> offsets(const SynsetSet& ids) {
    std::set<std::uint32_t> out;
    for (SynsetId id : ids) out.insert(id.offset);
    return out;
}

TEST(Pos, LettersRoundTrip) {
    for (Pos p : kAllPos) EXPECT_EQ(pos_from_letter(pos_letter(p)), p);
    EXPECT_EQ(pos_from_letter('s'), Pos::adjective);
    EXPECT_FALSE(pos_from_letter('x').has_value());
    EXPECT_EQ(pos_file_suffix(Pos::adjective), "adj");
}

TEST(SynsetId, PrintsPaddedOffsetAndPos) {
    EXPECT_EQ(to_string(SynsetId{7739125, Pos::noun}), "#07739125-noun");
    EXPECT_EQ(to_string(SynsetId{362, Pos::verb}), "#00000362-verb");
}

TEST(LoadLexicon, FixtureCountsMatchManifest) {
    const Lexicon& lex = fixture_lexicon();
    EXPECT_EQ(lex.synset_count(Pos::noun), 40u);
    EXPECT_EQ(lex.synset_count(Pos::verb), 7u);
    EXPECT_EQ(lex.synset_count(Pos::adjective), 3u);
    EXPECT_EQ(lex.synset_count(Pos::adverb), 1u);
    EXPECT_EQ(lex.synset_count(), 51u);
}

TEST(LoadLexicon, SensesInIndexOrder) {
    const Lexicon& lex = fixture_lexicon();
    auto senses = senses_of(lex, "apple", Pos::noun);
    ASSERT_EQ(senses.size(), 3u);
    EXPECT_EQ(senses[0].id, noun(kAppleFruit));
    EXPECT_EQ(senses[1].id, noun(kAppleTree));
    EXPECT_EQ(senses[2].id, noun(kAppleRed));
    EXPECT_EQ(senses[0].sense_number, 1);
    EXPECT_EQ(senses[2].sense_number, 3);
    EXPECT_TRUE(senses_of(lex, "unicorn", Pos::noun).empty());
}

TEST(LoadLexicon, SynsetFields) {
    const Lexicon& lex = fixture_lexicon();
    const Synset& tree = lex.synset(noun(kAppleTree));
    EXPECT_EQ(tree.lemmas, (std::vector<std::string>{"apple_tree", "apple", "malus_pumila"}));
    EXPECT_EQ(tree.gloss, "native eurasian tree widely cultivated for its firm rounded fruit");
    EXPECT_EQ(tree.hypernyms, (SynsetSet{noun(kTree)}));

    const Synset& galore = lex.synset(SynsetId{353, Pos::adjective});
    EXPECT_EQ(galore.lemmas, (std::vector<std::string>{"galore"}));
    EXPECT_TRUE(lex.contains(SynsetId{264, Pos::adjective}));  // satellite
    EXPECT_EQ(lex.synset(noun(kAppleseed)).lemmas.front(), "johnny_appleseed");
}

TEST(LoadLexicon, SameOffsetDifferentPosAreDistinct) {
    const Lexicon& lex = fixture_lexicon();
    EXPECT_EQ(lex.synset(noun(kEntity)).lemmas.front(), "entity");
    EXPECT_EQ(lex.synset(SynsetId{kEntity, Pos::verb}).lemmas.front(), "ripen");
}

TEST(LoadLexicon, UnknownSynsetThrowsNotFound) {
    EXPECT_THROW(fixture_lexicon().synset(noun(999)), NotFoundError);
    EXPECT_EQ(fixture_lexicon().find(noun(999)), nullptr);
}

TEST(LoadLexicon, InstanceHypernymsMerged) {
    const Lexicon& lex = fixture_lexicon();
    EXPECT_EQ(lex.synset(noun(kAppleseed)).hypernyms, (SynsetSet{noun(kPerson)}));
    const auto& hypo = lex.synset(noun(kPerson)).hyponyms;
    EXPECT_TRUE(std::find(hypo.begin(), hypo.end(), noun(kAppleseed)) != hypo.end());
}

TEST(LoadLexicon, HypernymAndHyponymSetsAreInverse) {
    const Lexicon& lex = fixture_lexicon();
    lex.for_each_synset([&](const Synset& s) {
        for (SynsetId h : s.hypernyms) {
            const auto& back = lex.synset(h).hyponyms;
            EXPECT_TRUE(std::binary_search(back.begin(), back.end(), s.id)) << to_string(s.id);
        }
        for (SynsetId h : s.hyponyms) {
            const auto& back = lex.synset(h).hypernyms;
            EXPECT_TRUE(std::binary_search(back.begin(), back.end(), s.id)) << to_string(s.id);
        }
    });
}

TEST(LoadLexicon, FixturePassesDagCheck) {
    EXPECT_NO_THROW(check_hypernym_dag(fixture_lexicon()));
    EXPECT_TRUE(find_hypernym_cycle(fixture_lexicon()).empty());
    EXPECT_TRUE(fixture_lexicon().removed_hypernym_edges().empty());
}

TEST(LoadLexicon, MissingDirectory) {
    EXPECT_THROW(load_lexicon("/nonexistent/wordnet"), LoadError);
}

class CorruptFixture : public ::testing::Test {
protected:
    void SetUp() override {
        for (const auto& entry : std::filesystem::directory_iterator(fixture_dict())) {
            std::filesystem::copy_file(entry.path(), dir_ / entry.path().filename().string());
        }
    }
    void replace_in(const std::string& file, const std::string& from, const std::string& to) {
        auto path = dir_ / file;
        std::string content = wnsearch::testing::slurp(path);
        auto at = content.find(from);
        ASSERT_NE(at, std::string::npos) << from;
        ASSERT_EQ(from.size(), to.size()) << "edits must keep byte offsets";
        content.replace(at, from.size(), to);
        dir_.write(file, content);
    }
    TempDir dir_;
};

TEST_F(CorruptFixture, MissingFileNamed) {
    std::filesystem::remove(dir_ / "index.noun");
    try {
        load_lexicon(dir_.path());
        FAIL() << "expected LoadError";
    } catch (const LoadError& e) {
        EXPECT_NE(std::string(e.what()).find("index.noun"), std::string::npos) << e.what();
    }
}

TEST_F(CorruptFixture, OffsetMismatchReportsByteOffset) {
    replace_in("data.noun", "00000288 03 n 01 physical_entity", "00000289 03 n 01 physical_entity");
    try {
        load_lexicon(dir_.path());
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GE(e.location(), 288u);  // inside the physical_entity record
        EXPECT_LT(e.location(), 477u);
        EXPECT_NE(e.source().find("data.noun"), std::string::npos);
    }
}

TEST_F(CorruptFixture, DanglingPointer) {
    replace_in("data.noun", "~ 00000477 n 0000 | that which", "~ 00000478 n 0000 | that which");
    EXPECT_THROW(load_lexicon(dir_.path()), IntegrityError);
}

TEST_F(CorruptFixture, HypernymCycle) {
    replace_in("data.noun", "entity 0 002 ~ 00000288", "entity 0 002 @ 00000288");
    EXPECT_THROW(load_lexicon(dir_.path()), IntegrityError);
}

TEST_F(CorruptFixture, VerbCycleIsBrokenAtLowestId) {
    replace_in("data.verb", "take_away 0 001 ~ 00000362", "take_away 0 001 @ 00000362");
    Lexicon lex = load_lexicon(dir_.path());
    const SynsetId remove{261, Pos::verb}, pick{362, Pos::verb};
    ASSERT_EQ(lex.removed_hypernym_edges().size(), 1u);
    EXPECT_EQ(lex.removed_hypernym_edges().front(), std::make_pair(remove, pick));
    EXPECT_TRUE(lex.synset(remove).hypernyms.empty());
    EXPECT_EQ(lex.synset(pick).hypernyms, (SynsetSet{remove}));
    EXPECT_EQ(lex.synset(remove).hyponyms, (SynsetSet{pick}));
    EXPECT_TRUE(find_hypernym_cycle(lex).empty());
}

TEST_F(CorruptFixture, TruncatedRecord) {
    replace_in("data.noun", "00000882 03 n 01 gala 0 001", "00000882 03 n 01 gala 0 0x1");
    EXPECT_THROW(load_lexicon(dir_.path()), ParseError);
}

TEST(NormalizeForm, ExactExceptionAndDetachment) {
    const Lexicon& lex = fixture_lexicon();
    EXPECT_EQ(normalize_form("apple", Pos::noun, lex), "apple");
    EXPECT_EQ(normalize_form("Apples", Pos::noun, lex), "apple");
    EXPECT_EQ(normalize_form("mice", Pos::noun, lex), "mouse");
    EXPECT_EQ(normalize_form("ran", Pos::verb, lex), "run");
    EXPECT_EQ(normalize_form("picking", Pos::verb, lex), "pick");
    EXPECT_EQ(normalize_form("harvested", Pos::verb, lex), "harvest");
    EXPECT_EQ(normalize_form("redder", Pos::adjective, lex), "red");
    EXPECT_EQ(normalize_form("Apple Tree", Pos::noun, lex), "apple_tree");
    EXPECT_FALSE(normalize_form("unicorns", Pos::noun, lex).has_value());
    EXPECT_FALSE(normalize_form("hardest", Pos::adverb, lex).has_value());
    EXPECT_FALSE(normalize_form("", Pos::noun, lex).has_value());
}

TEST(HypernymClosure, MatchesRawGraphForEveryNoun) {
    const Lexicon& lex = fixture_lexicon();
    const RawGraph g = RawGraph::read(fixture_dict() / "data.noun");
    for (SynsetId id : all_nouns(lex)) {
        auto expected = g.ancestors(id.offset);
        auto actual = offsets(hypernym_closure(lex, id));
        EXPECT_EQ(actual, std::set<std::uint32_t>(expected.begin(), expected.end())) << to_string(id);
    }
}

TEST(HypernymClosure, StrictAndDepthLimited) {
    const Lexicon& lex = fixture_lexicon();
    auto full = hypernym_closure(lex, noun(kGala));
    EXPECT_EQ(offsets(full), (std::set<std::uint32_t>{kAppleFruit, kFruit}));
    EXPECT_EQ(offsets(hypernym_closure(lex, noun(kGala), 1)), (std::set<std::uint32_t>{kAppleFruit}));
    EXPECT_TRUE(hypernym_closure(lex, noun(kEntity)).empty());
    EXPECT_EQ(offsets(hypernym_closure(lex, noun(kFuton), 1)), (std::set<std::uint32_t>{kCouch, kBed}));
    for (SynsetId id : all_nouns(lex)) {
        auto c = hypernym_closure(lex, id);
        EXPECT_FALSE(std::binary_search(c.begin(), c.end(), id));
    }
}

TEST(HyponymClosure, DepthLimited) {
    const Lexicon& lex = fixture_lexicon();
    EXPECT_EQ(offsets(hyponym_closure(lex, noun(kFruit), 1)), (std::set<std::uint32_t>{kAppleFruit}));
    EXPECT_EQ(offsets(hyponym_closure(lex, noun(kFruit), 2)), (std::set<std::uint32_t>{kAppleFruit, kGala}));
    EXPECT_TRUE(hyponym_closure(lex, noun(kFruit), 0).empty());
    EXPECT_EQ(offsets(hyponym_closure(lex, noun(kPerson), 1)), (std::set<std::uint32_t>{kAppleseed}));
}

TEST(MscHypernyms, DiamondGivesTwoIncomparable) {
    const Lexicon& lex = fixture_lexicon();
    std::vector<SynsetId> senses{noun(kFuton), noun(kDaybed)};
    EXPECT_EQ(offsets(msc_hypernyms(lex, senses)), (std::set<std::uint32_t>{kCouch, kBed}));
}

TEST(MscHypernyms, MovementSenses) {
    const Lexicon& lex = fixture_lexicon();
    std::vector<SynsetId> three{noun(kMovement1), noun(kMovement2), noun(kMovement3)};
    EXPECT_EQ(offsets(msc_hypernyms(lex, three)), (std::set<std::uint32_t>{kEvent}));
    std::vector<SynsetId> two{noun(kMovement1), noun(kMovement2)};
    EXPECT_EQ(offsets(msc_hypernyms(lex, two)), (std::set<std::uint32_t>{kChange}));
    std::vector<SynsetId> four{noun(kMovement1), noun(kMovement2), noun(kMovement3), noun(kMovement4)};
    EXPECT_EQ(offsets(msc_hypernyms(lex, four)), (std::set<std::uint32_t>{kAbstraction}));
    std::vector<SynsetId> sense3{noun(kMovement3)};
    EXPECT_EQ(offsets(msc_hypernyms(lex, sense3)), (std::set<std::uint32_t>{kHappening}));
}

TEST(MscHypernyms, DisconnectedTreesGiveEmptySet) {
    const Lexicon& lex = fixture_lexicon();
    std::vector<SynsetId> senses{noun(kAppleFruit), noun(kAppleTree)};
    EXPECT_TRUE(msc_hypernyms(lex, senses).empty());
}

TEST(MscHypernyms, AdjectivesHaveNoHypernyms) {
    const Lexicon& lex = fixture_lexicon();
    std::vector<SynsetId> senses{SynsetId{176, Pos::adjective}, SynsetId{353, Pos::adjective}};
    EXPECT_TRUE(msc_hypernyms(lex, senses).empty());
}

TEST(MscHypernyms, Errors) {
    const Lexicon& lex = fixture_lexicon();
    EXPECT_THROW(msc_hypernyms(lex, std::vector<SynsetId>{}), ArgumentError);
    std::vector<SynsetId> mixed{noun(kEntity), SynsetId{kEntity, Pos::verb}};
    EXPECT_THROW(msc_hypernyms(lex, mixed), ArgumentError);
    std::vector<SynsetId> unknown{noun(kEntity), noun(999)};
    EXPECT_THROW(msc_hypernyms(lex, unknown), NotFoundError);
}

// Exhaustive comparison with the brute-force oracle over all noun subsets of
// size 1..4.
TEST(MscHypernyms, MatchesBruteForceOnAllSmallSubsets) {
    const Lexicon& lex = fixture_lexicon();
    const RawGraph g = RawGraph::read(fixture_dict() / "data.noun");
    const auto nouns = all_nouns(lex);
    const std::size_t n = nouns.size();
    std::size_t checked = 0;
    std::vector<std::size_t> idx;
    auto check = [&] {
        std::vector<SynsetId> senses;
        std::vector<std::uint32_t> raw;
        for (std::size_t i : idx) {
            senses.push_back(nouns[i]);
            raw.push_back(nouns[i].offset);
        }
        ASSERT_EQ(offsets(msc_hypernyms(lex, senses)), brute_force_msc(g, raw));
        ++checked;
    };
    for (std::size_t a = 0; a < n; ++a) {
        idx = {a};
        check();
        for (std::size_t b = a + 1; b < n; ++b) {
            idx = {a, b};
            check();
            for (std::size_t c = b + 1; c < n; ++c) {
                idx = {a, b, c};
                check();
                for (std::size_t d = c + 1; d < n; ++d) {
                    idx = {a, b, c, d};
                    check();
                }
            }
        }
    }
    EXPECT_EQ(checked, n + n * (n - 1) / 2 + n * (n - 1) * (n - 2) / 6 + n * (n - 1) * (n - 2) * (n - 3) / 24);
}

TEST(MscHypernyms, AntichainDominanceAndMonotonicity) {
    const Lexicon& lex = fixture_lexicon();
    const auto nouns = all_nouns(lex);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<SynsetId> s;
        const int size = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < size; ++i) s.push_back(nouns[rng() % nouns.size()]);
        const SynsetSet m = msc_hypernyms(lex, s);

        for (SynsetId a : m) {
            for (SynsetId b : m) {
                if (a == b) continue;
                auto up = hypernym_closure(lex, b);
                EXPECT_FALSE(std::binary_search(up.begin(), up.end(), a));
            }
        }
        SynsetSet common = hypernym_closure(lex, s.front());
        for (std::size_t i = 1; i < s.size(); ++i) {
            SynsetSet next;
            auto c = hypernym_closure(lex, s[i]);
            std::set_intersection(common.begin(), common.end(), c.begin(), c.end(), std::back_inserter(next));
            common = next;
        }
        for (SynsetId c : common) {
            bool covered = false;
            for (SynsetId x : m) {
                auto up = hypernym_closure(lex, x);
                covered |= c == x || std::binary_search(up.begin(), up.end(), c);
            }
            EXPECT_TRUE(covered);
        }
        // Adding a sense can only move the msc set upward.
        std::vector<SynsetId> bigger = s;
        bigger.push_back(nouns[rng() % nouns.size()]);
        for (SynsetId x : msc_hypernyms(lex, bigger)) {
            bool above = false;
            for (SynsetId c : common) {
                auto up = hypernym_closure(lex, c);
                above |= x == c || std::binary_search(up.begin(), up.end(), x);
            }
            EXPECT_TRUE(above);
        }
    }
}

TEST(SenseBag, GlossLemmasAndNeighbours) {
    const Lexicon& lex = fixture_lexicon();
    TermMultiset bag = sense_bag(lex, noun(3503));  // rain, pelting
    EXPECT_GE(bag.count("bullet"), 1u);
    EXPECT_GE(bag.count("pelt"), 1u);
    EXPECT_GE(bag.count("seri"), 1u);  // hypernym "series"
    EXPECT_GE(bag.count("rain"), 2u);  // lemma and gloss quote
    EXPECT_EQ(bag.count("of"), 0u);
}

// Full WordNet, from WORDNET_DICT.

class FullWordNet : public ::testing::Test {
protected:
    void SetUp() override {
        lex_ = wnsearch::testing::full_lexicon();
        if (!lex_) GTEST_SKIP() << "WORDNET_DICT not set";
    }
    const Lexicon* lex_ = nullptr;
};

TEST_F(FullWordNet, AppleOffsets) {
    auto ids = lex_->sense_ids("apple", Pos::noun);
    std::set<std::uint32_t> got;
    for (SynsetId id : ids) got.insert(id.offset);
    EXPECT_TRUE(got.contains(7739125u));
    EXPECT_TRUE(got.contains(12633994u));
}

TEST_F(FullWordNet, NounGraphIsDag) {
    EXPECT_NO_THROW(check_hypernym_dag(*lex_));
    for (const auto& [child, parent] : lex_->removed_hypernym_edges()) EXPECT_NE(child.pos, Pos::noun);
    EXPECT_GT(lex_->synset_count(Pos::noun), 80000u);
}

TEST_F(FullWordNet, MovementSensesShareEvent) {
    std::vector<SynsetId> senses;
    for (int n : {1, 2, 3, 11}) senses.push_back(noun_sense(*lex_, "movement", n));
    const SynsetId event1 = noun_sense(*lex_, "event", 1);
    auto m = msc_hypernyms(*lex_, senses);
    EXPECT_TRUE(std::find(m.begin(), m.end(), event1) != m.end());
}

}  // namespace

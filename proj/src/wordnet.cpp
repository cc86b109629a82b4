#include "wnsearch/wordnet.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wnsearch/error.hpp"

namespace wnsearch {

namespace fs = std::filesystem;

char pos_letter(Pos pos) noexcept {
    switch (pos) {
    case Pos::noun: return 'n';
    case Pos::verb: return 'v';
    case Pos::adjective: return 'a';
    case Pos::adverb: return 'r';
    }
    return '?';
}

std::optional<Pos> pos_from_letter(char c) noexcept {
    switch (c) {
    case 'n': return Pos::noun;
    case 'v': return Pos::verb;
    case 'a':
    case 's': return Pos::adjective;
    case 'r': return Pos::adverb;
    default: return std::nullopt;
    }
}

std::string_view pos_file_suffix(Pos pos) noexcept {
    switch (pos) {
    case Pos::noun: return "noun";
    case Pos::verb: return "verb";
    case Pos::adjective: return "adj";
    case Pos::adverb: return "adv";
    }
    return "";
}

std::string_view pos_name(Pos pos) noexcept {
    switch (pos) {
    case Pos::noun: return "noun";
    case Pos::verb: return "verb";
    case Pos::adjective: return "adjective";
    case Pos::adverb: return "adverb";
    }
    return "";
}

std::string to_string(SynsetId id) {
    return fmt::format("#{:08d}-{}", id.offset, pos_name(id.pos));
}

// ---------------------------------------------------------------------------
// Lexicon accessors

const Synset* Lexicon::find(SynsetId id) const noexcept {
    auto it = synsets_.find(id);
    return it == synsets_.end() ? nullptr : &it->second;
}

const Synset& Lexicon::synset(SynsetId id) const {
    if (const Synset* s = find(id)) return *s;
    throw NotFoundError("unknown synset " + to_string(id));
}

std::span<const SynsetId> Lexicon::sense_ids(std::string_view form, Pos pos) const noexcept {
    const auto& index = sense_index_[static_cast<std::size_t>(pos)];
    auto it = index.find(std::string(form));
    if (it == index.end()) return {};
    return it->second;
}

bool Lexicon::has_form(std::string_view form, Pos pos) const noexcept {
    return !sense_ids(form, pos).empty();
}

std::span<const std::string> Lexicon::exception_bases(std::string_view inflected, Pos pos) const noexcept {
    const auto& table = exceptions_[static_cast<std::size_t>(pos)];
    auto it = table.find(std::string(inflected));
    if (it == table.end()) return {};
    return it->second;
}

bool Lexicon::starts_compound(std::string_view word) const noexcept {
    return compound_heads_.contains(std::string(word));
}

std::size_t Lexicon::synset_count(Pos pos) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        synsets_.begin(), synsets_.end(), [pos](const auto& kv) { return kv.first.pos == pos; }));
}

std::size_t Lexicon::form_count(Pos pos) const noexcept {
    return sense_index_[static_cast<std::size_t>(pos)].size();
}

void Lexicon::for_each_synset(const std::function<void(const Synset&)>& fn) const {
    for (const auto& [id, synset] : synsets_) fn(synset);
}

// ---------------------------------------------------------------------------
// Loading

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open WordNet file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

/// Whitespace-separated field reader over one record.
class FieldCursor {
public:
    FieldCursor(std::string_view line, const std::string& source, std::uint64_t line_offset)
        : line_(line), source_(source), line_offset_(line_offset) {}

    std::string_view next(const char* what) {
        while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
        if (pos_ >= line_.size()) fail(std::string("missing ") + what);
        std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ') ++pos_;
        return line_.substr(start, pos_ - start);
    }

    template <typename T>
    T number(const char* what, int base = 10) {
        std::string_view field = next(what);
        T value{};
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value, base);
        if (ec != std::errc{} || ptr != field.data() + field.size()) {
            fail(std::string("bad ") + what + " '" + std::string(field) + "'");
        }
        return value;
    }

    std::string_view rest() const { return pos_ < line_.size() ? line_.substr(pos_) : std::string_view{}; }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(source_, line_offset_ + pos_, message);
    }

private:
    std::string_view line_;
    const std::string& source_;
    std::uint64_t line_offset_;
    std::size_t pos_ = 0;
};

template <typename Fn>
void for_each_record(const std::string& content, Fn&& fn) {
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string_view line(content.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        // License header lines start with two spaces.
        if (!line.empty() && !line.starts_with("  ")) fn(line, static_cast<std::uint64_t>(start));
        start = end + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

void sort_unique(SynsetSet& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

class LexiconLoader {
public:
    explicit LexiconLoader(fs::path dir) : dir_(std::move(dir)) {}

    Lexicon load() {
        // Fail fast, in a fixed order, on missing inputs.
        for (const char* prefix : {"data.", "index."}) {
            for (Pos pos : kAllPos) require(std::string(prefix) + std::string(pos_file_suffix(pos)));
        }
        for (Pos pos : kAllPos) require(std::string(pos_file_suffix(pos)) + ".exc");

        for (Pos pos : kAllPos) load_data(pos);
        for (Pos pos : kAllPos) load_index(pos);
        for (Pos pos : kAllPos) load_exceptions(pos);
        link();
        break_non_noun_cycles();
        check_hypernym_dag(lex_);
        return std::move(lex_);
    }

private:
    void require(const std::string& name) {
        fs::path p = dir_ / name;
        std::error_code ec;
        if (!fs::is_regular_file(p, ec)) throw LoadError("missing WordNet file " + p.string());
    }

    void load_data(Pos file_pos) {
        fs::path path = dir_ / ("data." + std::string(pos_file_suffix(file_pos)));
        const std::string source = path.string();
        const std::string content = read_file(path);
        for_each_record(content, [&](std::string_view line, std::uint64_t offset) {
            FieldCursor f(line, source, offset);
            auto synset_offset = f.number<std::uint32_t>("synset offset");
            if (synset_offset != offset) f.fail("synset offset field does not match byte offset");
            f.number<unsigned>("lex_filenum");
            std::string_view ss_type = f.next("ss_type");
            auto pos = ss_type.size() == 1 ? pos_from_letter(ss_type[0]) : std::nullopt;
            if (!pos || *pos != file_pos) f.fail("unexpected ss_type '" + std::string(ss_type) + "'");

            Synset synset;
            synset.id = SynsetId{synset_offset, file_pos};
            auto w_cnt = f.number<unsigned>("w_cnt", 16);
            if (w_cnt == 0) f.fail("synset without lemmas");
            for (unsigned i = 0; i < w_cnt; ++i) {
                std::string_view word = f.next("word");
                // Adjective syntactic markers: "galore(ip)".
                if (auto paren = word.find('('); paren != std::string_view::npos) word = word.substr(0, paren);
                synset.lemmas.push_back(lowercase(word));
                f.number<unsigned>("lex_id", 16);
            }
            auto p_cnt = f.number<unsigned>("p_cnt");
            for (unsigned i = 0; i < p_cnt; ++i) {
                std::string_view symbol = f.next("pointer symbol");
                auto target_offset = f.number<std::uint32_t>("pointer offset");
                std::string_view target_pos = f.next("pointer pos");
                f.next("pointer source/target");
                auto tpos = target_pos.size() == 1 ? pos_from_letter(target_pos[0]) : std::nullopt;
                if (!tpos) f.fail("bad pointer pos '" + std::string(target_pos) + "'");
                SynsetId target{target_offset, *tpos};
                if (symbol == "@" || symbol == "@i") {
                    synset.hypernyms.push_back(target);
                } else if (symbol == "~" || symbol == "~i") {
                    synset.hyponyms.push_back(target);
                }
            }
            std::string_view rest = f.rest();
            auto bar = rest.find('|');
            if (bar != std::string_view::npos) synset.gloss = std::string(trim(rest.substr(bar + 1)));

            if (std::find(synset.hypernyms.begin(), synset.hypernyms.end(), synset.id) != synset.hypernyms.end()) {
                throw IntegrityError("hypernym cycle: " + to_string(synset.id) + " -> " + to_string(synset.id));
            }
            for (const std::string& lemma : synset.lemmas) {
                if (auto us = lemma.find('_'); us != std::string::npos) lex_.compound_heads_.insert(lemma.substr(0, us));
            }
            lex_.synsets_.emplace(synset.id, std::move(synset));
        });
    }

    void load_index(Pos file_pos) {
        fs::path path = dir_ / ("index." + std::string(pos_file_suffix(file_pos)));
        const std::string source = path.string();
        const std::string content = read_file(path);
        auto& index = lex_.sense_index_[static_cast<std::size_t>(file_pos)];
        for_each_record(content, [&](std::string_view line, std::uint64_t offset) {
            FieldCursor f(line, source, offset);
            std::string lemma = lowercase(f.next("lemma"));
            std::string_view pos_field = f.next("pos");
            auto pos = pos_field.size() == 1 ? pos_from_letter(pos_field[0]) : std::nullopt;
            if (!pos || *pos != file_pos) f.fail("unexpected pos '" + std::string(pos_field) + "'");
            auto synset_cnt = f.number<unsigned>("synset_cnt");
            auto p_cnt = f.number<unsigned>("p_cnt");
            for (unsigned i = 0; i < p_cnt; ++i) f.next("pointer symbol");
            f.number<unsigned>("sense_cnt");
            f.number<unsigned>("tagsense_cnt");
            std::vector<SynsetId> ids;
            ids.reserve(synset_cnt);
            for (unsigned i = 0; i < synset_cnt; ++i) {
                SynsetId id{f.number<std::uint32_t>("synset offset"), file_pos};
                if (!lex_.contains(id)) f.fail("index entry points at unknown synset " + to_string(id));
                ids.push_back(id);
            }
            index[std::move(lemma)] = std::move(ids);
        });
    }

    void load_exceptions(Pos pos) {
        fs::path path = dir_ / (std::string(pos_file_suffix(pos)) + ".exc");
        const std::string source = path.string();
        const std::string content = read_file(path);
        auto& table = lex_.exceptions_[static_cast<std::size_t>(pos)];
        for_each_record(content, [&](std::string_view line, std::uint64_t offset) {
            FieldCursor f(line, source, offset);
            std::string inflected = lowercase(f.next("inflected form"));
            std::vector<std::string> bases;
            while (!trim(f.rest()).empty()) bases.push_back(lowercase(f.next("base form")));
            if (bases.empty()) f.fail("exception entry without base form");
            if (auto us = inflected.find('_'); us != std::string::npos) {
                lex_.compound_heads_.insert(inflected.substr(0, us));
            }
            auto& slot = table[std::move(inflected)];
            slot.insert(slot.end(), bases.begin(), bases.end());
        });
    }

    // Resolves pointer targets and makes hypernym/hyponym sets mutually inverse.
    void link() {
        std::vector<std::pair<SynsetId, SynsetId>> edges;  // (child, parent)
        for (const auto& [id, synset] : lex_.synsets_) {
            for (SynsetId parent : synset.hypernyms) edges.emplace_back(id, parent);
            for (SynsetId child : synset.hyponyms) edges.emplace_back(child, id);
        }
        for (auto& [id, synset] : lex_.synsets_) {
            synset.hypernyms.clear();
            synset.hyponyms.clear();
        }
        for (const auto& [child, parent] : edges) {
            auto c = lex_.synsets_.find(child);
            auto p = lex_.synsets_.find(parent);
            if (c == lex_.synsets_.end() || p == lex_.synsets_.end()) {
                throw IntegrityError("hypernym pointer between " + to_string(child) + " and " +
                                     to_string(parent) + " does not resolve");
            }
            if (child == parent) {
                throw IntegrityError("hypernym cycle: " + to_string(child) + " -> " + to_string(child));
            }
            c->second.hypernyms.push_back(parent);
            p->second.hyponyms.push_back(child);
        }
        for (auto& [id, synset] : lex_.synsets_) {
            sort_unique(synset.hypernyms);
            sort_unique(synset.hyponyms);
        }
    }

    // Noun cycles are fatal. Released WordNet versions carry a few verb
    // cycles; each is cut at the hypernym edge leaving its lowest-id member.
    void break_non_noun_cycles() {
        while (true) {
            std::vector<SynsetId> cycle = find_hypernym_cycle(lex_);
            if (cycle.empty() || cycle.front().pos == Pos::noun) return;
            auto it = std::min_element(cycle.begin(), cycle.end());
            const SynsetId child = *it;
            const SynsetId parent = std::next(it) == cycle.end() ? cycle.front() : *std::next(it);
            auto& up = lex_.synsets_.at(child).hypernyms;
            up.erase(std::find(up.begin(), up.end(), parent));
            auto& down = lex_.synsets_.at(parent).hyponyms;
            down.erase(std::find(down.begin(), down.end(), child));
            lex_.removed_hypernym_edges_.emplace_back(child, parent);
            spdlog::warn("removed hypernym edge {} -> {} to break a cycle", to_string(child), to_string(parent));
        }
    }

    fs::path dir_;
    Lexicon lex_;
};

Lexicon load_lexicon(const fs::path& dict_dir) {
    std::error_code ec;
    if (!fs::is_directory(dict_dir, ec)) throw LoadError("WordNet dict directory not found: " + dict_dir.string());
    return LexiconLoader(dict_dir).load();
}

std::vector<SynsetId> find_hypernym_cycle(const Lexicon& lexicon) {
    // Kahn's algorithm over child -> parent edges.
    std::unordered_map<SynsetId, std::size_t, SynsetIdHash> pending;
    std::vector<SynsetId> ready;
    lexicon.for_each_synset([&](const Synset& s) {
        pending[s.id] = s.hyponyms.size();
        if (s.hyponyms.empty()) ready.push_back(s.id);
    });
    std::size_t visited = 0;
    while (!ready.empty()) {
        SynsetId id = ready.back();
        ready.pop_back();
        ++visited;
        for (SynsetId parent : lexicon.synset(id).hypernyms) {
            if (--pending[parent] == 0) ready.push_back(parent);
        }
    }
    if (visited == pending.size()) return {};

    // Every unsorted synset still has an unsorted hyponym, so walking down
    // through unsorted synsets must revisit one: that loop is a cycle.
    SynsetId start{};
    bool found = false;
    for (const auto& [id, count] : pending) {
        if (count > 0 && (!found || id < start)) {
            start = id;
            found = true;
        }
    }
    std::vector<SynsetId> path;
    std::unordered_map<SynsetId, std::size_t, SynsetIdHash> seen_at;
    SynsetId cur = start;
    while (!seen_at.contains(cur)) {
        seen_at[cur] = path.size();
        path.push_back(cur);
        for (SynsetId child : lexicon.synset(cur).hyponyms) {
            if (pending[child] > 0) {
                cur = child;
                break;
            }
        }
    }
    // Report child -> hypernym order.
    std::vector<SynsetId> cycle(path.begin() + static_cast<std::ptrdiff_t>(seen_at[cur]), path.end());
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
}

void check_hypernym_dag(const Lexicon& lexicon) {
    const std::vector<SynsetId> cycle = find_hypernym_cycle(lexicon);
    if (cycle.empty()) return;
    std::string message = "hypernym cycle:";
    for (SynsetId id : cycle) message += " " + to_string(id) + " ->";
    message += " " + to_string(cycle.front());
    throw IntegrityError(message);
}

// ---------------------------------------------------------------------------
// Queries

namespace {

struct Detachment {
    std::string_view suffix;
    std::string_view replacement;
};

// WordNet morphological detachment rules.
constexpr Detachment kNounRules[] = {{"s", ""},     {"ses", "s"},   {"xes", "x"},   {"zes", "z"},
                                     {"ches", "ch"}, {"shes", "sh"}, {"men", "man"}, {"ies", "y"}};
constexpr Detachment kVerbRules[] = {{"s", ""},   {"ies", "y"}, {"es", "e"},  {"es", ""},
                                     {"ed", "e"}, {"ed", ""},   {"ing", "e"}, {"ing", ""}};
constexpr Detachment kAdjRules[] = {{"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"}};

std::span<const Detachment> rules_for(Pos pos) {
    switch (pos) {
    case Pos::noun: return kNounRules;
    case Pos::verb: return kVerbRules;
    case Pos::adjective: return kAdjRules;
    case Pos::adverb: return {};
    }
    return {};
}

}  // namespace

std::optional<std::string> normalize_form(std::string_view surface, Pos pos, const Lexicon& lexicon) {
    std::string form;
    form.reserve(surface.size());
    for (char c : surface) {
        if (c == ' ') c = '_';
        else if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        form.push_back(c);
    }
    if (form.empty()) return std::nullopt;
    if (lexicon.has_form(form, pos)) return form;
    for (const std::string& base : lexicon.exception_bases(form, pos)) {
        if (lexicon.has_form(base, pos)) return base;
    }
    for (const Detachment& rule : rules_for(pos)) {
        if (form.size() <= rule.suffix.size() || !form.ends_with(rule.suffix)) continue;
        std::string candidate = form.substr(0, form.size() - rule.suffix.size());
        candidate += rule.replacement;
        if (lexicon.has_form(candidate, pos)) return candidate;
    }
    return std::nullopt;
}

std::vector<SenseRef> senses_of(const Lexicon& lexicon, std::string_view form, Pos pos) {
    std::vector<SenseRef> out;
    int number = 0;
    for (SynsetId id : lexicon.sense_ids(form, pos)) out.push_back(SenseRef{std::string(form), id, ++number});
    return out;
}

SynsetSet hypernym_closure(const Lexicon& lexicon, SynsetId id, std::optional<unsigned> max_depth) {
    const Synset& root = lexicon.synset(id);
    std::unordered_set<SynsetId, SynsetIdHash> seen;
    SynsetSet out;
    std::vector<SynsetId> frontier(root.hypernyms.begin(), root.hypernyms.end());
    for (unsigned depth = 1; !frontier.empty(); ++depth) {
        if (max_depth && depth > *max_depth) break;
        std::vector<SynsetId> next;
        for (SynsetId h : frontier) {
            if (!seen.insert(h).second) continue;
            out.push_back(h);
            const Synset& s = lexicon.synset(h);
            next.insert(next.end(), s.hypernyms.begin(), s.hypernyms.end());
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SynsetSet hyponym_closure(const Lexicon& lexicon, SynsetId id, unsigned max_depth) {
    const Synset& root = lexicon.synset(id);
    std::unordered_set<SynsetId, SynsetIdHash> seen;
    SynsetSet out;
    std::vector<SynsetId> frontier(root.hyponyms.begin(), root.hyponyms.end());
    for (unsigned depth = 1; !frontier.empty() && depth <= max_depth; ++depth) {
        std::vector<SynsetId> next;
        for (SynsetId h : frontier) {
            if (!seen.insert(h).second) continue;
            out.push_back(h);
            const Synset& s = lexicon.synset(h);
            next.insert(next.end(), s.hyponyms.begin(), s.hyponyms.end());
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SynsetSet msc_hypernyms(const Lexicon& lexicon, std::span<const SynsetId> senses) {
    if (senses.empty()) throw ArgumentError("msc_hypernyms needs at least one sense");
    const Pos pos = senses.front().pos;
    for (SynsetId id : senses) {
        if (id.pos != pos) throw ArgumentError("msc_hypernyms over mixed parts of speech");
        lexicon.synset(id);
    }

    SynsetSet common = hypernym_closure(lexicon, senses.front());
    for (SynsetId id : senses.subspan(1)) {
        if (common.empty()) break;
        SynsetSet closure = hypernym_closure(lexicon, id);
        SynsetSet merged;
        std::set_intersection(common.begin(), common.end(), closure.begin(), closure.end(),
                              std::back_inserter(merged));
        common = std::move(merged);
    }

    // Anything that is a hypernym of another common hypernym is not minimal.
    SynsetSet dominated;
    for (SynsetId h : common) {
        SynsetSet up = hypernym_closure(lexicon, h);
        dominated.insert(dominated.end(), up.begin(), up.end());
    }
    sort_unique(dominated);
    SynsetSet out;
    std::set_difference(common.begin(), common.end(), dominated.begin(), dominated.end(),
                        std::back_inserter(out));
    return out;
}

TermMultiset sense_bag(const Lexicon& lexicon, SynsetId id, const Tokenizer& tokenizer) {
    const Synset& synset = lexicon.synset(id);
    TermMultiset bag;
    auto add_synset = [&](const Synset& s) {
        tokenizer.add_stems(s.gloss, bag);
        for (const std::string& lemma : s.lemmas) {
            for (const std::string& stem : tokenizer.form_stems(lemma)) bag.add(stem);
        }
    };
    add_synset(synset);
    for (SynsetId h : synset.hypernyms) add_synset(lexicon.synset(h));
    for (SynsetId h : synset.hyponyms) add_synset(lexicon.synset(h));
    return bag;
}

TermMultiset sense_bag(const Lexicon& lexicon, SynsetId id) {
    Tokenizer tokenizer(StopWords::english(), &lexicon);
    return sense_bag(lexicon, id, tokenizer);
}

}  // namespace wnsearch

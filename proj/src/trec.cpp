#include "wnsearch/trec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wnsearch/error.hpp"

namespace wnsearch {

namespace {

constexpr std::size_t npos = std::string_view::npos;

char upper(char c) {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool equals_ci(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return upper(x) == upper(y); });
}

std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from) {
    if (needle.empty() || haystack.size() < needle.size()) return npos;
    const char first_lo = static_cast<char>(std::tolower(static_cast<unsigned char>(needle[0])));
    const char first_up = upper(needle[0]);
    for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        if (haystack[i] != first_lo && haystack[i] != first_up) continue;
        if (equals_ci(haystack.substr(i, needle.size()), needle)) return i;
    }
    return npos;
}

// Position of "<TAG>" or "<TAG attrs>" at or after `from`.
std::size_t find_open_tag(std::string_view text, std::string_view tag, std::size_t from) {
    const std::string needle = "<" + std::string(tag);
    for (std::size_t at = find_ci(text, needle, from); at != npos; at = find_ci(text, needle, at + 1)) {
        const std::size_t after = at + needle.size();
        if (after < text.size() && (text[after] == '>' || is_space(text[after]))) return at;
    }
    return npos;
}

std::size_t find_close_tag(std::string_view text, std::string_view tag, std::size_t from) {
    return find_ci(text, "</" + std::string(tag) + ">", from);
}

// Index just past the '>' that ends the tag starting at `at`.
std::size_t tag_end(std::string_view text, std::size_t at) {
    auto gt = text.find('>', at);
    return gt == npos ? text.size() : gt + 1;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return !text.empty() && ec == std::errc{} && ptr == text.data() + text.size();
}

template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == npos) end = content.size();
        fn(++line_no, content.substr(start, end - start));
        start = end + 1;
    }
}

std::string strip_prefix(std::string text, std::initializer_list<std::string_view> prefixes) {
    std::string_view view = trim(text);
    for (std::string_view p : prefixes) {
        if (view.size() >= p.size() && equals_ci(view.substr(0, p.size()), p)) {
            view = trim(view.substr(p.size()));
            break;
        }
    }
    return std::string(view);
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return buffer.str();
}

std::string clean_sgml_text(std::string_view markup) {
    std::string out;
    out.reserve(markup.size());
    bool pending_space = false;
    auto put = [&](char c) {
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    };
    for (std::size_t i = 0; i < markup.size();) {
        const char c = markup[i];
        if (c == '<') {
            i = tag_end(markup, i);
            pending_space = true;
        } else if (c == '&') {
            static constexpr std::pair<std::string_view, char> kEntities[] = {
                {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''},
            };
            bool decoded = false;
            for (const auto& [name, ch] : kEntities) {
                if (markup.substr(i, name.size()) == name) {
                    put(ch);
                    i += name.size();
                    decoded = true;
                    break;
                }
            }
            if (!decoded) {
                put('&');
                ++i;
            }
        } else if (is_space(c)) {
            pending_space = true;
            ++i;
        } else {
            put(c);
            ++i;
        }
    }
    return out;
}

void parse_trec_buffer(std::string_view content, const std::string& source, const TrecParseOptions& options,
                       std::set<std::string>& seen, const TrecDocCallback& emit, TrecParseStats& stats) {
    auto malformed = [&](std::uint64_t offset, const std::string& what) {
        if (options.strict) throw ParseError(source, offset, what);
        spdlog::warn("{}:{}: {}; record skipped", source, offset, what);
        ++stats.skipped;
    };

    std::size_t pos = 0;
    while (pos < content.size()) {
        const std::size_t open = find_open_tag(content, "DOC", pos);
        if (options.strict) {
            auto stray = find_close_tag(content, "DOC", pos);
            if (stray != npos && (open == npos || stray < open)) malformed(stray, "</DOC> without matching <DOC>");
        }
        if (open == npos) break;

        const std::size_t body_start = tag_end(content, open);
        const std::size_t close = find_close_tag(content, "DOC", body_start);
        const std::size_t next_open = find_open_tag(content, "DOC", body_start);
        if (close == npos || (next_open != npos && next_open < close)) {
            malformed(open, "unbalanced <DOC>");
            pos = next_open == npos ? content.size() : next_open;
            continue;
        }
        std::string_view body = content.substr(body_start, close - body_start);
        pos = close + 6;

        std::string docno;
        if (auto at = find_open_tag(body, "DOCNO", 0); at != npos) {
            auto start = tag_end(body, at);
            auto end = find_close_tag(body, "DOCNO", start);
            if (end != npos) docno = std::string(trim(body.substr(start, end - start)));
        }
        if (docno.empty()) {
            malformed(open, "<DOC> without <DOCNO>");
            continue;
        }
        if (seen.contains(docno)) {
            malformed(open, "duplicate DOCNO '" + docno + "'");
            continue;
        }

        std::string text;
        std::size_t cursor = 0;
        while (true) {
            std::size_t best = npos;
            std::string_view best_tag;
            for (const std::string& tag : options.text_tags) {
                auto at = find_open_tag(body, tag, cursor);
                if (at < best) {
                    best = at;
                    best_tag = tag;
                }
            }
            if (best == npos) break;
            const std::size_t start = tag_end(body, best);
            std::size_t end = find_close_tag(body, best_tag, start);
            if (end == npos) end = body.size();
            std::string section = clean_sgml_text(body.substr(start, end - start));
            if (!section.empty()) {
                if (!text.empty()) text.push_back(' ');
                text += section;
            }
            cursor = std::min(body.size(), end + best_tag.size() + 3);
        }

        seen.insert(docno);
        ++stats.documents;
        emit(TrecDocument{std::move(docno), std::move(text), source, open});
    }
}

TrecParseStats for_each_trec_doc(const std::filesystem::path& path, const TrecParseOptions& options,
                                 const TrecDocCallback& emit) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        for (auto it = fs::recursive_directory_iterator(path, ec); !ec && it != fs::recursive_directory_iterator();
             it.increment(ec)) {
            const auto name = it->path().filename().string();
            if (!name.empty() && name.front() == '.') {
                if (it->is_directory()) it.disable_recursion_pending();
                continue;
            }
            if (it->is_regular_file()) files.push_back(it->path());
        }
        if (ec) throw IoError("cannot walk corpus directory " + path.string() + ": " + ec.message());
        std::sort(files.begin(), files.end());
    } else if (fs::exists(path, ec)) {
        files.push_back(path);
    } else {
        throw IoError("corpus path does not exist: " + path.string());
    }

    TrecParseStats stats;
    std::set<std::string> seen;
    for (const fs::path& file : files) {
        const std::string content = read_file(file);
        parse_trec_buffer(content, file.string(), options, seen, emit, stats);
        ++stats.files;
    }
    return stats;
}

std::vector<TrecDocument> parse_trec_docs(const std::filesystem::path& path, const TrecParseOptions& options,
                                          TrecParseStats* stats) {
    std::vector<TrecDocument> docs;
    auto result = for_each_trec_doc(path, options, [&docs](TrecDocument&& d) { docs.push_back(std::move(d)); });
    if (stats) *stats = result;
    return docs;
}

std::vector<Topic> parse_topics_text(std::string_view content, const std::string& source) {
    std::vector<Topic> topics;
    std::set<int> numbers;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = find_open_tag(content, "top", pos);
        if (open == npos) break;
        const std::size_t start = tag_end(content, open);
        const std::size_t close = find_close_tag(content, "top", start);
        if (close == npos) throw ParseError(source, open, "<top> without </top>");
        std::string_view block = content.substr(start, close - start);
        pos = close + 6;

        auto field = [&](std::string_view tag) -> std::optional<std::string> {
            auto at = find_open_tag(block, tag, 0);
            if (at == npos) return std::nullopt;
            auto begin = tag_end(block, at);
            auto end = block.find('<', begin);
            if (end == npos) end = block.size();
            return clean_sgml_text(block.substr(begin, end - begin));
        };

        Topic topic;
        auto num = field("num");
        if (!num) throw ParseError(source, open, "topic without <num>");
        std::string number = strip_prefix(*num, {"Number:"});
        if (!parse_number(std::string_view(number), topic.number)) {
            throw ParseError(source, open, "bad topic number '" + number + "'");
        }
        if (!numbers.insert(topic.number).second) {
            throw ParseError(source, open, "topic " + std::to_string(topic.number) + " repeated");
        }
        topic.title = strip_prefix(field("title").value_or(""), {"Topic:"});
        if (topic.title.empty()) throw ParseError(source, open, "topic " + number + " has no title");
        topic.description = strip_prefix(field("desc").value_or(""), {"Description:"});
        topic.narrative = strip_prefix(field("narr").value_or(""), {"Narrative:"});
        topics.push_back(std::move(topic));
    }
    return topics;
}

std::vector<Topic> parse_topics(const std::filesystem::path& path) {
    return parse_topics_text(read_file(path), path.string());
}

int Qrels::relevance(int topic, const std::string& docno) const {
    auto t = judgments.find(topic);
    if (t == judgments.end()) return 0;
    auto d = t->second.find(docno);
    return d == t->second.end() ? 0 : d->second;
}

std::set<std::string> Qrels::relevant(int topic) const {
    std::set<std::string> out;
    if (auto t = judgments.find(topic); t != judgments.end()) {
        for (const auto& [docno, rel] : t->second) {
            if (rel > 0) out.insert(docno);
        }
    }
    return out;
}

std::size_t Qrels::num_relevant(int topic) const {
    auto t = judgments.find(topic);
    if (t == judgments.end()) return 0;
    return static_cast<std::size_t>(
        std::count_if(t->second.begin(), t->second.end(), [](const auto& j) { return j.second > 0; }));
}

std::vector<int> Qrels::topics() const {
    std::vector<int> out;
    for (const auto& entry : judgments) out.push_back(entry.first);
    return out;
}

std::size_t Qrels::size() const {
    std::size_t n = 0;
    for (const auto& entry : judgments) n += entry.second.size();
    return n;
}

Qrels parse_qrels_text(std::string_view content, const std::string& source) {
    Qrels qrels;
    for_each_line(content, [&](std::size_t line_no, std::string_view line) {
        auto fields = split_ws(line);
        if (fields.empty()) return;
        if (fields.size() != 4) {
            throw ParseError(source, line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        }
        int topic = 0;
        int rel = 0;
        if (!parse_number(fields[0], topic)) throw ParseError(source, line_no, "bad topic '" + std::string(fields[0]) + "'");
        if (!parse_number(fields[3], rel)) throw ParseError(source, line_no, "bad relevance '" + std::string(fields[3]) + "'");
        auto [it, inserted] = qrels.judgments[topic].insert_or_assign(std::string(fields[2]), rel > 0 ? 1 : 0);
        if (!inserted) spdlog::warn("{}:{}: repeated judgment for {} {}; keeping the last", source, line_no, topic, it->first);
    });
    return qrels;
}

Qrels parse_qrels(const std::filesystem::path& path) {
    return parse_qrels_text(read_file(path), path.string());
}

std::string format_run(const RunResults& results, std::string_view run_tag) {
    std::string out;
    for (const auto& [topic, hits] : results) {
        for (const ScoredHit& hit : hits) {
            out += fmt::format("{} Q0 {} {} {:.6f} {}\n", topic, hit.docno, hit.rank, hit.score, run_tag);
        }
    }
    return out;
}

void write_run(const RunResults& results, std::string_view run_tag, const std::filesystem::path& path) {
    const std::string text = format_run(results, run_tag);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write run file " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

ParsedRun parse_run_text(std::string_view content, const std::string& source) {
    ParsedRun run;
    for_each_line(content, [&](std::size_t line_no, std::string_view line) {
        auto fields = split_ws(line);
        if (fields.empty()) return;
        if (fields.size() != 6) {
            throw ParseError(source, line_no, "expected 6 fields, found " + std::to_string(fields.size()));
        }
        RunEntry entry;
        if (!parse_number(fields[0], entry.topic)) throw ParseError(source, line_no, "bad topic");
        if (!parse_number(fields[3], entry.rank)) throw ParseError(source, line_no, "bad rank");
        if (!parse_number(fields[4], entry.score)) throw ParseError(source, line_no, "bad score");
        entry.docno = std::string(fields[2]);
        entry.tag = std::string(fields[5]);
        run[entry.topic].push_back(std::move(entry));
    });
    for (auto& [topic, entries] : run) {
        std::stable_sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    }
    return run;
}

ParsedRun parse_run(const std::filesystem::path& path) {
    return parse_run_text(read_file(path), path.string());
}

}  // namespace wnsearch

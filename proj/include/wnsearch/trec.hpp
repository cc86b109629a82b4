#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wnsearch/index.hpp"

namespace wnsearch {

struct TrecDocument {
    std::string docno;
    std::string text;          // text-bearing sections joined by a single space
    std::string source;        // file the record came from
    std::uint64_t offset = 0;  // byte offset of "<DOC>" in that file
};

struct TrecParseOptions {
    bool strict = false;  // throw on malformed records instead of skipping them
    std::vector<std::string> text_tags{"HEADLINE", "TEXT"};
};

struct TrecParseStats {
    std::size_t documents = 0;
    std::size_t skipped = 0;  // malformed or duplicate records dropped in lenient mode
    std::size_t files = 0;
};

using TrecDocCallback = std::function<void(TrecDocument&&)>;

/// Streams `<DOC>` records from one buffer. In lenient mode, records without
/// a DOCNO, unbalanced records and duplicate docnos are skipped with a
/// warning; in strict mode they raise ParseError with the byte offset.
/// `seen` carries docnos across calls so uniqueness holds over a collection.
void parse_trec_buffer(std::string_view content, const std::string& source, const TrecParseOptions& options,
                       std::set<std::string>& seen, const TrecDocCallback& emit, TrecParseStats& stats);

/// `path` may be a file or a directory; directories are walked recursively
/// in lexicographic path order, skipping dot files.
TrecParseStats for_each_trec_doc(const std::filesystem::path& path, const TrecParseOptions& options,
                                 const TrecDocCallback& emit);
std::vector<TrecDocument> parse_trec_docs(const std::filesystem::path& path, const TrecParseOptions& options = {},
                                          TrecParseStats* stats = nullptr);

/// Tags stripped, entities decoded, whitespace collapsed.
std::string clean_sgml_text(std::string_view markup);

struct Topic {
    int number = 0;
    std::string title;
    std::string description;
    std::string narrative;
};

/// TREC `<top>` blocks. Throws ParseError (byte offset) on a block without
/// `<num>` or title, or a repeated topic number.
std::vector<Topic> parse_topics_text(std::string_view content, const std::string& source = "<topics>");
std::vector<Topic> parse_topics(const std::filesystem::path& path);

/// Binary relevance judgments.
struct Qrels {
    std::map<int, std::map<std::string, int>> judgments;

    int relevance(int topic, const std::string& docno) const;
    std::set<std::string> relevant(int topic) const;
    std::size_t num_relevant(int topic) const;
    std::vector<int> topics() const;
    std::size_t size() const;
};

/// Lines "topic iteration docno rel". rel > 0 counts as relevant. A repeated
/// (topic, docno) pair keeps the last value. Throws ParseError (line number).
Qrels parse_qrels_text(std::string_view content, const std::string& source = "<qrels>");
Qrels parse_qrels(const std::filesystem::path& path);

/// Ranked hits per topic.
using RunResults = std::map<int, std::vector<ScoredHit>>;

struct RunEntry {
    int topic = 0;
    std::string docno;
    std::size_t rank = 0;
    double score = 0.0;
    std::string tag;
};

/// Per topic, entries in rank order.
using ParsedRun = std::map<int, std::vector<RunEntry>>;

/// "topic Q0 docno rank score tag" lines, topics ascending, score to six
/// decimal places.
std::string format_run(const RunResults& results, std::string_view run_tag);
void write_run(const RunResults& results, std::string_view run_tag, const std::filesystem::path& path);

ParsedRun parse_run_text(std::string_view content, const std::string& source = "<run>");
ParsedRun parse_run(const std::filesystem::path& path);

/// Whole-file read. Throws IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace wnsearch

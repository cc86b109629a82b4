#include "wnsearch/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>

#include <fmt/format.h>

#include "wnsearch/error.hpp"
#include "wnsearch/eval.hpp"
#include "wnsearch/trec.hpp"

namespace wnsearch {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kBuildBatch = 512;

std::string pos_order_string(const std::vector<Pos>& order) {
    std::string s;
    for (Pos p : order) {
        if (!s.empty()) s += ",";
        s += pos_letter(p);
    }
    return s;
}

unsigned parse_unsigned(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        unsigned long v = std::stoul(value, &used);
        if (used == value.size()) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw IndexFormatError("index metadata '" + key + "' has bad value '" + value + "'");
}

void require_path(const fs::path& path, const std::string& flag) {
    if (path.empty()) throw ConfigError("missing " + flag);
}

void require_existing(const fs::path& path, const std::string& flag) {
    require_path(path, flag);
    std::error_code ec;
    if (!fs::exists(path, ec)) throw ConfigError(flag + " path does not exist: " + path.string());
}

// Writes to config.out when set, to `fallback` otherwise.
class Output {
public:
    Output(const fs::path& path, std::ostream& fallback) : path_(path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw IoError("cannot write " + path.string());
        }
        stream_ = file_ ? file_.get() : &fallback;
    }
    std::ostream& stream() { return *stream_; }
    void close() {
        if (file_) {
            file_->close();
            if (!*file_) throw IoError("write failed for " + path_.string());
        }
    }

private:
    fs::path path_;
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

struct Context {
    PipelineOptions options;
    std::unique_ptr<Lexicon> lexicon;
    std::unique_ptr<StopWords> stopwords;
    std::unique_ptr<Annotator> annotator;
};

Context make_context(const Config& config, const Index* index) {
    Context ctx;
    ctx.options = pipeline_options(config, index);
    if (ctx.options.strategy.name != StrategyName::lexical) {
        ctx.lexicon = std::make_unique<Lexicon>(load_lexicon(resolve_dict_dir(config)));
    }
    ctx.stopwords = std::make_unique<StopWords>(config.stopwords.empty() ? StopWords::english()
                                                                         : StopWords::from_file(config.stopwords));
    ctx.annotator = std::make_unique<Annotator>(ctx.lexicon.get(), ctx.options, *ctx.stopwords);
    return ctx;
}

std::string run_name(const ParsedRun& run, const fs::path& path) {
    for (const auto& entry : run) {
        if (!entry.second.empty() && !entry.second.front().tag.empty()) return entry.second.front().tag;
    }
    return path.stem().string();
}

}  // namespace

fs::path resolve_dict_dir(const Config& config) {
    fs::path dir = config.dict_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("WORDNET_DICT"); env && *env) dir = env;
    }
    if (dir.empty()) throw ConfigError("no WordNet dictionary: pass --dict or set WORDNET_DICT");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw ConfigError("WordNet dictionary directory not found: " + dir.string());
    return dir;
}

PipelineOptions pipeline_options(const Config& config, const Index* index) {
    PipelineOptions options;
    if (index) {
        const auto& meta = index->metadata;
        if (auto it = meta.find("strategy"); it != meta.end()) options.strategy.name = parse_strategy(it->second);
        if (auto it = meta.find("hypernym_depth"); it != meta.end() && it->second != "unlimited") {
            options.strategy.hypernym_depth = parse_unsigned(it->first, it->second);
        }
        if (auto it = meta.find("hyponym_depth"); it != meta.end()) {
            options.strategy.hyponym_depth = parse_unsigned(it->first, it->second);
        }
        if (auto it = meta.find("window"); it != meta.end()) options.window = parse_unsigned(it->first, it->second);
        if (auto it = meta.find("pos_order"); it != meta.end()) options.pos_order = parse_pos_order(it->second);
        if (config.strategy && meta.contains("strategy") && *config.strategy != options.strategy.name) {
            throw ConfigError("index was built with " + std::string(strategy_label(options.strategy.name)) +
                              ", not " + std::string(strategy_label(*config.strategy)));
        }
    }
    if (config.strategy) options.strategy.name = *config.strategy;
    if (config.hypernym_depth) {
        if (*config.hypernym_depth == 0) throw ConfigError("--hyper-depth must be positive");
        options.strategy.hypernym_depth = config.hypernym_depth;
    }
    if (config.hyponym_depth) options.strategy.hyponym_depth = *config.hyponym_depth;
    if (config.window) options.window = *config.window;
    if (config.pos_order) options.pos_order = parse_pos_order(*config.pos_order);
    return options;
}

void cmd_build_index(const Config& config, std::ostream& out, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    if (config.corpus.empty()) throw ConfigError("missing --corpus");
    for (const fs::path& p : config.corpus) require_existing(p, "--corpus");
    require_path(config.index_path, "--index");

    Context ctx = make_context(config, nullptr);
    IndexBuilder builder;
    const Strategy& strategy = ctx.options.strategy;
    builder.set_metadata("strategy", std::string(strategy_label(strategy.name)));
    builder.set_metadata("hypernym_depth",
                         strategy.hypernym_depth ? std::to_string(*strategy.hypernym_depth) : "unlimited");
    builder.set_metadata("hyponym_depth", std::to_string(strategy.hyponym_depth));
    builder.set_metadata("window", std::to_string(ctx.options.window));
    builder.set_metadata("pos_order", pos_order_string(ctx.options.pos_order));

    std::vector<std::string> docnos;
    std::vector<std::string> texts;
    auto flush = [&] {
        std::vector<TermBag> bags = expand_documents(*ctx.annotator, texts);
        for (std::size_t i = 0; i < bags.size(); ++i) builder.add(docnos[i], bags[i]);
        log << "\rexpanded " << builder.size() << " documents" << std::flush;
        docnos.clear();
        texts.clear();
    };
    TrecParseOptions parse_options;
    parse_options.strict = config.strict;
    std::size_t skipped = 0;
    for (const fs::path& p : config.corpus) {
        auto stats = for_each_trec_doc(p, parse_options, [&](TrecDocument&& doc) {
            docnos.push_back(std::move(doc.docno));
            texts.push_back(std::move(doc.text));
            if (texts.size() == kBuildBatch) flush();
        });
        skipped += stats.skipped;
    }
    if (!texts.empty()) flush();
    log << "\n";

    Index index = builder.finish();
    persist_index(index, config.index_path);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out << fmt::format("documents: {}\nvocabulary: {}\nskipped records: {}\nelapsed: {:.2f} s\n", index.n_docs(),
                       index.vocab.size(), skipped, elapsed);
}

void cmd_search(const Config& config, const std::string& query, std::ostream& out) {
    require_existing(config.index_path, "--index");
    const Index index = load_index(config.index_path);
    Context ctx = make_context(config, &index);
    const TermBag bag = ctx.annotator->annotate_query(query);
    for (const ScoredHit& hit : search(index, bag, config.k)) {
        out << fmt::format("{} {} {:.6f}\n", hit.rank, hit.docno, hit.score);
    }
}

void cmd_run(const Config& config, std::ostream& out, std::ostream& log) {
    require_existing(config.index_path, "--index");
    require_existing(config.topics, "--topics");
    if (!config.overrides.empty()) require_existing(config.overrides, "--overrides");

    const std::vector<Topic> topics = parse_topics(config.topics);
    const OverrideTable overrides = config.overrides.empty() ? OverrideTable{} : load_overrides(config.overrides);
    const Index index = load_index(config.index_path);
    Context ctx = make_context(config, &index);

    std::vector<TermBag> queries;
    queries.reserve(topics.size());
    static const QueryOverrides kNone;
    for (const Topic& topic : topics) {
        auto it = overrides.find(topic.number);
        queries.push_back(ctx.annotator->annotate_query(topic.title, it == overrides.end() ? kNone : it->second));
    }
    for (const auto& entry : overrides) {
        bool known = std::any_of(topics.begin(), topics.end(), [&](const Topic& t) { return t.number == entry.first; });
        if (!known) log << "warning: overrides name unknown topic " << entry.first << "\n";
    }

    auto hits = search_batch(index, queries, config.k);
    RunResults results;
    for (std::size_t i = 0; i < topics.size(); ++i) results[topics[i].number] = std::move(hits[i]);
    Output sink(config.out, out);
    sink.stream() << format_run(results, strategy_label(ctx.options.strategy.name));
    sink.close();
    log << "ran " << topics.size() << " topics\n";
}

void cmd_eval(const Config& config, const std::vector<fs::path>& run_paths, std::ostream& out) {
    if (run_paths.empty()) throw ConfigError("no run files given");
    require_existing(config.qrels, "--qrels");
    for (const fs::path& p : run_paths) require_existing(p, "run");
    const Qrels qrels = parse_qrels(config.qrels);

    std::vector<ParsedRun> runs;
    for (const fs::path& p : run_paths) runs.push_back(parse_run(p));

    std::vector<std::pair<std::string, EvalReport>> reports;
    if (runs.size() == 1) {
        reports.emplace_back(run_name(runs[0], run_paths[0]), evaluate_run(runs[0], qrels, config.depth));
    } else {
        std::vector<const ParsedRun*> pointers;
        for (const ParsedRun& r : runs) pointers.push_back(&r);
        const std::vector<int> topics = shared_topics(qrels, pointers);
        for (std::size_t i = 0; i < runs.size(); ++i) {
            reports.emplace_back(run_name(runs[i], run_paths[i]), evaluate_run(runs[i], qrels, config.depth, &topics));
        }
    }

    out << "Topics evaluated: " << reports.front().second.per_query.size() << "\n\n";
    out << format_recall_table(reports) << "\n" << format_map_table(reports);
    if (reports.size() > 1) {
        std::vector<SigTestRow> rows;
        const std::vector<double> base = ap_vector(reports.front().second);
        for (std::size_t i = 1; i < reports.size(); ++i) {
            rows.push_back(SigTestRow{reports.front().first, reports[i].first,
                                      randomization_test(base, ap_vector(reports[i].second), config.perms, config.seed)});
        }
        out << "\n" << format_sigtest_table(rows);
    }
    if (!config.out.empty()) {
        Output sink(config.out, out);
        for (const auto& [name, report] : reports) sink.stream() << format_per_query(report);
        sink.close();
    }
}

void cmd_sigtest(const Config& config, const fs::path& run_a, const fs::path& run_b, std::ostream& out) {
    require_existing(config.qrels, "--qrels");
    require_existing(run_a, "run A");
    require_existing(run_b, "run B");
    const Qrels qrels = parse_qrels(config.qrels);
    const ParsedRun a = parse_run(run_a);
    const ParsedRun b = parse_run(run_b);
    const ParsedRun* pointers[] = {&a, &b};
    const std::vector<int> topics = shared_topics(qrels, pointers);
    const EvalReport ra = evaluate_run(a, qrels, config.depth, &topics);
    const EvalReport rb = evaluate_run(b, qrels, config.depth, &topics);
    const RandTestResult r = randomization_test(ap_vector(ra), ap_vector(rb), config.perms, config.seed);

    out << fmt::format("topics: {}\nMAP(A): {:.4f}\nMAP(B): {:.4f}\n", topics.size(), ra.map, rb.map);
    out << fmt::format("observed difference: {:.4f}\nN-: {}\nN+: {}\npermutations: {}{}\np (two-sided): {:.5f}\n",
                       r.observed_diff, r.n_minus, r.n_plus, r.n_perms, r.exhaustive ? " (exhaustive)" : "",
                       r.p_two_sided);
    out << (r.p_two_sided < kSignificanceLevel ? "significant" : "not significant") << " at the 0.05 level\n";
}

void cmd_vocab(const Config& config, std::ostream& out) {
    require_existing(config.index_path, "--index");
    const Index index = load_index(config.index_path);
    for (const TermInfo& t : index.vocab) out << t.key << '\t' << t.df << '\n';
}

int run_command(const std::function<void()>& fn, std::ostream& err) {
    try {
        fn();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
}

}  // namespace wnsearch

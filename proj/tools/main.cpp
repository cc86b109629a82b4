// wnsearch: build WordNet-expanded indexes, run TREC topics, evaluate runs.

#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "wnsearch/commands.hpp"
#include "wnsearch/error.hpp"
#include "wnsearch/parallel.hpp"

int main(int argc, char** argv) {
    using namespace wnsearch;

    spdlog::set_default_logger(spdlog::stderr_color_mt("wnsearch"));

    CLI::App app{"WordNet-based semantic search over TREC collections"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from an INI/TOML file (key = value)");

    Config config;
    std::string strategy;
    std::string dict;
    int threads = 0;
    bool quiet = false;

    app.add_option("--dict", dict, "WordNet dict directory (default: $WORDNET_DICT)");
    app.add_option("--strategy", strategy,
                   "Lexical, QE_Syn, QE_Syn_Hypo, DE_Syn, DE_Syn_Hyper, DE_Id_Hyper or DE_MscHyper");
    app.add_option("--index", config.index_path, "Index file");
    app.add_option("--corpus", config.corpus, "TREC document file or directory (repeatable)");
    app.add_option("--topics", config.topics, "TREC topic file");
    app.add_option("--qrels", config.qrels, "TREC relevance judgments");
    app.add_option("--overrides", config.overrides, "Manual query sense annotations");
    app.add_option("--k", config.k, "Results per query")->check(CLI::PositiveNumber);
    app.add_option("--perms", config.perms, "Randomization test permutations")->check(CLI::PositiveNumber);
    app.add_option("--seed", config.seed, "Randomization test seed");
    app.add_option("--hyper-depth", config.hypernym_depth, "Hypernym levels to expand (default: all)");
    app.add_option("--hypo-depth", config.hyponym_depth, "Hyponym levels for QE_Syn_Hypo (default: 1)");
    app.add_option("--window", config.window, "Content words on each side used as WSD context (default: 10)");
    app.add_option("--pos-order", config.pos_order, "Part-of-speech lookup order (default: n,v,a,r)");
    app.add_option("--stopwords", config.stopwords, "Stop-word list, one per line");
    app.add_option("--depth", config.depth, "Evaluation depth per topic")->check(CLI::PositiveNumber);
    app.add_option("--out", config.out, "Output file (default: standard output)");
    app.add_option("--threads", threads, "Worker threads (default: all cores)");
    app.add_flag("--strict", config.strict, "Fail on malformed TREC records instead of skipping them");
    app.add_flag("--quiet", quiet, "Only log errors");

    auto* build = app.add_subcommand("build", "Expand a TREC collection and write an index");
    auto* search = app.add_subcommand("search", "Search an index with free text");
    std::vector<std::string> query_words;
    search->add_option("query", query_words, "Query text")->required();
    auto* run = app.add_subcommand("run", "Run every topic title against an index and write a TREC run");
    auto* eval = app.add_subcommand("eval", "Evaluate one or more runs against qrels");
    std::vector<std::filesystem::path> run_files;
    eval->add_option("runs", run_files, "Run files; the first is compared with the others")->required();
    auto* sigtest = app.add_subcommand("sigtest", "Randomization test between two runs");
    std::filesystem::path run_a;
    std::filesystem::path run_b;
    sigtest->add_option("run_a", run_a, "Run A")->required();
    sigtest->add_option("run_b", run_b, "Run B")->required();
    auto* vocab = app.add_subcommand("vocab", "Print the index vocabulary with document frequencies");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? kExitOk : kExitUsageError;
    }

    if (quiet) spdlog::set_level(spdlog::level::err);
    parallel::set_threads(threads);

    return run_command(
        [&] {
            config.dict_dir = dict;
            if (!strategy.empty()) config.strategy = parse_strategy(strategy);
            if (build->parsed()) {
                cmd_build_index(config, std::cout, std::cerr);
            } else if (search->parsed()) {
                std::string query = std::accumulate(query_words.begin(), query_words.end(), std::string{},
                                                    [](std::string acc, const std::string& w) {
                                                        return acc.empty() ? w : acc + " " + w;
                                                    });
                cmd_search(config, query, std::cout);
            } else if (run->parsed()) {
                cmd_run(config, std::cout, std::cerr);
            } else if (eval->parsed()) {
                cmd_eval(config, run_files, std::cout);
            } else if (sigtest->parsed()) {
                cmd_sigtest(config, run_a, run_b, std::cout);
            } else if (vocab->parsed()) {
                cmd_vocab(config, std::cout);
            }
        },
        std::cerr);
}

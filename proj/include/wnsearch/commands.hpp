#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wnsearch/index.hpp"
#include "wnsearch/pipeline.hpp"

namespace wnsearch {

/// Settings shared by the command-line subcommands. Unset optionals take
/// their value from the index metadata (search, run) or the built-in
/// defaults (build).
struct Config {
    std::filesystem::path dict_dir;  // empty: WORDNET_DICT
    std::optional<StrategyName> strategy;
    std::optional<unsigned> hypernym_depth;
    std::optional<unsigned> hyponym_depth;
    std::optional<unsigned> window;
    std::optional<std::string> pos_order;
    std::filesystem::path stopwords;  // empty: bundled list
    std::filesystem::path index_path;
    std::vector<std::filesystem::path> corpus;
    std::filesystem::path topics;
    std::filesystem::path qrels;
    std::filesystem::path overrides;
    std::filesystem::path out;  // empty: standard output
    std::size_t k = 1000;
    std::uint64_t perms = 100000;
    std::uint64_t seed = 20080101;
    std::size_t depth = 1000;
    bool strict = false;
};

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// The dictionary directory to use: --dict, else WORDNET_DICT. Throws
/// ConfigError when neither names an existing directory.
std::filesystem::path resolve_dict_dir(const Config& config);

/// Strategy, depths, window and pos order recorded in an index, overlaid
/// with any explicit settings in `config`. Throws ConfigError when the
/// configured strategy differs from the one the index was built with.
PipelineOptions pipeline_options(const Config& config, const Index* index);

/// Each command writes results to `out` (or config.out) and progress to
/// `log`, and throws on failure; run_command maps exceptions to statuses.
void cmd_build_index(const Config& config, std::ostream& out, std::ostream& log);
void cmd_search(const Config& config, const std::string& query, std::ostream& out);
void cmd_run(const Config& config, std::ostream& out, std::ostream& log);
/// One run: recall and MAP tables. Several runs: also the first run's
/// randomization tests against each of the others.
void cmd_eval(const Config& config, const std::vector<std::filesystem::path>& runs, std::ostream& out);
void cmd_sigtest(const Config& config, const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                 std::ostream& out);
void cmd_vocab(const Config& config, std::ostream& out);

/// Runs `fn`, printing any error to `err`. Returns kExitUsageError for
/// configuration and argument errors, kExitDomainError for other failures.
int run_command(const std::function<void()>& fn, std::ostream& err);

}  // namespace wnsearch

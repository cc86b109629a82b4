#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wnsearch/trec.hpp"

namespace wnsearch {

inline constexpr std::size_t kRecallLevels = 11;
using RecallCurve = std::array<double, kRecallLevels>;

/// Sum of precision@r over the ranks r holding a relevant document, divided
/// by |relevant|. Repeated docnos count once. Throws ArgumentError if
/// `relevant` is empty.
double average_precision(std::span<const std::string> ranking, const std::set<std::string>& relevant);

/// Interpolated precision at recall 0.0, 0.1, ..., 1.0: the best precision
/// at any cutoff whose recall reaches the level, 0 if none does.
RecallCurve interpolated_precision_11pt(std::span<const std::string> ranking, const std::set<std::string>& relevant);

/// 2pr / (p + r), 0 when both are 0.
double f_measure(double p, double r) noexcept;

struct QueryEval {
    int topic = 0;
    double ap = 0.0;
    RecallCurve interp_precision{};
    std::size_t num_relevant = 0;
    std::size_t num_retrieved = 0;
};

/// Throws ArgumentError on an empty list.
double mean_average_precision(std::span<const QueryEval> per_query);

enum class RandTestMode {
    automatic,   // enumerate when 2^n <= n_perms, sample otherwise
    exhaustive,  // always enumerate (n <= 30)
    sampled,     // always sample n_perms assignments
};

struct RandTestResult {
    double observed_diff = 0.0;  // mean(a) - mean(b)
    std::uint64_t n_minus = 0;   // assignments with diff <= -|observed|
    std::uint64_t n_plus = 0;    // assignments with diff >= +|observed|
    std::uint64_t n_perms = 0;
    double p_two_sided = 1.0;    // (n_minus + n_plus) / n_perms
    bool exhaustive = false;
};

/// Paired randomization test on per-topic scores. Each assignment swaps
/// a[i] and b[i] independently with probability 1/2. Sampling runs in fixed
/// blocks seeded from (seed, block), so the parallel and serial versions
/// return identical counts for the same seed.
/// Throws ArgumentError on empty or mismatched inputs or n_perms == 0.
RandTestResult randomization_test(std::span<const double> ap_a, std::span<const double> ap_b, std::uint64_t n_perms,
                                  std::uint64_t seed, RandTestMode mode = RandTestMode::automatic);
RandTestResult randomization_test_serial(std::span<const double> ap_a, std::span<const double> ap_b,
                                         std::uint64_t n_perms, std::uint64_t seed,
                                         RandTestMode mode = RandTestMode::automatic);

inline constexpr std::size_t kDefaultEvalDepth = 1000;
inline constexpr double kSignificanceLevel = 0.05;

struct EvalReport {
    std::vector<QueryEval> per_query;  // topic order
    double map = 0.0;
    RecallCurve mean_precision{};  // per-level average of interpolated precision
    RecallCurve mean_f{};          // per-level average of f_measure(P_interp(r), r)
    std::vector<int> excluded;     // run topics without relevant judgments
};

/// Evaluates each run topic that has at least one relevant judgment;
/// rankings are cut at `depth`. When `topics` is given, exactly those topics
/// are evaluated and a topic missing from the run scores 0.
/// Throws ArgumentError when no topic can be evaluated.
EvalReport evaluate_run(const ParsedRun& run, const Qrels& qrels, std::size_t depth = kDefaultEvalDepth,
                        const std::vector<int>* topics = nullptr);

/// Topics judged with at least one relevant document that appear in any of
/// the runs, ascending.
std::vector<int> shared_topics(const Qrels& qrels, std::span<const ParsedRun* const> runs);

/// Per-topic AP in the report's topic order.
std::vector<double> ap_vector(const EvalReport& report);

/// (a - b) / b.
double improvement(double a, double b);

/// Precision and F-measure percentages at each recall level, one row per run.
std::string format_recall_table(std::span<const std::pair<std::string, EvalReport>> runs);
/// MAP per run, with the first run's improvement over each of the others.
std::string format_map_table(std::span<const std::pair<std::string, EvalReport>> runs);

struct SigTestRow {
    std::string model_a;
    std::string model_b;
    RandTestResult result;
};
/// Observed MAP difference, N-, N+, two-sided p, and a "significant" flag
/// for p < 0.05.
std::string format_sigtest_table(std::span<const SigTestRow> rows);

/// One line per topic: "topic ap p@0 p@10 ... p@100".
std::string format_per_query(const EvalReport& report);

}  // namespace wnsearch

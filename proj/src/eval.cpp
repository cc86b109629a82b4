#include "wnsearch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wnsearch/error.hpp"
#include "wnsearch/parallel.hpp"

namespace wnsearch {

namespace {

// Relevance flag per rank, repeated docnos dropped.
std::vector<bool> judged_ranking(std::span<const std::string> ranking, const std::set<std::string>& relevant) {
    if (relevant.empty()) throw ArgumentError("relevant set is empty");
    std::vector<bool> flags;
    flags.reserve(ranking.size());
    std::unordered_set<std::string_view> seen;
    for (const std::string& docno : ranking) {
        if (!seen.insert(docno).second) continue;
        flags.push_back(relevant.contains(docno));
    }
    return flags;
}

}  // namespace

double average_precision(std::span<const std::string> ranking, const std::set<std::string>& relevant) {
    const std::vector<bool> flags = judged_ranking(ranking, relevant);
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < flags.size(); ++r) {
        if (!flags[r]) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    return sum / static_cast<double>(relevant.size());
}

RecallCurve interpolated_precision_11pt(std::span<const std::string> ranking, const std::set<std::string>& relevant) {
    const std::vector<bool> flags = judged_ranking(ranking, relevant);
    const std::size_t total = relevant.size();
    RecallCurve curve{};
    std::size_t hits = 0;
    for (std::size_t r = 0; r < flags.size(); ++r) {
        if (flags[r]) ++hits;
        const double precision = static_cast<double>(hits) / static_cast<double>(r + 1);
        // Recall level i/10 is reached when hits / total >= i / 10.
        for (std::size_t i = 0; i < kRecallLevels; ++i) {
            if (hits * 10 >= i * total) curve[i] = std::max(curve[i], precision);
        }
    }
    return curve;
}

double f_measure(double p, double r) noexcept {
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double mean_average_precision(std::span<const QueryEval> per_query) {
    if (per_query.empty()) throw ArgumentError("no queries to average");
    double sum = 0.0;
    for (const QueryEval& q : per_query) sum += q.ap;
    return sum / static_cast<double>(per_query.size());
}

// ---------------------------------------------------------------------------
// Randomization test

namespace {

constexpr std::uint64_t kPermBlock = 4096;
constexpr double kTieEpsilon = 1e-12;

struct Tally {
    std::uint64_t minus = 0;
    std::uint64_t plus = 0;
};

struct PermProblem {
    std::vector<double> diffs;  // a[i] - b[i]
    double observed = 0.0;
    double bound = 0.0;  // |observed|
    std::uint64_t n_perms = 0;
    std::uint64_t seed = 0;
    bool exhaustive = false;

    void classify(double sum, Tally& t) const {
        const double diff = sum / static_cast<double>(diffs.size());
        if (diff >= bound - kTieEpsilon) {
            ++t.plus;
        } else if (diff <= -bound + kTieEpsilon) {
            ++t.minus;
        }
    }

    std::uint64_t blocks() const { return (n_perms + kPermBlock - 1) / kPermBlock; }

    Tally run_block(std::uint64_t block) const {
        Tally t;
        const std::uint64_t begin = block * kPermBlock;
        const std::uint64_t end = std::min(n_perms, begin + kPermBlock);
        const std::size_t n = diffs.size();
        if (exhaustive) {
            // Bit i of the assignment swaps topic i.
            for (std::uint64_t mask = begin; mask < end; ++mask) {
                double sum = 0.0;
                for (std::size_t i = 0; i < n; ++i) sum += (mask >> i) & 1 ? -diffs[i] : diffs[i];
                classify(sum, t);
            }
            return t;
        }
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
        std::mt19937_64 rng(seq);
        for (std::uint64_t k = begin; k < end; ++k) {
            double sum = 0.0;
            std::uint64_t bits = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i % 64 == 0) bits = rng();
                sum += (bits >> (i % 64)) & 1 ? -diffs[i] : diffs[i];
            }
            classify(sum, t);
        }
        return t;
    }

    RandTestResult finish(const Tally& t) const {
        RandTestResult r;
        r.observed_diff = observed;
        r.n_minus = t.minus;
        r.n_plus = t.plus;
        r.n_perms = n_perms;
        r.p_two_sided = static_cast<double>(t.minus + t.plus) / static_cast<double>(n_perms);
        r.exhaustive = exhaustive;
        return r;
    }
};

PermProblem make_problem(std::span<const double> a, std::span<const double> b, std::uint64_t n_perms,
                         std::uint64_t seed, RandTestMode mode) {
    if (a.size() != b.size()) {
        throw ArgumentError("score vectors differ in length (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
    }
    if (a.empty()) throw ArgumentError("randomization test needs at least one topic");
    if (n_perms == 0) throw ArgumentError("number of permutations must be positive");

    PermProblem p;
    p.seed = seed;
    p.diffs.resize(a.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        p.diffs[i] = a[i] - b[i];
        sum += p.diffs[i];
    }
    p.observed = sum / static_cast<double>(a.size());
    p.bound = std::fabs(p.observed);

    const std::size_t n = a.size();
    const bool fits = n < 64 && (std::uint64_t{1} << n) <= n_perms;
    switch (mode) {
    case RandTestMode::automatic: p.exhaustive = fits; break;
    case RandTestMode::exhaustive:
        if (n > 30) throw ArgumentError("exhaustive enumeration limited to 30 topics, got " + std::to_string(n));
        p.exhaustive = true;
        break;
    case RandTestMode::sampled: p.exhaustive = false; break;
    }
    p.n_perms = p.exhaustive ? std::uint64_t{1} << n : n_perms;
    return p;
}

}  // namespace

RandTestResult randomization_test(std::span<const double> ap_a, std::span<const double> ap_b, std::uint64_t n_perms,
                                  std::uint64_t seed, RandTestMode mode) {
    const PermProblem problem = make_problem(ap_a, ap_b, n_perms, seed, mode);
    std::vector<Tally> tallies(problem.blocks());
    parallel::for_each_index(tallies.size(), [&](std::size_t b) { tallies[b] = problem.run_block(b); });
    Tally total;
    for (const Tally& t : tallies) {
        total.minus += t.minus;
        total.plus += t.plus;
    }
    return problem.finish(total);
}

RandTestResult randomization_test_serial(std::span<const double> ap_a, std::span<const double> ap_b,
                                         std::uint64_t n_perms, std::uint64_t seed, RandTestMode mode) {
    const PermProblem problem = make_problem(ap_a, ap_b, n_perms, seed, mode);
    Tally total;
    for (std::uint64_t b = 0; b < problem.blocks(); ++b) {
        Tally t = problem.run_block(b);
        total.minus += t.minus;
        total.plus += t.plus;
    }
    return problem.finish(total);
}

// ---------------------------------------------------------------------------
// Run evaluation

EvalReport evaluate_run(const ParsedRun& run, const Qrels& qrels, std::size_t depth, const std::vector<int>* topics) {
    std::vector<int> selected;
    EvalReport report;
    if (topics) {
        selected = *topics;
        std::sort(selected.begin(), selected.end());
        selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    } else {
        for (const auto& entry : run) {
            if (qrels.num_relevant(entry.first) > 0) {
                selected.push_back(entry.first);
            } else {
                report.excluded.push_back(entry.first);
            }
        }
        if (!report.excluded.empty()) {
            spdlog::warn("{} run topic(s) have no relevant judgments and are not evaluated", report.excluded.size());
        }
    }

    for (int topic : selected) {
        const std::set<std::string> relevant = qrels.relevant(topic);
        if (relevant.empty()) throw ArgumentError("topic " + std::to_string(topic) + " has no relevant judgments");
        std::vector<std::string> ranking;
        if (auto it = run.find(topic); it != run.end()) {
            for (const RunEntry& e : it->second) {
                if (ranking.size() == depth) break;
                ranking.push_back(e.docno);
            }
        }
        QueryEval q;
        q.topic = topic;
        q.ap = average_precision(ranking, relevant);
        q.interp_precision = interpolated_precision_11pt(ranking, relevant);
        q.num_relevant = relevant.size();
        q.num_retrieved = ranking.size();
        report.per_query.push_back(q);
    }
    if (report.per_query.empty()) throw ArgumentError("run and judgments share no evaluable topic");

    report.map = mean_average_precision(report.per_query);
    const double n = static_cast<double>(report.per_query.size());
    for (std::size_t i = 0; i < kRecallLevels; ++i) {
        const double level = static_cast<double>(i) / 10.0;
        double p_sum = 0.0;
        double f_sum = 0.0;
        for (const QueryEval& q : report.per_query) {
            p_sum += q.interp_precision[i];
            f_sum += f_measure(q.interp_precision[i], level);
        }
        report.mean_precision[i] = p_sum / n;
        report.mean_f[i] = f_sum / n;
    }
    return report;
}

std::vector<int> shared_topics(const Qrels& qrels, std::span<const ParsedRun* const> runs) {
    std::set<int> topics;
    for (const ParsedRun* run : runs) {
        for (const auto& entry : *run) {
            if (qrels.num_relevant(entry.first) > 0) topics.insert(entry.first);
        }
    }
    return {topics.begin(), topics.end()};
}

std::vector<double> ap_vector(const EvalReport& report) {
    std::vector<double> out;
    out.reserve(report.per_query.size());
    for (const QueryEval& q : report.per_query) out.push_back(q.ap);
    return out;
}

double improvement(double a, double b) {
    if (b == 0.0) throw ArgumentError("improvement over a zero baseline is undefined");
    return (a - b) / b;
}

std::string format_recall_table(std::span<const std::pair<std::string, EvalReport>> runs) {
    std::size_t width = 5;
    for (const auto& run : runs) width = std::max(width, run.first.size());
    std::string out = fmt::format("{:<14}{:<{}}", "Measure", "Model", width + 2);
    for (std::size_t i = 0; i < kRecallLevels; ++i) out += fmt::format("{:>7}", i * 10);
    out += "\n";
    auto block = [&](std::string_view measure, auto curve_of) {
        bool first = true;
        for (const auto& [name, report] : runs) {
            out += fmt::format("{:<14}{:<{}}", first ? measure : "", name, width + 2);
            for (double v : curve_of(report)) out += fmt::format("{:>7.1f}", 100.0 * v);
            out += "\n";
            first = false;
        }
    };
    block("Precision(%)", [](const EvalReport& r) { return r.mean_precision; });
    block("F-measure(%)", [](const EvalReport& r) { return r.mean_f; });
    return out;
}

std::string format_map_table(std::span<const std::pair<std::string, EvalReport>> runs) {
    std::string header = fmt::format("{:<12}", "Model");
    std::string maps = fmt::format("{:<12}", "MAP");
    std::string gains = fmt::format("{:<12}", "Improvement");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::size_t w = std::max<std::size_t>(runs[i].first.size(), 8) + 2;
        header += fmt::format("{:>{}}", runs[i].first, w);
        maps += fmt::format("{:>{}.4f}", runs[i].second.map, w);
        std::string gain;
        if (i > 0 && runs[i].second.map > 0.0) {
            gain = fmt::format("{:.1f}%", 100.0 * improvement(runs[0].second.map, runs[i].second.map));
        }
        gains += fmt::format("{:>{}}", gain, w);
    }
    return header + "\n" + maps + "\n" + gains + "\n";
}

std::string format_sigtest_table(std::span<const SigTestRow> rows) {
    std::size_t wa = 7;
    std::size_t wb = 7;
    for (const SigTestRow& r : rows) {
        wa = std::max(wa, r.model_a.size());
        wb = std::max(wb, r.model_b.size());
    }
    std::string out = fmt::format("{:<{}}  {:<{}}  {:>15}  {:>8}  {:>8}  {:>10}\n", "Model A", wa, "Model B", wb,
                                  "MAP(A)-MAP(B)", "N-", "N+", "p");
    for (const SigTestRow& r : rows) {
        out += fmt::format("{:<{}}  {:<{}}  {:>15.4f}  {:>8}  {:>8}  {:>10.5f}{}\n", r.model_a, wa, r.model_b, wb,
                           r.result.observed_diff, r.result.n_minus, r.result.n_plus, r.result.p_two_sided,
                           r.result.p_two_sided < kSignificanceLevel ? "  significant" : "");
    }
    return out;
}

std::string format_per_query(const EvalReport& report) {
    std::string out;
    for (const QueryEval& q : report.per_query) {
        out += fmt::format("{} {:.6f}", q.topic, q.ap);
        for (double p : q.interp_precision) out += fmt::format(" {:.6f}", p);
        out += "\n";
    }
    return out;
}

}  // namespace wnsearch

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wnsearch/pipeline.hpp"

namespace wnsearch {

struct Posting {
    std::uint32_t doc = 0;  // internal ordinal
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct TermInfo {
    std::string key;  // canonical term key
    std::uint32_t df = 0;

    friend bool operator==(const TermInfo&, const TermInfo&) = default;
};

struct ScoredHit {
    std::string docno;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based

    friend bool operator==(const ScoredHit&, const ScoredHit&) = default;
};

/// (1 + log10 tf); 0 for tf == 0.
double tf_weight(std::uint32_t tf) noexcept;
/// log10(n_docs / df).
double idf_weight(std::size_t n_docs, std::uint32_t df) noexcept;

/// Inverted index with ltc document weights. `vocab` is sorted by key and
/// `postings[i]` belongs to `vocab[i]`. Immutable once built; search is
/// safe to call concurrently.
struct Index {
    std::vector<TermInfo> vocab;
    std::vector<std::vector<Posting>> postings;
    std::vector<double> doc_norms;
    std::vector<std::string> doc_table;  // ordinal -> external docno
    std::map<std::string, std::string> metadata;

    std::size_t n_docs() const noexcept { return doc_table.size(); }
    std::optional<std::uint32_t> term_id(std::string_view key) const noexcept;
    double idf(std::uint32_t term) const noexcept { return idf_weight(n_docs(), vocab[term].df); }
    /// Weight of `term` in document `posting.doc`.
    double weight(std::uint32_t term, const Posting& posting) const noexcept {
        return tf_weight(posting.tf) * idf(term);
    }

    /// Throws IndexFormatError when a structural invariant does not hold.
    void validate() const;

    friend bool operator==(const Index&, const Index&) = default;
};

/// Streams documents into postings. Ordinals follow insertion order.
class IndexBuilder {
public:
    /// Throws BuildError for an empty or duplicate docno.
    void add(const std::string& docno, const TermBag& bag);
    /// Computes df, idf and document norms. Throws BuildError if no
    /// document was added.
    Index finish();

    std::size_t size() const noexcept { return doc_table_.size(); }
    void set_metadata(std::string key, std::string value) { metadata_[std::move(key)] = std::move(value); }

private:
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_set<std::string> seen_;
    std::vector<std::string> doc_table_;
    std::map<std::string, std::string> metadata_;
};

Index build_index(std::span<const std::pair<std::string, TermBag>> documents);

/// Top-k cosine matches for `query`. Zero-score documents are omitted; ties
/// are ordered by docno. Throws ArgumentError if k < 1.
std::vector<ScoredHit> search(const Index& index, const TermBag& query, std::size_t k);

/// One search per query across the OpenMP team; output order matches input.
std::vector<std::vector<ScoredHit>> search_batch(const Index& index, std::span<const TermBag> queries, std::size_t k);
/// Single-threaded reference for search_batch.
std::vector<std::vector<ScoredHit>> search_batch_serial(const Index& index, std::span<const TermBag> queries,
                                                        std::size_t k);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

/// Binary image; see README for the layout. Written to a temporary sibling
/// file and renamed into place. Throws IoError.
void persist_index(const Index& index, const std::filesystem::path& path);
/// Throws IoError, TruncatedFileError, VersionMismatchError, ChecksumError
/// or IndexFormatError.
Index load_index(const std::filesystem::path& path);

/// In-memory forms of the same image, for tests and tooling.
std::string serialize_index(const Index& index);
Index deserialize_index(std::string_view image);

}  // namespace wnsearch

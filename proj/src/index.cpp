#include "wnsearch/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "wnsearch/error.hpp"
#include "wnsearch/parallel.hpp"

namespace wnsearch {

double tf_weight(std::uint32_t tf) noexcept {
    return tf == 0 ? 0.0 : 1.0 + std::log10(static_cast<double>(tf));
}

double idf_weight(std::size_t n_docs, std::uint32_t df) noexcept {
    if (df == 0) return 0.0;
    return std::log10(static_cast<double>(n_docs) / static_cast<double>(df));
}

std::optional<std::uint32_t> Index::term_id(std::string_view key) const noexcept {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), key,
                               [](const TermInfo& t, std::string_view k) { return t.key < k; });
    if (it == vocab.end() || it->key != key) return std::nullopt;
    return static_cast<std::uint32_t>(it - vocab.begin());
}

void Index::validate() const {
    if (postings.size() != vocab.size()) throw IndexFormatError("postings count differs from vocabulary size");
    if (doc_norms.size() != doc_table.size()) throw IndexFormatError("norm count differs from document count");
    for (std::size_t t = 0; t < vocab.size(); ++t) {
        if (t > 0 && !(vocab[t - 1].key < vocab[t].key)) {
            throw IndexFormatError("vocabulary not strictly sorted at '" + vocab[t].key + "'");
        }
        const auto& list = postings[t];
        if (vocab[t].df == 0 || vocab[t].df != list.size() || vocab[t].df > n_docs()) {
            throw IndexFormatError("bad document frequency for '" + vocab[t].key + "'");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].tf == 0 || list[i].doc >= n_docs() || (i > 0 && list[i].doc <= list[i - 1].doc)) {
                throw IndexFormatError("bad posting list for '" + vocab[t].key + "'");
            }
        }
    }
}

void IndexBuilder::add(const std::string& docno, const TermBag& bag) {
    if (docno.empty()) throw BuildError("empty document id");
    if (!seen_.insert(docno).second) throw BuildError("duplicate document id '" + docno + "'");
    const auto ordinal = static_cast<std::uint32_t>(doc_table_.size());
    doc_table_.push_back(docno);
    for (const auto& [key, count] : bag.counts) {
        if (count > 0) postings_[key].push_back(Posting{ordinal, count});
    }
}

Index IndexBuilder::finish() {
    if (doc_table_.empty()) throw BuildError("no documents to index");
    Index index;
    index.metadata = std::move(metadata_);
    index.doc_table = std::move(doc_table_);

    std::vector<std::string> keys;
    keys.reserve(postings_.size());
    for (const auto& entry : postings_) keys.push_back(entry.first);
    std::sort(keys.begin(), keys.end());

    index.vocab.reserve(keys.size());
    index.postings.reserve(keys.size());
    for (std::string& key : keys) {
        auto node = postings_.extract(key);
        index.vocab.push_back(TermInfo{std::move(key), static_cast<std::uint32_t>(node.mapped().size())});
        index.postings.push_back(std::move(node.mapped()));
    }

    std::vector<double> squares(index.n_docs(), 0.0);
    for (std::uint32_t t = 0; t < index.vocab.size(); ++t) {
        for (const Posting& p : index.postings[t]) {
            const double w = index.weight(t, p);
            squares[p.doc] += w * w;
        }
    }
    index.doc_norms.resize(index.n_docs());
    std::size_t unrankable = 0;
    for (std::size_t d = 0; d < squares.size(); ++d) {
        index.doc_norms[d] = std::sqrt(squares[d]);
        if (index.doc_norms[d] == 0.0) ++unrankable;
    }
    if (unrankable) spdlog::warn("{} of {} documents have zero weight and cannot be ranked", unrankable, index.n_docs());

    postings_.clear();
    seen_.clear();
    return index;
}

Index build_index(std::span<const std::pair<std::string, TermBag>> documents) {
    IndexBuilder builder;
    for (const auto& [docno, bag] : documents) builder.add(docno, bag);
    return builder.finish();
}

std::vector<ScoredHit> search(const Index& index, const TermBag& query, std::size_t k) {
    if (k < 1) throw ArgumentError("k must be at least 1");

    // Query terms arrive in key order, which is also vocabulary order.
    std::vector<std::pair<std::uint32_t, double>> terms;
    double query_squares = 0.0;
    for (const auto& [key, count] : query.counts) {
        auto id = index.term_id(key);
        if (!id) continue;
        const double w = tf_weight(count) * index.idf(*id);
        query_squares += w * w;
        if (w > 0.0) terms.emplace_back(*id, w);
    }
    if (terms.empty()) return {};
    const double query_norm = std::sqrt(query_squares);

    std::vector<double> dot(index.n_docs(), 0.0);
    std::vector<std::uint32_t> touched;
    for (const auto& [id, wq] : terms) {
        for (const Posting& p : index.postings[id]) {
            if (dot[p.doc] == 0.0) touched.push_back(p.doc);
            dot[p.doc] += wq * index.weight(id, p);
        }
    }

    std::vector<ScoredHit> hits;
    hits.reserve(touched.size());
    for (std::uint32_t d : touched) {
        const double norm = index.doc_norms[d];
        if (dot[d] <= 0.0 || norm <= 0.0) continue;
        hits.push_back(ScoredHit{index.doc_table[d], dot[d] / (query_norm * norm), 0});
    }
    auto before = [](const ScoredHit& a, const ScoredHit& b) {
        return a.score != b.score ? a.score > b.score : a.docno < b.docno;
    };
    const std::size_t n = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(), before);
    hits.resize(n);
    for (std::size_t i = 0; i < n; ++i) hits[i].rank = i + 1;
    return hits;
}

std::vector<std::vector<ScoredHit>> search_batch(const Index& index, std::span<const TermBag> queries, std::size_t k) {
    if (k < 1) throw ArgumentError("k must be at least 1");
    std::vector<std::vector<ScoredHit>> out(queries.size());
    parallel::for_each_index(queries.size(), [&](std::size_t i) { out[i] = search(index, queries[i], k); });
    return out;
}

std::vector<std::vector<ScoredHit>> search_batch_serial(const Index& index, std::span<const TermBag> queries,
                                                        std::size_t k) {
    if (k < 1) throw ArgumentError("k must be at least 1");
    std::vector<std::vector<ScoredHit>> out;
    out.reserve(queries.size());
    for (const TermBag& q : queries) out.push_back(search(index, q, k));
    return out;
}

// ---------------------------------------------------------------------------
// Persisted image
//
//   magic "WNIRIDX\0" | u32 version | u64 payload size | payload | u64 FNV-1a(payload)
//
// payload: u64 n_docs, metadata, vocab (key, df), postings (varint doc
// deltas and tf), norms (f64 bit patterns), doc table. Integers are
// little-endian; strings are u32 length + bytes.

namespace {

constexpr char kMagic[8] = {'W', 'N', 'I', 'R', 'I', 'D', 'X', '\0'};
constexpr std::size_t kHeaderSize = 8 + 4 + 8;
constexpr std::size_t kTrailerSize = 8;

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    void u32(std::uint32_t v) { fixed(v, 4); }
    void u64(std::uint64_t v) { fixed(v, 8); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void varint(std::uint64_t v) {
        while (v >= 0x80) {
            out_.push_back(static_cast<char>((v & 0x7f) | 0x80));
            v >>= 7;
        }
        out_.push_back(static_cast<char>(v));
    }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    std::string& bytes() { return out_; }

private:
    void fixed(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(fixed(4)); }
    std::uint64_t u64() { return fixed(8); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::uint64_t varint() {
        std::uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            need(1);
            auto b = static_cast<unsigned char>(data_[pos_++]);
            v |= std::uint64_t{b & 0x7fu} << shift;
            if (!(b & 0x80)) return v;
        }
        throw IndexFormatError("varint overflow at payload offset " + std::to_string(pos_));
    }
    std::string str() {
        std::uint32_t n = u32();
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    /// Guards count fields against absurd values before reserving.
    std::size_t count(std::size_t min_bytes_each) {
        std::uint64_t n = u64();
        if (min_bytes_each && n > (data_.size() - pos_) / min_bytes_each) {
            throw IndexFormatError("count " + std::to_string(n) + " exceeds remaining payload");
        }
        return static_cast<std::size_t>(n);
    }
    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) throw IndexFormatError("payload ends early at offset " + std::to_string(pos_));
    }
    std::uint64_t fixed(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= std::uint64_t{static_cast<unsigned char>(data_[pos_ + i])} << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }
    std::string_view data_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_index(const Index& index) {
    Writer payload;
    payload.u64(index.n_docs());
    payload.u64(index.metadata.size());
    for (const auto& [key, value] : index.metadata) {
        payload.str(key);
        payload.str(value);
    }
    payload.u64(index.vocab.size());
    for (const TermInfo& t : index.vocab) {
        payload.str(t.key);
        payload.u32(t.df);
    }
    for (const auto& list : index.postings) {
        std::uint32_t prev = 0;
        for (std::size_t i = 0; i < list.size(); ++i) {
            payload.varint(i == 0 ? list[i].doc : list[i].doc - prev);
            payload.varint(list[i].tf);
            prev = list[i].doc;
        }
    }
    for (double norm : index.doc_norms) payload.f64(norm);
    for (const std::string& docno : index.doc_table) payload.str(docno);

    Writer image;
    image.bytes().append(kMagic, sizeof kMagic);
    image.u32(kIndexFormatVersion);
    image.u64(payload.bytes().size());
    image.bytes().append(payload.bytes());
    image.u64(fnv1a(payload.bytes()));
    return std::move(image.bytes());
}

Index deserialize_index(std::string_view image) {
    if (image.size() < kHeaderSize) {
        throw TruncatedFileError("index image is " + std::to_string(image.size()) + " bytes, shorter than its header");
    }
    if (std::memcmp(image.data(), kMagic, sizeof kMagic) != 0) throw IndexFormatError("not an index image (bad magic)");
    Reader header(image.substr(sizeof kMagic, kHeaderSize - sizeof kMagic));
    const std::uint32_t version = header.u32();
    if (version != kIndexFormatVersion) {
        throw VersionMismatchError("index format version " + std::to_string(version) + ", expected " +
                                   std::to_string(kIndexFormatVersion));
    }
    const std::uint64_t payload_size = header.u64();
    if (image.size() - kHeaderSize < kTrailerSize || image.size() - kHeaderSize - kTrailerSize < payload_size) {
        throw TruncatedFileError("index image truncated: payload of " + std::to_string(payload_size) +
                                 " bytes declared, " + std::to_string(image.size()) + " bytes in file");
    }
    std::string_view payload = image.substr(kHeaderSize, payload_size);
    Reader trailer(image.substr(kHeaderSize + payload_size, kTrailerSize));
    if (trailer.u64() != fnv1a(payload)) throw ChecksumError("index checksum mismatch");
    if (image.size() != kHeaderSize + payload_size + kTrailerSize) {
        throw IndexFormatError("trailing bytes after index image");
    }

    Reader in(payload);
    Index index;
    const std::size_t n_docs = in.count(12);
    for (std::size_t i = 0, n = in.count(8); i < n; ++i) {
        std::string key = in.str();
        index.metadata[std::move(key)] = in.str();
    }
    const std::size_t n_terms = in.count(8);
    index.vocab.reserve(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i) {
        std::string key = in.str();
        index.vocab.push_back(TermInfo{std::move(key), in.u32()});
    }
    index.postings.resize(n_terms);
    for (std::size_t t = 0; t < n_terms; ++t) {
        auto& list = index.postings[t];
        list.reserve(std::min<std::size_t>(index.vocab[t].df, n_docs));
        std::uint64_t doc = 0;
        for (std::uint32_t i = 0; i < index.vocab[t].df; ++i) {
            doc = i == 0 ? in.varint() : doc + in.varint();
            const std::uint64_t tf = in.varint();
            if (doc > UINT32_MAX || tf > UINT32_MAX) throw IndexFormatError("posting value out of range");
            list.push_back(Posting{static_cast<std::uint32_t>(doc), static_cast<std::uint32_t>(tf)});
        }
    }
    index.doc_norms.reserve(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) index.doc_norms.push_back(in.f64());
    index.doc_table.reserve(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) index.doc_table.push_back(in.str());
    if (!in.done()) throw IndexFormatError("unread bytes at end of index payload");
    index.validate();
    return index;
}

void persist_index(const Index& index, const std::filesystem::path& path) {
    const std::string image = serialize_index(index);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(image.data(), static_cast<std::streamsize>(image.size()));
        out.close();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move index into place at " + path.string());
    }
}

Index load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_index(buffer.str());
}

}  // namespace wnsearch

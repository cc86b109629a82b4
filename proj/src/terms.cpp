#include "wnsearch/terms.hpp"

#include <charconv>

#include <fmt/format.h>

#include "wnsearch/error.hpp"

namespace wnsearch {

namespace {

std::string encode_id(SynsetId id) {
    return fmt::format("{:08d}{}", id.offset, pos_letter(id.pos));
}

SynsetId decode_id(std::string_view text, std::string_view key) {
    if (text.size() < 9) throw ArgumentError("malformed synset id in key '" + std::string(key) + "'");
    std::string_view digits = text.substr(0, text.size() - 1);
    std::uint32_t offset = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), offset);
    auto pos = pos_from_letter(text.back());
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || !pos || text.back() == 's') {
        throw ArgumentError("malformed synset id in key '" + std::string(key) + "'");
    }
    return SynsetId{offset, *pos};
}

}  // namespace

std::string canonical_key(const GeneralizedTerm& term) {
    struct Visitor {
        std::string operator()(const Keyword& k) const { return "k:" + k.stem; }
        std::string operator()(const Sense& s) const { return "s:" + encode_id(s.id); }
        std::string operator()(const FormSensePair& p) const { return "p:" + p.form + "|" + encode_id(p.id); }
    };
    return std::visit(Visitor{}, term);
}

GeneralizedTerm decode_key(std::string_view key) {
    if (key.size() < 2 || key[1] != ':') throw ArgumentError("malformed term key '" + std::string(key) + "'");
    std::string_view body = key.substr(2);
    switch (key[0]) {
    case 'k': return Keyword{std::string(body)};
    case 's': return Sense{decode_id(body, key)};
    case 'p': {
        auto bar = body.rfind('|');
        if (bar == std::string_view::npos) throw ArgumentError("malformed pair key '" + std::string(key) + "'");
        return FormSensePair{std::string(body.substr(0, bar)), decode_id(body.substr(bar + 1), key)};
    }
    default: throw ArgumentError("unknown term namespace in '" + std::string(key) + "'");
    }
}

}  // namespace wnsearch

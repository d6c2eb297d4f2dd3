#pragma once

#include <charconv>
#include <string>

#include "msetlex/multiset.hpp"

// Canonical text forms.  A multiset prints as its sorted element list with
// repetitions, e.g. "{1,2,2}"; the empty multiset prints as "{}".

namespace msetlex {

inline std::string to_string(const Multiset& ms) {
    std::string out = "{";
    bool first = true;
    const auto occ = ms.occurrences();
    for (int i = 0; i < ms.universe_size(); ++i) {
        for (Occ k = 0; k < occ[static_cast<std::size_t>(i)]; ++k) {
            if (!first) out += ',';
            out += std::to_string(i + 1);
            first = false;
        }
    }
    out += '}';
    return out;
}

namespace detail {

inline std::vector<int> parse_int_list(std::string_view text, char sep) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(sep, pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view tok = text.substr(pos, end - pos);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw std::invalid_argument("bad integer '" + std::string(tok) + "'");
        out.push_back(value);
        pos = end + 1;
    }
    return out;
}

}  // namespace detail

// Accepts either a multiset literal ("1,2,2,3,3") whose element counts become
// the caps, or "NxK" for N elements with K occurrences each ("5x10").
inline Universe parse_universe(std::string_view text) {
    if (const auto x = text.find('x'); x != std::string_view::npos) {
        const auto parts_l = detail::parse_int_list(text.substr(0, x), ',');
        const auto parts_r = detail::parse_int_list(text.substr(x + 1), ',');
        if (parts_l.size() != 1 || parts_r.size() != 1 || parts_l[0] < 1 || parts_r[0] < 0)
            throw std::invalid_argument("bad universe spec '" + std::string(text) + "'");
        return Universe::uniform(parts_l[0], parts_r[0]);
    }
    const auto elems = detail::parse_int_list(text, ',');
    if (elems.empty()) throw std::invalid_argument("empty universe");
    int n = 0;
    for (int e : elems) {
        if (e < 1) throw std::invalid_argument("universe elements must be >= 1");
        n = std::max(n, e);
    }
    std::vector<Occ> caps(static_cast<std::size_t>(n), 0);
    for (int e : elems) ++caps[static_cast<std::size_t>(e - 1)];
    return Universe(std::move(caps));
}

// "1,2,2" or "{1,2,2}"; "{}" or "" is the empty multiset.
inline Multiset parse_multiset(std::string_view text, int n) {
    if (!text.empty() && text.front() == '{' && text.back() == '}')
        text = text.substr(1, text.size() - 2);
    if (text.empty()) return Multiset::empty(n);
    std::vector<Occ> occ(static_cast<std::size_t>(n), 0);
    for (int e : detail::parse_int_list(text, ',')) {
        if (e < 1 || e > n)
            throw std::invalid_argument("element out of range in multiset literal");
        ++occ[static_cast<std::size_t>(e - 1)];
    }
    return Multiset(std::move(occ));
}

// Semicolon-separated multiset literals: "1;2,2;2,3".
inline std::vector<Multiset> parse_multiset_list(std::string_view text, int n) {
    std::vector<Multiset> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string_view::npos) end = text.size();
        out.push_back(parse_multiset(text.substr(pos, end - pos), n));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return out;
}

inline Ordering parse_ordering(std::string_view text) {
    for (Ordering o : kAllOrderings)
        if (text == to_string(o)) return o;
    throw std::invalid_argument("unknown ordering '" + std::string(text) + "'");
}

}  // namespace msetlex

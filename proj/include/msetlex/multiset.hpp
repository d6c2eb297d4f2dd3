#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

// Core value types: bounded universes, multisets as occurrence vectors, and
// the eight total orderings obtained by combining cardinality/variety keys
// with a lex or colex tie-break on the occurrence vector.

namespace msetlex {

using Occ = std::int32_t;

class Multiset;

class Universe {
public:
    explicit Universe(std::vector<Occ> max_occ)
        : max_occ_(std::move(max_occ)) {
        if (max_occ_.empty())
            throw std::invalid_argument("universe needs at least one element");
        for (Occ c : max_occ_) {
            if (c < 0)
                throw std::invalid_argument("negative occurrence cap");
            if (c > kMaxOccCap)
                throw std::invalid_argument("occurrence cap too large");
        }
    }

    static Universe uniform(int n, Occ cap) {
        return Universe(std::vector<Occ>(static_cast<std::size_t>(n), cap));
    }

    int size() const { return static_cast<int>(max_occ_.size()); }

    Occ cap(int elem) const {
        check_elem(elem);
        return max_occ_[static_cast<std::size_t>(elem - 1)];
    }

    std::span<const Occ> caps() const { return max_occ_; }

    Occ total_cap() const {
        return std::accumulate(max_occ_.begin(), max_occ_.end(), Occ{0});
    }

    // Number of elements with a nonzero cap, i.e. the largest possible variety.
    int max_variety() const {
        return static_cast<int>(std::count_if(max_occ_.begin(), max_occ_.end(),
                                              [](Occ c) { return c > 0; }));
    }

    // min(prod(cap_i + 1), limit), saturating.  Exact counting lives in counting.hpp.
    std::uint64_t value_count_or(std::uint64_t limit) const {
        std::uint64_t total = 1;
        for (Occ c : max_occ_) {
            const auto f = static_cast<std::uint64_t>(c) + 1;
            if (total > limit / f) return limit;
            total *= f;
        }
        return std::min(total, limit);
    }

    bool contains(const Multiset& ms) const;

    friend bool operator==(const Universe&, const Universe&) = default;

    static constexpr Occ kMaxOccCap = 1 << 24;

private:
    void check_elem(int elem) const {
        if (elem < 1 || elem > size())
            throw std::invalid_argument("element index out of range");
    }

    std::vector<Occ> max_occ_;
};

// A multiset over elements 1..n, stored as its occurrence vector.  Value
// semantics; all operations are pure.
class Multiset {
public:
    explicit Multiset(std::vector<Occ> occ) : occ_(std::move(occ)) {
        if (occ_.empty())
            throw std::invalid_argument("occurrence vector must be non-empty");
        for (Occ c : occ_)
            if (c < 0) throw std::invalid_argument("negative occurrence");
    }

    static Multiset empty(int n) {
        return Multiset(std::vector<Occ>(static_cast<std::size_t>(n), 0));
    }

    // Builds from an element list, e.g. from_elements(3, {1,2,2}).
    static Multiset from_elements(int n, std::initializer_list<int> elems) {
        std::vector<Occ> occ(static_cast<std::size_t>(n), 0);
        for (int e : elems) {
            if (e < 1 || e > n)
                throw std::invalid_argument("element out of range");
            ++occ[static_cast<std::size_t>(e - 1)];
        }
        return Multiset(std::move(occ));
    }

    static Multiset full(const Universe& u) {
        return Multiset(std::vector<Occ>(u.caps().begin(), u.caps().end()));
    }

    int universe_size() const { return static_cast<int>(occ_.size()); }

    Occ occ(int elem) const {
        if (elem < 1 || elem > universe_size())
            throw std::invalid_argument("element index out of range");
        return occ_[static_cast<std::size_t>(elem - 1)];
    }

    std::span<const Occ> occurrences() const { return occ_; }

    int cardinality() const {
        return std::accumulate(occ_.begin(), occ_.end(), 0);
    }

    int variety() const {
        return static_cast<int>(std::count_if(occ_.begin(), occ_.end(),
                                              [](Occ c) { return c > 0; }));
    }

    bool is_empty() const {
        return std::all_of(occ_.begin(), occ_.end(), [](Occ c) { return c == 0; });
    }

    friend bool operator==(const Multiset&, const Multiset&) = default;

private:
    std::vector<Occ> occ_;
};

inline bool Universe::contains(const Multiset& ms) const {
    if (ms.universe_size() != size()) return false;
    auto occ = ms.occurrences();
    for (int i = 0; i < size(); ++i)
        if (occ[static_cast<std::size_t>(i)] > max_occ_[static_cast<std::size_t>(i)])
            return false;
    return true;
}

enum class Ordering : std::uint8_t { LL, LC, VL, VC, LVL, LVC, VLL, VLC };

inline constexpr std::array<Ordering, 8> kAllOrderings = {
    Ordering::LL,  Ordering::LC,  Ordering::VL,  Ordering::VC,
    Ordering::LVL, Ordering::LVC, Ordering::VLL, Ordering::VLC,
};

inline std::string_view to_string(Ordering o) {
    switch (o) {
        case Ordering::LL:  return "ll";
        case Ordering::LC:  return "lc";
        case Ordering::VL:  return "vl";
        case Ordering::VC:  return "vc";
        case Ordering::LVL: return "lvl";
        case Ordering::LVC: return "lvc";
        case Ordering::VLL: return "vll";
        case Ordering::VLC: return "vlc";
    }
    return "?";
}

enum class KeyKind : std::uint8_t { Card, Var };

struct OrderSpec {
    std::array<KeyKind, 2> keys;
    int num_keys;
    bool colex;
};

inline OrderSpec order_spec(Ordering o) {
    using K = KeyKind;
    switch (o) {
        case Ordering::LL:  return {{K::Card, K::Card}, 1, false};
        case Ordering::LC:  return {{K::Card, K::Card}, 1, true};
        case Ordering::VL:  return {{K::Var, K::Var}, 1, false};
        case Ordering::VC:  return {{K::Var, K::Var}, 1, true};
        case Ordering::LVL: return {{K::Card, K::Var}, 2, false};
        case Ordering::LVC: return {{K::Card, K::Var}, 2, true};
        case Ordering::VLL: return {{K::Var, K::Card}, 2, false};
        case Ordering::VLC: return {{K::Var, K::Card}, 2, true};
    }
    throw std::invalid_argument("bad ordering");
}

// The leading composite key of a multiset under an ordering; second slot is 0
// when the ordering has a single key.
struct AlphaKey {
    std::array<int, 2> k{0, 0};
    friend auto operator<=>(const AlphaKey&, const AlphaKey&) = default;
};

inline AlphaKey alpha_key(Ordering o, const Multiset& ms) {
    const OrderSpec spec = order_spec(o);
    AlphaKey key;
    for (int i = 0; i < spec.num_keys; ++i)
        key.k[static_cast<std::size_t>(i)] =
            spec.keys[static_cast<std::size_t>(i)] == KeyKind::Card ? ms.cardinality()
                                                                    : ms.variety();
    return key;
}

namespace detail {
inline void check_same_n(const Multiset& x, const Multiset& y) {
    if (x.universe_size() != y.universe_size())
        throw std::invalid_argument("multisets over different universes");
}
}  // namespace detail

// Occurrence vectors compared from the first position to the last.
inline std::strong_ordering lex_cmp(const Multiset& x, const Multiset& y) {
    detail::check_same_n(x, y);
    auto a = x.occurrences(), b = y.occurrences();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] <=> b[i];
    return std::strong_ordering::equal;
}

// Occurrence vectors compared from the last position to the first.
inline std::strong_ordering colex_cmp(const Multiset& x, const Multiset& y) {
    detail::check_same_n(x, y);
    auto a = x.occurrences(), b = y.occurrences();
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] <=> b[i];
    return std::strong_ordering::equal;
}

// The selected total order: leading cardinality/variety keys, then lex/colex.
inline std::strong_ordering alpha_cmp(Ordering o, const Multiset& x, const Multiset& y) {
    detail::check_same_n(x, y);
    const OrderSpec spec = order_spec(o);
    for (int i = 0; i < spec.num_keys; ++i) {
        const KeyKind k = spec.keys[static_cast<std::size_t>(i)];
        const int kx = k == KeyKind::Card ? x.cardinality() : x.variety();
        const int ky = k == KeyKind::Card ? y.cardinality() : y.variety();
        if (kx != ky) return kx <=> ky;
    }
    return spec.colex ? colex_cmp(x, y) : lex_cmp(x, y);
}

inline bool alpha_less(Ordering o, const Multiset& x, const Multiset& y) {
    return alpha_cmp(o, x, y) == std::strong_ordering::less;
}

inline bool alpha_leq(Ordering o, const Multiset& x, const Multiset& y) {
    return alpha_cmp(o, x, y) != std::strong_ordering::greater;
}

inline const Multiset& alpha_min(Ordering o, const Multiset& x, const Multiset& y) {
    return alpha_leq(o, x, y) ? x : y;
}

inline const Multiset& alpha_max(Ordering o, const Multiset& x, const Multiset& y) {
    return alpha_leq(o, x, y) ? y : x;
}

// Pointwise min of occurrence counts.
inline Multiset intersect(const Multiset& x, const Multiset& y) {
    detail::check_same_n(x, y);
    auto a = x.occurrences(), b = y.occurrences();
    std::vector<Occ> occ(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) occ[i] = std::min(a[i], b[i]);
    return Multiset(std::move(occ));
}

// Pointwise sum of occurrence counts (multiset union-plus).
inline Multiset unionplus(const Multiset& x, const Multiset& y) {
    detail::check_same_n(x, y);
    auto a = x.occurrences(), b = y.occurrences();
    std::vector<Occ> occ(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) occ[i] = a[i] + b[i];
    return Multiset(std::move(occ));
}

// Size of the pointwise min without materialising it.
inline int overlap_cardinality(const Multiset& x, const Multiset& y) {
    detail::check_same_n(x, y);
    auto a = x.occurrences(), b = y.occurrences();
    int total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::min(a[i], b[i]);
    return total;
}

// Element relabeling i -> n+1-i.  Maps lex to colex orders isomorphically;
// used by the proposition checks relating lex and colex representations.
inline Universe mirror(const Universe& u) {
    std::vector<Occ> caps(u.caps().rbegin(), u.caps().rend());
    return Universe(std::move(caps));
}

inline Multiset mirror(const Multiset& ms) {
    auto occ = ms.occurrences();
    return Multiset(std::vector<Occ>(occ.rbegin(), occ.rend()));
}

inline Ordering mirror(Ordering o) {
    switch (o) {
        case Ordering::LL:  return Ordering::LC;
        case Ordering::LC:  return Ordering::LL;
        case Ordering::VL:  return Ordering::VC;
        case Ordering::VC:  return Ordering::VL;
        case Ordering::LVL: return Ordering::LVC;
        case Ordering::LVC: return Ordering::LVL;
        case Ordering::VLL: return Ordering::VLC;
        case Ordering::VLC: return Ordering::VLL;
    }
    throw std::invalid_argument("bad ordering");
}

}  // namespace msetlex

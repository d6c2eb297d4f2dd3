#pragma once

#include <cstdlib>
#include <limits>
#include <optional>
#include <string>

#include "msetlex/multiset.hpp"

// Bound-seeking kernel.  Values of a variable live in one composite-key
// stratum after another; finding the least/greatest value satisfying a
// conjunction of cardinality, variety and per-element occurrence ranges is a
// walk over strata with a greedy digit construction inside each stratum.
// The enumeration-based oracle for all of this lives in the tests.

namespace msetlex {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntRange {
    int lo = 0;
    int hi = std::numeric_limits<int>::max();

    static IntRange at(int v) { return {v, v}; }
    static IntRange atLeast(int v) { return {v, std::numeric_limits<int>::max()}; }

    bool empty() const { return lo > hi; }
    bool contains(int v) const { return lo <= v && v <= hi; }
    bool is_point() const { return lo == hi; }

    IntRange intersect(IntRange o) const {
        return {std::max(lo, o.lo), std::min(hi, o.hi)};
    }

    friend bool operator==(IntRange, IntRange) = default;
};

// Conjunction predicate over multisets: cardinality range, variety range and
// optional per-element occurrence ranges.  Doubles as the occurrence box the
// propagators trade in and as the subset-bounds domain payload.
struct OccBox {
    IntRange card{};
    IntRange var{};
    std::vector<IntRange> occ;  // empty means unconstrained

    static OccBox any() { return {}; }

    static OccBox full(const Universe& u) {
        OccBox b;
        b.card = {0, u.total_cap()};
        b.var = {0, u.max_variety()};
        b.occ.reserve(static_cast<std::size_t>(u.size()));
        for (Occ c : u.caps()) b.occ.push_back({0, c});
        return b;
    }

    static OccBox point(const Multiset& ms) {
        OccBox b;
        b.card = IntRange::at(ms.cardinality());
        b.var = IntRange::at(ms.variety());
        for (Occ c : ms.occurrences()) b.occ.push_back(IntRange::at(c));
        return b;
    }

    bool matches(const Multiset& ms) const {
        if (!card.contains(ms.cardinality()) || !var.contains(ms.variety()))
            return false;
        if (!occ.empty()) {
            auto o = ms.occurrences();
            for (std::size_t i = 0; i < o.size(); ++i)
                if (!occ[i].contains(o[i])) return false;
        }
        return true;
    }

    OccBox intersect(const OccBox& o) const {
        OccBox r;
        r.card = card.intersect(o.card);
        r.var = var.intersect(o.var);
        if (occ.empty()) {
            r.occ = o.occ;
        } else if (o.occ.empty()) {
            r.occ = occ;
        } else {
            r.occ.resize(occ.size());
            for (std::size_t i = 0; i < occ.size(); ++i)
                r.occ[i] = occ[i].intersect(o.occ[i]);
        }
        return r;
    }

    friend bool operator==(const OccBox&, const OccBox&) = default;
};

namespace detail {

// Per-element ranges clamped to the universe; card/var clamped to what the
// caps allow.  Returns nullopt when some range is already empty.
inline std::optional<OccBox> normalize_impl(const Universe& u, OccBox b) {
    const int n = u.size();
    if (b.occ.empty()) {
        b.occ.assign(static_cast<std::size_t>(n), IntRange{});
    } else if (static_cast<int>(b.occ.size()) != n) {
        throw std::invalid_argument("occurrence range arity mismatch");
    }
    for (int i = 0; i < n; ++i) {
        auto& r = b.occ[static_cast<std::size_t>(i)];
        r.lo = std::max(r.lo, 0);
        r.hi = std::min<int>(r.hi, u.caps()[static_cast<std::size_t>(i)]);
        if (r.empty()) return std::nullopt;
    }
    b.card.lo = std::max(b.card.lo, 0);
    b.card.hi = std::min<int>(b.card.hi, u.total_cap());
    b.var.lo = std::max(b.var.lo, 0);
    b.var.hi = std::min(b.var.hi, u.max_variety());
    if (b.card.empty() || b.var.empty()) return std::nullopt;
    return b;
}

// Feasibility of completing a set of positions under occ ranges with total
// cardinality and nonzero-count in given ranges.  Positions are those with
// index >= from in `sig` order.
struct ClassWalker {
    const Universe& u;
    bool colex;
    OccBox box;               // normalized
    std::vector<int> sig;     // significance order (most significant first)

    ClassWalker(const Universe& uni, bool colex_dir, OccBox normalized_box)
        : u(uni), colex(colex_dir), box(std::move(normalized_box)) {
        const int n = u.size();
        sig.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            sig[static_cast<std::size_t>(i)] = colex ? n - 1 - i : i;
    }

    IntRange occ_range(int pos) const { return box.occ[static_cast<std::size_t>(pos)]; }

    // Can positions sig[from..] realize sum in [card] and nonzeros in [var]?
    bool suffix_feasible(int from, IntRange card, IntRange var) const {
        if (card.hi < 0 || var.hi < 0) return false;
        int forced_cnt = 0, forced_lo = 0, forced_hi = 0;
        std::vector<int> optional_hi;
        for (std::size_t t = static_cast<std::size_t>(from); t < sig.size(); ++t) {
            const IntRange r = occ_range(sig[t]);
            if (r.lo > 0) {
                ++forced_cnt;
                forced_lo += r.lo;
                forced_hi += r.hi;
            } else if (r.hi > 0) {
                optional_hi.push_back(r.hi);
            }
        }
        std::sort(optional_hi.rbegin(), optional_hi.rend());
        const int t_lo = std::max(var.lo, forced_cnt);
        const int t_hi = std::min<int>(var.hi, forced_cnt + static_cast<int>(optional_hi.size()));
        int extra_hi = 0;
        for (int t = forced_cnt; t <= t_hi; ++t) {
            if (t > forced_cnt)
                extra_hi += optional_hi[static_cast<std::size_t>(t - forced_cnt - 1)];
            if (t < t_lo) continue;
            const int min_c = forced_lo + (t - forced_cnt);
            const int max_c = forced_hi + extra_hi;
            if (min_c <= card.hi && max_c >= card.lo) return true;
        }
        return false;
    }

    // Least (or greatest) completion of positions sig[from..]; budgets must be
    // feasible (checked by the caller).  Writes into occ.
    void fill_extreme(int from, IntRange card, IntRange var, bool least,
                      std::vector<Occ>& occ) const {
        int rem_card_lo = card.lo, rem_card_hi = card.hi;
        int rem_var_lo = var.lo, rem_var_hi = var.hi;
        for (std::size_t t = static_cast<std::size_t>(from); t < sig.size(); ++t) {
            const int p = sig[t];
            const IntRange r = occ_range(p);
            bool placed = false;
            if (least) {
                for (int w = r.lo; w <= r.hi; ++w) {
                    if (suffix_ok_after(t, w, rem_card_lo, rem_card_hi, rem_var_lo,
                                        rem_var_hi)) {
                        occ[static_cast<std::size_t>(p)] = static_cast<Occ>(w);
                        consume(w, rem_card_lo, rem_card_hi, rem_var_lo, rem_var_hi);
                        placed = true;
                        break;
                    }
                }
            } else {
                for (int w = r.hi; w >= r.lo; --w) {
                    if (suffix_ok_after(t, w, rem_card_lo, rem_card_hi, rem_var_lo,
                                        rem_var_hi)) {
                        occ[static_cast<std::size_t>(p)] = static_cast<Occ>(w);
                        consume(w, rem_card_lo, rem_card_hi, rem_var_lo, rem_var_hi);
                        placed = true;
                        break;
                    }
                }
            }
            if (!placed)
                throw std::logic_error("fill_extreme on infeasible budgets");
        }
    }

    std::optional<Multiset> extreme(bool least) const {
        if (!suffix_feasible(0, box.card, box.var)) return std::nullopt;
        std::vector<Occ> occ(static_cast<std::size_t>(u.size()), 0);
        fill_extreme(0, box.card, box.var, least, occ);
        return Multiset(std::move(occ));
    }

    // Least member of the class strictly greater (or greatest strictly less)
    // than `bound` in the lex/colex order.  `bound` need not be in the class.
    std::optional<Multiset> adjacent(const Multiset& bound, bool upward) const {
        const int n = u.size();
        auto bocc = bound.occurrences();
        // prefix sums along sig order
        std::vector<int> pre_card(static_cast<std::size_t>(n) + 1, 0);
        std::vector<int> pre_var(static_cast<std::size_t>(n) + 1, 0);
        std::vector<bool> pre_ok(static_cast<std::size_t>(n) + 1, true);
        for (int t = 0; t < n; ++t) {
            const int p = sig[static_cast<std::size_t>(t)];
            const int w = bocc[static_cast<std::size_t>(p)];
            pre_card[static_cast<std::size_t>(t) + 1] = pre_card[static_cast<std::size_t>(t)] + w;
            pre_var[static_cast<std::size_t>(t) + 1] =
                pre_var[static_cast<std::size_t>(t)] + (w > 0 ? 1 : 0);
            pre_ok[static_cast<std::size_t>(t) + 1] =
                pre_ok[static_cast<std::size_t>(t)] && occ_range(p).contains(w);
        }
        for (int t = n - 1; t >= 0; --t) {
            if (!pre_ok[static_cast<std::size_t>(t)]) continue;
            const int p = sig[static_cast<std::size_t>(t)];
            const IntRange r = occ_range(p);
            const int cur = bocc[static_cast<std::size_t>(p)];
            const int w_first = upward ? std::max(r.lo, cur + 1) : std::min(r.hi, cur - 1);
            const int w_last = upward ? r.hi : r.lo;
            const int step = upward ? 1 : -1;
            for (int w = w_first; upward ? w <= w_last : w >= w_last; w += step) {
                int rc_lo = box.card.lo - pre_card[static_cast<std::size_t>(t)] - w;
                int rc_hi = box.card.hi - pre_card[static_cast<std::size_t>(t)] - w;
                int rv_lo = box.var.lo - pre_var[static_cast<std::size_t>(t)] - (w > 0 ? 1 : 0);
                int rv_hi = box.var.hi - pre_var[static_cast<std::size_t>(t)] - (w > 0 ? 1 : 0);
                if (rc_hi < 0 || rv_hi < 0) continue;
                IntRange rem_card{std::max(rc_lo, 0), rc_hi};
                IntRange rem_var{std::max(rv_lo, 0), rv_hi};
                if (!suffix_feasible(t + 1, rem_card, rem_var)) continue;
                std::vector<Occ> occ(static_cast<std::size_t>(n), 0);
                for (int s = 0; s < t; ++s) {
                    const int q = sig[static_cast<std::size_t>(s)];
                    occ[static_cast<std::size_t>(q)] = bocc[static_cast<std::size_t>(q)];
                }
                occ[static_cast<std::size_t>(p)] = static_cast<Occ>(w);
                fill_extreme(t + 1, rem_card, rem_var, upward, occ);
                return Multiset(std::move(occ));
            }
        }
        return std::nullopt;
    }

private:
    bool suffix_ok_after(std::size_t t, int w, int rc_lo, int rc_hi, int rv_lo,
                         int rv_hi) const {
        rc_lo -= w;
        rc_hi -= w;
        if (w > 0) {
            --rv_lo;
            --rv_hi;
        }
        if (rc_hi < 0 || rv_hi < 0) return false;
        return suffix_feasible(static_cast<int>(t) + 1,
                               IntRange{std::max(rc_lo, 0), rc_hi},
                               IntRange{std::max(rv_lo, 0), rv_hi});
    }

    static void consume(int w, int& rc_lo, int& rc_hi, int& rv_lo, int& rv_hi) {
        rc_lo = std::max(rc_lo - w, 0);
        rc_hi -= w;
        if (w > 0) {
            rv_lo = std::max(rv_lo - 1, 0);
            rv_hi -= 1;
        }
    }
};

// Summary stats used for stratum feasibility: which (cardinality, variety)
// pairs are realizable under the caps.
struct UniverseStats {
    explicit UniverseStats(const Universe& u)
        : total_cap(u.total_cap()), max_var(u.max_variety()) {
        std::vector<int> caps(u.caps().begin(), u.caps().end());
        std::sort(caps.rbegin(), caps.rend());
        prefix.assign(caps.size() + 1, 0);
        for (std::size_t i = 0; i < caps.size(); ++i)
            prefix[i + 1] = prefix[i] + caps[i];
    }

    // Largest cardinality achievable with exactly v distinct elements.
    int max_card_for_var(int v) const {
        if (v < 0 || v > max_var) return -1;
        return prefix[static_cast<std::size_t>(v)];
    }

    bool stratum_feasible(int card, int var) const {
        if (var < 0 || var > max_var || card < 0 || card > total_cap) return false;
        if (var == 0) return card == 0;
        return card >= var && card <= max_card_for_var(var);
    }

    int total_cap;
    int max_var;
    std::vector<int> prefix;  // descending-cap prefix sums
};

inline void check_member(const Universe& u, const Multiset& ms) {
    if (ms.universe_size() != u.size())
        throw std::invalid_argument("multiset arity does not match universe");
    if (!u.contains(ms))
        throw std::invalid_argument("multiset exceeds universe caps");
}

// Stratum constraint implied by an ordering's keys for the stratum containing
// a value with composite key `key`.
inline OccBox stratum_box(Ordering ord, AlphaKey key) {
    const OrderSpec spec = order_spec(ord);
    OccBox b;
    for (int i = 0; i < spec.num_keys; ++i) {
        const int v = key.k[static_cast<std::size_t>(i)];
        if (spec.keys[static_cast<std::size_t>(i)] == KeyKind::Card)
            b.card = b.card.intersect(IntRange::at(v));
        else
            b.var = b.var.intersect(IntRange::at(v));
    }
    return b;
}

// Does any multiset matching `box` live in the stratum keyed `key`?
inline bool stratum_class_feasible(const Universe& u, Ordering ord, AlphaKey key,
                                   const OccBox& normalized_pred,
                                   const UniverseStats& stats) {
    const OccBox combined = normalized_pred.intersect(stratum_box(ord, key));
    if (combined.card.empty() || combined.var.empty()) return false;
    // cheap key-level screen first
    const OrderSpec spec = order_spec(ord);
    if (spec.num_keys == 2) {
        const int c = spec.keys[0] == KeyKind::Card ? key.k[0] : key.k[1];
        const int v = spec.keys[0] == KeyKind::Var ? key.k[0] : key.k[1];
        if (!stats.stratum_feasible(c, v)) return false;
    }
    ClassWalker walker(u, spec.colex, combined);
    return walker.suffix_feasible(0, combined.card, combined.var);
}

// Iterates strata of `ord` in key order starting after `key` (exclusive) when
// ascending, or before it when descending.  Calls fn(key) until it returns a
// value or keys are exhausted.
template <typename Fn>
std::optional<Multiset> walk_strata(const Universe& u, Ordering ord, AlphaKey from,
                                    bool ascending, Fn&& fn) {
    const OrderSpec spec = order_spec(ord);
    const UniverseStats stats{u};
    const auto bound_of = [&](KeyKind k) {
        return k == KeyKind::Card ? stats.total_cap : stats.max_var;
    };
    if (spec.num_keys == 1) {
        const int max1 = bound_of(spec.keys[0]);
        if (ascending) {
            for (int a = from.k[0] + 1; a <= max1; ++a)
                if (auto r = fn(AlphaKey{{a, 0}})) return r;
        } else {
            for (int a = from.k[0] - 1; a >= 0; --a)
                if (auto r = fn(AlphaKey{{a, 0}})) return r;
        }
        return std::nullopt;
    }
    const int max1 = bound_of(spec.keys[0]);
    const int max2 = bound_of(spec.keys[1]);
    if (ascending) {
        for (int a = from.k[0]; a <= max1; ++a) {
            const int b_start = a == from.k[0] ? from.k[1] + 1 : 0;
            for (int b = b_start; b <= max2; ++b)
                if (auto r = fn(AlphaKey{{a, b}})) return r;
        }
    } else {
        for (int a = from.k[0]; a >= 0; --a) {
            const int b_start = a == from.k[0] ? from.k[1] - 1 : max2;
            for (int b = b_start; b >= 0; --b)
                if (auto r = fn(AlphaKey{{a, b}})) return r;
        }
    }
    return std::nullopt;
}

inline std::optional<Multiset> seek_impl(const Universe& u, Ordering ord,
                                         const Multiset& bound, const OccBox& pred,
                                         bool upward, bool inclusive) {
    check_member(u, bound);
    auto norm = normalize_impl(u, pred);
    if (!norm) return std::nullopt;
    const OrderSpec spec = order_spec(ord);
    const UniverseStats stats{u};
    const AlphaKey key0 = alpha_key(ord, bound);

    // Within the bound's own stratum first.
    {
        const OccBox cls = norm->intersect(stratum_box(ord, key0));
        if (!cls.card.empty() && !cls.var.empty()) {
            if (inclusive && cls.matches(bound)) return bound;
            ClassWalker walker(u, spec.colex, cls);
            if (auto r = walker.adjacent(bound, upward)) return r;
        }
    }
    return walk_strata(u, ord, key0, upward,
                       [&](AlphaKey key) -> std::optional<Multiset> {
                           if (!stratum_class_feasible(u, ord, key, *norm, stats))
                               return std::nullopt;
                           const OccBox cls = norm->intersect(stratum_box(ord, key));
                           ClassWalker walker(u, spec.colex, cls);
                           return walker.extreme(/*least=*/upward);
                       });
}

}  // namespace detail

using detail::UniverseStats;

// Clamps a box to the universe; nullopt when empty.
inline std::optional<OccBox> normalize_box(const Universe& u, const OccBox& b) {
    return detail::normalize_impl(u, b);
}

// The alpha-least multiset x with bound <=_a x satisfying pred, if any.
inline std::optional<Multiset> seek_least_geq(const Universe& u, Ordering ord,
                                              const Multiset& lb, const OccBox& pred) {
    return detail::seek_impl(u, ord, lb, pred, /*upward=*/true, /*inclusive=*/true);
}

// The alpha-greatest multiset x with x <=_a bound satisfying pred, if any.
inline std::optional<Multiset> seek_greatest_leq(const Universe& u, Ordering ord,
                                                 const Multiset& ub, const OccBox& pred) {
    return detail::seek_impl(u, ord, ub, pred, /*upward=*/false, /*inclusive=*/true);
}

// Immediate alpha-successor; absent when ms is the maximum (the universe itself).
inline std::optional<Multiset> successor(const Universe& u, Ordering ord,
                                         const Multiset& ms) {
    return detail::seek_impl(u, ord, ms, OccBox::any(), /*upward=*/true,
                             /*inclusive=*/false);
}

// Immediate alpha-predecessor; absent only for the empty multiset.
inline std::optional<Multiset> predecessor(const Universe& u, Ordering ord,
                                           const Multiset& ms) {
    return detail::seek_impl(u, ord, ms, OccBox::any(), /*upward=*/false,
                             /*inclusive=*/false);
}

// The alpha-least multiset matching pred, if any.
inline std::optional<Multiset> alpha_least(const Universe& u, Ordering ord,
                                           const OccBox& pred) {
    auto norm = normalize_box(u, pred);
    if (!norm) return std::nullopt;
    return seek_least_geq(u, ord, Multiset::empty(u.size()), *norm);
}

inline std::optional<Multiset> alpha_greatest(const Universe& u, Ordering ord,
                                              const OccBox& pred) {
    auto norm = normalize_box(u, pred);
    if (!norm) return std::nullopt;
    return seek_greatest_leq(u, ord, Multiset::full(u), *norm);
}

inline std::uint64_t enumeration_guard() {
    if (const char* env = std::getenv("MSETLEX_VALUE_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 10'000'000ULL;
}

// Every sub-multiset of the universe in strictly increasing alpha order.
// Deliberately independent of the successor machinery: odometer + sort.
inline std::vector<Multiset> enumerate(const Universe& u, Ordering ord,
                                       std::uint64_t guard = 0) {
    if (guard == 0) guard = enumeration_guard();
    const std::uint64_t count = u.value_count_or(guard + 1);
    if (count > guard)
        throw ResourceError("universe has more than " + std::to_string(guard) +
                            " values; raise MSETLEX_VALUE_CAP to enumerate");
    const int n = u.size();
    std::vector<Multiset> out;
    out.reserve(count);
    std::vector<Occ> occ(static_cast<std::size_t>(n), 0);
    for (;;) {
        out.push_back(Multiset(occ));
        int i = 0;
        while (i < n && occ[static_cast<std::size_t>(i)] ==
                            u.caps()[static_cast<std::size_t>(i)]) {
            occ[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
        ++occ[static_cast<std::size_t>(i)];
    }
    std::sort(out.begin(), out.end(), [&](const Multiset& a, const Multiset& b) {
        return alpha_less(ord, a, b);
    });
    return out;
}

}  // namespace msetlex

#pragma once

#include "msetlex/counting.hpp"
#include "msetlex/seek.hpp"

// Variable domains.  An AlphaInterval keeps the least and greatest value of
// the variable under one of the eight orderings; SubsetBoundsCV is the
// baseline box of per-element occurrence ranges plus cardinality/variety
// ranges with the usual cross-pruning rules.

namespace msetlex {

class AlphaInterval {
public:
    // nullopt when the proposed bounds cross (empty domain).
    static std::optional<AlphaInterval> make(Ordering ord, Multiset lb, Multiset ub) {
        if (alpha_cmp(ord, lb, ub) == std::strong_ordering::greater)
            return std::nullopt;
        return AlphaInterval(ord, std::move(lb), std::move(ub));
    }

    static AlphaInterval full(const Universe& u, Ordering ord) {
        return AlphaInterval(ord, Multiset::empty(u.size()), Multiset::full(u));
    }

    static AlphaInterval singleton(Ordering ord, const Multiset& value) {
        return AlphaInterval(ord, value, value);
    }

    Ordering ordering() const { return ord_; }
    const Multiset& lb() const { return lb_; }
    const Multiset& ub() const { return ub_; }

    bool is_singleton() const { return lb_ == ub_; }

    bool contains(const Multiset& ms) const {
        return alpha_leq(ord_, lb_, ms) && alpha_leq(ord_, ms, ub_);
    }

    // Bounds only move inward; nullopt signals a wipeout.
    std::optional<AlphaInterval> tighten(const std::optional<Multiset>& new_lb,
                                         const std::optional<Multiset>& new_ub) const {
        const Multiset& lb = new_lb ? alpha_max(ord_, lb_, *new_lb) : lb_;
        const Multiset& ub = new_ub ? alpha_min(ord_, ub_, *new_ub) : ub_;
        return make(ord_, lb, ub);
    }

    friend bool operator==(const AlphaInterval&, const AlphaInterval&) = default;

private:
    AlphaInterval(Ordering ord, Multiset lb, Multiset ub)
        : ord_(ord), lb_(std::move(lb)), ub_(std::move(ub)) {}

    Ordering ord_;
    Multiset lb_;
    Multiset ub_;
};

// Minimal interval containing every member of S (S nonempty).
template <typename Range>
AlphaInterval closure(Ordering ord, const Range& values) {
    auto it = std::begin(values);
    const auto end = std::end(values);
    if (it == end) throw std::invalid_argument("closure of an empty set");
    Multiset lo = *it, hi = *it;
    for (++it; it != end; ++it) {
        if (alpha_less(ord, *it, lo)) lo = *it;
        if (alpha_less(ord, hi, *it)) hi = *it;
    }
    return *AlphaInterval::make(ord, std::move(lo), std::move(hi));
}

inline Count interval_size(const Universe& u, const AlphaInterval& dom) {
    const Ranker ranker(u, dom.ordering());
    return ranker.rank(dom.ub()) - ranker.rank(dom.lb()) + 1;
}

// Whether S equals its own closure.  Duplicates in the input are ignored.
template <typename Range>
bool is_exact(const Universe& u, Ordering ord, const Range& values) {
    std::vector<Multiset> distinct(std::begin(values), std::end(values));
    std::sort(distinct.begin(), distinct.end(),
              [&](const Multiset& a, const Multiset& b) { return alpha_less(ord, a, b); });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const AlphaInterval cl = closure(ord, distinct);
    return interval_size(u, cl) == static_cast<long>(distinct.size());
}

// Occurrence/cardinality/variety envelope of an interval: the union, over all
// key strata the bounds allow, of each stratum's per-element occurrence
// ranges.  An over-approximation of the true envelope; the lex position of
// the bounds inside their edge strata is ignored.
inline OccBox envelope_of(const Universe& u, const AlphaInterval& dom) {
    if (dom.is_singleton()) return OccBox::point(dom.lb());
    const Ordering ord = dom.ordering();
    const OrderSpec spec = order_spec(ord);
    const detail::UniverseStats stats{u};
    const AlphaKey klo = alpha_key(ord, dom.lb());
    const AlphaKey khi = alpha_key(ord, dom.ub());
    const int n = u.size();

    OccBox env;
    env.card = {std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
    env.var = env.card;
    env.occ.assign(static_cast<std::size_t>(n),
                   IntRange{std::numeric_limits<int>::max(), std::numeric_limits<int>::min()});

    // Exclusion stats: largest cardinality reachable with t distinct elements
    // when element i is unavailable.
    std::vector<std::pair<int, int>> sorted;  // (cap desc, elem idx)
    for (int i = 0; i < n; ++i)
        sorted.emplace_back(u.caps()[static_cast<std::size_t>(i)], i);
    std::sort(sorted.begin(), sorted.end(),
              [](auto a, auto b) { return a.first > b.first; });
    std::vector<int> prefix(sorted.size() + 1, 0);
    std::vector<int> pos_of(static_cast<std::size_t>(n), 0);
    for (std::size_t s = 0; s < sorted.size(); ++s) {
        prefix[s + 1] = prefix[s] + sorted[s].first;
        pos_of[static_cast<std::size_t>(sorted[s].second)] = static_cast<int>(s);
    }
    const auto max_card_excl = [&](int elem_idx, int t) -> int {
        if (t < 0) return -1;
        if (t > n - 1) return -1;
        const int p = pos_of[static_cast<std::size_t>(elem_idx)];
        // sum of the t largest caps among the others
        if (t <= p) return prefix[static_cast<std::size_t>(t)];
        return prefix[static_cast<std::size_t>(t) + 1] -
               sorted[static_cast<std::size_t>(p)].first;
    };
    const int nonzero_caps = stats.max_var;

    const auto absorb_stratum = [&](int c, int v) {
        if (!stats.stratum_feasible(c, v)) return;
        env.card.lo = std::min(env.card.lo, c);
        env.card.hi = std::max(env.card.hi, c);
        env.var.lo = std::min(env.var.lo, v);
        env.var.hi = std::max(env.var.hi, v);
        for (int i = 0; i < n; ++i) {
            const int cap = u.caps()[static_cast<std::size_t>(i)];
            auto& r = env.occ[static_cast<std::size_t>(i)];
            // zero occurrence: the others alone must realize (c, v)
            const int others_var = cap > 0 ? nonzero_caps - 1 : nonzero_caps;
            bool zero_ok;
            if (v == 0)
                zero_ok = c == 0;
            else
                zero_ok = v <= others_var && c >= v && c <= max_card_excl(i, v);
            if (zero_ok) r.lo = std::min(r.lo, 0);
            if (cap > 0 && v >= 1 && v - 1 <= others_var) {
                // positive occurrence w: others realize (c - w, v - 1)
                const int mc = max_card_excl(i, v - 1);
                const int w_hi = std::min(cap, c - (v - 1));
                const int w_lo = std::max(1, c - std::max(mc, 0));
                if (mc >= 0 && w_lo <= w_hi && c - w_lo >= v - 1) {
                    r.lo = std::min(r.lo, zero_ok ? 0 : w_lo);
                    r.hi = std::max(r.hi, w_hi);
                } else if (zero_ok) {
                    r.hi = std::max(r.hi, 0);
                }
            } else if (zero_ok) {
                r.hi = std::max(r.hi, 0);
            }
        }
    };

    // Walk the key range. Missing keys range over everything feasible.
    if (spec.num_keys == 1) {
        const int k1lo = klo.k[0], k1hi = khi.k[0];
        for (int k1 = k1lo; k1 <= k1hi; ++k1) {
            if (spec.keys[0] == KeyKind::Card) {
                for (int v = 0; v <= stats.max_var; ++v) absorb_stratum(k1, v);
            } else {
                for (int c = 0; c <= stats.total_cap; ++c) absorb_stratum(c, k1);
            }
        }
    } else {
        for (int a = klo.k[0]; a <= khi.k[0]; ++a) {
            const int b_max_bound =
                spec.keys[1] == KeyKind::Card ? stats.total_cap : stats.max_var;
            const int b_lo = a == klo.k[0] ? klo.k[1] : 0;
            const int b_hi = a == khi.k[0] ? khi.k[1] : b_max_bound;
            for (int b = b_lo; b <= b_hi; ++b) {
                const int c = spec.keys[0] == KeyKind::Card ? a : b;
                const int v = spec.keys[0] == KeyKind::Card ? b : a;
                absorb_stratum(c, v);
            }
        }
    }
    return env;
}

// Subset-bounds domain with cardinality and variety reasoning: per-element
// occurrence intervals plus card/var intervals, kept mutually consistent.
class SubsetBoundsCV {
public:
    static SubsetBoundsCV full(const Universe& u) {
        SubsetBoundsCV sb;
        sb.box_ = OccBox::full(u);
        return sb;
    }

    static SubsetBoundsCV point(const Multiset& value) {
        SubsetBoundsCV sb;
        sb.box_ = OccBox::point(value);
        return sb;
    }

    static std::optional<SubsetBoundsCV> from_box(const Universe& u, const OccBox& box) {
        auto norm = normalize_box(u, box);
        if (!norm) return std::nullopt;
        SubsetBoundsCV sb;
        sb.box_ = std::move(*norm);
        return sb.normalized(u);
    }

    const OccBox& box() const { return box_; }
    IntRange card() const { return box_.card; }
    IntRange var() const { return box_.var; }
    IntRange occ(int elem) const { return box_.occ[static_cast<std::size_t>(elem - 1)]; }

    bool contains(const Multiset& ms) const { return box_.matches(ms); }

    bool is_singleton() const {
        return std::all_of(box_.occ.begin(), box_.occ.end(),
                           [](IntRange r) { return r.is_point(); });
    }

    Multiset the_value() const {
        std::vector<Occ> occ(box_.occ.size());
        for (std::size_t i = 0; i < occ.size(); ++i)
            occ[i] = static_cast<Occ>(box_.occ[i].lo);
        return Multiset(std::move(occ));
    }

    // Cross-pruning fixpoint between occurrence, cardinality and variety
    // intervals.  nullopt when the domain empties.
    std::optional<SubsetBoundsCV> normalized(const Universe& u) const {
        OccBox b = box_;
        const int n = u.size();
        for (;;) {
            bool changed = false;
            int sum_lo = 0, sum_hi = 0, forced = 0, possible = 0;
            for (auto& r : b.occ) {
                if (r.empty()) return std::nullopt;
                sum_lo += r.lo;
                sum_hi += r.hi;
                forced += r.lo > 0 ? 1 : 0;
                possible += r.hi > 0 ? 1 : 0;
            }
            IntRange card{std::max(b.card.lo, sum_lo), std::min(b.card.hi, sum_hi)};
            IntRange var{std::max(b.var.lo, forced), std::min(b.var.hi, possible)};
            if (card.empty() || var.empty()) return std::nullopt;
            if (card != b.card || var != b.var) changed = true;
            b.card = card;
            b.var = var;
            for (int i = 0; i < n; ++i) {
                auto& r = b.occ[static_cast<std::size_t>(i)];
                IntRange nr = r;
                // knapsack-style bounds from cardinality
                nr.hi = std::min(nr.hi, b.card.hi - (sum_lo - r.lo));
                nr.lo = std::max(nr.lo, b.card.lo - (sum_hi - r.hi));
                // variety side: if the forced elements already exhaust the
                // variety budget, nothing else may occur; if every possible
                // element is needed, all of them must occur.
                if (r.lo == 0 && nr.hi > 0 && forced >= b.var.hi) nr.hi = 0;
                if (r.lo == 0 && r.hi > 0 && possible <= b.var.lo)
                    nr.lo = std::max(nr.lo, 1);
                if (nr.empty()) return std::nullopt;
                if (nr != r) {
                    r = nr;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        SubsetBoundsCV sb;
        sb.box_ = std::move(b);
        return sb;
    }

    friend bool operator==(const SubsetBoundsCV&, const SubsetBoundsCV&) = default;

private:
    OccBox box_;
};

// Both conversions over-approximate: every member of the input domain is a
// member of the output.
inline SubsetBoundsCV sb_from_interval(const Universe& u, const AlphaInterval& dom) {
    if (dom.is_singleton()) return SubsetBoundsCV::point(dom.lb());
    const OccBox env = envelope_of(u, dom);
    auto sb = SubsetBoundsCV::from_box(u, env);
    if (!sb) throw std::logic_error("envelope of a nonempty interval is empty");
    return *sb;
}

inline std::optional<AlphaInterval> interval_from_sb(const Universe& u, Ordering ord,
                                                     const SubsetBoundsCV& sb) {
    auto lb = alpha_least(u, ord, sb.box());
    if (!lb) return std::nullopt;
    auto ub = alpha_greatest(u, ord, sb.box());
    return AlphaInterval::make(ord, std::move(*lb), std::move(*ub));
}

}  // namespace msetlex

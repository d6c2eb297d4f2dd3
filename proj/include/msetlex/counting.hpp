#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "msetlex/seek.hpp"

// Ranking and unranking under the eight orderings.  Counts use arbitrary
// precision so universes whose value space exceeds 64 bits still rank
// correctly; at benchmark scale the numbers stay tiny.

namespace msetlex {

using Count = boost::multiprecision::cpp_int;

inline Count value_count(const Universe& u) {
    Count total = 1;
    for (Occ c : u.caps()) total *= (static_cast<long>(c) + 1);
    return total;
}

// Rank arithmetic for one (universe, ordering) pair.  Builds a suffix DP over
// the ordering's significance direction:
//   cnt[t][c][v] = #ways to fill the positions from significance index t on
//                  with total c and exactly v nonzero entries.
class Ranker {
public:
    Ranker(Universe u, Ordering ord) : u_(std::move(u)), ord_(ord) {
        const OrderSpec spec = order_spec(ord_);
        const int n = u_.size();
        sig_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            sig_[static_cast<std::size_t>(i)] = spec.colex ? n - 1 - i : i;

        max_card_ = u_.total_cap();
        max_var_ = u_.max_variety();
        cnt_.assign(static_cast<std::size_t>(n) + 1,
                    std::vector<std::vector<Count>>(
                        static_cast<std::size_t>(max_card_) + 1,
                        std::vector<Count>(static_cast<std::size_t>(max_var_) + 1, 0)));
        cnt_[static_cast<std::size_t>(n)][0][0] = 1;
        for (int t = n - 1; t >= 0; --t) {
            const int cap = u_.caps()[static_cast<std::size_t>(sig_[static_cast<std::size_t>(t)])];
            for (int c = 0; c <= max_card_; ++c) {
                for (int v = 0; v <= max_var_; ++v) {
                    Count acc = 0;
                    for (int w = 0; w <= std::min(cap, c); ++w) {
                        const int dv = w > 0 ? 1 : 0;
                        if (v - dv < 0) continue;
                        acc += cnt_at(t + 1, c - w, v - dv);
                    }
                    cnt_[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)]
                        [static_cast<std::size_t>(v)] = std::move(acc);
                }
            }
        }
        build_strata();
    }

    const Universe& universe() const { return u_; }
    Ordering ordering() const { return ord_; }

    Count total() const { return strata_cum_.empty() ? Count(1) : strata_cum_.back(); }

    // Multisets with exactly this cardinality and variety.
    Count stratum_count(int card, int var) const {
        if (card < 0 || card > max_card_ || var < 0 || var > max_var_) return 0;
        return cnt_at(0, card, var);
    }

    // 0-based position in the full alpha enumeration.
    Count rank(const Multiset& ms) const {
        detail::check_member(u_, ms);
        const AlphaKey key = alpha_key(ord_, ms);
        Count r = strata_before(key);
        r += rank_in_stratum(ms);
        return r;
    }

    Multiset unrank(Count k) const {
        if (k < 0 || k >= total())
            throw std::invalid_argument("rank out of range");
        // locate the stratum by cumulative counts
        std::size_t lo = 0, hi = strata_cum_.size();
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (strata_cum_[mid - 1] <= k)
                lo = mid;
            else
                hi = mid;
        }
        std::size_t idx = lo;
        if (idx > 0) k -= strata_cum_[idx - 1];
        const auto [ck, vk] = strata_keys_[idx];
        return unrank_in_stratum(ck, vk, std::move(k));
    }

private:
    const Count& cnt_at(int t, int c, int v) const {
        return cnt_[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)]
                   [static_cast<std::size_t>(v)];
    }

    // Strata in ordering-key order as (card, var) pairs, with the orderings
    // that ignore one key collapsing it.
    void build_strata() {
        const OrderSpec spec = order_spec(ord_);
        auto push = [&](int c, int v, const Count& cc) {
            if (cc == 0) return;
            strata_keys_.emplace_back(c, v);
            strata_cum_.push_back(strata_cum_.empty() ? cc : strata_cum_.back() + cc);
        };
        if (spec.num_keys == 1 && spec.keys[0] == KeyKind::Card) {
            for (int c = 0; c <= max_card_; ++c) {
                Count cc = 0;
                for (int v = 0; v <= max_var_; ++v) cc += stratum_count(c, v);
                push(c, -1, cc);
            }
        } else if (spec.num_keys == 1) {
            for (int v = 0; v <= max_var_; ++v) {
                Count cc = 0;
                for (int c = 0; c <= max_card_; ++c) cc += stratum_count(c, v);
                push(-1, v, cc);
            }
        } else if (spec.keys[0] == KeyKind::Card) {
            for (int c = 0; c <= max_card_; ++c)
                for (int v = 0; v <= max_var_; ++v) push(c, v, stratum_count(c, v));
        } else {
            for (int v = 0; v <= max_var_; ++v)
                for (int c = 0; c <= max_card_; ++c) push(c, v, stratum_count(c, v));
        }
    }

    Count strata_before(AlphaKey key) const {
        const OrderSpec spec = order_spec(ord_);
        std::pair<int, int> want;  // (card, var) with -1 for collapsed
        if (spec.num_keys == 1 && spec.keys[0] == KeyKind::Card)
            want = {key.k[0], -1};
        else if (spec.num_keys == 1)
            want = {-1, key.k[0]};
        else if (spec.keys[0] == KeyKind::Card)
            want = {key.k[0], key.k[1]};
        else
            want = {key.k[1], key.k[0]};
        for (std::size_t i = 0; i < strata_keys_.size(); ++i) {
            if (strata_keys_[i] == want)
                return i == 0 ? Count(0) : strata_cum_[i - 1];
        }
        throw std::logic_error("value stratum missing from table");
    }

    // Digit DP: completions of the remaining positions, with the collapsed
    // key summed out.
    Count completions(int t, int rem_card, int rem_var, bool card_fixed,
                      bool var_fixed) const {
        if (card_fixed && (rem_card < 0 || rem_card > max_card_)) return 0;
        if (var_fixed && (rem_var < 0 || rem_var > max_var_)) return 0;
        if (card_fixed && var_fixed) return cnt_at(t, rem_card, rem_var);
        Count acc = 0;
        if (card_fixed) {
            for (int v = 0; v <= max_var_; ++v) acc += cnt_at(t, rem_card, v);
        } else {
            for (int c = 0; c <= max_card_; ++c) acc += cnt_at(t, c, rem_var);
        }
        return acc;
    }

    void stratum_flags(bool& card_fixed, bool& var_fixed) const {
        const OrderSpec spec = order_spec(ord_);
        card_fixed = var_fixed = false;
        for (int i = 0; i < spec.num_keys; ++i) {
            if (spec.keys[static_cast<std::size_t>(i)] == KeyKind::Card)
                card_fixed = true;
            else
                var_fixed = true;
        }
    }

    Count rank_in_stratum(const Multiset& ms) const {
        bool card_fixed, var_fixed;
        stratum_flags(card_fixed, var_fixed);
        const auto occ = ms.occurrences();
        int rem_card = ms.cardinality();
        int rem_var = ms.variety();
        Count r = 0;
        const int n = u_.size();
        for (int t = 0; t < n; ++t) {
            const int p = sig_[static_cast<std::size_t>(t)];
            const int x = occ[static_cast<std::size_t>(p)];
            for (int w = 0; w < x; ++w) {
                const int dv = w > 0 ? 1 : 0;
                r += completions(t + 1, rem_card - w, rem_var - dv, card_fixed,
                                 var_fixed);
            }
            rem_card -= x;
            rem_var -= x > 0 ? 1 : 0;
        }
        return r;
    }

    Multiset unrank_in_stratum(int card_key, int var_key, Count k) const {
        bool card_fixed, var_fixed;
        stratum_flags(card_fixed, var_fixed);
        const int n = u_.size();
        std::vector<Occ> occ(static_cast<std::size_t>(n), 0);
        int rem_card = card_key, rem_var = var_key;
        for (int t = 0; t < n; ++t) {
            const int p = sig_[static_cast<std::size_t>(t)];
            const int cap = u_.caps()[static_cast<std::size_t>(p)];
            for (int w = 0; w <= cap; ++w) {
                const int dv = w > 0 ? 1 : 0;
                Count block = completions(t + 1, rem_card - w, rem_var - dv,
                                          card_fixed, var_fixed);
                if (k < block) {
                    occ[static_cast<std::size_t>(p)] = static_cast<Occ>(w);
                    rem_card -= w;
                    rem_var -= dv;
                    break;
                }
                k -= block;
                if (w == cap)
                    throw std::logic_error("unrank ran out of digits");
            }
        }
        return Multiset(std::move(occ));
    }

    Universe u_;
    Ordering ord_;
    std::vector<int> sig_;
    int max_card_ = 0;
    int max_var_ = 0;
    std::vector<std::vector<std::vector<Count>>> cnt_;
    std::vector<std::pair<int, int>> strata_keys_;  // (card or -1, var or -1)
    std::vector<Count> strata_cum_;
};

inline Count rank(const Universe& u, Ordering ord, const Multiset& ms) {
    return Ranker(u, ord).rank(ms);
}

inline Multiset unrank(const Universe& u, Ordering ord, Count k) {
    return Ranker(u, ord).unrank(std::move(k));
}

}  // namespace msetlex

#pragma once

#include <deque>
#include <variant>

#include "msetlex/domain.hpp"

// Bounds propagators over alpha-interval or subset-bounds domains, plus the
// fixpoint engine.  Filtering is relaxation-based: derive occurrence boxes,
// do interval arithmetic on them, then re-seek interval endpoints inside the
// filtered box.  Complete bound-support computation is NP-hard even for unary
// constraints, so the propagators are sound but deliberately incomplete; an
// enumeration-backed exact mode exists for small domains.

namespace msetlex {

using VarDomain = std::variant<AlphaInterval, SubsetBoundsCV>;

inline bool domain_is_singleton(const VarDomain& d) {
    return std::visit([](const auto& dom) { return dom.is_singleton(); }, d);
}

inline Multiset domain_value(const VarDomain& d) {
    if (const auto* iv = std::get_if<AlphaInterval>(&d)) return iv->lb();
    return std::get<SubsetBoundsCV>(d).the_value();
}

inline bool domain_contains(const VarDomain& d, const Multiset& ms) {
    return std::visit([&](const auto& dom) { return dom.contains(ms); }, d);
}

inline OccBox domain_envelope(const Universe& u, const VarDomain& d) {
    if (const auto* iv = std::get_if<AlphaInterval>(&d)) return envelope_of(u, *iv);
    return std::get<SubsetBoundsCV>(d).box();
}

// Restrict a domain to a box; nullopt = wipeout.  For intervals the endpoints
// are re-sought: values between the old and new bound all violate the box, so
// no supported value is lost.
inline std::optional<VarDomain> domain_narrow(const Universe& u, const VarDomain& d,
                                              const OccBox& box) {
    if (const auto* iv = std::get_if<AlphaInterval>(&d)) {
        auto norm = normalize_box(u, box);
        if (!norm) return std::nullopt;
        auto lb = seek_least_geq(u, iv->ordering(), iv->lb(), *norm);
        if (!lb || !iv->contains(*lb)) return std::nullopt;
        auto ub = seek_greatest_leq(u, iv->ordering(), iv->ub(), *norm);
        if (!ub) return std::nullopt;
        auto next = AlphaInterval::make(iv->ordering(), std::move(*lb), std::move(*ub));
        if (!next) return std::nullopt;
        return VarDomain(std::move(*next));
    }
    const auto& sb = std::get<SubsetBoundsCV>(d);
    auto merged = SubsetBoundsCV::from_box(u, sb.box().intersect(box));
    if (!merged) return std::nullopt;
    return VarDomain(std::move(*merged));
}

// Order-level tightening (used by the ordering chain and by branching).  The
// subset-bounds fallback keeps only the leading-key consequence plus a
// bound-vs-bound check; it cannot represent lex positions.
inline std::optional<VarDomain> domain_tighten_alpha(const Universe& u, Ordering ord,
                                                     const VarDomain& d,
                                                     const Multiset* lb,
                                                     const Multiset* ub) {
    if (const auto* iv = std::get_if<AlphaInterval>(&d)) {
        auto next = iv->tighten(lb ? std::optional<Multiset>(*lb) : std::nullopt,
                                ub ? std::optional<Multiset>(*ub) : std::nullopt);
        if (!next) return std::nullopt;
        return VarDomain(std::move(*next));
    }
    const auto& sb = std::get<SubsetBoundsCV>(d);
    OccBox box = sb.box();
    const OrderSpec spec = order_spec(ord);
    const KeyKind lead = spec.keys[0];
    if (lb) {
        const int k = lead == KeyKind::Card ? lb->cardinality() : lb->variety();
        if (lead == KeyKind::Card)
            box.card.lo = std::max(box.card.lo, k);
        else
            box.var.lo = std::max(box.var.lo, k);
    }
    if (ub) {
        const int k = lead == KeyKind::Card ? ub->cardinality() : ub->variety();
        if (lead == KeyKind::Card)
            box.card.hi = std::min(box.card.hi, k);
        else
            box.var.hi = std::min(box.var.hi, k);
    }
    auto merged = SubsetBoundsCV::from_box(u, box);
    if (!merged) return std::nullopt;
    if (merged->is_singleton()) {
        const Multiset v = merged->the_value();
        if (lb && alpha_less(ord, v, *lb)) return std::nullopt;
        if (ub && alpha_less(ord, *ub, v)) return std::nullopt;
    }
    return VarDomain(std::move(*merged));
}

class Store {
public:
    explicit Store(Universe u) : u_(std::move(u)) {}

    int add_variable(VarDomain dom) {
        doms_.push_back(std::move(dom));
        return static_cast<int>(doms_.size()) - 1;
    }

    const Universe& universe() const { return u_; }
    int size() const { return static_cast<int>(doms_.size()); }
    const VarDomain& domain(int v) const { return doms_[static_cast<std::size_t>(v)]; }

    void set_domain(int v, VarDomain d) { doms_[static_cast<std::size_t>(v)] = std::move(d); }

    bool all_singleton() const {
        return std::all_of(doms_.begin(), doms_.end(), domain_is_singleton);
    }

    std::vector<Multiset> values() const {
        std::vector<Multiset> out;
        out.reserve(doms_.size());
        for (const auto& d : doms_) out.push_back(domain_value(d));
        return out;
    }

private:
    Universe u_;
    std::vector<VarDomain> doms_;
};

enum class PropagatorKind : std::uint8_t {
    Cardinality,         // unary: card in [lo, hi]
    Variety,             // unary: var in [lo, hi]
    Intersection,        // ternary: X cap Y = Z
    UnionPlus,           // ternary: X uplus Y = Z
    IntersectCardAtMost, // binary: |X cap Y| <= limit
    AlphaLess,           // binary: X <=_a Y
    VarietySumAtLeast,   // n-ary: sum of varieties >= bound (objective cut)
    MeetExcessAtMost,    // n-ary: repeated-meeting count <= bound (objective cut)
};

struct Propagator {
    PropagatorKind kind;
    std::vector<int> scope;
    IntRange range{};         // Cardinality / Variety
    int limit = 0;            // IntersectCardAtMost
    long long bound = 0;      // objective cuts; rewritten during search
    Ordering chain_ord = Ordering::LL;  // AlphaLess
    // MeetExcessAtMost: scope grouped into weeks of `groups_per_week` vars
    int groups_per_week = 0;
    int teams = 0;

    static Propagator cardinality(int var, IntRange r) {
        return {PropagatorKind::Cardinality, {var}, r, 0, 0, Ordering::LL, 0, 0};
    }
    static Propagator variety(int var, IntRange r) {
        return {PropagatorKind::Variety, {var}, r, 0, 0, Ordering::LL, 0, 0};
    }
    static Propagator intersection(int x, int y, int z) {
        return {PropagatorKind::Intersection, {x, y, z}, {}, 0, 0, Ordering::LL, 0, 0};
    }
    static Propagator unionplus(int x, int y, int z) {
        return {PropagatorKind::UnionPlus, {x, y, z}, {}, 0, 0, Ordering::LL, 0, 0};
    }
    static Propagator intersect_card_atmost(int x, int y, int limit) {
        return {PropagatorKind::IntersectCardAtMost, {x, y}, {}, limit, 0,
                Ordering::LL, 0, 0};
    }
    static Propagator alpha_less(int x, int y, Ordering ord) {
        return {PropagatorKind::AlphaLess, {x, y}, {}, 0, 0, ord, 0, 0};
    }
};

enum class PropStatus : std::uint8_t { Failed, NoChange, Changed };

namespace detail {

struct PropContext {
    Store& store;
    std::vector<int>& changed;  // var ids touched by the current run
    std::vector<std::pair<int, VarDomain>>* trail = nullptr;

    bool update(int var, std::optional<VarDomain> next) {
        if (!next) return false;
        if (!(std::visit([](const auto& a, const auto& b) {
                if constexpr (std::is_same_v<decltype(a), decltype(b)>)
                    return a == b;
                else
                    return false;
            }, store.domain(var), *next))) {
            if (trail) trail->emplace_back(var, store.domain(var));
            store.set_domain(var, std::move(*next));
            changed.push_back(var);
        }
        return true;
    }
};

inline IntRange plus(IntRange a, IntRange b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

inline IntRange minus(IntRange a, IntRange b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

inline PropStatus run_unary_box(const Universe& u, PropContext& ctx, int var,
                                const OccBox& box) {
    const std::size_t before = ctx.changed.size();
    if (!ctx.update(var, domain_narrow(u, ctx.store.domain(var), box)))
        return PropStatus::Failed;
    return ctx.changed.size() > before ? PropStatus::Changed : PropStatus::NoChange;
}

inline PropStatus run_intersection(const Universe& u, PropContext& ctx, int xi, int yi,
                                   int zi) {
    const int n = u.size();
    OccBox ex = domain_envelope(u, ctx.store.domain(xi));
    OccBox ey = domain_envelope(u, ctx.store.domain(yi));
    OccBox ez = domain_envelope(u, ctx.store.domain(zi));

    OccBox bx = OccBox::any(), by = OccBox::any(), bz = OccBox::any();
    bx.occ.resize(static_cast<std::size_t>(n));
    by.occ.resize(static_cast<std::size_t>(n));
    bz.occ.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        IntRange x = ex.occ[s], y = ey.occ[s], z = ez.occ[s];
        // z = min(x, y)
        z = z.intersect({std::min(x.lo, y.lo), std::min(x.hi, y.hi)});
        x.lo = std::max(x.lo, z.lo);
        y.lo = std::max(y.lo, z.lo);
        if (y.lo > z.hi) x.hi = std::min(x.hi, z.hi);
        if (x.lo > z.hi) y.hi = std::min(y.hi, z.hi);
        if (x.empty() || y.empty() || z.empty()) return PropStatus::Failed;
        bx.occ[s] = x;
        by.occ[s] = y;
        bz.occ[s] = z;
    }
    // cardinality and variety coupling
    const int total = u.total_cap();
    IntRange cz = ez.card.intersect({ex.card.lo + ey.card.lo - total,
                                     std::min(ex.card.hi, ey.card.hi)});
    IntRange cx = ex.card.intersect({cz.lo, cz.hi - ey.card.lo + total});
    IntRange cy = ey.card.intersect({cz.lo, cz.hi - ex.card.lo + total});
    IntRange vz = ez.var.intersect({ex.var.lo + ey.var.lo - u.max_variety(),
                                    std::min(ex.var.hi, ey.var.hi)});
    IntRange vx = ex.var.intersect(IntRange::atLeast(vz.lo));
    IntRange vy = ey.var.intersect(IntRange::atLeast(vz.lo));
    if (cz.empty() || cx.empty() || cy.empty() || vz.empty() || vx.empty() ||
        vy.empty())
        return PropStatus::Failed;
    bx.card = cx; bx.var = vx;
    by.card = cy; by.var = vy;
    bz.card = cz; bz.var = vz;

    const std::size_t before = ctx.changed.size();
    if (!ctx.update(xi, domain_narrow(u, ctx.store.domain(xi), bx)))
        return PropStatus::Failed;
    if (!ctx.update(yi, domain_narrow(u, ctx.store.domain(yi), by)))
        return PropStatus::Failed;
    if (!ctx.update(zi, domain_narrow(u, ctx.store.domain(zi), bz)))
        return PropStatus::Failed;

    // |Z| >= |X| forces X = Z (pointwise z <= x with equal sums); likewise Y.
    const auto unify = [&](int ai, int bi) -> bool {
        const auto* b = std::get_if<AlphaInterval>(&ctx.store.domain(bi));
        if (!b) return true;
        const Multiset blb = b->lb(), bub = b->ub();
        if (!ctx.update(ai, domain_tighten_alpha(u, b->ordering(),
                                                 ctx.store.domain(ai), &blb, &bub)))
            return false;
        const auto* a = std::get_if<AlphaInterval>(&ctx.store.domain(ai));
        if (!a) return true;
        const Multiset alb = a->lb(), aub = a->ub();
        return ctx.update(bi, domain_tighten_alpha(u, a->ordering(),
                                                   ctx.store.domain(bi), &alb, &aub));
    };
    if (cz.lo >= cx.hi && !unify(xi, zi)) return PropStatus::Failed;
    if (cz.lo >= cy.hi && !unify(yi, zi)) return PropStatus::Failed;
    return ctx.changed.size() > before ? PropStatus::Changed : PropStatus::NoChange;
}

inline PropStatus run_unionplus(const Universe& u, PropContext& ctx, int xi, int yi,
                                int zi) {
    const int n = u.size();
    OccBox ex = domain_envelope(u, ctx.store.domain(xi));
    OccBox ey = domain_envelope(u, ctx.store.domain(yi));
    OccBox ez = domain_envelope(u, ctx.store.domain(zi));

    OccBox bx = OccBox::any(), by = OccBox::any(), bz = OccBox::any();
    bx.occ.resize(static_cast<std::size_t>(n));
    by.occ.resize(static_cast<std::size_t>(n));
    bz.occ.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        IntRange x = ex.occ[s], y = ey.occ[s], z = ez.occ[s];
        z = z.intersect(plus(x, y));
        x = x.intersect(minus(z, y));
        y = y.intersect(minus(z, x));
        if (x.empty() || y.empty() || z.empty()) return PropStatus::Failed;
        bx.occ[s] = x;
        by.occ[s] = y;
        bz.occ[s] = z;
    }
    bz.card = ez.card.intersect(plus(ex.card, ey.card));
    bx.card = ex.card.intersect(minus(bz.card, ey.card));
    by.card = ey.card.intersect(minus(bz.card, ex.card));
    bz.var = ez.var.intersect(
        {std::max(ex.var.lo, ey.var.lo), ex.var.hi + ey.var.hi});
    bx.var = ex.var.intersect({bz.var.lo - ey.var.hi, bz.var.hi});
    by.var = ey.var.intersect({bz.var.lo - ex.var.hi, bz.var.hi});
    if (bz.card.empty() || bx.card.empty() || by.card.empty() || bz.var.empty() ||
        bx.var.empty() || by.var.empty())
        return PropStatus::Failed;

    const std::size_t before = ctx.changed.size();
    if (!ctx.update(xi, domain_narrow(u, ctx.store.domain(xi), bx)))
        return PropStatus::Failed;
    if (!ctx.update(yi, domain_narrow(u, ctx.store.domain(yi), by)))
        return PropStatus::Failed;
    if (!ctx.update(zi, domain_narrow(u, ctx.store.domain(zi), bz)))
        return PropStatus::Failed;
    return ctx.changed.size() > before ? PropStatus::Changed : PropStatus::NoChange;
}

inline PropStatus run_intersect_card_atmost(const Universe& u, PropContext& ctx, int xi,
                                            int yi, int limit) {
    const int n = u.size();
    const std::size_t before = ctx.changed.size();
    for (int round = 0; round < 2; ++round) {
        const OccBox ex = domain_envelope(u, ctx.store.domain(xi));
        const OccBox ey = domain_envelope(u, ctx.store.domain(yi));
        int forced = 0;
        for (int i = 0; i < n; ++i) {
            const std::size_t s = static_cast<std::size_t>(i);
            forced += std::min(ex.occ[s].lo, ey.occ[s].lo);
        }
        if (forced > limit) return PropStatus::Failed;

        // slack-based occurrence pruning
        OccBox bx = OccBox::any(), by = OccBox::any();
        bx.occ.resize(static_cast<std::size_t>(n));
        by.occ.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const std::size_t s = static_cast<std::size_t>(i);
            const int here = std::min(ex.occ[s].lo, ey.occ[s].lo);
            const int slack = limit - (forced - here);
            IntRange x = ex.occ[s], y = ey.occ[s];
            if (y.lo > slack) x.hi = std::min(x.hi, slack);
            if (x.lo > slack) y.hi = std::min(y.hi, slack);
            if (x.empty() || y.empty()) return PropStatus::Failed;
            bx.occ[s] = x;
            by.occ[s] = y;
        }
        if (!ctx.update(xi, domain_narrow(u, ctx.store.domain(xi), bx)))
            return PropStatus::Failed;
        if (!ctx.update(yi, domain_narrow(u, ctx.store.domain(yi), by)))
            return PropStatus::Failed;

        // interval endpoints with a forced overlap beyond the limit are
        // unsupported; advance them one value at a time
        bool endpoint_moved = false;
        for (int side = 0; side < 2; ++side) {
            const int vi = side == 0 ? xi : yi;
            const int wi = side == 0 ? yi : xi;
            const auto* iv = std::get_if<AlphaInterval>(&ctx.store.domain(vi));
            if (!iv) continue;
            const OccBox other = domain_envelope(u, ctx.store.domain(wi));
            auto forced_with = [&](const Multiset& value) {
                int acc = 0;
                auto occ = value.occurrences();
                for (int i = 0; i < n; ++i)
                    acc += std::min<int>(occ[static_cast<std::size_t>(i)],
                                         other.occ[static_cast<std::size_t>(i)].lo);
                return acc;
            };
            AlphaInterval cur = *iv;
            bool moved = false;
            while (forced_with(cur.lb()) > limit) {
                auto next = successor(u, cur.ordering(), cur.lb());
                if (!next) return PropStatus::Failed;
                auto t = cur.tighten(std::move(next), std::nullopt);
                if (!t) return PropStatus::Failed;
                cur = std::move(*t);
                moved = true;
            }
            while (forced_with(cur.ub()) > limit) {
                auto prev = predecessor(u, cur.ordering(), cur.ub());
                if (!prev) return PropStatus::Failed;
                auto t = cur.tighten(std::nullopt, std::move(prev));
                if (!t) return PropStatus::Failed;
                cur = std::move(*t);
                moved = true;
            }
            if (moved) {
                endpoint_moved = true;
                if (!ctx.update(vi, VarDomain(std::move(cur))))
                    return PropStatus::Failed;
            }
        }
        if (!endpoint_moved) break;
    }
    return ctx.changed.size() > before ? PropStatus::Changed : PropStatus::NoChange;
}

inline PropStatus run_alpha_less(const Universe& u, PropContext& ctx, int xi, int yi,
                                 Ordering ord) {
    const std::size_t before = ctx.changed.size();
    const VarDomain& dx = ctx.store.domain(xi);
    const VarDomain& dy = ctx.store.domain(yi);
    if (const auto* x = std::get_if<AlphaInterval>(&dx)) {
        if (x->ordering() != ord)
            throw std::invalid_argument("ordering chain must match the domain ordering");
        const Multiset xlb = x->lb();
        if (!ctx.update(yi, domain_tighten_alpha(u, ord, dy, &xlb, nullptr)))
            return PropStatus::Failed;
        const Multiset yub = std::get<AlphaInterval>(ctx.store.domain(yi)).ub();
        if (!ctx.update(xi, domain_tighten_alpha(u, ord, ctx.store.domain(xi), nullptr,
                                                 &yub)))
            return PropStatus::Failed;
    } else {
        // subset-bounds chain: leading-key consequence plus box-extreme check
        const auto& sx = std::get<SubsetBoundsCV>(dx);
        const auto& sy = std::get<SubsetBoundsCV>(dy);
        const OrderSpec spec = order_spec(ord);
        auto lo_x = alpha_least(u, ord, sx.box());
        auto hi_y = alpha_greatest(u, ord, sy.box());
        if (!lo_x || !hi_y) return PropStatus::Failed;
        if (alpha_less(ord, *hi_y, *lo_x)) return PropStatus::Failed;
        OccBox box_y = sy.box();
        OccBox box_x = sx.box();
        if (spec.keys[0] == KeyKind::Card) {
            box_y.card.lo = std::max(box_y.card.lo, sx.card().lo);
            box_x.card.hi = std::min(box_x.card.hi, sy.card().hi);
        } else {
            box_y.var.lo = std::max(box_y.var.lo, sx.var().lo);
            box_x.var.hi = std::min(box_x.var.hi, sy.var().hi);
        }
        if (!ctx.update(yi, domain_narrow(u, dy, box_y))) return PropStatus::Failed;
        if (!ctx.update(xi, domain_narrow(u, dx, box_x))) return PropStatus::Failed;
    }
    return ctx.changed.size() > before ? PropStatus::Changed : PropStatus::NoChange;
}

inline PropStatus run_variety_sum_atleast(const Universe& u, PropContext& ctx,
                                          const std::vector<int>& vars,
                                          long long bound) {
    if (bound <= 0) return PropStatus::NoChange;
    const std::size_t before = ctx.changed.size();
    std::vector<IntRange> vr;
    vr.reserve(vars.size());
    long long sum_hi = 0;
    for (int v : vars) {
        const OccBox env = domain_envelope(u, ctx.store.domain(v));
        vr.push_back(env.var);
        sum_hi += env.var.hi;
    }
    if (sum_hi < bound) return PropStatus::Failed;
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const long long need = bound - (sum_hi - vr[j].hi);
        if (need > vr[j].lo) {
            OccBox box = OccBox::any();
            box.var.lo = static_cast<int>(need);
            if (!ctx.update(vars[j], domain_narrow(u, ctx.store.domain(vars[j]), box)))
                return PropStatus::Failed;
        }
    }
    return ctx.changed.size() > before ? PropStatus::Changed : PropStatus::NoChange;
}

// Lower bound on the golfer objective: pairs forced to meet in more than one
// week.  Fail-only; leaves are evaluated exactly by the search.
inline PropStatus run_meet_excess_atmost(const Universe& u, PropContext& ctx,
                                         const Propagator& p) {
    if (p.bound < 0) return PropStatus::Failed;
    const int gpw = p.groups_per_week;
    const int weeks = static_cast<int>(p.scope.size()) / gpw;
    std::vector<OccBox> env;
    env.reserve(p.scope.size());
    for (int v : p.scope) env.push_back(domain_envelope(u, ctx.store.domain(v)));
    long long excess = 0;
    for (int a = 1; a <= p.teams; ++a) {
        for (int b = a + 1; b <= p.teams; ++b) {
            int met = 0;
            for (int w = 0; w < weeks; ++w) {
                bool forced = false;
                for (int g = 0; g < gpw && !forced; ++g) {
                    const auto& e = env[static_cast<std::size_t>(w * gpw + g)];
                    forced = e.occ[static_cast<std::size_t>(a - 1)].lo > 0 &&
                             e.occ[static_cast<std::size_t>(b - 1)].lo > 0;
                }
                if (forced) ++met;
            }
            excess += std::max(0, met - 1);
            if (excess > p.bound) return PropStatus::Failed;
        }
    }
    return PropStatus::NoChange;
}

}  // namespace detail

inline PropStatus run_propagator(const Universe& u, Store& store, const Propagator& p,
                                 std::vector<int>& changed,
                                 std::vector<std::pair<int, VarDomain>>* trail = nullptr) {
    detail::PropContext ctx{store, changed, trail};
    switch (p.kind) {
        case PropagatorKind::Cardinality: {
            OccBox box = OccBox::any();
            box.card = p.range;
            return detail::run_unary_box(u, ctx, p.scope[0], box);
        }
        case PropagatorKind::Variety: {
            OccBox box = OccBox::any();
            box.var = p.range;
            return detail::run_unary_box(u, ctx, p.scope[0], box);
        }
        case PropagatorKind::Intersection:
            return detail::run_intersection(u, ctx, p.scope[0], p.scope[1], p.scope[2]);
        case PropagatorKind::UnionPlus:
            return detail::run_unionplus(u, ctx, p.scope[0], p.scope[1], p.scope[2]);
        case PropagatorKind::IntersectCardAtMost:
            return detail::run_intersect_card_atmost(u, ctx, p.scope[0], p.scope[1],
                                                     p.limit);
        case PropagatorKind::AlphaLess:
            return detail::run_alpha_less(u, ctx, p.scope[0], p.scope[1], p.chain_ord);
        case PropagatorKind::VarietySumAtLeast:
            return detail::run_variety_sum_atleast(u, ctx, p.scope, p.bound);
        case PropagatorKind::MeetExcessAtMost:
            return detail::run_meet_excess_atmost(u, ctx, p);
    }
    throw std::logic_error("unknown propagator kind");
}

namespace detail {

inline bool tuple_satisfies(const Propagator& p,
                            const std::vector<const Multiset*>& vals) {
    switch (p.kind) {
        case PropagatorKind::Cardinality:
            return p.range.contains(vals[0]->cardinality());
        case PropagatorKind::Variety:
            return p.range.contains(vals[0]->variety());
        case PropagatorKind::Intersection:
            return intersect(*vals[0], *vals[1]) == *vals[2];
        case PropagatorKind::UnionPlus:
            return unionplus(*vals[0], *vals[1]) == *vals[2];
        case PropagatorKind::IntersectCardAtMost:
            return overlap_cardinality(*vals[0], *vals[1]) <= p.limit;
        case PropagatorKind::AlphaLess:
            return alpha_leq(p.chain_ord, *vals[0], *vals[1]);
        default:
            return true;  // objective cuts are engine state, not constraints
    }
}

}  // namespace detail

// Exact bounds consistency by enumeration: every bound of every variable gets
// an actual support tuple within the current bounds of the constraint's other
// variables.  Exponential in the scope; intended for desk-scale verification
// only, hence the hard member-count gate.
inline std::optional<Store> exact_fixpoint(const Universe& u, Store store,
                                           const std::vector<Propagator>& props,
                                           std::uint64_t member_cap = 200000) {
    const auto members_of = [&](int v) {
        std::vector<Multiset> out;
        for (const auto& value : enumerate(u, Ordering::LL, member_cap))
            if (domain_contains(store.domain(v), value)) out.push_back(value);
        return out;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : props) {
            if (p.kind == PropagatorKind::VarietySumAtLeast ||
                p.kind == PropagatorKind::MeetExcessAtMost)
                continue;
            const std::size_t arity = p.scope.size();
            std::vector<std::vector<Multiset>> domains;
            std::uint64_t combos = 1;
            for (int v : p.scope) {
                domains.push_back(members_of(v));
                if (domains.back().empty()) return std::nullopt;
                combos *= domains.back().size();
                if (combos > member_cap)
                    throw ResourceError("exact propagation gate exceeded");
            }
            // supported[j] = values of scope var j appearing in a satisfying tuple
            std::vector<std::vector<bool>> supported(arity);
            for (std::size_t j = 0; j < arity; ++j)
                supported[j].assign(domains[j].size(), false);
            std::vector<std::size_t> idx(arity, 0);
            std::vector<const Multiset*> vals(arity);
            for (;;) {
                for (std::size_t j = 0; j < arity; ++j) vals[j] = &domains[j][idx[j]];
                if (detail::tuple_satisfies(p, vals))
                    for (std::size_t j = 0; j < arity; ++j) supported[j][idx[j]] = true;
                std::size_t j = 0;
                while (j < arity && ++idx[j] == domains[j].size()) idx[j++] = 0;
                if (j == arity) break;
            }
            for (std::size_t j = 0; j < arity; ++j) {
                if (std::find(supported[j].begin(), supported[j].end(), true) ==
                    supported[j].end())
                    return std::nullopt;
                const int var = p.scope[j];
                if (const auto* iv = std::get_if<AlphaInterval>(&store.domain(var))) {
                    // supported values were listed in LL order; extremize them
                    // under the interval's own ordering
                    const Ordering ord = iv->ordering();
                    const Multiset* alo = nullptr;
                    const Multiset* ahi = nullptr;
                    for (std::size_t k = 0; k < domains[j].size(); ++k) {
                        if (!supported[j][k]) continue;
                        if (!alo || alpha_less(ord, domains[j][k], *alo))
                            alo = &domains[j][k];
                        if (!ahi || alpha_less(ord, *ahi, domains[j][k]))
                            ahi = &domains[j][k];
                    }
                    auto next = iv->tighten(*alo, *ahi);
                    if (!next) return std::nullopt;
                    if (!(*next == *iv)) {
                        store.set_domain(var, std::move(*next));
                        changed = true;
                    }
                } else {
                    // subset bounds: shrink the box to the supported envelope
                    OccBox box = OccBox::any();
                    box.occ.assign(static_cast<std::size_t>(u.size()),
                                   IntRange{std::numeric_limits<int>::max(),
                                            std::numeric_limits<int>::min()});
                    box.card = {std::numeric_limits<int>::max(),
                                std::numeric_limits<int>::min()};
                    box.var = box.card;
                    for (std::size_t k = 0; k < domains[j].size(); ++k) {
                        if (!supported[j][k]) continue;
                        const Multiset& v = domains[j][k];
                        box.card.lo = std::min(box.card.lo, v.cardinality());
                        box.card.hi = std::max(box.card.hi, v.cardinality());
                        box.var.lo = std::min(box.var.lo, v.variety());
                        box.var.hi = std::max(box.var.hi, v.variety());
                        for (int e = 1; e <= u.size(); ++e) {
                            auto& r = box.occ[static_cast<std::size_t>(e - 1)];
                            r.lo = std::min<int>(r.lo, v.occ(e));
                            r.hi = std::max<int>(r.hi, v.occ(e));
                        }
                    }
                    auto next = SubsetBoundsCV::from_box(u, box);
                    if (!next) return std::nullopt;
                    if (!(*next == std::get<SubsetBoundsCV>(store.domain(var)))) {
                        store.set_domain(var, std::move(*next));
                        changed = true;
                    }
                }
            }
        }
    }
    return store;
}

// FIFO fixpoint with per-propagator dirty flags.  Returns false on wipeout.
// Bounds only ever move inward, so termination is guaranteed.
inline bool fixpoint(const Universe& u, Store& store,
                     const std::vector<Propagator>& props) {
    const int nv = store.size();
    std::vector<std::vector<int>> watchers(static_cast<std::size_t>(nv));
    for (std::size_t pi = 0; pi < props.size(); ++pi)
        for (int v : props[pi].scope)
            watchers[static_cast<std::size_t>(v)].push_back(static_cast<int>(pi));

    std::deque<int> queue;
    std::vector<bool> queued(props.size(), false);
    for (std::size_t pi = 0; pi < props.size(); ++pi) {
        queue.push_back(static_cast<int>(pi));
        queued[pi] = true;
    }
    std::vector<int> changed;
    while (!queue.empty()) {
        const int pi = queue.front();
        queue.pop_front();
        queued[static_cast<std::size_t>(pi)] = false;
        changed.clear();
        const PropStatus st =
            run_propagator(u, store, props[static_cast<std::size_t>(pi)], changed);
        if (st == PropStatus::Failed) return false;
        for (int v : changed) {
            for (int wi : watchers[static_cast<std::size_t>(v)]) {
                if (!queued[static_cast<std::size_t>(wi)]) {
                    queue.push_back(wi);
                    queued[static_cast<std::size_t>(wi)] = true;
                }
            }
        }
    }
    return true;
}

}  // namespace msetlex

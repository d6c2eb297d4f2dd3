#pragma once

#include "msetlex/search.hpp"

// Benchmark model builders: the extended Steiner system and the generalized
// social golfer problem, plus validators that re-check solutions on raw
// multisets without touching solver state.

namespace msetlex {

struct SteinerParams {
    int t = 1, k = 1, u = 1, b = 2, v = 1;
};

// b blocks, each a k-element multiset over u elements with variety >= v;
// every two blocks overlap in fewer than t elements; maximize the sum of
// the block varieties.  Blocks are ordered as a symmetry-breaking chain.
inline Model build_steiner(const SteinerParams& p, Representation repr) {
    if (p.t < 1 || p.k < 1 || p.u < 1 || p.b < 2)
        throw std::invalid_argument("steiner parameters out of range");
    if (p.v < 1 || p.v > std::min(p.k, p.u))
        throw std::invalid_argument("steiner variety bound out of range");
    Model model(Universe::uniform(p.u, static_cast<Occ>(p.k)), repr);
    std::vector<int> blocks;
    for (int j = 0; j < p.b; ++j) blocks.push_back(model.add_variable());
    for (int j = 0; j < p.b; ++j) {
        model.add(Propagator::cardinality(blocks[static_cast<std::size_t>(j)],
                                          IntRange::at(p.k)));
        model.add(Propagator::variety(blocks[static_cast<std::size_t>(j)],
                                      IntRange{p.v, p.u}));
    }
    for (int i = 0; i < p.b; ++i)
        for (int j = i + 1; j < p.b; ++j)
            model.add(Propagator::intersect_card_atmost(
                blocks[static_cast<std::size_t>(i)],
                blocks[static_cast<std::size_t>(j)], p.t - 1));
    for (int j = 0; j + 1 < p.b; ++j)
        model.add(Propagator::alpha_less(blocks[static_cast<std::size_t>(j)],
                                         blocks[static_cast<std::size_t>(j) + 1],
                                         repr.ord));
    model.objective = MaximizeVarietySum{blocks};
    return model;
}

inline bool validate_steiner(const SteinerParams& p,
                             std::span<const Multiset> blocks,
                             long long* objective_out = nullptr) {
    if (static_cast<int>(blocks.size()) < p.b) return false;
    long long obj = 0;
    for (int j = 0; j < p.b; ++j) {
        const Multiset& x = blocks[static_cast<std::size_t>(j)];
        if (x.universe_size() != p.u) return false;
        if (x.cardinality() != p.k || x.variety() < p.v) return false;
        for (int e = 1; e <= p.u; ++e)
            if (x.occ(e) > p.k) return false;
        obj += x.variety();
    }
    for (int i = 0; i < p.b; ++i)
        for (int j = i + 1; j < p.b; ++j)
            if (overlap_cardinality(blocks[static_cast<std::size_t>(i)],
                                    blocks[static_cast<std::size_t>(j)]) >= p.t)
                return false;
    if (objective_out) *objective_out = obj;
    return true;
}

struct GolferParams {
    int w = 1, m = 1, n = 1, g = 1, p = 1, v = 1;
};

struct GolferModel {
    Model model;
    std::vector<int> group_vars;  // week-major, w*g entries
};

// Schedules m teams of n members into g groups of p golfers per week for w
// weeks; every group needs at least v distinct teams, and a team cannot field
// more than its n members in one week (golfers may sit a week out, as in the
// reference instances where g*p < m*n).  Minimizes repeated meetings between
// team pairs.
inline GolferModel build_golfer(const GolferParams& p, Representation repr) {
    if (p.w < 1 || p.m < 1 || p.n < 1 || p.g < 1 || p.p < 1)
        throw std::invalid_argument("golfer parameters out of range");
    if (p.g * p.p > p.m * p.n)
        throw std::invalid_argument("not enough golfers for the weekly groups");
    if (p.v < 1 || p.v > std::min(p.p, p.m))
        throw std::invalid_argument("golfer variety bound out of range");

    // universe caps n per team bound every group and every partial weekly sum
    Model model(Universe::uniform(p.m, static_cast<Occ>(p.n)), repr);

    std::vector<int> groups;
    for (int w = 0; w < p.w; ++w)
        for (int g = 0; g < p.g; ++g) groups.push_back(model.add_variable());

    for (int idx : groups) {
        model.add(Propagator::cardinality(idx, IntRange::at(p.p)));
        model.add(Propagator::variety(idx, IntRange{p.v, p.m}));
    }

    // team capacity per week: a balanced unionplus tree whose root lives under
    // the same caps, so no team exceeds n appearances in a week
    for (int w = 0; w < p.w; ++w) {
        std::vector<int> level(groups.begin() + w * p.g,
                               groups.begin() + (w + 1) * p.g);
        while (level.size() > 1) {
            std::vector<int> up;
            for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
                const int z = model.add_variable();
                model.add(Propagator::unionplus(level[i], level[i + 1], z));
                up.push_back(z);
            }
            if (level.size() % 2 == 1) up.push_back(level.back());
            level = std::move(up);
        }
    }

    // symmetry: groups within a week ordered; weeks ordered by first group
    for (int w = 0; w < p.w; ++w)
        for (int g = 0; g + 1 < p.g; ++g)
            model.add(Propagator::alpha_less(groups[static_cast<std::size_t>(w * p.g + g)],
                                             groups[static_cast<std::size_t>(w * p.g + g + 1)],
                                             repr.ord));
    for (int w = 0; w + 1 < p.w; ++w)
        model.add(Propagator::alpha_less(groups[static_cast<std::size_t>(w * p.g)],
                                         groups[static_cast<std::size_t>((w + 1) * p.g)],
                                         repr.ord));

    model.objective = MinimizeMeetExcess{p.m, p.g, groups};
    return {std::move(model), std::move(groups)};
}

inline bool validate_golfer(const GolferParams& p, std::span<const Multiset> groups,
                            long long* objective_out = nullptr) {
    if (static_cast<int>(groups.size()) < p.w * p.g) return false;
    for (int i = 0; i < p.w * p.g; ++i) {
        const Multiset& gv = groups[static_cast<std::size_t>(i)];
        if (gv.universe_size() != p.m) return false;
        if (gv.cardinality() != p.p || gv.variety() < p.v) return false;
    }
    for (int w = 0; w < p.w; ++w) {
        std::vector<int> team_total(static_cast<std::size_t>(p.m), 0);
        for (int g = 0; g < p.g; ++g) {
            const Multiset& gv = groups[static_cast<std::size_t>(w * p.g + g)];
            for (int team = 1; team <= p.m; ++team)
                team_total[static_cast<std::size_t>(team - 1)] += gv.occ(team);
        }
        for (int team = 0; team < p.m; ++team)
            if (team_total[static_cast<std::size_t>(team)] > p.n) return false;
    }
    if (objective_out) {
        MinimizeMeetExcess mm{p.m, p.g, {}};
        for (int i = 0; i < p.w * p.g; ++i) mm.group_vars.push_back(i);
        std::vector<Multiset> values(groups.begin(),
                                     groups.begin() + p.w * p.g);
        *objective_out = objective_value(Objective{mm}, values);
    }
    return true;
}

}  // namespace msetlex

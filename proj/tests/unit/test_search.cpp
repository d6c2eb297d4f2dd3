#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>

#include "msetlex/io.hpp"
#include "msetlex/search.hpp"

using namespace msetlex;

namespace {

Multiset ms3(std::initializer_list<int> elems) {
    return Multiset::from_elements(3, elems);
}

std::string key_of(const std::vector<Multiset>& values) {
    std::string out;
    for (const auto& v : values) {
        out += to_string(v);
        out += '|';
    }
    return out;
}

}  // namespace

TEST_CASE("solving the bounds-consistency example model", "[search]") {
    const Universe u({3, 3, 3});
    Model model(u, Representation::alpha(Ordering::LVL));
    const int x = model.add_variable();
    const int y = model.add_variable();
    const int z = model.add_variable();
    for (int v : {x, y, z}) model.add(Propagator::cardinality(v, IntRange::at(3)));
    model.add(Propagator::variety(z, IntRange::at(1)));
    model.add(Propagator::intersection(x, y, z));

    auto [solution, stats] = solve(model);
    REQUIRE(solution.has_value());
    CHECK(stats.status == SolveStatus::Satisfiable);
    const auto& vals = solution->values;
    CHECK(vals[0] == vals[1]);
    CHECK(vals[1] == vals[2]);
    const bool allowed = vals[0] == ms3({1, 1, 1}) || vals[0] == ms3({2, 2, 2}) ||
                         vals[0] == ms3({3, 3, 3});
    CHECK(allowed);

    // and the full solution set is exactly the three synchronized triples
    const auto all = enumerate_solutions(model);
    CHECK(all.size() == 3);
}

TEST_CASE("root infeasibility reports unsatisfiable", "[search]") {
    const Universe u({2, 2});
    Model model(u, Representation::alpha(Ordering::LL));
    const int x = model.add_variable();
    model.add(Propagator::cardinality(x, IntRange::at(10)));
    auto [solution, stats] = solve(model);
    CHECK_FALSE(solution.has_value());
    CHECK(stats.status == SolveStatus::Unsatisfiable);
    CHECK(stats.fails <= stats.nodes);
}

TEST_CASE("branch partitions the domain", "[search]") {
    const Universe u({3, 3, 3});
    std::mt19937_64 rng(3);
    for (Ordering o : kAllOrderings) {
        const auto values = enumerate(u, o);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t i = rng() % values.size(), j = rng() % values.size();
            if (i > j) std::swap(i, j);
            if (i == j) continue;
            const auto dom = AlphaInterval::make(o, values[i], values[j]);
            REQUIRE(dom.has_value());
            const auto [left, right] = branch(u, *dom);
            CHECK(left.is_singleton());
            CHECK(left.lb() == dom->lb());
            for (std::size_t k = i; k <= j; ++k)
                CHECK((left.contains(values[k]) != right.contains(values[k])));
        }
    }

    const auto single = AlphaInterval::singleton(Ordering::LL, ms3({1, 2}));
    CHECK_THROWS_AS(branch(u, single), std::invalid_argument);

    // right branch on a two-value domain is a singleton
    const auto values = enumerate(u, Ordering::LVL);
    const auto two = AlphaInterval::make(Ordering::LVL, values[4], values[5]);
    REQUIRE(two.has_value());
    const auto [l2, r2] = branch(u, *two);
    CHECK(r2.is_singleton());
    (void)l2;
}

TEST_CASE("search equals brute force on random models", "[search][oracle]") {
    std::mt19937_64 rng(911);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 2);
        std::vector<Occ> caps(static_cast<std::size_t>(n));
        for (auto& c : caps) c = static_cast<Occ>(1 + rng() % 2);
        const Universe u(std::move(caps));
        const bool use_sb = rng() % 4 == 0;
        const Ordering o = kAllOrderings[rng() % 8];
        const Representation repr =
            use_sb ? Representation::sb() : Representation::alpha(o);

        Model model(u, repr);
        const int x = model.add_variable();
        const int y = model.add_variable();
        const int z = model.add_variable();
        const bool ternary_union = rng() & 1;
        model.add(ternary_union ? Propagator::unionplus(x, y, z)
                                : Propagator::intersection(x, y, z));
        std::vector<Propagator> extra;
        if (rng() % 2) {
            const int c = static_cast<int>(rng() % (static_cast<unsigned>(u.total_cap()) + 1));
            model.add(Propagator::cardinality(x, IntRange{0, c}));
        }
        if (rng() % 2) {
            const int vv = static_cast<int>(rng() % (static_cast<unsigned>(u.max_variety()) + 1));
            model.add(Propagator::variety(y, IntRange{vv, u.max_variety()}));
        }
        if (rng() % 2)
            model.add(Propagator::intersect_card_atmost(x, y, static_cast<int>(rng() % 3)));
        if (rng() % 2) model.add(Propagator::alpha_less(x, y, repr.ord));

        const auto found = enumerate_solutions(model);
        std::set<std::string> found_set;
        for (const auto& sol : found) found_set.insert(key_of(sol));
        CHECK(found_set.size() == found.size());  // no duplicates

        // brute force over all assignments
        const auto all = enumerate(u, Ordering::LL);
        std::set<std::string> expected;
        for (const auto& xv : all) {
            for (const auto& yv : all) {
                const Multiset zv =
                    ternary_union ? unionplus(xv, yv) : intersect(xv, yv);
                if (!u.contains(zv)) continue;
                bool ok = true;
                for (const auto& p : model.propagators) {
                    const Multiset& sv = p.scope[0] == x ? xv : (p.scope[0] == y ? yv : zv);
                    switch (p.kind) {
                        case PropagatorKind::Cardinality:
                            ok = p.range.contains(sv.cardinality());
                            break;
                        case PropagatorKind::Variety:
                            ok = p.range.contains(sv.variety());
                            break;
                        case PropagatorKind::IntersectCardAtMost:
                            ok = overlap_cardinality(xv, yv) <= p.limit;
                            break;
                        case PropagatorKind::AlphaLess:
                            ok = alpha_leq(p.chain_ord, xv, yv);
                            break;
                        default:
                            break;
                    }
                    if (!ok) break;
                }
                if (ok) expected.insert(key_of({xv, yv, zv}));
            }
        }
        CHECK(found_set == expected);
    }
}

TEST_CASE("maximization is exact against the solution enumeration", "[search][oracle]") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 60; ++trial) {
        const Universe u({1 + static_cast<Occ>(rng() % 2), 1 + static_cast<Occ>(rng() % 2),
                          1 + static_cast<Occ>(rng() % 2)});
        const Ordering o = kAllOrderings[rng() % 8];
        Model model(u, Representation::alpha(o));
        const int x = model.add_variable();
        const int y = model.add_variable();
        model.add(Propagator::cardinality(x, IntRange{1, 2}));
        model.add(Propagator::cardinality(y, IntRange{1, 2}));
        model.add(Propagator::intersect_card_atmost(x, y, 1));

        Model sat = model;  // satisfaction copy for the oracle
        model.objective = MaximizeVarietySum{{x, y}};

        auto [solution, stats] = solve(model);
        const auto all = enumerate_solutions(sat);
        if (all.empty()) {
            CHECK(stats.status == SolveStatus::Unsatisfiable);
            continue;
        }
        REQUIRE(solution.has_value());
        REQUIRE(stats.status == SolveStatus::Optimal);
        REQUIRE(stats.best_objective.has_value());
        long long best = std::numeric_limits<long long>::min();
        for (const auto& vals : all)
            best = std::max(best, static_cast<long long>(vals[0].variety() +
                                                         vals[1].variety()));
        CHECK(*stats.best_objective == best);
        CHECK(solution->values[0].variety() + solution->values[1].variety() == best);
    }
}

TEST_CASE("limits produce timeout status", "[search]") {
    const Universe u({4, 4, 4, 4});
    Model model(u, Representation::alpha(Ordering::LL));
    for (int i = 0; i < 4; ++i) model.add_variable();
    for (int i = 0; i < 4; ++i)
        model.add(Propagator::cardinality(i, IntRange{2, 6}));
    for (int i = 0; i < 3; ++i)
        model.add(Propagator::intersect_card_atmost(i, i + 1, 1));
    model.objective = MaximizeVarietySum{{0, 1, 2, 3}};

    SearchLimits limits;
    limits.node_cap = 5;
    auto [solution, stats] = solve(model, limits);
    CHECK(stats.status == SolveStatus::Timeout);
    CHECK(stats.nodes <= 6);
    (void)solution;
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "msetlex/domain.hpp"
#include "msetlex/io.hpp"

using namespace msetlex;

namespace {

Universe table1_universe() { return parse_universe("1,2,2,3,3"); }

Multiset ms(const Universe& u, std::initializer_list<int> elems) {
    return Multiset::from_elements(u.size(), elems);
}

std::vector<Multiset> variety2_values(const Universe& u) {
    std::vector<Multiset> out;
    for (const auto& v : enumerate(u, Ordering::LL))
        if (v.variety() == 2) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("interval membership", "[domain]") {
    const Universe u = table1_universe();
    const auto lvl = AlphaInterval::make(Ordering::LVL, ms(u, {1}), ms(u, {2, 3}));
    REQUIRE(lvl.has_value());
    CHECK(lvl->contains(ms(u, {3, 3})));

    const auto bound = AlphaInterval::singleton(Ordering::VL, ms(u, {1, 2}));
    CHECK(bound.contains(ms(u, {1, 2})));
    CHECK(bound.is_singleton());

    const auto ll = AlphaInterval::make(Ordering::LL, ms(u, {3, 3}), ms(u, {2, 2}));
    REQUIRE(ll.has_value());
    CHECK(ll->contains(ms(u, {2, 3})));

    CHECK_FALSE(AlphaInterval::make(Ordering::LL, ms(u, {2, 2}), ms(u, {3, 3})));
}

TEST_CASE("closure worked examples", "[domain]") {
    const Universe u = table1_universe();
    const std::vector<Multiset> s = {ms(u, {1}), ms(u, {2, 2}), ms(u, {2, 3})};
    const AlphaInterval cl = closure(Ordering::LVL, s);
    CHECK(cl.lb() == ms(u, {1}));
    CHECK(cl.ub() == ms(u, {2, 3}));
    CHECK(cl.contains(ms(u, {3, 3})));
    CHECK(interval_size(u, cl) == 4);

    const AlphaInterval single = closure(Ordering::VC, std::vector<Multiset>{ms(u, {3})});
    CHECK(single.lb() == single.ub());

    const AlphaInterval v2 = closure(Ordering::VLL, variety2_values(u));
    CHECK(v2.lb() == ms(u, {2, 3}));
    CHECK(v2.ub() == ms(u, {2, 2, 3, 3}));
    CHECK(is_exact(u, Ordering::VLL, variety2_values(u)));

    CHECK_THROWS_AS(closure(Ordering::LL, std::vector<Multiset>{}),
                    std::invalid_argument);
}

TEST_CASE("compactness worked example: 9 vs 10", "[domain]") {
    const Universe u = table1_universe();
    const auto s = variety2_values(u);
    CHECK(interval_size(u, closure(Ordering::LVL, s)) == 9);
    CHECK(interval_size(u, closure(Ordering::LL, s)) == 10);
}

TEST_CASE("exactness worked examples", "[domain]") {
    const Universe u = table1_universe();
    const std::vector<Multiset> s = {ms(u, {2, 2}), ms(u, {3, 3})};
    CHECK(is_exact(u, Ordering::LVL, s));
    CHECK(is_exact(u, Ordering::VLL, s));
    CHECK_FALSE(is_exact(u, Ordering::LL, s));
    CHECK_FALSE(is_exact(u, Ordering::VL, s));
    CHECK(is_exact(u, Ordering::LC, std::vector<Multiset>{ms(u, {1, 3})}));
}

TEST_CASE("closure minimality and size bound", "[domain]") {
    const Universe u = table1_universe();

    // exhaustive over all 2^18-1 subsets: sizes never fall below the member
    // count, and a minimal interval's bounds always lie in the set (checked
    // via per-ordering position arrays, independent of the closure code)
    std::array<std::vector<Multiset>, 8> sorted;
    std::array<std::vector<int>, 8> pos;  // position by LL-index
    const auto base = enumerate(u, Ordering::LL);
    for (Ordering o : kAllOrderings) {
        const auto oi = static_cast<std::size_t>(o);
        sorted[oi] = enumerate(u, o);
        pos[oi].resize(base.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            pos[oi][i] = static_cast<int>(
                std::find(sorted[oi].begin(), sorted[oi].end(), base[i]) -
                sorted[oi].begin());
    }
    std::uint64_t undersized = 0;
    for (std::uint32_t mask = 1; mask < (1u << 18); ++mask) {
        const int m = __builtin_popcount(mask);
        for (Ordering o : kAllOrderings) {
            const auto oi = static_cast<std::size_t>(o);
            int lo = 1 << 30, hi = -1;
            for (std::uint32_t bits = mask; bits;) {
                const int i = __builtin_ctz(bits);
                bits &= bits - 1;
                lo = std::min(lo, pos[oi][static_cast<std::size_t>(i)]);
                hi = std::max(hi, pos[oi][static_cast<std::size_t>(i)]);
            }
            if (hi - lo + 1 < m) ++undersized;
        }
    }
    CHECK(undersized == 0);

    // the public closure/sizing/exactness path agrees with those positions
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 3000; ++trial) {
        std::vector<Multiset> s;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (rng() & 1) {
                s.push_back(base[i]);
                idx.push_back(i);
            }
        if (s.empty()) continue;
        const Ordering o = kAllOrderings[rng() % 8];
        const auto oi = static_cast<std::size_t>(o);
        const AlphaInterval cl = closure(o, s);
        CHECK(std::find(s.begin(), s.end(), cl.lb()) != s.end());
        CHECK(std::find(s.begin(), s.end(), cl.ub()) != s.end());
        int lo = 1 << 30, hi = -1;
        for (std::size_t i : idx) {
            lo = std::min(lo, pos[oi][i]);
            hi = std::max(hi, pos[oi][i]);
        }
        CHECK(cl.lb() == sorted[oi][static_cast<std::size_t>(lo)]);
        CHECK(cl.ub() == sorted[oi][static_cast<std::size_t>(hi)]);
        CHECK(interval_size(u, cl) == hi - lo + 1);
        CHECK((interval_size(u, cl) == static_cast<long>(s.size())) ==
              is_exact(u, o, s));
    }
}

TEST_CASE("tighten", "[domain]") {
    const Universe u333({3, 3, 3});
    const auto full = AlphaInterval::full(u333, Ordering::LVL);
    const auto card3 = full.tighten(Multiset::from_elements(3, {3, 3, 3}),
                                    Multiset::from_elements(3, {1, 1, 1}));
    REQUIRE(card3.has_value());
    CHECK(card3->lb() == Multiset::from_elements(3, {3, 3, 3}));
    CHECK(card3->ub() == Multiset::from_elements(3, {1, 1, 1}));

    // dominated proposals do not move the bounds
    const auto noop = card3->tighten(Multiset::empty(3), Multiset::full(u333));
    REQUIRE(noop.has_value());
    CHECK(*noop == *card3);

    // crossed proposal wipes out
    const auto wipe = card3->tighten(Multiset::from_elements(3, {1, 1, 1, 1}),
                                     std::nullopt);
    CHECK_FALSE(wipe.has_value());

    // idempotence
    const auto again = card3->tighten(card3->lb(), card3->ub());
    REQUIRE(again.has_value());
    CHECK(*again == *card3);
}

TEST_CASE("envelope is sound and key-tight", "[domain]") {
    const Universe universes[] = {table1_universe(), Universe({3, 3, 3}),
                                  Universe::uniform(4, 1), Universe({2, 0, 3, 1})};
    std::mt19937_64 rng(99);
    for (const auto& u : universes) {
        for (Ordering o : kAllOrderings) {
            const auto values = enumerate(u, o);
            for (int trial = 0; trial < 60; ++trial) {
                std::size_t i = rng() % values.size();
                std::size_t j = rng() % values.size();
                if (i > j) std::swap(i, j);
                const auto dom = AlphaInterval::make(o, values[i], values[j]);
                REQUIRE(dom.has_value());
                const OccBox env = envelope_of(u, *dom);
                for (std::size_t k = i; k <= j; ++k) {
                    CHECK(env.card.contains(values[k].cardinality()));
                    CHECK(env.var.contains(values[k].variety()));
                    for (int e = 1; e <= u.size(); ++e)
                        CHECK(env.occ[static_cast<std::size_t>(e - 1)].contains(
                            values[k].occ(e)));
                }
                // singleton domains give a point box; otherwise every envelope
                // occurrence extreme is attained within the bounds' key range
                if (i == j) {
                    CHECK(env == OccBox::point(values[i]));
                    continue;
                }
                for (int e = 1; e <= u.size(); ++e) {
                    int seen_lo = std::numeric_limits<int>::max();
                    int seen_hi = std::numeric_limits<int>::min();
                    const AlphaKey klo = alpha_key(o, values[i]);
                    const AlphaKey khi = alpha_key(o, values[j]);
                    for (const auto& v : values) {
                        const AlphaKey k = alpha_key(o, v);
                        if (klo <= k && k <= khi) {
                            seen_lo = std::min<int>(seen_lo, v.occ(e));
                            seen_hi = std::max<int>(seen_hi, v.occ(e));
                        }
                    }
                    CHECK(env.occ[static_cast<std::size_t>(e - 1)].lo == seen_lo);
                    CHECK(env.occ[static_cast<std::size_t>(e - 1)].hi == seen_hi);
                }
            }
        }
    }
}

TEST_CASE("subset bounds conversions", "[domain]") {
    const Universe u333({3, 3, 3});

    // a bound variable converts to point ranges
    const auto point = sb_from_interval(
        u333, AlphaInterval::singleton(Ordering::LVL,
                                       Multiset::from_elements(3, {1, 2})));
    CHECK(point.card() == IntRange::at(2));
    CHECK(point.var() == IntRange::at(2));
    CHECK(point.occ(1) == IntRange::at(1));
    CHECK(point.occ(3) == IntRange::at(0));

    // the variety-1 cardinality-3 stratum
    const auto stratum = AlphaInterval::make(Ordering::LVL,
                                             Multiset::from_elements(3, {3, 3, 3}),
                                             Multiset::from_elements(3, {1, 1, 1}));
    REQUIRE(stratum.has_value());
    const auto sb = sb_from_interval(u333, *stratum);
    CHECK(sb.card() == IntRange::at(3));
    CHECK(sb.var() == IntRange::at(1));
    for (int e = 1; e <= 3; ++e) CHECK(sb.occ(e) == IntRange{0, 3});

    // intervals from subset bounds: alpha extremes of the box
    OccBox card3box;
    card3box.card = IntRange::at(3);
    const auto sb3 = SubsetBoundsCV::from_box(u333, card3box);
    REQUIRE(sb3.has_value());
    const auto iv = interval_from_sb(u333, Ordering::LVL, *sb3);
    REQUIRE(iv.has_value());
    CHECK(iv->lb() == Multiset::from_elements(3, {3, 3, 3}));
    CHECK(iv->ub() == Multiset::from_elements(3, {1, 2, 3}));

    // round trips never lose members
    const Universe u = table1_universe();
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Ordering o = kAllOrderings[rng() % 8];
        const auto values = enumerate(u, o);
        std::size_t i = rng() % values.size(), j = rng() % values.size();
        if (i > j) std::swap(i, j);
        const auto dom = AlphaInterval::make(o, values[i], values[j]);
        REQUIRE(dom.has_value());
        const auto box = sb_from_interval(u, *dom);
        for (const auto& v : values)
            if (dom->contains(v)) CHECK(box.contains(v));
        const auto back = interval_from_sb(u, o, box);
        REQUIRE(back.has_value());
        for (const auto& v : values)
            if (box.contains(v)) CHECK(back->contains(v));
    }
}

TEST_CASE("subset bounds normalization", "[domain]") {
    const Universe u({2, 2, 2});

    OccBox b;
    b.occ = {{1, 2}, {0, 2}, {0, 0}};
    b.card = {0, 2};
    auto sb = SubsetBoundsCV::from_box(u, b);
    REQUIRE(sb.has_value());
    CHECK(sb->card() == IntRange{1, 2});  // card.lo raised to sum of lows
    CHECK(sb->occ(1) == IntRange{1, 2});
    CHECK(sb->occ(2) == IntRange{0, 1});  // knapsack cut from card.hi

    // variety floor forces every possible element to occur
    OccBox v;
    v.occ = {{0, 1}, {0, 1}, {0, 0}};
    v.var = {2, 3};
    auto sv = SubsetBoundsCV::from_box(u, v);
    REQUIRE(sv.has_value());
    CHECK(sv->occ(1).lo == 1);
    CHECK(sv->occ(2).lo == 1);
    CHECK(sv->var() == IntRange{2, 2});

    // variety ceiling shuts out non-forced elements
    OccBox w;
    w.occ = {{1, 2}, {0, 2}, {0, 2}};
    w.var = {0, 1};
    auto sw = SubsetBoundsCV::from_box(u, w);
    REQUIRE(sw.has_value());
    CHECK(sw->occ(2).hi == 0);
    CHECK(sw->occ(3).hi == 0);

    // infeasible combination empties
    OccBox bad;
    bad.occ = {{1, 1}, {1, 1}, {0, 0}};
    bad.var = {3, 3};
    CHECK_FALSE(SubsetBoundsCV::from_box(u, bad).has_value());
}

#include <catch2/catch_amalgamated.hpp>

#include "msetlex/io.hpp"
#include "msetlex/multiset.hpp"
#include "msetlex/seek.hpp"

using namespace msetlex;

namespace {

Universe table1_universe() { return parse_universe("1,2,2,3,3"); }

Multiset ms(const Universe& u, std::initializer_list<int> elems) {
    return Multiset::from_elements(u.size(), elems);
}

}  // namespace

TEST_CASE("occurrence access", "[multiset]") {
    const Universe u = table1_universe();
    const Multiset s = ms(u, {1, 1, 2, 2, 3});
    CHECK(s.occ(1) == 2);
    CHECK(s.occ(2) == 2);
    CHECK(s.occ(3) == 1);
    CHECK(Multiset::empty(3).occ(3) == 0);
    CHECK(ms(u, {2, 3, 3}).occ(2) == 1);
    CHECK_THROWS_AS(s.occ(0), std::invalid_argument);
    CHECK_THROWS_AS(s.occ(4), std::invalid_argument);
}

TEST_CASE("cardinality and variety", "[multiset]") {
    const Universe u = table1_universe();
    CHECK(ms(u, {1, 1, 2, 2, 3}).cardinality() == 5);
    CHECK(ms(u, {1, 1, 2, 2, 3}).variety() == 3);
    CHECK(Multiset::empty(3).cardinality() == 0);
    CHECK(Multiset::empty(3).variety() == 0);
    CHECK(ms(u, {3, 3}).cardinality() == 2);
    CHECK(ms(u, {2, 2}).variety() == 1);
}

TEST_CASE("lex compares occurrence vectors front to back", "[multiset]") {
    const Universe u = table1_universe();
    // occ(1,y) = occ(1,x) and occ(2,y) < occ(2,x): {1,3,3} before {1,2,2}
    CHECK(lex_cmp(ms(u, {1, 2, 2}), ms(u, {1, 3, 3})) == std::strong_ordering::greater);
    CHECK(lex_cmp(ms(u, {2, 3}), ms(u, {2, 3})) == std::strong_ordering::equal);
    CHECK(lex_cmp(Multiset::empty(3), ms(u, {3})) == std::strong_ordering::less);
    CHECK_THROWS_AS(lex_cmp(Multiset::empty(3), Multiset::empty(4)),
                    std::invalid_argument);
}

TEST_CASE("colex compares occurrence vectors back to front", "[multiset]") {
    const Universe u = table1_universe();
    // occ(3,x) = occ(3,y) and occ(2,x) < occ(2,y)
    CHECK(colex_cmp(ms(u, {1, 3, 3}), ms(u, {2, 3, 3})) == std::strong_ordering::less);
    CHECK(colex_cmp(Multiset::empty(3), Multiset::empty(3)) ==
          std::strong_ordering::equal);
    CHECK(colex_cmp(ms(u, {1}), ms(u, {3})) == std::strong_ordering::less);
}

TEST_CASE("alpha_cmp worked examples", "[multiset]") {
    const Universe u = table1_universe();
    CHECK(alpha_cmp(Ordering::LVL, ms(u, {3, 3}), ms(u, {2, 2})) ==
          std::strong_ordering::less);
    CHECK(alpha_cmp(Ordering::VLL, ms(u, {2, 2, 3, 3}), ms(u, {1, 2, 3})) ==
          std::strong_ordering::less);
    CHECK(alpha_cmp(Ordering::LL, ms(u, {1}), ms(u, {3, 3})) ==
          std::strong_ordering::less);
    for (Ordering o : kAllOrderings)
        CHECK(alpha_cmp(o, ms(u, {1, 2}), ms(u, {1, 2})) == std::strong_ordering::equal);
}

TEST_CASE("alpha_cmp is a total order on the 18-value space", "[multiset]") {
    const Universe u = table1_universe();
    for (Ordering o : kAllOrderings) {
        const auto values = enumerate(u, o);
        REQUIRE(values.size() == 18);
        for (const auto& x : values) {
            for (const auto& y : values) {
                const auto xy = alpha_cmp(o, x, y);
                const auto yx = alpha_cmp(o, y, x);
                // antisymmetry / trichotomy
                CHECK((xy == std::strong_ordering::equal) == (x == y));
                CHECK((xy == std::strong_ordering::less) ==
                      (yx == std::strong_ordering::greater));
                for (const auto& z : values) {
                    if (alpha_leq(o, x, y) && alpha_leq(o, y, z))
                        CHECK(alpha_leq(o, x, z));
                }
            }
        }
    }
}

TEST_CASE("empty multiset is the alpha-minimum everywhere", "[multiset]") {
    const Universe u = table1_universe();
    const auto values = enumerate(u, Ordering::LL);
    for (Ordering o : kAllOrderings)
        for (const auto& x : values)
            CHECK(alpha_leq(o, Multiset::empty(u.size()), x));
}

// For equal-cardinality sets, colex on occurrence vectors matches
// comparing the element lists written in decreasing order (the set/multiset
// comparison the length-lex literature uses), and lex on occurrence vectors is
// the reverse of comparing increasing element lists.  Checked over all
// equal-cardinality set pairs with n = 4.
TEST_CASE("set restriction of lex and colex", "[multiset]") {
    const Universe u = Universe::uniform(4, 1);
    const auto values = enumerate(u, Ordering::LL);

    const auto decreasing_elements = [](const Multiset& s) {
        std::vector<int> out;
        for (int e = s.universe_size(); e >= 1; --e)
            if (s.occ(e) > 0) out.push_back(e);
        return out;
    };
    const auto increasing_elements = [](const Multiset& s) {
        std::vector<int> out;
        for (int e = 1; e <= s.universe_size(); ++e)
            if (s.occ(e) > 0) out.push_back(e);
        return out;
    };

    for (const auto& x : values) {
        for (const auto& y : values) {
            if (x.cardinality() != y.cardinality() || x == y) continue;
            const bool colex_less = colex_cmp(x, y) == std::strong_ordering::less;
            CHECK(colex_less == (decreasing_elements(x) < decreasing_elements(y)));
            const bool lex_less = lex_cmp(x, y) == std::strong_ordering::less;
            CHECK(lex_less == (increasing_elements(x) > increasing_elements(y)));
        }
    }
}

TEST_CASE("intersect and unionplus", "[multiset]") {
    const Universe u = table1_universe();
    CHECK(intersect(ms(u, {1, 1, 2}), ms(u, {1, 2, 2})) == ms(u, {1, 2}));
    CHECK(unionplus(ms(u, {1, 2}), ms(u, {2, 3})) == ms(u, {1, 2, 2, 3}));
    CHECK(unionplus(ms(u, {3}), ms(u, {3})) == ms(u, {3, 3}));

    const auto values = enumerate(u, Ordering::LL);
    for (const auto& x : values) {
        CHECK(intersect(x, Multiset::empty(3)).is_empty());
        CHECK(unionplus(x, Multiset::empty(3)) == x);
        CHECK(intersect(x, x) == x);
        for (const auto& y : values) {
            CHECK(intersect(x, y) == intersect(y, x));
            CHECK(unionplus(x, y).cardinality() == x.cardinality() + y.cardinality());
            for (const auto& z : values) {
                CHECK(intersect(intersect(x, y), z) == intersect(x, intersect(y, z)));
            }
        }
    }
}

TEST_CASE("serialization is canonical", "[io]") {
    const Universe u = table1_universe();
    CHECK(to_string(Multiset::empty(3)) == "{}");
    CHECK(to_string(ms(u, {1, 2, 2})) == "{1,2,2}");
    CHECK(to_string(ms(u, {3, 3})) == "{3,3}");
    CHECK(parse_multiset("{1,2,2}", 3) == ms(u, {1, 2, 2}));
    CHECK(parse_multiset("", 3) == Multiset::empty(3));
    CHECK(parse_multiset("{}", 3) == Multiset::empty(3));
    CHECK_THROWS_AS(parse_multiset("4", 3), std::invalid_argument);

    CHECK(parse_universe("5x10") == Universe::uniform(5, 10));
    CHECK(parse_universe("1,2,2,3,3") == Universe({1, 2, 2}));
    CHECK_THROWS_AS(parse_universe("0,1"), std::invalid_argument);
    CHECK(parse_ordering("lvl") == Ordering::LVL);
    CHECK_THROWS_AS(parse_ordering("zz"), std::invalid_argument);
}

TEST_CASE("universe invariants", "[multiset]") {
    CHECK_THROWS_AS(Universe({-1}), std::invalid_argument);
    CHECK_THROWS_AS(Universe(std::vector<Occ>{}), std::invalid_argument);
    CHECK_THROWS_AS(Universe({1 << 30}), std::invalid_argument);
    const Universe u({1, 2, 2});
    CHECK(u.value_count_or(1000) == 18);
    CHECK(u.total_cap() == 5);
    CHECK(u.max_variety() == 3);
    CHECK(u.contains(Multiset({1, 2, 2})));
    CHECK_FALSE(u.contains(Multiset({2, 0, 0})));
}

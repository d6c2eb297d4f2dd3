#pragma once

#include <cstdio>
#include <map>
#include <random>

#include "msetlex/counting.hpp"
#include "msetlex/domain.hpp"
#include "msetlex/io.hpp"

// Experiment harness for the expressiveness/compactness studies: random-set
// closure sizing under constraint regimes, and the proposition checker.
//
// Closure sizes come in two flavours.  The raw size counts every multiset in
// the closure interval; the restricted size counts only the members that
// satisfy the regime's constraints (the values a propagated model could still
// take).  A representation handles a draw "exactly" when its closure adds no
// constraint-violating value, i.e. raw == restricted; orderings whose leading
// keys pin the constrained quantities achieve this by construction.

namespace msetlex {

namespace detail {

// Values of a universe (optionally filtered) with their positions under every
// ordering, in one flat table.
struct PositionTable {
    std::vector<Multiset> values;
    std::array<std::vector<int>, 8> pos;  // pos[ord][value_idx]

    static std::size_t ord_index(Ordering o) { return static_cast<std::size_t>(o); }

    template <typename Filter>
    PositionTable(const Universe& u, Filter&& keep, std::uint64_t guard = 0) {
        for (auto& v : enumerate(u, Ordering::LL, guard))
            if (keep(v)) values.push_back(std::move(v));
        std::vector<int> idx(values.size());
        for (Ordering o : kAllOrderings) {
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
            std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                return alpha_less(o, values[static_cast<std::size_t>(a)],
                                  values[static_cast<std::size_t>(b)]);
            });
            auto& p = pos[ord_index(o)];
            p.resize(values.size());
            for (std::size_t r = 0; r < idx.size(); ++r)
                p[static_cast<std::size_t>(idx[r])] = static_cast<int>(r);
        }
    }

    // restricted closure size and the bound value indices of a member set
    struct Span {
        int lo_idx, hi_idx, size;
    };
    Span span(Ordering o, const std::vector<int>& member_idx) const {
        const auto& p = pos[ord_index(o)];
        int lo = std::numeric_limits<int>::max(), hi = -1;
        int lo_i = -1, hi_i = -1;
        for (int i : member_idx) {
            const int r = p[static_cast<std::size_t>(i)];
            if (r < lo) { lo = r; lo_i = i; }
            if (r > hi) { hi = r; hi_i = i; }
        }
        return {lo_i, hi_i, hi - lo + 1};
    }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace detail

struct ExperimentConfig {
    Universe universe;
    OccBox constraint;          // the regime: cardinality/variety ranges
    int trials = 100;
    std::uint64_t seed = 1;
    double include_prob = 0.5;  // Bernoulli inclusion per feasible value
};

struct TrialRow {
    Ordering ordering;
    int trial;
    std::size_t d_size;
    Count closure_size;  // restricted to constraint-satisfying members
    Count closure_raw;
    bool exact;          // closure confined to the feasible set
};

struct OrderingSummary {
    double mean_restricted = 0, mean_raw = 0;
    Count min_restricted{0}, max_restricted{0};
    double exact_rate = 0;
};

struct ExperimentResult {
    std::vector<TrialRow> rows;
    std::map<Ordering, OrderingSummary> summary;
    std::size_t feasible_count = 0;

    std::string csv() const {
        std::string out = "ordering,trial,d_size,closure_size,exact\n";
        for (const auto& r : rows) {
            out += std::string(to_string(r.ordering)) + "," + std::to_string(r.trial) +
                   "," + std::to_string(r.d_size) + "," + r.closure_size.str() + "," +
                   (r.exact ? "1" : "0") + "\n";
        }
        return out;
    }

    std::string json() const {
        std::string out = "{\n  \"feasible_count\": " + std::to_string(feasible_count) +
                          ",\n  \"orderings\": {";
        bool first = true;
        for (const auto& [o, s] : summary) {
            if (!first) out += ",";
            first = false;
            out += "\n    \"" + std::string(to_string(o)) + "\": {";
            out += "\"mean_restricted\": " + detail::format_double(s.mean_restricted);
            out += ", \"mean_raw\": " + detail::format_double(s.mean_raw);
            out += ", \"min_restricted\": " + s.min_restricted.str();
            out += ", \"max_restricted\": " + s.max_restricted.str();
            out += ", \"exact_rate\": " + detail::format_double(s.exact_rate);
            out += "}";
        }
        out += "\n  },\n  \"reduction_ratios_raw\": {";
        const std::pair<Ordering, Ordering> pairs[] = {
            {Ordering::LL, Ordering::LVL}, {Ordering::LC, Ordering::LVC},
            {Ordering::VL, Ordering::VLL}, {Ordering::VC, Ordering::VLC},
            {Ordering::LL, Ordering::VLL}, {Ordering::VL, Ordering::LVL}};
        bool firstr = true;
        for (const auto& [base, refined] : pairs) {
            const auto bi = summary.find(base);
            const auto ri = summary.find(refined);
            if (bi == summary.end() || ri == summary.end()) continue;
            if (!firstr) out += ", ";
            firstr = false;
            const double ratio =
                ri->second.mean_raw > 0 ? bi->second.mean_raw / ri->second.mean_raw : 0;
            out += "\"" + std::string(to_string(base)) + "_over_" +
                   std::string(to_string(refined)) + "\": " +
                   detail::format_double(ratio);
        }
        out += "}\n}\n";
        return out;
    }
};

// Draws random subsets of the constraint-feasible values and measures every
// ordering's closure of each draw.
inline ExperimentResult closure_experiment(const ExperimentConfig& cfg) {
    auto norm = normalize_box(cfg.universe, cfg.constraint);
    if (!norm) throw std::invalid_argument("empty constraint regime");
    const detail::PositionTable table(
        cfg.universe, [&](const Multiset& v) { return norm->matches(v); });
    if (table.values.empty()) throw std::invalid_argument("empty constraint regime");

    std::map<Ordering, Ranker> rankers;
    for (Ordering o : kAllOrderings) rankers.emplace(o, Ranker(cfg.universe, o));

    ExperimentResult result;
    result.feasible_count = table.values.size();
    std::map<Ordering, std::vector<TrialRow>> per_ord;

    std::vector<int> members;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 rng(detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        members.clear();
        while (members.empty()) {
            for (std::size_t i = 0; i < table.values.size(); ++i)
                if (coin(rng) < cfg.include_prob) members.push_back(static_cast<int>(i));
        }
        for (Ordering o : kAllOrderings) {
            const auto span = table.span(o, members);
            const Ranker& ranker = rankers.at(o);
            const Count raw =
                ranker.rank(table.values[static_cast<std::size_t>(span.hi_idx)]) -
                ranker.rank(table.values[static_cast<std::size_t>(span.lo_idx)]) + 1;
            TrialRow row{o,
                         trial,
                         members.size(),
                         Count(span.size),
                         raw,
                         raw == span.size};
            per_ord[o].push_back(row);
        }
    }

    for (Ordering o : kAllOrderings) {
        const auto& rows = per_ord[o];
        OrderingSummary s;
        if (!rows.empty()) {
            s.min_restricted = rows.front().closure_size;
            s.max_restricted = rows.front().closure_size;
            double acc_r = 0, acc_raw = 0, acc_exact = 0;
            for (const auto& r : rows) {
                acc_r += r.closure_size.convert_to<double>();
                acc_raw += r.closure_raw.convert_to<double>();
                acc_exact += r.exact ? 1 : 0;
                s.min_restricted = std::min(s.min_restricted, r.closure_size);
                s.max_restricted = std::max(s.max_restricted, r.closure_size);
            }
            s.mean_restricted = acc_r / static_cast<double>(rows.size());
            s.mean_raw = acc_raw / static_cast<double>(rows.size());
            s.exact_rate = acc_exact / static_cast<double>(rows.size());
        }
        result.summary[o] = s;
    }
    // interleave rows trial-major for a stable CSV
    for (int trial = 0; trial < cfg.trials; ++trial)
        for (Ordering o : kAllOrderings)
            result.rows.push_back(per_ord[o][static_cast<std::size_t>(trial)]);
    return result;
}

// ---------------------------------------------------------------------------
// Proposition checker for the expressiveness and compactness properties of
// the eight representations, in the strongest forms that hold universally:
//  - cardinality and variety both fixed: LVL and VLL (resp. LVC and VLC) are
//    exactly equivalent; LL/VL/LC/VC exactness implies the refined ordering's
//    exactness, strictly so for some sets; within such families the refined
//    closures are never larger than the base ones.
//  - cardinality fixed: VL- or VLL-exactness implies LVL-exactness (LVL
//    refines the variety-lex composite under a pinned cardinality); colex
//    congeners likewise.
//  - variety fixed: the mirror image (LL- or LVL-exactness implies
//    VLL-exactness).
//  - compactness incomparability between LVL and VLL and between LL and VL,
//    witnessed in both directions.
// Lex/colex "equally expressive" claims are checked through the element
// reversal map (mirror universe), which exchanges lex and colex orders
// isomorphically; pointwise biconditionals admit counterexamples.

enum class PropMode : std::uint8_t { Exhaustive, Sampled };

struct PropositionOptions {
    PropMode mode = PropMode::Exhaustive;
    std::uint64_t seed = 1;
    int samples = 10000;
    std::uint64_t subset_cap = 1u << 20;  // max value count for exhaustion
};

struct ClauseResult {
    std::string name;
    bool universal = true;  // false: existence of a witness
    bool pass = false;
    std::uint64_t checked = 0;
    std::string witness;  // counterexample (universal) or witness (existential)
};

struct PropositionReport {
    std::vector<ClauseResult> clauses;
    bool all_pass = false;
    std::uint64_t sets_examined = 0;

    const ClauseResult* find(std::string_view name) const {
        for (const auto& c : clauses)
            if (c.name == name) return &c;
        return nullptr;
    }

    std::string json() const {
        std::string out = "{\n  \"all_pass\": ";
        out += all_pass ? "true" : "false";
        out += ",\n  \"sets_examined\": " + std::to_string(sets_examined);
        out += ",\n  \"clauses\": [";
        bool first = true;
        for (const auto& c : clauses) {
            if (!first) out += ",";
            first = false;
            out += "\n    {\"name\": \"" + c.name + "\", \"kind\": \"";
            out += c.universal ? "universal" : "witness";
            out += "\", \"pass\": ";
            out += c.pass ? "true" : "false";
            out += ", \"checked\": " + std::to_string(c.checked);
            out += ", \"";
            out += c.universal ? "counterexample" : "witness";
            out += "\": \"" + c.witness + "\"}";
        }
        out += "\n  ]\n}\n";
        return out;
    }
};

namespace detail {

struct PropChecker {
    const Universe& u;
    PositionTable table;       // all values, positions under all orderings
    PositionTable table_m;     // mirrored values in the mirrored universe
    std::vector<int> card, var;
    std::vector<int> mirror_idx;  // index of mirror(values[i]) in table_m
    std::map<std::string, ClauseResult> clauses;
    std::uint64_t sets_examined = 0;

    explicit PropChecker(const Universe& uni)
        : u(uni),
          table(uni, [](const Multiset&) { return true; }),
          table_m(mirror(uni), [](const Multiset&) { return true; }) {
        for (const auto& v : table.values) {
            card.push_back(v.cardinality());
            var.push_back(v.variety());
        }
        // mirrored value i has the same occurrence vector reversed; find it
        std::map<std::vector<Occ>, int> lookup;
        for (std::size_t i = 0; i < table_m.values.size(); ++i) {
            auto occ = table_m.values[i].occurrences();
            lookup[std::vector<Occ>(occ.begin(), occ.end())] = static_cast<int>(i);
        }
        for (const auto& v : table.values) {
            const Multiset m = mirror(v);
            auto occ = m.occurrences();
            mirror_idx.push_back(lookup.at(std::vector<Occ>(occ.begin(), occ.end())));
        }
        const char* universal_names[] = {
            "fixed card+var: lvl exact iff vll exact",
            "fixed card+var: lvc exact iff vlc exact",
            "fixed card+var: base exactness implies refined exactness",
            "reversal map: lvl/lvc and vll/vlc equally expressive",
            "fixed card: vl or vll exactness implies lvl exactness",
            "reversal map: ll/lc equally expressive",
            "fixed var: ll or lvl exactness implies vll exactness",
            "reversal map: vl/vc equally expressive",
            "fixed card+var: lvl/lvc closures never exceed ll/lc",
            "fixed card+var: vll/vlc closures never exceed vl/vc",
        };
        for (const char* n : universal_names) {
            clauses[n] = ClauseResult{n, true, true, 0, ""};
        }
        const char* witness_names[] = {
            "witness: lvl exact where ll is not",
            "witness: vll exact where vl is not",
            "witness: lvl exact where vl is not (fixed card)",
            "witness: vll exact where ll is not (fixed var)",
            "witness: lvl closure strictly smaller than ll",
            "witness: vll closure strictly smaller than vl",
            "incomparability witness: lvl more compact than vll",
            "incomparability witness: vll more compact than lvl",
            "incomparability witness: ll more compact than vl",
            "incomparability witness: vl more compact than ll",
        };
        for (const char* n : witness_names) {
            clauses[n] = ClauseResult{n, false, false, 0, ""};
        }
    }

    std::string describe(const std::vector<int>& members) const {
        std::string out = "{";
        for (std::size_t k = 0; k < members.size(); ++k) {
            if (k) out += ";";
            out += to_string(table.values[static_cast<std::size_t>(members[k])]);
        }
        out += "}";
        return out;
    }

    void fail_universal(const char* name, const std::vector<int>& members) {
        auto& c = clauses[name];
        if (c.pass) {
            c.pass = false;
            c.witness = describe(members);
        }
    }

    void found_witness(const char* name, const std::vector<int>& members) {
        auto& c = clauses[name];
        if (!c.pass) {
            c.pass = true;
            c.witness = describe(members);
        }
    }

    void examine(const std::vector<int>& members) {
        if (members.empty()) return;
        ++sets_examined;
        bool fix_c = true, fix_v = true;
        const int c0 = card[static_cast<std::size_t>(members[0])];
        const int v0 = var[static_cast<std::size_t>(members[0])];
        for (int i : members) {
            fix_c = fix_c && card[static_cast<std::size_t>(i)] == c0;
            fix_v = fix_v && var[static_cast<std::size_t>(i)] == v0;
        }
        const int m = static_cast<int>(members.size());

        std::array<int, 8> size{};
        for (Ordering o : kAllOrderings)
            size[PositionTable::ord_index(o)] = table.span(o, members).size;
        const auto sz = [&](Ordering o) { return size[PositionTable::ord_index(o)]; };
        const auto exact = [&](Ordering o) { return sz(o) == m; };

        std::vector<int> members_m;
        members_m.reserve(members.size());
        for (int i : members) members_m.push_back(mirror_idx[static_cast<std::size_t>(i)]);
        const auto exact_m = [&](Ordering o) {
            return table_m.span(o, members_m).size == m;
        };

        const auto tick = [&](const char* n) { ++clauses[n].checked; };

        // reversal equivalences (always applicable)
        tick("reversal map: lvl/lvc and vll/vlc equally expressive");
        if (exact(Ordering::LVL) != exact_m(Ordering::LVC) ||
            exact(Ordering::LVC) != exact_m(Ordering::LVL) ||
            exact(Ordering::VLL) != exact_m(Ordering::VLC) ||
            exact(Ordering::VLC) != exact_m(Ordering::VLL))
            fail_universal("reversal map: lvl/lvc and vll/vlc equally expressive",
                           members);
        tick("reversal map: ll/lc equally expressive");
        if (exact(Ordering::LL) != exact_m(Ordering::LC) ||
            exact(Ordering::LC) != exact_m(Ordering::LL))
            fail_universal("reversal map: ll/lc equally expressive", members);
        tick("reversal map: vl/vc equally expressive");
        if (exact(Ordering::VL) != exact_m(Ordering::VC) ||
            exact(Ordering::VC) != exact_m(Ordering::VL))
            fail_universal("reversal map: vl/vc equally expressive", members);

        if (fix_c && fix_v) {
            tick("fixed card+var: lvl exact iff vll exact");
            if (exact(Ordering::LVL) != exact(Ordering::VLL))
                fail_universal("fixed card+var: lvl exact iff vll exact", members);
            tick("fixed card+var: lvc exact iff vlc exact");
            if (exact(Ordering::LVC) != exact(Ordering::VLC))
                fail_universal("fixed card+var: lvc exact iff vlc exact", members);
            tick("fixed card+var: base exactness implies refined exactness");
            if ((exact(Ordering::LL) && !exact(Ordering::LVL)) ||
                (exact(Ordering::VL) && !exact(Ordering::VLL)) ||
                (exact(Ordering::LC) && !exact(Ordering::LVC)) ||
                (exact(Ordering::VC) && !exact(Ordering::VLC)))
                fail_universal("fixed card+var: base exactness implies refined exactness",
                               members);
            if (exact(Ordering::LVL) && !exact(Ordering::LL))
                found_witness("witness: lvl exact where ll is not", members);
            if (exact(Ordering::VLL) && !exact(Ordering::VL))
                found_witness("witness: vll exact where vl is not", members);

            tick("fixed card+var: lvl/lvc closures never exceed ll/lc");
            if (sz(Ordering::LVL) > sz(Ordering::LL) ||
                sz(Ordering::LVC) > sz(Ordering::LC))
                fail_universal(
                    "fixed card+var: lvl/lvc closures never exceed ll/lc",
                    members);
            tick("fixed card+var: vll/vlc closures never exceed vl/vc");
            if (sz(Ordering::VLL) > sz(Ordering::VL) ||
                sz(Ordering::VLC) > sz(Ordering::VC))
                fail_universal(
                    "fixed card+var: vll/vlc closures never exceed vl/vc",
                    members);
            if (sz(Ordering::LVL) < sz(Ordering::LL))
                found_witness("witness: lvl closure strictly smaller than ll",
                              members);
            if (sz(Ordering::VLL) < sz(Ordering::VL))
                found_witness("witness: vll closure strictly smaller than vl",
                              members);
        }
        if (fix_c) {
            tick("fixed card: vl or vll exactness implies lvl exactness");
            if ((exact(Ordering::VL) && !exact(Ordering::LVL)) ||
                (exact(Ordering::VLL) && !exact(Ordering::LVL)) ||
                (exact(Ordering::VC) && !exact(Ordering::LVC)) ||
                (exact(Ordering::VLC) && !exact(Ordering::LVC)))
                fail_universal("fixed card: vl or vll exactness implies lvl exactness",
                               members);
            if (exact(Ordering::LVL) && !exact(Ordering::VL))
                found_witness("witness: lvl exact where vl is not (fixed card)", members);
        }
        if (fix_v) {
            tick("fixed var: ll or lvl exactness implies vll exactness");
            if ((exact(Ordering::LL) && !exact(Ordering::VLL)) ||
                (exact(Ordering::LVL) && !exact(Ordering::VLL)) ||
                (exact(Ordering::LC) && !exact(Ordering::VLC)) ||
                (exact(Ordering::LVC) && !exact(Ordering::VLC)))
                fail_universal("fixed var: ll or lvl exactness implies vll exactness",
                               members);
            if (exact(Ordering::VLL) && !exact(Ordering::LL))
                found_witness("witness: vll exact where ll is not (fixed var)", members);
        }
        // unscoped incomparability witnesses
        if (sz(Ordering::LVL) < sz(Ordering::VLL))
            found_witness("incomparability witness: lvl more compact than vll", members);
        if (sz(Ordering::VLL) < sz(Ordering::LVL))
            found_witness("incomparability witness: vll more compact than lvl", members);
        if (sz(Ordering::LL) < sz(Ordering::VL))
            found_witness("incomparability witness: ll more compact than vl", members);
        if (sz(Ordering::VL) < sz(Ordering::LL))
            found_witness("incomparability witness: vl more compact than ll", members);
    }
};

}  // namespace detail

inline PropositionReport proposition_report(const Universe& u,
                                            const PropositionOptions& opts = {}) {
    detail::PropChecker checker(u);
    const std::size_t n_values = checker.table.values.size();

    if (opts.mode == PropMode::Exhaustive) {
        if (n_values > 24 || (1ull << n_values) > opts.subset_cap)
            throw ResourceError("value space too large for exhaustive checking");
        std::vector<int> members;
        for (std::uint64_t mask = 1; mask < (1ull << n_values); ++mask) {
            members.clear();
            for (std::size_t i = 0; i < n_values; ++i)
                if (mask >> i & 1) members.push_back(static_cast<int>(i));
            checker.examine(members);
        }
    } else {
        std::mt19937_64 rng(opts.seed);
        // stratified sampling so the scoped clauses get exercised: plain random
        // subsets, subsets of one cardinality class, one variety class, and one
        // (cardinality, variety) class
        std::map<int, std::vector<int>> by_card, by_var, by_both;
        for (std::size_t i = 0; i < n_values; ++i) {
            by_card[checker.card[i]].push_back(static_cast<int>(i));
            by_var[checker.var[i]].push_back(static_cast<int>(i));
            by_both[checker.card[i] * 1000 + checker.var[i]].push_back(
                static_cast<int>(i));
        }
        const auto pick_class = [&](auto& groups) -> const std::vector<int>& {
            auto it = groups.begin();
            std::advance(it, static_cast<long>(rng() % groups.size()));
            return it->second;
        };
        std::vector<int> members;
        for (int s = 0; s < opts.samples; ++s) {
            const std::vector<int>* pool = nullptr;
            std::vector<int> all;
            switch (s % 4) {
                case 0: {
                    all.resize(n_values);
                    for (std::size_t i = 0; i < n_values; ++i)
                        all[i] = static_cast<int>(i);
                    pool = &all;
                    break;
                }
                case 1: pool = &pick_class(by_card); break;
                case 2: pool = &pick_class(by_var); break;
                default: pool = &pick_class(by_both); break;
            }
            members.clear();
            for (int i : *pool)
                if (rng() & 1) members.push_back(i);
            if (members.empty() && !pool->empty())
                members.push_back((*pool)[rng() % pool->size()]);
            checker.examine(members);
        }
    }

    PropositionReport report;
    report.sets_examined = checker.sets_examined;
    report.all_pass = true;
    for (auto& [name, clause] : checker.clauses) {
        report.all_pass = report.all_pass && clause.pass;
        report.clauses.push_back(clause);
    }
    return report;
}

}  // namespace msetlex

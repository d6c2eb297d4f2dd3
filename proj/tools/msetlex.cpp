// Command-line front end: ordering inspection, closure analysis, the random
// subset comparison experiment, the proposition report, and benchmark solves.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "msetlex/analysis.hpp"
#include "msetlex/models.hpp"

using namespace msetlex;
using ordered_json = nlohmann::ordered_json;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

IntRange parse_range(const std::string& text) {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    }
    const int v = std::stoi(text);
    return {v, v};
}

std::vector<Representation> parse_reprs(const std::string& text, bool allow_sb) {
    if (text == "all") {
        std::vector<Representation> out;
        for (Ordering o : kAllOrderings) out.push_back(Representation::alpha(o));
        if (allow_sb) out.push_back(Representation::sb());
        return out;
    }
    if (text == "sb") {
        if (!allow_sb)
            throw UsageError("subset bounds representation has no ordering here");
        return {Representation::sb()};
    }
    return {Representation::alpha(parse_ordering(text))};
}

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", s);
    return buf;
}

int cmd_order(const std::string& universe_text, const std::string& repr_text) {
    const Universe u = parse_universe(universe_text);
    const auto reprs = parse_reprs(repr_text, /*allow_sb=*/false);
    for (std::size_t i = 0; i < reprs.size(); ++i) {
        if (reprs.size() > 1)
            std::cout << "== " << to_string(reprs[i]) << " ==\n";
        for (const auto& v : enumerate(u, reprs[i].ord))
            std::cout << to_string(v) << "\n";
    }
    return 0;
}

int cmd_closure(const std::string& universe_text, const std::string& repr_text,
                const std::string& set_text) {
    const Universe u = parse_universe(universe_text);
    const auto values = parse_multiset_list(set_text, u.size());
    if (values.empty()) throw UsageError("empty multiset list");
    for (const auto& v : values)
        if (!u.contains(v)) throw UsageError("set member exceeds the universe");
    std::cout << "ordering,lb,ub,size,exact\n";
    for (const auto& repr : parse_reprs(repr_text, /*allow_sb=*/false)) {
        const AlphaInterval cl = closure(repr.ord, values);
        const Count size = interval_size(u, cl);
        const bool exact = is_exact(u, repr.ord, values);
        std::cout << to_string(repr) << "," << to_string(cl.lb()) << ","
                  << to_string(cl.ub()) << "," << size.str() << ","
                  << (exact ? 1 : 0) << "\n";
    }
    return 0;
}

int cmd_compare(const std::string& universe_text, const std::string& card_text,
                const std::string& variety_text, int trials, std::uint64_t seed,
                double prob, const std::string& out) {
    ExperimentConfig cfg{parse_universe(universe_text), OccBox::any(), trials, seed,
                        prob};
    if (!card_text.empty()) cfg.constraint.card = parse_range(card_text);
    if (!variety_text.empty()) cfg.constraint.var = parse_range(variety_text);
    const auto result = closure_experiment(cfg);
    if (out == "json")
        std::cout << result.json();
    else
        std::cout << result.csv();
    return 0;
}

int cmd_props(const std::string& universe_text, const std::string& mode,
              std::uint64_t seed, int samples, bool as_json) {
    PropositionOptions opts;
    if (mode == "exhaustive")
        opts.mode = PropMode::Exhaustive;
    else if (mode == "sampled")
        opts.mode = PropMode::Sampled;
    else
        throw UsageError("mode must be exhaustive or sampled");
    opts.seed = seed;
    opts.samples = samples;
    const auto report = proposition_report(parse_universe(universe_text), opts);
    if (as_json) {
        std::cout << report.json();
    } else {
        for (const auto& c : report.clauses) {
            std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name;
            if (c.universal)
                std::cout << "  (checked " << c.checked << ")";
            if (!c.witness.empty()) std::cout << "  " << c.witness;
            std::cout << "\n";
        }
        std::cout << (report.all_pass ? "all clauses pass" : "clauses failed")
                  << " over " << report.sets_examined << " sets\n";
    }
    return report.all_pass ? 0 : 1;
}

struct SolveJob {
    std::variant<SteinerParams, GolferParams> params;
    Representation repr;
    SearchLimits limits;
};

struct SolveOutcome {
    std::string repr;
    SearchStats stats;
    bool validated = false;
};

SolveOutcome run_job(const SolveJob& job) {
    SolveOutcome out;
    out.repr = to_string(job.repr);
    if (const auto* es = std::get_if<SteinerParams>(&job.params)) {
        auto [solution, stats] = solve(build_steiner(*es, job.repr), job.limits);
        out.stats = stats;
        if (solution) out.validated = validate_steiner(*es, solution->values);
    } else {
        const auto& gp = std::get<GolferParams>(job.params);
        auto built = build_golfer(gp, job.repr);
        auto [solution, stats] = solve(built.model, job.limits);
        out.stats = stats;
        if (solution) {
            std::vector<Multiset> groups(
                solution->values.begin(),
                solution->values.begin() + gp.w * gp.g);
            out.validated = validate_golfer(gp, groups);
        }
    }
    return out;
}

int emit_outcomes(const std::vector<SolveOutcome>& outcomes, bool as_json) {
    int exit_code = 0;
    if (as_json) {
        ordered_json rows = ordered_json::array();
        for (const auto& o : outcomes) {
            ordered_json row;
            row["repr"] = o.repr;
            row["status"] = std::string(to_string(o.stats.status));
            if (o.stats.best_objective)
                row["objective"] = *o.stats.best_objective;
            else
                row["objective"] = nullptr;
            row["fails"] = o.stats.fails;
            row["nodes"] = o.stats.nodes;
            row["time_seconds"] = std::stod(format_seconds(o.stats.wall_seconds));
            row["validated"] = o.validated;
            rows.push_back(std::move(row));
        }
        std::cout << rows.dump(2) << "\n";
    } else {
        std::cout << "repr,status,objective,fails,nodes,time\n";
        for (const auto& o : outcomes) {
            std::cout << o.repr << "," << to_string(o.stats.status) << ",";
            if (o.stats.best_objective)
                std::cout << *o.stats.best_objective;
            else
                std::cout << "-";
            std::cout << "," << o.stats.fails << "," << o.stats.nodes << ","
                      << format_seconds(o.stats.wall_seconds) << "\n";
        }
    }
    for (const auto& o : outcomes)
        if (o.stats.status == SolveStatus::Unsatisfiable ||
            o.stats.status == SolveStatus::Timeout)
            exit_code = 1;
    return exit_code;
}

SolveJob job_from_instance_json(const ordered_json& j) {
    SolveJob job;
    const std::string family = j.at("family").get<std::string>();
    const auto& p = j.at("params");
    if (family == "steiner") {
        job.params = SteinerParams{p.at("t").get<int>(), p.at("k").get<int>(),
                                   p.at("u").get<int>(), p.at("b").get<int>(),
                                   p.at("v").get<int>()};
    } else if (family == "golfer") {
        job.params = GolferParams{p.at("w").get<int>(), p.at("m").get<int>(),
                                  p.at("n").get<int>(), p.at("g").get<int>(),
                                  p.at("p").get<int>(), p.at("v").get<int>()};
    } else {
        throw UsageError("unknown instance family '" + family + "'");
    }
    const std::string repr = j.value("representation", std::string("lvl"));
    job.repr = repr == "sb" ? Representation::sb()
                            : Representation::alpha(parse_ordering(repr));
    if (j.contains("limits")) {
        const auto& lim = j.at("limits");
        if (lim.contains("timeout_seconds"))
            job.limits.timeout_seconds = lim.at("timeout_seconds").get<double>();
        if (lim.contains("node_cap"))
            job.limits.node_cap = lim.at("node_cap").get<std::uint64_t>();
    }
    return job;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiset lex-bounds solver kernel"};
    app.require_subcommand(1);

    std::string universe_text, repr_text = "lvl", set_text, card_text, variety_text;
    std::string mode = "exhaustive", out_format = "csv";
    std::uint64_t seed = 1;
    int trials = 100, samples = 10000;
    double prob = 0.5;
    bool as_json = false;

    auto* order = app.add_subcommand("order", "print the full ordered enumeration");
    order->add_option("--universe", universe_text)->required();
    order->add_option("--repr", repr_text);

    auto* closure_cmd = app.add_subcommand("closure", "closure bounds, size, exactness");
    closure_cmd->add_option("--universe", universe_text)->required();
    closure_cmd->add_option("--repr", repr_text);
    closure_cmd->add_option("--set", set_text)->required();

    auto* compare = app.add_subcommand("compare", "random-subset closure-size experiment");
    compare->add_option("--universe", universe_text)->required();
    compare->add_option("--card", card_text);
    compare->add_option("--variety", variety_text);
    compare->add_option("--trials", trials);
    compare->add_option("--seed", seed);
    compare->add_option("--prob", prob);
    compare->add_option("--out", out_format)->check(CLI::IsMember({"csv", "json"}));

    auto* props = app.add_subcommand("props", "proposition report");
    props->add_option("--universe", universe_text)->required();
    props->add_option("--mode", mode);
    props->add_option("--seed", seed);
    props->add_option("--samples", samples);
    props->add_flag("--json", as_json);

    auto* solve_cmd = app.add_subcommand("solve", "solve a benchmark instance");
    solve_cmd->require_subcommand(0, 1);
    solve_cmd->fallthrough();
    double timeout = std::numeric_limits<double>::infinity();
    std::uint64_t node_cap = std::numeric_limits<std::uint64_t>::max();
    int jobs = 1;
    std::string instance_file;
    solve_cmd->add_option("--repr", repr_text);
    solve_cmd->add_option("--timeout", timeout);
    solve_cmd->add_option("--node-cap", node_cap);
    solve_cmd->add_option("--jobs", jobs);
    solve_cmd->add_option("--instance", instance_file);
    solve_cmd->add_flag("--json", as_json);

    SteinerParams es;
    auto* steiner = solve_cmd->add_subcommand("steiner", "extended Steiner system");
    steiner->fallthrough();
    steiner->add_option("--t", es.t)->required();
    steiner->add_option("--k", es.k)->required();
    steiner->add_option("--u", es.u)->required();
    steiner->add_option("--b", es.b)->required();
    steiner->add_option("--v", es.v)->required();

    GolferParams gp;
    auto* golfer = solve_cmd->add_subcommand("golfer", "generalized social golfer");
    golfer->fallthrough();
    golfer->add_option("--w", gp.w)->required();
    golfer->add_option("--m", gp.m)->required();
    golfer->add_option("--n", gp.n)->required();
    golfer->add_option("--g", gp.g)->required();
    golfer->add_option("--p", gp.p)->required();
    golfer->add_option("--v", gp.v)->required();

    try {
        app.parse(argc, argv);

        if (order->parsed()) return cmd_order(universe_text, repr_text);
        if (closure_cmd->parsed())
            return cmd_closure(universe_text, repr_text, set_text);
        if (compare->parsed())
            return cmd_compare(universe_text, card_text, variety_text, trials, seed,
                               prob, out_format);
        if (props->parsed())
            return cmd_props(universe_text, mode, seed, samples, as_json);
        if (solve_cmd->parsed()) {
            std::vector<SolveJob> jobs_list;
            SearchLimits limits;
            limits.timeout_seconds = timeout;
            limits.node_cap = node_cap;
            if (!instance_file.empty()) {
                std::ifstream in(instance_file);
                if (!in.good())
                    throw UsageError("cannot read instance file '" + instance_file + "'");
                ordered_json j;
                in >> j;
                jobs_list.push_back(job_from_instance_json(j));
                if (solve_cmd->count("--timeout"))
                    jobs_list.back().limits.timeout_seconds = timeout;
                if (solve_cmd->count("--node-cap"))
                    jobs_list.back().limits.node_cap = node_cap;
            } else if (steiner->parsed() || golfer->parsed()) {
                for (const auto& repr : parse_reprs(repr_text, /*allow_sb=*/true)) {
                    SolveJob job;
                    if (steiner->parsed())
                        job.params = es;
                    else
                        job.params = gp;
                    job.repr = repr;
                    job.limits = limits;
                    jobs_list.push_back(std::move(job));
                }
            } else {
                throw UsageError("solve needs a family subcommand or --instance");
            }
            const auto outcomes = run_many(jobs_list, run_job, jobs);
            return emit_outcomes(outcomes, as_json);
        }
        throw UsageError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "error: resource: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MSETLEX_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), std::move(out)};
}

}  // namespace

TEST_CASE("unknown subcommand exits with usage error", "[cli]") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("order --universe 0,1").exit_code == 2);
    CHECK(run_cli("order --universe 1,2 --repr zz").exit_code == 2);
}

TEST_CASE("order emits one canonical multiset per line", "[cli]") {
    const auto r = run_cli("order --universe 1,2 --repr ll");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "{}\n{2}\n{1}\n{1,2}\n");
}

TEST_CASE("closure row matches the worked example", "[cli]") {
    const auto r = run_cli("closure --universe 1,2,2,3,3 --repr lvl --set \"1;2,2;2,3\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "ordering,lb,ub,size,exact\nlvl,{1},{2,3},4,0\n");
}

TEST_CASE("compare output is reproducible byte for byte", "[cli]") {
    const std::string args =
        "compare --universe 3x2 --card 1..3 --trials 5 --seed 42 --out csv";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("ordering,trial,d_size,closure_size,exact") == 0);

    const auto j = run_cli(
        "compare --universe 3x2 --card 1..3 --trials 5 --seed 42 --out json");
    CHECK(j.exit_code == 0);
    CHECK(j.output == run_cli("compare --universe 3x2 --card 1..3 --trials 5 "
                              "--seed 42 --out json")
                          .output);
}

TEST_CASE("props exits zero when every clause passes", "[cli]") {
    const auto r = run_cli("props --universe 1,2,2,2,3,3 --mode sampled --samples 1500 --seed 4");
    CHECK(r.exit_code == 0);
}

TEST_CASE("solve reports a table row and meaningful exit codes", "[cli]") {
    const auto ok = run_cli("solve steiner --t 2 --k 2 --u 3 --b 2 --v 1 --repr lvl");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("repr,status,objective,fails,nodes,time") == 0);
    CHECK(ok.output.find("lvl,optimal,") != std::string::npos);

    // infeasible: three pairwise-disjoint 2-blocks need 6 slots, u=2 gives 4
    const auto infeasible =
        run_cli("solve steiner --t 1 --k 2 --u 2 --b 3 --v 1 --repr ll");
    CHECK(infeasible.exit_code == 1);
    CHECK(infeasible.output.find("unsatisfiable") != std::string::npos);

    const auto bad = run_cli("solve steiner --t 2 --k 2 --u 3 --b 2 --v 5 --repr lvl");
    CHECK(bad.exit_code == 2);

    const auto sb = run_cli("order --universe 1,2 --repr sb");
    CHECK(sb.exit_code == 2);
}

TEST_CASE("solve accepts a JSON instance file", "[cli]") {
    const std::string path = "/tmp/msetlex_test_instance.json";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs(
            "{\"family\":\"steiner\",\"params\":{\"t\":2,\"k\":2,\"u\":3,\"b\":2,"
            "\"v\":1},\"representation\":\"vll\",\"limits\":{\"timeout_seconds\":30}}",
            f);
        std::fclose(f);
    }
    const auto r = run_cli("solve --instance " + path + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"repr\": \"vll\"") != std::string::npos);
    CHECK(r.output.find("\"status\": \"optimal\"") != std::string::npos);
    CHECK(r.output.find("\"validated\": true") != std::string::npos);

    CHECK(run_cli("solve --instance /nonexistent.json").exit_code == 2);
}

TEST_CASE("parallel fan-out emits rows in deterministic order", "[cli]") {
    const auto strip_time = [](const std::string& text) {
        std::string out;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(pos, end - pos);
            if (const auto comma = line.rfind(','); comma != std::string::npos)
                line.resize(comma);
            out += line + "\n";
            pos = end + 1;
        }
        return out;
    };
    const std::string base = "solve steiner --t 2 --k 2 --u 3 --b 3 --v 1 --repr all";
    const auto serial = run_cli(base + " --jobs 1");
    const auto parallel = run_cli(base + " --jobs 4");
    CHECK(serial.exit_code == 0);
    CHECK(strip_time(serial.output) == strip_time(parallel.output));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lambdagen/serialize.hpp"
#include "lambdagen/term.hpp"

#include "json.hpp"
#include "proc.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string kCli = "\"" CLI_PATH "\"";

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("count subcommand") {
    auto r = run_cmd(kCli + " count --model natural --openness 0 --size 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "3\n");

    r = run_cmd(kCli + " count --model natural --openness 0 --size 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "0\n");

    r = run_cmd(kCli + " count --openness 2 --size 6");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "49\n");
}

TEST_CASE("count flag validation") {
    auto r = run_cmd(kCli + " count --size -1 2>&1");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("--size") != std::string::npos);

    r = run_cmd(kCli + " count --size 5 --openness 25 --truncation 20 2>&1");
    CHECK(r.exit_code == 2);

    r = run_cmd(kCli + " count --size 5 --model bogus 2>&1");
    CHECK(r.exit_code == 2);

    r = run_cmd(kCli + " 2>&1");  // missing subcommand
    CHECK(r.exit_code == 2);
}

TEST_CASE("count table export") {
    const auto r = run_cmd(kCli + " count --size 6 --truncation 4 --export -");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "17");
    const auto j = nlohmann::json::parse(ls[1]);
    CHECK(j.at("N").get<int>() == 4);
    CHECK(j.at("counts")[0][6].get<std::string>() == "17");
    CHECK(j.at("plain")[3].get<std::string>() == "4");
}

TEST_CASE("recursive sampling through the pipe") {
    auto r = run_cmd(kCli + " sample --method recursive --size 2 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "\\ 0\n");

    // the single 1-open term of size 1
    r = run_cmd(kCli + " sample --method recursive --size 1 --openness 1 --seed 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "0\n");

    // no closed term of size 1
    r = run_cmd(kCli + " sample --method recursive --size 1 --seed 4 2>&1");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("EmptySizeClass") != std::string::npos);
}

TEST_CASE("sk sampling stays on the four-element support") {
    const auto r = run_cmd(kCli + " sample --method sk --size 1 --count 4 --seed 1");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    for (const auto& l : ls) {
        const bool ok = l == "(S S)" || l == "(S K)" || l == "(K S)" || l == "(K K)";
        CHECK(ok);
    }
}

TEST_CASE("seeded runs repeat byte for byte") {
    const std::vector<std::string> cmds = {
        kCli + " count --size 12 --export -",
        kCli + " sample --method recursive --size 25 --count 5 --seed 3",
        kCli + " sample --method boltzmann --size 150 --count 3 --seed 9 --stats",
        kCli + " sample --method remy --size 40 --count 3 --seed 2",
        kCli + " sample --method sk --size 20 --count 3 --seed 5",
    };
    for (const auto& cmd : cmds) {
        const auto a = run_cmd(cmd);
        const auto b = run_cmd(cmd);
        REQUIRE(a.exit_code == 0);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("parallel instances merge deterministically") {
    const std::string cmd =
        kCli + " sample --method recursive --size 20 --count 9 --seed 11 --jobs 3";
    const auto a = run_cmd(cmd);
    const auto b = run_cmd(cmd);
    REQUIRE(a.exit_code == 0);
    CHECK(lines(a.out).size() == 9);
    CHECK(a.out == b.out);
    for (const auto& l : lines(a.out)) {
        const lambdagen::Term t = lambdagen::parse(l);
        CHECK(lambdagen::term_size(t, lambdagen::SizeModel::natural()) == 20);
    }
}

TEST_CASE("the three formats describe the same terms") {
    const std::string base = kCli + " sample --method recursive --size 15 --count 4 --seed 21";
    const auto deb = run_cmd(base);
    const auto sexp = run_cmd(base + " --format sexp");
    const auto json = run_cmd(base + " --format json");
    REQUIRE(deb.exit_code == 0);
    REQUIRE(sexp.exit_code == 0);
    REQUIRE(json.exit_code == 0);
    const auto dl = lines(deb.out), sl = lines(sexp.out), jl = lines(json.out);
    REQUIRE(dl.size() == 4);
    REQUIRE(sl.size() == 4);
    REQUIRE(jl.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        using namespace lambdagen;
        CHECK(render(parse(sl[i], TermFormat::Sexp)) == dl[i]);
        CHECK(render(parse(jl[i], TermFormat::Json)) == dl[i]);
    }
}

TEST_CASE("stats line is machine readable and window sizes hold") {
    const auto r = run_cmd(kCli +
                           " sample --method boltzmann --size 200 --count 5 --seed 13 --stats");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 6);
    const auto j = nlohmann::json::parse(ls.back());
    CHECK(j.at("count").get<int>() == 5);
    CHECK(j.at("sizes").at("min").get<int>() >= 180);
    CHECK(j.at("sizes").at("max").get<int>() <= 220);
    CHECK(j.at("attempts").get<long>() >= 5);
    CHECK(j.at("acceptance_rate").get<double>() > 0);
    CHECK(j.at("acceptance_rate").get<double>() <= 1.0);
    const long accounted = j.at("ceiling_aborts").get<long>() + j.at("undershoots").get<long>() +
                           j.at("openness_rejections").get<long>() + 5;
    CHECK(j.at("attempts").get<long>() == accounted);
}

TEST_CASE("sample flag pairings") {
    auto r = run_cmd(kCli + " sample --method boltzmann --size 100 --openness 1 2>&1");
    CHECK(r.exit_code == 2);

    r = run_cmd(kCli + " sample --method recursive --size 5 --targets nope.json 2>&1");
    CHECK(r.exit_code == 2);

    r = run_cmd(kCli + " sample --method tuned --size 50 2>&1");
    CHECK(r.exit_code == 2);

    r = run_cmd(kCli + " sample --method warp --size 5 2>&1");
    CHECK(r.exit_code == 2);

    r = run_cmd(kCli + " sample --method recursive --size 5 --count 0 2>&1");
    CHECK(r.exit_code == 2);

    r = run_cmd(kCli + " sample --method recursive --size 5 --seed banana 2>&1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("tune and tuned sampling from a target file") {
    const std::string path = "cli_tune_targets.json";
    {
        std::ofstream out(path);
        out << R"({"n": 40, "targets": [{"index": 0, "fraction": 0.25}]})" << "\n";
    }

    auto r = run_cmd(kCli + " tune --targets " + path + " --truncation 12");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("n").get<int>() == 40);
    REQUIRE(j.at("weights").size() == 1);
    CHECK(j.at("achieved")[0].get<double>() == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(j.at("expected_size").get<double>() == doctest::Approx(40.0).epsilon(1e-6));

    // size override
    r = run_cmd(kCli + " tune --targets " + path + " --size 60 --truncation 12");
    REQUIRE(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out).at("expected_size").get<double>() ==
          doctest::Approx(60.0).epsilon(1e-6));

    // sampling against the same file
    r = run_cmd(kCli + " sample --method tuned --size 40 --targets " + path +
                " --truncation 12 --tolerance 0.3 --count 2 --seed 6 --max-attempts 20000000");
    REQUIRE(r.exit_code == 0);
    for (const auto& l : lines(r.out)) {
        const auto sz =
            lambdagen::term_size(lambdagen::parse(l), lambdagen::SizeModel::natural());
        CHECK(sz >= 28);
        CHECK(sz <= 52);
    }

    std::remove(path.c_str());
}

TEST_CASE("malformed target files are rejected") {
    const std::string path = "cli_tune_targets_bad.json";
    {
        std::ofstream out(path);
        out << R"({"n": 40, "targets": [{"index": 1, "fraction": 0.25}]})" << "\n";
    }
    auto r = run_cmd(kCli + " tune --targets " + path + " 2>&1");
    CHECK(r.exit_code == 2);
    r = run_cmd(kCli + " tune --targets does_not_exist.json 2>&1");
    CHECK(r.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("typecheck subcommand") {
    auto r = run_cmd("printf '%s' '\\ 0' | " + kCli + " typecheck");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "a -> a\n");

    r = run_cmd("printf '%s' '\\ \\ 1' | " + kCli + " typecheck");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "a -> b -> a\n");

    r = run_cmd("printf '%s' '\\ (0 0)' | " + kCli + " typecheck");
    CHECK(r.exit_code == 1);
    CHECK(r.out == "untypeable\n");

    r = run_cmd("printf '%s' '1' | " + kCli + " typecheck 2>&1");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("OpenTermRejected") != std::string::npos);

    r = run_cmd("printf '%s' '(0' | " + kCli + " typecheck 2>&1");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("ParseError") != std::string::npos);
}

TEST_CASE("precision override is harmless when well formed and ignored when not") {
    auto r = run_cmd("LAMBDAGEN_PRECISION=1e-10 " + kCli +
                     " sample --method boltzmann --size 80 --count 1 --seed 2");
    CHECK(r.exit_code == 0);
    r = run_cmd("LAMBDAGEN_PRECISION=banana " + kCli +
                " sample --method boltzmann --size 80 --count 1 --seed 2");
    CHECK(r.exit_code == 0);  // malformed override falls back to the default
}

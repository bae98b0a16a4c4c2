#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "netcode/families.hpp"
#include "netcode/search.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

using namespace netcode;

namespace {

struct RunResult {
    int code = -1;
    std::string out; // stdout and stderr merged
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "")
{
    const std::string cmd = env_prefix + NETCODE_CLI_PATH + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (true) {
        const std::size_t n = std::fread(buf, 1, sizeof buf, pipe);
        if (n == 0) break;
        out.append(buf, n);
    }
    const int status = pclose(pipe);
    RunResult r;
    r.out = std::move(out);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string last_line(const std::string& text)
{
    std::string s = text;
    while (!s.empty() && s.back() == '\n') s.pop_back();
    const auto pos = s.rfind('\n');
    return pos == std::string::npos ? s : s.substr(pos + 1);
}

std::filesystem::path scratch_dir()
{
    const auto dir =
        std::filesystem::temp_directory_path() / ("netcode_cli_" + std::to_string(getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

std::string scratch(const std::string& name)
{
    return (scratch_dir() / name).string();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

} // namespace

TEST_CASE("generate emits artifacts plus a structural summary")
{
    const std::string dot_path = scratch("f3.dot");
    const RunResult dot = run_cli("generate gen-fano --q 3 --format dot --out " + dot_path);
    CHECK(dot.code == 0);
    CHECK(dot.out.find("4 sources, 7 coded edges, 6 terminals") != std::string::npos);
    CHECK(slurp(dot_path).rfind("digraph", 0) == 0);

    const std::string json_path = scratch("nf2.json");
    const RunResult gen = run_cli("generate gen-non-fano --q 2 --out " + json_path);
    CHECK(gen.code == 0);
    CHECK(gen.out.find("3 sources, 4 coded edges, 4 terminals") != std::string::npos);
    CHECK(network_from_json(slurp(json_path)) == generalized_non_fano(2));

    const RunResult to_stdout = run_cli("generate gen-non-fano --q 2");
    CHECK(to_stdout.code == 0);
    CHECK(to_stdout.out.find("\"family\": \"gen_non_fano\"") != std::string::npos);

    CHECK(run_cli("generate gen-fano --q 1").code == 2);
    CHECK(run_cli("generate unknown-family --q 2").code == 2);
    CHECK(run_cli("generate gen-fano --q 2 --format yaml").code == 2);
}

TEST_CASE("solve writes a verifiable assignment or refuses with exit 3")
{
    const std::string asg = scratch("f6p3.json");
    const RunResult ok = run_cli("solve gen-fano --q 6 --p 3 --out " + asg);
    CHECK(ok.code == 0);
    CHECK(ok.out.find("solved") != std::string::npos);
    const CodingAssignment parsed = assignment_from_json(slurp(asg), generalized_fano(6));
    CHECK(verify_solution(parsed).solved);

    const RunResult refused = run_cli("solve gen-fano --q 6 --p 5");
    CHECK(refused.code == 3);
    CHECK(refused.out.find("5 does not divide 6") != std::string::npos);

    CHECK(run_cli("solve gen-non-fano --q 6 --p 5 --k 2").code == 0);
    const RunResult other_side = run_cli("solve gen-non-fano --q 6 --p 3");
    CHECK(other_side.code == 3);
    CHECK(other_side.out.find("divides") != std::string::npos);

    // Vector solutions over extension fields ride the same path.
    CHECK(run_cli("solve gen-fano --q 6 --p 2 --m 2 --k 2").code == 0);
}

TEST_CASE("verify round-trips the files the other commands emit")
{
    const std::string net = scratch("f2.json");
    const std::string asg = scratch("f2p2.json");
    REQUIRE(run_cli("generate gen-fano --q 2 --out " + net).code == 0);
    REQUIRE(run_cli("solve gen-fano --q 2 --p 2 --out " + asg).code == 0);

    const RunResult good = run_cli("verify " + net + " " + asg);
    CHECK(good.code == 0);
    CHECK(good.out.find("t1 demands c: ok") != std::string::npos);
    CHECK(good.out.find("solved") != std::string::npos);

    const std::string zeroed = scratch("zero.json");
    spit(zeroed, "{\"field\": {\"p\": 2, \"m\": 1}, \"k\": 1, \"local\": []}\n");
    const RunResult failing = run_cli("verify " + net + " " + zeroed);
    CHECK(failing.code == 1);
    CHECK(failing.out.find("first failing terminal: t1") != std::string::npos);

    // The same coefficients reinterpreted over GF(3) parse fine but the
    // pattern stops decoding there, so this is a clean exit-1 case.
    const std::string refielded = scratch("refielded.json");
    {
        std::string text = slurp(asg);
        const auto pos = text.find("\"p\": 2");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 6, "\"p\": 3");
        spit(refielded, text);
    }
    CHECK(run_cli("verify " + net + " " + refielded).code == 1);

    const std::string overfield = scratch("overfield.json");
    spit(overfield, "{\"field\": {\"p\": 2, \"m\": 1}, \"k\": 1, \"local\": ["
                    "{\"producer\": \"a\", \"consumer\": \"E13\", \"matrix\": [[7]]}]}\n");
    CHECK(run_cli("verify " + net + " " + overfield).code == 2);

    const std::string garbage = scratch("garbage.json");
    spit(garbage, "{\"field\": [this is not json");
    CHECK(run_cli("verify " + net + " " + garbage).code == 2);

    CHECK(run_cli("verify " + net + " " + scratch("missing.json")).code == 1);
}

TEST_CASE("search prints STATUS as its final line and honors budgets")
{
    const RunResult none = run_cli("search gen-fano --q 2 --p 3 --exhaustive");
    CHECK(none.code == 0);
    CHECK(last_line(none.out) == "STATUS: NONE");

    const RunResult none2 = run_cli("search gen-fano --q 3 --p 2 --exhaustive");
    CHECK(none2.code == 0);
    CHECK(last_line(none2.out) == "STATUS: NONE");

    const std::string found_path = scratch("found.json");
    const RunResult found =
        run_cli("search gen-non-fano --q 2 --p 3 --exhaustive --jobs 2 --out " + found_path);
    CHECK(found.code == 0);
    CHECK(last_line(found.out) == "STATUS: FOUND");
    const CodingAssignment parsed =
        assignment_from_json(slurp(found_path), generalized_non_fano(2));
    CHECK(verify_solution(parsed).solved);

    const RunResult over = run_cli("search gen-fano --q 6 --p 5 --exhaustive");
    CHECK(over.code == 4);

    const RunResult env_budget =
        run_cli("search gen-fano --q 2 --p 3 --exhaustive", "NETCODE_BUDGET=10 ");
    CHECK(env_budget.code == 4);

    const RunResult random = run_cli("search gen-fano --q 2 --p 3 --random --k 2 "
                                     "--trials 40 --seed 5");
    CHECK(random.code == 0);
    CHECK(random.out.find("seed=5") != std::string::npos);
    CHECK(last_line(random.out) == "STATUS: INCONCLUSIVE");

    CHECK(run_cli("search gen-fano --q 2 --p 3 --random --k 1 --trials 5").code == 2);
    CHECK(run_cli("search gen-fano --q 2 --p 4").code == 2);
    CHECK(run_cli("search --p 2").code == 2);

    const std::string net = scratch("searchnet.json");
    REQUIRE(run_cli("generate gen-non-fano --q 2 --out " + net).code == 0);
    const RunResult from_file = run_cli("search --network " + net + " --p 2");
    CHECK(from_file.code == 0);
    CHECK(last_line(from_file.out) == "STATUS: NONE");
}

TEST_CASE("table tabulates verdicts and degrades loudly when starved")
{
    const RunResult fano = run_cli("table gen-fano --primes 2,3 --fields 2,3,5,7 --format csv");
    CHECK(fano.code == 0);
    CHECK(fano.out.find("family,q,p,m,k,verdict,searched,elapsed_ms") != std::string::npos);
    CHECK(fano.out.find("gen_fano,6,2,1,1,solution-verifies") != std::string::npos);
    CHECK(fano.out.find("gen_fano,6,3,1,1,solution-verifies") != std::string::npos);
    CHECK(fano.out.find("gen_fano,6,5,1,1,pattern-fails") != std::string::npos);
    CHECK(fano.out.find("gen_fano,6,7,1,1,pattern-fails") != std::string::npos);

    const RunResult non_fano =
        run_cli("table gen-non-fano --primes 2,3 --fields 2,3,5,7 --format csv");
    CHECK(non_fano.code == 0);
    CHECK(non_fano.out.find("gen_non_fano,6,2,1,1,pattern-fails") != std::string::npos);
    CHECK(non_fano.out.find("gen_non_fano,6,3,1,1,pattern-fails") != std::string::npos);
    CHECK(non_fano.out.find("gen_non_fano,6,5,1,1,solution-verifies") != std::string::npos);
    CHECK(non_fano.out.find("gen_non_fano,6,7,1,1,solution-verifies") != std::string::npos);

    const RunResult single = run_cli("table gen-fano --q 2 --fields 2 --format csv");
    CHECK(single.code == 0);
    CHECK(single.out.find("gen_fano,2,2,1,1,solution-verifies") != std::string::npos);

    const RunResult starved =
        run_cli("table gen-fano --q 2 --fields 3 --mode exhaustive --format csv",
                "NETCODE_BUDGET=10 ");
    CHECK(starved.code == 4);
    CHECK(starved.out.find("inconclusive") != std::string::npos);

    CHECK(run_cli("table gen-fano --fields 2").code == 2);
    CHECK(run_cli("table gen-fano --q 2 --primes 2 --fields 2").code == 2);
    CHECK(run_cli("table gen-fano --q 2").code == 2);
    CHECK(run_cli("table gen-fano --q 2 --fields 2 --mode quick").code == 2);
}

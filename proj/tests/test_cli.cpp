#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
    const char* b = std::getenv("QUADREP_BIN");
    REQUIRE(b != nullptr);
    return b;
}

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = bin() + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WEXITSTATUS(st), out};
}

std::string write_i4() {
    std::string path = "/tmp/quadrep_cli_i4.json";
    std::ofstream f(path);
    f << R"({"dim": 4, "gram": [[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]})";
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("count and validate round trip") {
    std::string form = write_i4();
    RunResult v = run("validate --form " + form);
    CHECK(v.code == 0);
    CHECK(v.out.find("disc 16") != std::string::npos);
    CHECK(v.out.find("level 4") != std::string::npos);

    RunResult c = run("count --form " + form + " --n 25");
    CHECK(c.code == 0);
    CHECK(c.out.find("r 248") != std::string::npos);  // r_4(25) = 8*sigma(25)-32*sigma..: 248
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("count --form /tmp/quadrep_cli_i4.json --nope 3").code == 2);
    CHECK(run("nonsense").code == 2);
    CHECK(run("count --form /nonexistent.json --n 1").code == 2);
}

TEST_CASE("computational errors exit 1") {
    std::string form = write_i4();
    // budget too small
    CHECK(run("count --form " + form + " --n 50 --budget 3").code == 1);
}

TEST_CASE("pairs subcommand emits the full CSV table") {
    RunResult r = run("pairs --d 5 --n 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("t,A\n") != std::string::npos);
    CHECK(r.out.find("-4,90") != std::string::npos);  // A(n,-n) = |E(n)|
    CHECK(r.out.find("4,0") != std::string::npos);
}

TEST_CASE("verify-all reports are byte-identical across thread counts and runs") {
    RunResult a = run("verify-all --threads 1 --out /tmp/qva_t1");
    RunResult b = run("verify-all --threads 2 --out /tmp/qva_t2");
    RunResult c = run("verify-all --threads 2 --out /tmp/qva_t2b");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(c.code == 0);
    for (const char* f : {"summary.json", "ratios.csv", "pairs_d5.csv"}) {
        CHECK(slurp(std::string("/tmp/qva_t1/") + f) == slurp(std::string("/tmp/qva_t2/") + f));
        CHECK(slurp(std::string("/tmp/qva_t2/") + f) == slurp(std::string("/tmp/qva_t2b/") + f));
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
#ifdef WINDOWLAW_CLI_PATH
    return WINDOWLAW_CLI_PATH;
#else
    const char* p = std::getenv("WINDOWLAW_CLI_PATH");
    REQUIRE(p != nullptr);
    return p;
#endif
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_file = "cli_test_stdout.tmp";
    std::string cmd = cli_path() + " " + args + " > " + out_file + " 2> /dev/null";
    int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    res.out = ss.str();
    std::remove(out_file.c_str());
    return res;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("").exit_code == 2);            // missing subcommand
    CHECK(run("frobnicate").exit_code == 2);  // unknown subcommand
    CHECK(run("er-rho --c 0").exit_code == 2);
    CHECK(run("norming-table --spec 'nosuch(p=1)'").exit_code == 2);
}

TEST_CASE("norming-table emits the schedule columns") {
    auto res = run("norming-table --spec 'logpow(p=1)' --n 100,10000 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.out, "n,a_n,d_n,f_n,b61,normalizer"));
    // d_100 = 2 log log 100 = 3.05435925...
    CHECK(contains(res.out, "100,21,3.0543592516158022"));
    auto js = run("norming-table --spec 'logpow(p=1)' --n 100,10000 --format json");
    CHECK(js.exit_code == 0);
    CHECK(contains(js.out, "\"d_n\": 3.0543592516158022"));
}

TEST_CASE("scalar reports render as csv on request") {
    auto res = run("er-rho --dist rademacher --c 4 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.out, "c,rho,saturated"));
    CHECK(contains(res.out, "0.6757861557002798,false"));
}

TEST_CASE("er-rho json carries the closed-form value") {
    auto res = run("er-rho --dist 'normal(sigma=1)' --c 2 --format json");
    CHECK(res.exit_code == 0);
    // sqrt(2/c) = 1 for c = 2.
    CHECK(contains(res.out, "\"rho\": 1.000000000"));
    CHECK(contains(res.out, "\"saturated\": false"));
    auto sat = run("er-rho --dist rademacher --c 1 --format json");
    CHECK(sat.exit_code == 0);
    CHECK(contains(sat.out, "\"saturated\": true"));
    CHECK(contains(sat.out, "\"rho\": 1"));
}

TEST_CASE("moment-check reports verdict and method") {
    auto res = run("moment-check --spec 'logpow(p=1)' --dist 'logtail(a=3)' "
                   "--mode f --format json");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.out, "\"verdict\": \"finite\""));
    CHECK(contains(res.out, "\"condition\": \"f_inverse\""));
    auto inf = run("moment-check --spec 'logpow(p=1)' --dist 'logtail(a=1)' "
                   "--mode f --format json");
    CHECK(inf.exit_code == 0);
    CHECK(contains(inf.out, "\"verdict\": \"infinite\""));
    auto cf = run("moment-check --spec 'logpow(p=1)' --dist rademacher "
                  "--mode f --closed-form --format json");
    CHECK(cf.exit_code == 0);
    CHECK(contains(cf.out, "closed_form"));
}

TEST_CASE("simulate csv is seeded, deterministic and header-stable") {
    std::string args = "simulate --spec 'logpow(p=1)' --dist 'normal(sigma=1)' "
                       "--c 2 --n-total 50000 --seed 7 --format csv";
    auto a = run(args);
    CHECK(a.exit_code == 0);
    CHECK(contains(a.out, "k,n_k,a,d,R,running_max"));
    auto b = run(args);
    CHECK(a.out == b.out);
    auto c = run("simulate --spec 'logpow(p=1)' --dist 'normal(sigma=1)' "
                 "--c 2 --n-total 50000 --seed 8 --format csv");
    CHECK(c.exit_code == 0);
    CHECK(a.out != c.out);
}

TEST_CASE("simulate respects the WINDOWLAW_SEED environment default") {
    std::string out_file = "cli_seed_env.tmp";
    std::string cmd = "env WINDOWLAW_SEED=7 " + cli_path() +
                      " simulate --spec 'logpow(p=1)' --dist 'normal(sigma=1)' --c 2 "
                      "--n-total 50000 --format csv > " +
                      out_file + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(out_file.c_str());
    auto explicit_seed = run("simulate --spec 'logpow(p=1)' --dist 'normal(sigma=1)' "
                             "--c 2 --n-total 50000 --seed 7 --format csv");
    CHECK(ss.str() == explicit_seed.out);
}

TEST_CASE("output flag writes the artifact to a file") {
    std::string art = "cli_test_artifact.csv";
    std::remove(art.c_str());
    auto res = run("norming-table --spec 'logpow(p=1)' --n 100,1000 --format csv -o " + art);
    CHECK(res.exit_code == 0);
    std::ifstream in(art);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,a_n,d_n,f_n,b61,normalizer");
    std::remove(art.c_str());
}

TEST_CASE("subsequence and conjugate subcommands run clean") {
    auto sub = run("subsequence --spec 'logpow(p=1)' --c 2 --k-max 50 --format csv");
    CHECK(sub.exit_code == 0);
    CHECK(contains(sub.out, "9")); // n_1 = round(e^sqrt(5)) = 9
    auto conj = run("conjugate --spec 'logpow(p=1)' --x 1e30 --format json");
    CHECK(conj.exit_code == 0);
    CHECK(contains(conj.out, "0.01540722043888"));
}

TEST_CASE("bounds-check classifies the series per alpha") {
    auto up = run("bounds-check --spec 'logpow(p=1)' --c 2 --alpha 2 --k-max 2000 "
                  "--format json");
    CHECK(up.exit_code == 0);
    CHECK(contains(up.out, "\"verdict\": \"converges\""));
    auto low = run("bounds-check --spec 'logpow(p=1)' --c 2 --alpha 0.5 --k-max 2000 "
                   "--format json");
    CHECK(low.exit_code == 0);
    CHECK(contains(low.out, "\"verdict\": \"diverges\""));
}

TEST_CASE("khj-sweep verifies the inequality grid") {
    auto res = run("khj-sweep --n 8 --format json");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.out, "\"violations\": 0"));
}

TEST_CASE("configuration file supplies defaults") {
    std::string cfg = "cli_test_config.ini";
    {
        std::ofstream out(cfg);
        out << "[er-rho]\n";
        out << "dist=\"normal(sigma=1)\"\n";
        out << "c=2\n";
    }
    auto res = run("--config " + cfg + " er-rho --format json");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.out, "\"rho\": 1.000000000"));
    std::remove(cfg.c_str());
}

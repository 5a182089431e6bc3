#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome invoke(const std::string& args)
{
    const std::string cmd = std::string("\"") + GTSIM_CLI_PATH + "\" " + args + " 2>/dev/null";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        o.out.append(buf, n);
    }
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kHeader = "scheme,scenario,n_heavy,gamma,seed,success_prob,avg_delay_s,avg_wait_s,bandwidth_util,"
                      "frames_generated,frames_delivered,frames_dropped\n";

} // namespace

TEST_CASE("run prints one CSV row")
{
    const auto o = invoke("run --superframes 20 --seed 3");
    CHECK(o.code == 0);
    CHECK(o.out.rfind(kHeader, 0) == 0);
    CHECK(o.out.find("\nartgas,all,5,4,3,") != std::string::npos);
}

TEST_CASE("configuration errors exit with status 2")
{
    CHECK(invoke("run --set bogus.key=1").code == 2);
    CHECK(invoke("run --set superframe.bo=2 --set superframe.so=3").code == 2);
    CHECK(invoke("run --config does-not-exist.cfg").code == 2);
    CHECK(invoke("run --scheme edf").code == 2);
    CHECK(invoke("frobnicate").code == 2);
    CHECK(invoke("sweep --param mu_M").code == 2);
}

TEST_CASE("config file, environment and flags layer in order")
{
    {
        std::ofstream cfg("cli_layers.cfg");
        cfg << "scheme = fcfs\nseed = 4\nsuperframes = 10\n";
    }
    const auto file_only = invoke("run --config cli_layers.cfg");
    CHECK(file_only.out.find("\nfcfs,all,5,4,4,") != std::string::npos);

    const auto env = invoke("run --config cli_layers.cfg").out;
    const auto with_env = [&] {
        const std::string cmd = "env GTSIM_SEED=6 \"" + std::string(GTSIM_CLI_PATH) +
                                "\" run --config cli_layers.cfg";
        FILE* pipe = popen(cmd.c_str(), "r");
        std::string s;
        char buf[4096];
        std::size_t n = 0;
        while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
            s.append(buf, n);
        }
        pclose(pipe);
        return s;
    }();
    CHECK(with_env.find("\nfcfs,all,5,4,6,") != std::string::npos);

    const auto flag = invoke("run --config cli_layers.cfg --set seed=7 --seed 8");
    CHECK(flag.out.find("\nfcfs,all,5,4,8,") != std::string::npos);
    CHECK(env == file_only.out);
}

TEST_CASE("compare output is byte-identical across invocations")
{
    const std::string args = "compare --superframes 30 --seeds 1..2 --loads 0,10 --threads 4 --out ";
    REQUIRE(invoke(args + "cli_cmp_a.csv").code == 0);
    REQUIRE(invoke(args + "cli_cmp_b.csv").code == 0);
    const auto a = slurp("cli_cmp_a.csv");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp("cli_cmp_b.csv"));
    // header plus 2 schemes x 2 loads x 2 seeds
    CHECK(std::count(a.begin(), a.end(), '\n') == 9);
}

TEST_CASE("sweep writes param and value columns")
{
    const auto o = invoke("sweep --param delta --values 0.8,0.9 --superframes 10");
    CHECK(o.code == 0);
    CHECK(o.out.rfind("param,value,", 0) == 0);
    CHECK(o.out.find("\nartgas.delta,0.8,") != std::string::npos);
}

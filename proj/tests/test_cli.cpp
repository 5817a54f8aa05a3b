#include "doctest.h"

#include <sstream>

#include "ftlab/cli.hpp"
#include "ftlab/series.hpp"
#include "json.hpp"

using namespace ftlab;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "ftlab");
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("expand")
{
    auto r = run({"expand", "rogers", "--order", "20"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("\n15 -1\n") != std::string::npos);
    CHECK(r.out.find("O(q^20)") != std::string::npos);

    r = run({"expand", "Gfrak", "--p", "2", "--lambda", "0,0", "--order", "10", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    auto j = json::parse(r.out);
    CHECK(j["terms"][0]["exp"] == "1/2");
    // the JSON round-trips into the same series
    CHECK(to_json(series_from_json(j)) == j);

    r = run({"expand", "f", "--order", "5", "--window", "4", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    j = json::parse(r.out);
    CHECK(j["region"] == "INNER");

    for (const char *name : {"eta", "theta", "theta01", "thetaA2", "calT", "J", "kwN3", "Ghyper", "F0", "coeffF", "Fconst",
                             "partialThetaA2"})
        CHECK(run({"expand", name, "--order", "4"}).code == kExitOk);
    CHECK(run({"expand", "Hfrak", "--r", "1/2,0", "--order", "4"}).code == kExitOk);
    CHECK(run({"expand", "rankone", "--r", "1", "--order", "8"}).code == kExitOk);

    CHECK(run({"expand", "nosuch"}).code == kExitUsage);
    CHECK(run({"expand", "rogers", "--order", "-1"}).code == kExitUsage);
    CHECK(run({"expand", "Gfrak", "--p", "1"}).code == kExitUsage);
    CHECK(run({"expand", "Hfrak", "--r", "0,0"}).code == kExitUsage);
    CHECK(run({"expand", "theta", "--region", "SIDEWAYS"}).code == kExitUsage);
}

TEST_CASE("verify")
{
    auto r = run({"verify", "E15", "--order", "30"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("E15 equal") != std::string::npos);

    r = run({"verify", "all", "--order", "10", "--format", "json"});
    CHECK(r.code == kExitOk);
    auto arr = json::parse(r.out);
    CHECK(arr.size() >= 20);
    for (const auto &rep : arr) CHECK(rep["verdict"] == "equal");

    r = run({"verify", "E7", "--params", R"({"p": 3, "r": [1, 2]})", "--order", "12", "--format", "json"});
    CHECK(r.code == kExitOk);
    CHECK(json::parse(r.out)["params"]["p"] == 3);

    r = run({"verify", "E20", "--mutate"});
    CHECK(r.code == kExitOk); // the planted error was found where it was planted
    CHECK(r.out.find("UNEQUAL") != std::string::npos);

    CHECK(run({"verify", "E99"}).code == kExitUsage);
    CHECK(run({"verify", "E7", "--params", "{bad"}).code == kExitUsage);
    CHECK(run({"verify", "E7", "--params", R"({"zzz": 1})"}).code == kExitUsage);
}

TEST_CASE("check")
{
    auto r = run({"check", "T_MOD", "--gamma", "1,0,6,1", "--tau", "0.1+1.2i", "--z", "0.21+0.3i,0.11+0.4i", "--format", "json"});
    CHECK(r.code == kExitOk);
    auto j = json::parse(r.out);
    CHECK(j["residual"].get<double>() < 1e-8);
    CHECK(j["tolerance"].get<double>() == 1e-8);

    CHECK(run({"check", "F_ELL", "--m", "2,0", "--l", "0,0"}).code == kExitOk);
    CHECK(run({"check", "THETA_ELL", "--m", "1", "--z", "0.2+0.1i"}).code == kExitOk);
    CHECK(run({"check", "J_MOD", "--grid"}).code == kExitOk);
    CHECK(run({"check", "F_MOD", "--gamma", "1,1,1,2"}).code == kExitUsage);
    CHECK(run({"check", "F_ELL", "--m", "1,0"}).code == kExitUsage);
    CHECK(run({"check", "NOPE", "--m", "1,0"}).code == kExitUsage);
    // an impossible tolerance turns a good law into a reported failure
    CHECK(run({"check", "THETA_MOD", "--gamma", "0,-1,1,0", "--tolerance", "0"}).code == kExitDiscrepancy);
}

TEST_CASE("suite")
{
    auto r = run({"suite", "--filter", "E5|E6", "--order", "10"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("2 passed, 0 failed") != std::string::npos);
    r = run({"suite", "--filter", "nothing"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("0 passed, 0 failed") != std::string::npos);
    CHECK(run({"suite", "--filter", "("}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
}

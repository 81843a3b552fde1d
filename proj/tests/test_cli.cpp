#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpe/cli.hpp"

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = qpe::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        v.push_back(line);
    }
    return v;
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("qpe_test_" + name);
}

}  // namespace

TEST(Cli, DiceJsonRecord) {
    CliRun r = run({"scenario", "dice", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["meta"]["command"], "scenario dice");
    EXPECT_NEAR(doc["shift_M_f"].get<double>(), -0.149071198499986, 1e-12);
    EXPECT_NEAR(doc["shift_M_perp"].get<double>(), -0.745355992499930, 1e-12);
    EXPECT_EQ(doc["both_lose_perp"], true);
    EXPECT_FALSE(doc.contains("shift_M_f_abs"));
}

TEST(Cli, DiceAbsoluteUnitsWhenOmegaGiven) {
    CliRun r = run({"scenario", "dice", "--format", "json", "--omega0", "2.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["shift_M_f"].get<double>(), -0.149071198499986, 1e-12);
    EXPECT_NEAR(doc["shift_M_f_abs"].get<double>(), 2.5 * -0.149071198499986, 1e-12);
}

TEST(Cli, SubshiftsAtZeroAngle) {
    CliRun r = run({"jc", "subshifts", "--theta", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto v = lines(r.out);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_EQ(v[0], "kind,probability,analytic,zero_probability,qubit_subshift");
    EXPECT_EQ(v[1], "uu,1,0,false,0");
    EXPECT_EQ(v[2], "du,0,0,true,1");
    EXPECT_EQ(v[3], "ud,0,2,true,-1");
    EXPECT_EQ(v[4], "dd,1,0,false,0");
}

TEST(Cli, SubshiftPoleIsEmptyCell) {
    CliRun r = run({"jc", "subshifts", "--theta", "3.141592653589793"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto v = lines(r.out);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_EQ(v[1].rfind("uu,", 0), 0u);
    EXPECT_NE(v[1].find(",,true,"), std::string::npos) << v[1];
}

TEST(Cli, OrthogonalPostSelectionExitsThree) {
    CliRun r = run({"clock", "shift", "--i-theta", "1.5707963267948966", "--theta", "4.71238898038469", "--outcome", "f"});
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({"clock", "shift", "--precision", "3"}).code, 2);
    EXPECT_EQ(run({"jc", "shift", "--method", "numeric", "--n0=-5"}).code, 2);
    EXPECT_EQ(run({"jc", "nosuch"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"scenario", "sweep", "--steps", "1"}).code, 2);
    EXPECT_EQ(run({"scenario", "stevens", "--theta-start", "2", "--theta-end", "1"}).code, 2);
    EXPECT_EQ(run({"clock", "shift", "--outcome", "sideways"}).code, 2);
}

TEST(Cli, UnderresolvedWindowExitsFour) {
    CliRun r = run({"jc", "shift", "--method", "numeric", "--window", "5"});
    EXPECT_EQ(r.code, 4);
}

TEST(Cli, HelpExitsZero) {
    CliRun r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("scenario"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    auto path = temp_path("config.ini");
    {
        std::ofstream f(path);
        f << "theta=0.5\ni-theta=1.5707963267948966\nformat=json\nprecision=8\n";
    }
    CliRun from_file = run({"clock", "shift", "--config", path.string(), "--outcome", "f"});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    auto doc = nlohmann::json::parse(from_file.out);
    EXPECT_EQ(doc["meta"]["parameters"]["theta"], 0.5);
    EXPECT_EQ(doc["meta"]["parameters"]["precision"], 8);

    CliRun overridden = run({"clock", "shift", "--config", path.string(), "--outcome", "f", "--theta", "0.25"});
    ASSERT_EQ(overridden.code, 0) << overridden.err;
    EXPECT_EQ(nlohmann::json::parse(overridden.out)["meta"]["parameters"]["theta"], 0.25);

    {
        std::ofstream f(path);
        f << "not-an-option=1\n";
    }
    EXPECT_EQ(run({"clock", "shift", "--config", path.string()}).code, 2);
    std::filesystem::remove(path);
}

TEST(Cli, OutFileMatchesStdout) {
    auto path = temp_path("out.csv");
    std::vector<std::string> args = {"scenario", "sweep", "--i-theta", "0.7", "--steps", "33"};
    CliRun direct = run(args);
    ASSERT_EQ(direct.code, 0) << direct.err;
    args.insert(args.end(), {"--out", path.string()});
    CliRun to_file = run(args);
    ASSERT_EQ(to_file.code, 0) << to_file.err;
    EXPECT_TRUE(to_file.out.empty());
    std::ifstream f(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    EXPECT_EQ(content, direct.out);
    std::filesystem::remove(path);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const std::vector<std::vector<std::string>> cases = {
        {"scenario", "sweep", "--i-theta", "1.1", "--i-phi", "0.3", "--steps", "200", "--format", "json"},
        {"scenario", "stevens", "--theta-start", "-6.3", "--theta-end", "6.3", "--steps", "100", "--envelope", "0.2"},
        {"jc", "converge", "--i-theta", "1.5707963267948966", "--theta", "1", "--n0-list", "1e4,1e5"},
        {"clock", "numeric", "--i-theta", "1.5707963267948966", "--theta", "0.7297276562269663"},
    };
    for (const auto &args : cases) {
        CliRun a = run(args);
        CliRun b = run(args);
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, SweepCsvShape) {
    CliRun r = run({"scenario", "sweep", "--steps", "17"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto v = lines(r.out);
    ASSERT_EQ(v.size(), 18u);
    EXPECT_EQ(v[0].rfind("theta,p_f,p_perp,clock_shift_f", 0), 0u);
}

TEST(Cli, FockPurity) {
    CliRun r = run({"jc", "fidelity", "--fock", "0", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(nlohmann::json::parse(r.out)["purity"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, SelftestPassesForEveryGroup) {
    for (const char *cmd : {"clock shift", "jc shift", "deg shift", "scenario dice"}) {
        std::istringstream words(cmd);
        std::vector<std::string> args;
        for (std::string w; words >> w;) args.push_back(w);
        args.push_back("--selftest");
        CliRun r = run(args);
        EXPECT_EQ(r.code, 0) << cmd << "\n" << r.out << r.err;
        EXPECT_EQ(r.out.find(",false,"), std::string::npos) << r.out;
    }
}

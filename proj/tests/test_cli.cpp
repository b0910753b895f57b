#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rtm/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = rtm::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "rtm_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("usage errors exit 2")
{
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"table", "--at", "4000"}).code == 2);
    CHECK(cli({"integrate", "--field", "logistic-demo", "--y0", "1/2", "--k", "3"}).code == 2);
    CHECK(cli({"integrate", "--field", "nope", "--y0", "1/2", "--h", "1/100", "--k", "3"}).code == 2);
    CHECK(cli({"integrate", "--theta0", "0.5204", "--h", "1/100", "--k", "3", "--no-round"}).code == 2);
    CHECK(cli({"integrate", "--field", "logistic-demo", "--y0", "x", "--h", "1/100", "--k", "3"}).code == 2);
    CHECK(cli({"prove", "--samples", "1"}).code == 2);
    CHECK(cli({"prove", "--constants", "mine"}).code == 2);
    CHECK(cli({"prove", "--u1", "1,2;3,4"}).code == 2);
    CHECK(cli({"bounds", "--box", "u7=0,1"}).code == 2);
    CHECK(cli({"curve", "--in", scratch("missing.csv").string()}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("prove fails fast on an unwritable certificate path")
{
    const Run r = cli({"prove", "--out", "/nonexistent-dir/cert.json", "--steps", "10", "--samples", "2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("cannot write") != std::string::npos);
}

TEST_CASE("table prints both tabulated times")
{
    const Run r = cli({"table"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 33);
    CHECK(r.out.rfind("t,j,a,r,theta,alpha\n1983/5000,0,1301/2500,2644387103/2000000000,", 0) == 0);
    CHECK(r.out.find("3991/10000,15,1311/2500,13212714809/10000000000,3941802431/5000000000,15681944331/10000000000") !=
          std::string::npos);
    CHECK(count_lines(cli({"table", "--at", "3991"}).out) == 17);
}

TEST_CASE("integrate reproduces the exact four-step fraction")
{
    const Run r = cli({"integrate", "--field", "logistic-demo", "--y0", "1/2", "--h", "0.01", "--k", "4", "--no-round"});
    CHECK(r.code == 0);
    CHECK(r.out.find("u1 = 1244197046778066277036445468762843519/2407347121029120000000000000000000000") !=
          std::string::npos);
    CHECK(r.out.find("strictly increasing") != std::string::npos);
}

TEST_CASE("integrate: overflow guard and box check exit 1")
{
    CHECK(cli({"integrate", "--field", "logistic-demo", "--y0", "1/2", "--h", "0.01", "--k", "30", "--no-round"}).code == 1);
    const Run r = cli({"integrate", "--theta0", "0.5204", "--h", "1983/125000000", "--k", "5", "--box-check"});
    CHECK(r.code == 1);
    CHECK(r.err.find("left U1") != std::string::npos);
}

TEST_CASE("integrate writes a trajectory that curve turns into points")
{
    const fs::path csv = scratch("traj.csv");
    const fs::path pts = scratch("curve.csv");
    REQUIRE(cli({"integrate", "--theta0", "0.5204", "--h", "1983/125000000", "--k", "3", "--out", csv.string()}).code == 0);
    const std::string traj = slurp(csv);
    CHECK(traj.rfind("step,t,u1,u2,u3\n0,0.000000000000,15707963267/10000000000,1301/2500,", 0) == 0);
    CHECK(count_lines(traj) == 5);

    REQUIRE(cli({"curve", "--in", csv.string(), "--out", pts.string()}).code == 0);
    std::istringstream in(slurp(pts));
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# non-rigorous", 0) == 0);
    std::getline(in, line);
    CHECK(line == "t,x,y,z");
    std::getline(in, line);
    // r = 1.5707963267 (sin r = 1 to 18 digits), theta = 0.5204.
    double x = 0, y = 0, z = 0;
    char c1, c2;
    std::string t;
    std::istringstream row(line);
    std::getline(row, t, ',');
    row >> x >> c1 >> y >> c2 >> z;
    CHECK(t == "0.000000000000");
    CHECK(x == doctest::Approx(0.8676203582022790).epsilon(1e-12));
    CHECK(y == doctest::Approx(0.4972272257559405).epsilon(1e-12));
    CHECK(std::abs(z) < 1e-9);
}

TEST_CASE("curve on an empty trajectory writes nothing")
{
    const fs::path csv = scratch("empty.csv");
    std::ofstream(csv) << "step,t,u1,u2,u3\n";
    const Run r = cli({"curve", "--in", csv.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("bounds: published box passes, wider box fails")
{
    const Run ok = cli({"bounds"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("all bounds verified") != std::string::npos);
    const Run bad = cli({"bounds", "--box", "u3=1.2,3.142"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);
    CHECK(cli({"bounds", "--box", "u1=1.4,1.4", "--box", "u2=0.6,0.6", "--box", "u3=2,2"}).code == 0);
}

TEST_CASE("config files supply flags, the command line wins")
{
    const fs::path cfg = scratch("table.json");
    std::ofstream(cfg) << R"({"at": "3966"})";
    CHECK(count_lines(cli({"table", "--config", cfg.string()}).out) == 17);
    const Run r = cli({"table", "--config", cfg.string(), "--at", "all"});
    CHECK(count_lines(r.out) == 33);

    const fs::path integ = scratch("integrate.json");
    std::ofstream(integ) << R"({"field": "logistic-demo", "y0": "1/2", "h": "1/100", "k": 4, "no-round": true})";
    CHECK(cli({"integrate", "--config", integ.string()}).out.find("2407347121029120000000000000000000000") !=
          std::string::npos);

    const fs::path broken = scratch("broken.json");
    std::ofstream(broken) << "{";
    CHECK(cli({"table", "--config", broken.string()}).code == 2);
    CHECK(cli({"table", "--config", scratch("absent.json").string()}).code == 2);
}

TEST_CASE("a short prove run writes a failing certificate")
{
    const fs::path out = scratch("cert.json");
    const Run r = cli({"prove", "--steps", "50", "--samples", "2", "--jobs", "1", "--quiet", "--out", out.string()});
    CHECK(r.code == 1);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["verdict"]["pass"] == false);
    CHECK_FALSE(j["verdict"]["reasons"].empty());
    CHECK(j.contains("config_hash"));
    CHECK(j["config"]["steps"] == 50);
}

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iddm/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = iddm::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) { return std::string(IDDM_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("critical subcommand") {
    auto r = run({"critical", "--omega", "400", "--omega0", "1", "--kappa", "-0.5", "--lambda", "5"});
    CHECK(r.code == 0);
    CHECK(r.out == "delta_c = 0.5\n");

    r = run({"critical", "--omega", "400", "--omega0", "1", "--kappa", "0", "--delta", "0.3"});
    CHECK(r.code == 0);
    CHECK(r.out == "lambda_c = 10\n");

    r = run({"critical", "--omega", "400", "--kappa", "-0.5", "--lambda", "20"});
    CHECK(r.code == 0);
    CHECK(r.out == "no-transition\n");

    r = run({"critical", "--omega", "400"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--lambda") != std::string::npos);

    r = run({"critical", "--lambda", "5", "--delta", "0.2"});
    CHECK(r.code == 1);

    r = run({"critical", "--kappa", "0", "--lambda", "5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--kappa") != std::string::npos);
}

TEST_CASE("invalid flags name the offending flag") {
    auto r = run({"meanfield", "--delta", "1.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--delta") != std::string::npos);

    r = run({"meanfield", "--omega", "abc"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--omega") != std::string::npos);

    r = run({"meanfield", "--kappa", "-2", "--delta", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("unbounded_phase") != std::string::npos);

    r = run({"nonsense"});
    CHECK(r.code == 1);
    r = run({});
    CHECK(r.code == 1);
}

TEST_CASE("help exits cleanly") {
    const auto r = run({"sweep", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--delta-count") != std::string::npos);
}

TEST_CASE("meanfield subcommand") {
    auto r = run({"meanfield", "--delta", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("phase = superradiant\n") != std::string::npos);
    CHECK(r.out.find("e0 = -0.0625\n") != std::string::npos);

    r = run({"meanfield", "--delta", "0.75", "--method", "numeric"});
    CHECK(r.code == 0);
    CHECK(r.out.find("jz_over_n = -0.25") != std::string::npos);
}

TEST_CASE("measure subcommand") {
    auto r = run({"measure", "--z", "0.8", "--theta", "0.5235987755982988", "--sign", "plus"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("delta = 0.4\n", 0) == 0);
    CHECK(r.out.find("rho_00 = ") != std::string::npos);

    r = run({"measure", "--z", "1", "--target", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("delta = 0.5\n", 0) == 0);

    r = run({"measure", "--z", "0.4", "--target", "0.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--target") != std::string::npos);

    r = run({"measure", "--z", "1.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--z") != std::string::npos);

    const auto a = run({"measure", "--z", "0.6", "--theta", "0.2", "--sign", "random", "--seed", "9"});
    const auto b = run({"measure", "--z", "0.6", "--theta", "0.2", "--sign", "random", "--seed", "9"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("deriv subcommand") {
    const auto r = run({"deriv", "--wrt", "delta", "--from", "0", "--to", "1", "--step", "1e-3",
                        "--omega", "400", "--kappa", "-0.5", "--lambda", "5"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,value,e0,d1,d2");
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string name, value, e0, d1, d2;
        std::getline(cells, name, ',');
        std::getline(cells, value, ',');
        std::getline(cells, e0, ',');
        std::getline(cells, d1, ',');
        std::getline(cells, d2, ',');
        const double x = std::stod(value);
        if (x < 0.49) CHECK(std::abs(std::stod(d2)) <= 1e-6);
        if (x > 0.51) CHECK(std::stod(d2) == doctest::Approx(-0.5).epsilon(1e-3));
        ++rows;
    }
    CHECK(rows == 999);
}

TEST_CASE("sweep subcommand writes the csv contract") {
    const std::string path = tmp_path("sweep_cli.csv");
    const auto r = run({"sweep", "--delta-count", "5", "--lambda-count", "4", "-o", path});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(path);
    CHECK(csv.rfind("delta,lambda,alpha2,beta2,e0,jz_over_n,i_over_n,phase,error\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);

    const auto curve = run({"sweep", "--critical-curve", "--delta-count", "3"});
    CHECK(curve.out == "delta,lambda_c\n-1,10\n0,7.0710678118654755\n1,no-transition\n");
}

TEST_CASE("spectrum subcommand") {
    const auto r = run({"spectrum", "--delta", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("stable = true") != std::string::npos);
}

TEST_CASE("ed subcommand") {
    const auto r = run({"ed", "--n", "16", "--delta", "0", "--omega", "400", "--kappa", "-0.5",
                        "--lambda", "5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["n_atoms"] == 16);
    CHECK(j["photons_over_n"].get<double>() <= 1e-3);
    CHECK(j["converged"] == true);

    const auto multi = run({"ed", "--n", "4,6", "--omega", "4", "--lambda", "1"});
    CHECK(multi.code == 0);
    CHECK(std::count(multi.out.begin(), multi.out.end(), '\n') == 2);

    const auto fail = run({"ed", "--n", "6", "--omega", "4", "--lambda", "2", "--delta", "1",
                           "--tolerance", "1e-30"});
    CHECK(fail.code == 2);

    const auto big = run({"ed", "--n", "100", "--cutoff", "5000", "--max-dim", "1000"});
    CHECK(big.code == 1);
    CHECK(big.err.find("--max-dim") != std::string::npos);
}

TEST_CASE("config file equals expanded flags") {
    const std::string cfg = tmp_path("deriv_config.json");
    {
        std::ofstream f(cfg);
        f << R"({"wrt": "lambda", "from": 6, "to": 8, "step": 0.01, "kappa": -0.25, "omega_q_prime": 0})";
    }
    const auto with_config = run({"deriv", "--config", cfg, "--kappa", "-0.5"});
    const auto expanded = run({"deriv", "--wrt", "lambda", "--from", "6", "--to", "8", "--step",
                               "0.01", "--kappa", "-0.5", "--omega-q-prime", "0"});
    REQUIRE(with_config.code == 0);
    CHECK(with_config.out == expanded.out);

    const std::string ed_cfg = tmp_path("ed_config.json");
    {
        std::ofstream f(ed_cfg);
        f << R"({"n": [4, 6], "omega": 4, "lambda": 1, "include_chi": true})";
    }
    const auto ed_a = run({"ed", "--config", ed_cfg});
    const auto ed_b = run({"ed", "--n", "4", "6", "--omega", "4", "--lambda", "1", "--include-chi"});
    REQUIRE(ed_a.code == 0);
    CHECK(ed_a.out == ed_b.out);

    const std::string bad = tmp_path("bad_config.json");
    {
        std::ofstream f(bad);
        f << R"({"omgea": 4})";
    }
    const auto r = run({"meanfield", "--config", bad});
    CHECK(r.code == 1);
    CHECK(r.err.find("omgea") != std::string::npos);
}

TEST_CASE("subcommands are byte reproducible") {
    const std::vector<std::vector<std::string>> commands{
        {"sweep", "--delta-count", "11", "--lambda-count", "13"},
        {"sweep", "--format", "json-lines", "--delta-count", "3", "--lambda-count", "3"},
        {"deriv", "--step", "0.01"},
        {"ed", "--n", "6", "8", "--omega", "4", "--lambda", "2", "--delta", "1"},
        {"spectrum", "--delta", "0.8"},
        {"meanfield", "--delta", "0.9", "--method", "numeric"},
    };
    for (const auto& c : commands) {
        const auto a = run(c);
        const auto b = run(c);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

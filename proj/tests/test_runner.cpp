#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "dime/runner.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dime_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

int run_cmd(dime::Command cmd, const std::string& config, const std::string& out,
            dime::OutputFormat fmt = dime::OutputFormat::Csv, std::uint64_t seed = 1729) {
  dime::RunConfig rc;
  rc.command = cmd;
  rc.config_path = config;
  rc.out_path = out;
  rc.format = fmt;
  rc.seed = seed;
  std::ostringstream summary, diag;
  return dime::run(rc, summary, diag);
}

}  // namespace

TEST_CASE("minimal equilibrium config gets defaults and produces three regimes") {
  TempDir dir;
  const std::string cfg = dir.file("eq.json", "{}");
  const std::string out = (dir.path / "eq.csv").string();
  REQUIRE(run_cmd(dime::Command::Equilibrium, cfg, out) == dime::kExitOk);
  const std::string table = dir.read("eq.csv");
  CHECK(table.rfind("regime,price,", 0) == 0);
  CHECK(table.find("naive") != std::string::npos);
  CHECK(table.find("ree") != std::string::npos);
  CHECK(table.find("fully_revealing") != std::string::npos);
}

TEST_CASE("invalid market field is reported by name with exit code 2") {
  TempDir dir;
  const std::string cfg = dir.file("bad.json", R"({"market": {"signal_variance": -1}})");
  const std::string out = (dir.path / "o.csv").string();
  dime::RunConfig rc{dime::Command::Equilibrium, cfg, out, 1, dime::OutputFormat::Csv};
  std::ostringstream summary, diag;
  CHECK(dime::run(rc, summary, diag) == dime::kExitValidation);
  CHECK(diag.str().find("signal_variance") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected") {
  TempDir dir;
  const std::string cfg = dir.file("bad.json", R"({"market": {"signa_variance": 2}})");
  const std::string out = (dir.path / "o.csv").string();
  dime::RunConfig rc{dime::Command::Equilibrium, cfg, out, 1, dime::OutputFormat::Csv};
  std::ostringstream summary, diag;
  CHECK(dime::run(rc, summary, diag) == dime::kExitValidation);
  CHECK(diag.str().find("signa_variance") != std::string::npos);
}

TEST_CASE("missing config file exits with the IO code") {
  TempDir dir;
  const std::string out = (dir.path / "o.csv").string();
  CHECK(run_cmd(dime::Command::Equilibrium, (dir.path / "nope.json").string(), out) ==
        dime::kExitIo);
}

TEST_CASE("parse errors exit with the validation code") {
  TempDir dir;
  const std::string cfg = dir.file("broken.json", "{ not json");
  const std::string out = (dir.path / "o.csv").string();
  CHECK(run_cmd(dime::Command::Equilibrium, cfg, out) == dime::kExitValidation);
}

TEST_CASE("solver starved of iterations exits with the numerical code") {
  TempDir dir;
  const std::string cfg = dir.file("eq.json",
                                   R"({"regimes": ["ree"], "solver": {"tol": 1e-30, "max_iter": 1}})");
  const std::string out = (dir.path / "o.csv").string();
  dime::RunConfig rc{dime::Command::Equilibrium, cfg, out, 1, dime::OutputFormat::Csv};
  std::ostringstream summary, diag;
  CHECK(dime::run(rc, summary, diag) == dime::kExitNumerical);
  CHECK(diag.str().find("residual") != std::string::npos);
}

TEST_CASE("market parameters round-trip through their JSON form") {
  dime::MarketParams p;
  p.n_informed = 3.5;
  p.m_uninformed = 77;
  p.z_noise = 0.25;
  p.risk_aversion = 1.75;
  p.prior = dime::Gaussian(-2.5, 0.125);
  p.signal_variance = 2.25;
  p.noise_variance = 0.5;
  p.epsilon_variance = 1.125;
  p.realized_signal = -1.0;
  p.realized_noise = 0.375;
  const auto j = dime::market_params_to_json(p);
  const dime::MarketParams q = dime::market_params_from_json(j);
  CHECK(q.n_informed == p.n_informed);
  CHECK(q.m_uninformed == p.m_uninformed);
  CHECK(q.z_noise == p.z_noise);
  CHECK(q.risk_aversion == p.risk_aversion);
  CHECK(q.prior.mean() == p.prior.mean());
  CHECK(q.prior.variance() == p.prior.variance());
  CHECK(q.signal_variance == p.signal_variance);
  CHECK(q.noise_variance == p.noise_variance);
  CHECK(q.epsilon_variance == p.epsilon_variance);
  CHECK(q.realized_signal == p.realized_signal);
  CHECK(q.realized_noise == p.realized_noise);

  // full command configs round-trip as documents
  dime::EquilibriumConfig ec;
  ec.market = p;
  const auto ej = dime::equilibrium_config_to_json(ec);
  const dime::EquilibriumConfig ec2 = dime::equilibrium_config_from_json(ej);
  CHECK(dime::equilibrium_config_to_json(ec2) == ej);

  dime::ConvergenceConfig cc;
  cc.market = p;
  cc.grid = {{10, 100}, {20, 400}};
  cc.replications = 123;
  const auto cj = dime::convergence_config_to_json(cc);
  const dime::ConvergenceConfig cc2 = dime::convergence_config_from_json(cj);
  CHECK(dime::convergence_config_to_json(cc2) == cj);
}

TEST_CASE("convergence run: the passive sweep ends at the prior mean") {
  TempDir dir;
  const std::string cfg = dir.file("conv.json", R"({
    "market": {"prior_mean": 10, "prior_variance": 4, "signal_variance": 4,
               "n_informed": 10, "realized_signal": 12, "realized_noise": 0.5},
    "regime": "naive",
    "grid": [[10, 100], [10, 10000], [10, 10000000]],
    "replications": 500
  })");
  const std::string out = (dir.path / "conv.csv").string();
  REQUIRE(run_cmd(dime::Command::Convergence, cfg, out) == dime::kExitOk);
  const std::string table = dir.read("conv.csv");
  CHECK(table.rfind("N,M,price,theta1,theta2,var_p,ie,", 0) == 0);
  // last row: |sample mean - prior mean| far below the configured tolerance
  std::istringstream lines(table);
  std::string line, last;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (!line.empty()) last = line;
  }
  std::istringstream cells(last);
  std::string cell;
  std::getline(cells, cell, ',');  // N
  std::getline(cells, cell, ',');  // M
  std::getline(cells, cell, ',');  // price
  CHECK(std::abs(std::stod(cell) - 10.0) < 1e-4);
}

TEST_CASE("tokenomics run: bootstrap-only script mints exactly the initial supply") {
  TempDir dir;
  const std::string cfg = dir.file("tok.json", R"({"days": 3, "bootstrap": true})");
  const std::string out = (dir.path / "tok.csv").string();
  REQUIRE(run_cmd(dime::Command::Tokenomics, cfg, out) == dime::kExitOk);
  const std::string table = dir.read("tok.csv");
  CHECK(table.rfind("day,supply,pledged_value,spot_price,paused,", 0) == 0);
  CHECK(table.find("0,250000.000000,250000.000000,") != std::string::npos);
  const std::string events = dir.read("tok.csv.events");
  CHECK(events.find("|bootstrap|250000.000000|") != std::string::npos);
  // a single mint event and nothing else supply-changing
  CHECK(events.find("|mint|") == std::string::npos);
}

TEST_CASE("identical runs produce byte-identical artifacts") {
  TempDir dir;
  const std::string conv = dir.file("conv.json", R"({
    "regime": "naive", "grid": [[10, 100], [20, 200]], "replications": 300
  })");
  const std::string tok = dir.file("tok.json", R"({
    "days": 40,
    "pool": {"tokens": 1000, "quote": 1000},
    "events": [
      {"day": 1, "purchase": {"id": "a", "fiat": 100}},
      {"day": 2, "nav_return": {"a": 0.01, "c": -0.005}},
      {"day": 3, "swap": {"direction": "quote_in", "amount": 25}}
    ]
  })");
  for (auto fmt : {dime::OutputFormat::Csv, dime::OutputFormat::JsonLines}) {
    REQUIRE(run_cmd(dime::Command::Convergence, conv, (dir.path / "c1.out").string(), fmt) == 0);
    REQUIRE(run_cmd(dime::Command::Convergence, conv, (dir.path / "c2.out").string(), fmt) == 0);
    CHECK(dir.read("c1.out") == dir.read("c2.out"));
    REQUIRE(run_cmd(dime::Command::Tokenomics, tok, (dir.path / "t1.out").string(), fmt) == 0);
    REQUIRE(run_cmd(dime::Command::Tokenomics, tok, (dir.path / "t2.out").string(), fmt) == 0);
    CHECK(dir.read("t1.out") == dir.read("t2.out"));
    CHECK(dir.read("t1.out.events") == dir.read("t2.out.events"));
    CHECK(!dir.read("t1.out.events").empty());
  }
}

TEST_CASE("runs never mutate their input files") {
  TempDir dir;
  const std::string content = R"({"regime": "naive", "grid": [[10, 100]], "replications": 20})";
  const std::string cfg = dir.file("conv.json", content);
  REQUIRE(run_cmd(dime::Command::Convergence, cfg, (dir.path / "o.csv").string()) == 0);
  CHECK(dir.read("conv.json") == content);
}

TEST_CASE("unwritable output path exits with the IO code") {
  TempDir dir;
  const std::string cfg = dir.file("eq.json", "{}");
  const std::string out = (dir.path / "no_such_dir" / "o.csv").string();
  CHECK(run_cmd(dime::Command::Equilibrium, cfg, out) == dime::kExitIo);
}

TEST_CASE("jsonl output is line-delimited JSON with the command's columns") {
  TempDir dir;
  const std::string cfg = dir.file("eq.json", "{}");
  const std::string out = (dir.path / "eq.jsonl").string();
  REQUIRE(run_cmd(dime::Command::Equilibrium, cfg, out, dime::OutputFormat::JsonLines) == 0);
  std::istringstream lines(dir.read("eq.jsonl"));
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("regime"));
    CHECK(j.contains("price"));
    CHECK(j.contains("var_p_valid"));
    CHECK(j.at("price").is_number());
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("different seeds change Monte Carlo output") {
  TempDir dir;
  const std::string conv = dir.file("conv.json", R"({"grid": [[10, 100]], "replications": 50})");
  REQUIRE(run_cmd(dime::Command::Convergence, conv, (dir.path / "s1.csv").string(),
                  dime::OutputFormat::Csv, 1) == 0);
  REQUIRE(run_cmd(dime::Command::Convergence, conv, (dir.path / "s2.csv").string(),
                  dime::OutputFormat::Csv, 2) == 0);
  CHECK(dir.read("s1.csv") != dir.read("s2.csv"));
}

TEST_CASE("the output directory override applies to relative paths only") {
  TempDir dir;
  const std::string cfg = dir.file("eq.json", "{}");
  setenv("DIME_OUT_DIR", dir.path.c_str(), 1);
  REQUIRE(run_cmd(dime::Command::Equilibrium, cfg, "env_out.csv") == dime::kExitOk);
  unsetenv("DIME_OUT_DIR");
  CHECK(!dir.read("env_out.csv").empty());
}

TEST_CASE("scenario validation errors carry their field path") {
  TempDir dir;
  const std::string cfg = dir.file("tok.json", R"({
    "days": 5,
    "events": [{"day": 2, "allocate": {"cefi_fraction": 0.3}}]
  })");
  dime::RunConfig rc{dime::Command::Tokenomics, cfg, (dir.path / "o.csv").string(), 1,
                     dime::OutputFormat::Csv};
  std::ostringstream summary, diag;
  CHECK(dime::run(rc, summary, diag) == dime::kExitValidation);
  CHECK(diag.str().find("events[0].allocate.cefi_fraction") != std::string::npos);
}

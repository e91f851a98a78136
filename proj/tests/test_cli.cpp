#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tppg/io.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return TPPG_CLI_PATH; }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tppg_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >" +
                          log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  f << body;
}

const char* kConfig = R"({
  "model": {
    "p": 5,
    "mu": 0.5,
    "structure": "chain",
    "kernel": {"kind": "restricted_linear"},
    "link": {"kind": "arctan"}
  },
  "simulate": {"T": 30.0, "burn_in": 5.0},
  "cv": {"K": 3, "n_lambdas": 5},
  "fit": {"lambda": 0.05},
  "roc": {"n_lambdas": 8},
  "bootstrap": {"n_replicates": 3, "target_sparsity": 0.3}
})";

}  // namespace

TEST_CASE("cli pipeline") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "config.json";
  const fs::path log = tmp.path / "log.txt";
  write_file(cfg, kConfig);

  const fs::path events = tmp.path / "events.csv";

  SUBCASE("simulate is deterministic in the seed") {
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 7 --out " +
                        events.string(),
                    log) == 0);
    REQUIRE(fs::exists(events));
    CHECK(fs::exists(tmp.path / "events.csv.manifest.json"));

    const std::string body = slurp(events);
    CHECK(body.rfind("node_id,time\n", 0) == 0);
    // times carry nine decimals
    const auto nl = body.find('\n');
    const auto line = body.substr(nl + 1, body.find('\n', nl + 1) - nl - 1);
    const auto dot = line.find('.');
    REQUIRE(dot != std::string::npos);
    CHECK(line.size() - dot - 1 == 9);

    const fs::path again = tmp.path / "events2.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 7 --out " +
                        again.string(),
                    log) == 0);
    CHECK(slurp(again) == body);

    const fs::path other = tmp.path / "events3.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 8 --out " +
                        other.string(),
                    log) == 0);
    CHECK(slurp(other) != body);

    // round-trips through the reader
    const tppg::EventData data = tppg::read_events(events, 5, 30.0);
    CHECK(data.total_events() > 0);
  }

  SUBCASE("fit, evaluate, cv, roc and bootstrap consume simulated events") {
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 7 --out " +
                        events.string(),
                    log) == 0);

    const fs::path fit_out = tmp.path / "fit";
    REQUIRE(run_cli("fit --config " + cfg.string() + " --events " +
                        events.string() + " --out " + fit_out.string(),
                    log) == 0);
    std::size_t r = 0, c = 0;
    const auto B = tppg::read_matrix(tmp.path / "fit.B.csv", r, c);
    CHECK(r == 5);
    CHECK(c == 5);
    const auto mu = tppg::read_matrix(tmp.path / "fit.mu.csv", r, c);
    CHECK(r == 1);
    CHECK(c == 5);
    CHECK(fs::exists(tmp.path / "fit.json"));
    CHECK(fs::exists(tmp.path / "fit.manifest.json"));

    // evaluating a fit against itself reports zero error
    bool truth_all_zero = true;
    for (double b : B) truth_all_zero = truth_all_zero && b == 0.0;
    if (!truth_all_zero) {
      const fs::path eval_out = tmp.path / "eval.csv";
      REQUIRE(run_cli("evaluate --fit " + (tmp.path / "fit.B.csv").string() +
                          " --truth " + (tmp.path / "fit.B.csv").string() +
                          " --out " + eval_out.string(),
                      log) == 0);
      const std::string eval = slurp(eval_out);
      CHECK(eval.rfind("rel_l1,rel_fro,tpr,fpr\n", 0) == 0);
      CHECK(eval.find("\n0,0,1,0") != std::string::npos);
    }

    const fs::path cv_out = tmp.path / "cv.csv";
    REQUIRE(run_cli("cv --config " + cfg.string() + " --events " +
                        events.string() + " --seed 1 --out " + cv_out.string(),
                    log) == 0);
    const std::string cv = slurp(cv_out);
    CHECK(cv.rfind("lambda,mean,se\n", 0) == 0);
    CHECK(cv.find("# best_lambda,") != std::string::npos);

    // a cv-selected fit runs end to end
    const fs::path fitcv_out = tmp.path / "fitcv";
    REQUIRE(run_cli("fit --cv --config " + cfg.string() + " --events " +
                        events.string() + " --seed 1 --out " +
                        fitcv_out.string(),
                    log) == 0);
    CHECK(fs::exists(tmp.path / "fitcv.B.csv"));

    // write the chain truth for roc
    const fs::path truth = tmp.path / "truth.csv";
    {
      std::vector<double> Bt(25, 0.0);
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t k = 0; k < 5; ++k) {
          const std::size_t lag = i > k ? i - k : k - i;
          if (lag == 1) Bt[i * 5 + k] = 0.3;
          if (lag == 2) Bt[i * 5 + k] = -0.3;
        }
      tppg::write_matrix(truth, Bt, 5, 5);
    }
    const fs::path roc_out = tmp.path / "roc.csv";
    REQUIRE(run_cli("roc --config " + cfg.string() + " --events " +
                        events.string() + " --truth " + truth.string() +
                        " --out " + roc_out.string(),
                    log) == 0);
    const std::string roc = slurp(roc_out);
    CHECK(roc.rfind("fpr,tpr,lambda\n", 0) == 0);
    const auto auc_pos = roc.find("# auc,");
    REQUIRE(auc_pos != std::string::npos);
    const double auc = std::stod(roc.substr(auc_pos + 6));
    CHECK(auc >= 0.0);
    CHECK(auc <= 1.0);

    const fs::path boot_out = tmp.path / "boot";
    REQUIRE(run_cli("bootstrap --config " + cfg.string() + " --events " +
                        events.string() + " --seed 2 --out " +
                        boot_out.string(),
                    log) == 0);
    CHECK(fs::exists(tmp.path / "boot.frequencies.csv"));
    const std::string graph = slurp(tmp.path / "boot.graph.csv");
    CHECK(graph.rfind("target,source,sign\n", 0) == 0);
    CHECK(fs::exists(tmp.path / "boot.manifest.json"));
  }

  SUBCASE("manifest names its outputs") {
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 4 --out " +
                        events.string(),
                    log) == 0);
    const std::string m = slurp(tmp.path / "events.csv.manifest.json");
    CHECK(m.find("\"command\"") != std::string::npos);
    CHECK(m.find("simulate") != std::string::npos);
    CHECK(m.find("events.csv") != std::string::npos);
    CHECK(m.find("\"seed\"") != std::string::npos);
  }

  SUBCASE("errors surface with a nonzero exit") {
    CHECK(run_cli("simulate --config " + (tmp.path / "missing.json").string() +
                      " --out " + events.string(),
                  log) != 0);
    CHECK(slurp(log).find("error:") != std::string::npos);

    write_file(tmp.path / "bad.json", "{ not json");
    CHECK(run_cli("simulate --config " + (tmp.path / "bad.json").string() +
                      " --out " + events.string(),
                  log) != 0);
    CHECK(slurp(log).find("error:") != std::string::npos);

    write_file(tmp.path / "nofield.json", R"({"model": {"p": 0}})");
    CHECK(run_cli("simulate --config " + (tmp.path / "nofield.json").string() +
                      " --out " + events.string(),
                  log) != 0);
    CHECK(slurp(log).find("model.p") != std::string::npos);

    // unknown subcommand
    CHECK(run_cli("frobnicate --out x", log) != 0);
  }
}

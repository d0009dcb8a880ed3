#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "signquest_test_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(SIGNQUEST_CLI) + " " + args + " > " + (kWork / "stdout.txt").string() +
                          " 2> " + (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

struct Fresh {
  Fresh() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fresh, "usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("attack --no-such-flag") == 2);
  CHECK(run("attack") == 2);
  CHECK(run("signsearch --n 0") == 2);
  CHECK(run("signsearch --strategy nope --out " + (kWork / "o").string()) == 2);
  CHECK(run("hamming-bench --n-min 5 --n-max 3") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE_FIXTURE(Fresh, "bad configs exit with 3") {
  CHECK(run("attack --config " + (kWork / "missing.json").string()) == 3);
  const auto bad = write_file("bad.json", R"({"budget": -5, "unknown": 1})");
  CHECK(run("attack --config " + bad.string()) == 3);
  CHECK(slurp(kWork / "stderr.txt").find("config error") != std::string::npos);
}

TEST_CASE_FIXTURE(Fresh, "attack writes per-input csv and a summary") {
  const auto cfg = write_file("c.json", R"({
    "name": "cli", "budget": 300, "num_inputs": 6,
    "model": {"hidden": 8, "epochs": 20},
    "dataset": {"train_samples": 200, "test_samples": 30, "dim": 8},
    "attacks": ["signhunter"]
  })");
  const fs::path out = kWork / "results";
  REQUIRE(run("attack --config " + cfg.string() + " --out " + out.string() + " --seed 5 --traces") == 0);
  const std::string csv = slurp(out / "cli" / "signhunter_linf.csv");
  CHECK(csv.rfind("attack,image_id,success,queries,queries_excl_base,final_loss\n", 0) == 0);
  CHECK(fs::exists(out / "cli" / "summary.json"));
  CHECK(fs::exists(out / "cli" / "signhunter_linf_traces.csv"));
  CHECK(slurp(kWork / "stdout.txt").find("signhunter linf: failure_rate=") != std::string::npos);
}

TEST_CASE_FIXTURE(Fresh, "hamming-bench and signsearch") {
  const fs::path out = kWork / "hb";
  // The bound holds for the mean, so enough trials keep the sample mean above it.
  REQUIRE(run("hamming-bench --n-min 1 --n-max 6 --trials 200 --out " + out.string()) == 0);
  std::ifstream in(out / "query_ratios.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "strategy,n,mean_ratio,min_ratio,max_ratio,lower_bound,trials,failures");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 12);
  CHECK(slurp(kWork / "stdout.txt").find("lower-bound violations: 0") != std::string::npos);

  for (const char* strategy : {"signhunter", "goo", "elim", "linear"}) {
    CAPTURE(strategy);
    CHECK(run(std::string("signsearch --objective linear --n 8 --budget 256 --strategy ") + strategy + " --out " +
              out.string()) == 0);
    CHECK(slurp(kWork / "stdout.txt").find("hamming_to_truth=0") != std::string::npos);
  }
}

TEST_CASE_FIXTURE(Fresh, "gradcheck passes on every model") {
  CHECK(run("gradcheck --points 5 --samples 120 --epochs 5") == 0);
  const std::string text = slurp(kWork / "stdout.txt");
  CHECK(text.find("5/5 passed") != std::string::npos);
  CHECK(text.find("passed, max") != std::string::npos);
}

TEST_CASE_FIXTURE(Fresh, "contopt and noisy-fgsm write their csv files") {
  const fs::path out = kWork / "misc";
  CHECK(run("contopt --n 10 --trials 2 --budget 40 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "contopt_n10.csv"));
  CHECK(run("noisy-fgsm --seeds 2 --samples 120 --epochs 5 --out " + out.string()) == 0);
  CHECK(slurp(out / "noisy_fgsm.csv").rfind("mode,k,seed,misclassification_rate\n", 0) == 0);
  CHECK(run("maghist --images 3 --samples 120 --epochs 5 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "maghist.json"));
}

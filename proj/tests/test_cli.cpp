#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const fs::path kScratch = fs::temp_directory_path() / "aprox_cli_test";

int run(const std::string& args, std::string* out = nullptr) {
  fs::create_directories(kScratch);
  const fs::path log = kScratch / "stdout.txt";
  const std::string cmd = std::string(APROX_CLI_PATH) + " " + args + " > " + log.string() + " 2> " +
                          (kScratch / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kScratch);
  const fs::path p = kScratch / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("a single run prints a gap trace") {
  std::string out;
  CHECK(run("run --preset desk-linreg --method pma --m 4 --alpha0 1 --stride 50", &out) == 0);
  CHECK(out.rfind("k,samples,gap\n", 0) == 0);
  CHECK(out.find("\n50,200,") != std::string::npos);
}

TEST_CASE("sweep writes a csv") {
  const std::string cfg = write_file("tiny.json", R"({"preset": "desk-linreg", "problem": {"N": 40, "n": 4},
      "methods": ["sgm", "pma"], "alpha0": [1.0], "m": [1, 4], "seeds": 2, "budget": 400})");
  const fs::path out = kScratch / "sweep_out";
  CHECK(run("sweep --config " + cfg + " --out " + out.string() + " --jobs 2") == 0);
  std::ifstream in(out / "sweep.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("problem,noise,cond,method", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 2 * 2 * 2);

  CHECK(run("profile --csv " + (out / "sweep.csv").string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "profile.csv"));
  CHECK(fs::exists(out / "profile.svg"));
  CHECK(run("speedup --csv " + (out / "sweep.csv").string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "speedup.csv"));
}

TEST_CASE("configuration errors exit with status 1") {
  const std::string bad = write_file("bad.json", R"({"preset": "desk-linreg", "methods": []})");
  CHECK(run("sweep --config " + bad) == 1);
  CHECK(run("sweep --config " + write_file("garbled.json", "{oops")) == 1);
  CHECK(run("run --preset no-such-preset") == 1);
  CHECK(run("run --method adam") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("run --m notanumber") == 1);
}

TEST_CASE("runtime failures exit with status 2") {
  CHECK(run("profile --csv " + (kScratch / "missing.csv").string()) == 2);
  const std::string garbage = write_file("garbage.csv", "not,a,sweep\n");
  CHECK(run("profile --csv " + garbage) == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help") == 0);
  CHECK(run("lbtest --help") == 0);
}

TEST_CASE("lower-bound lab command") {
  std::string out;
  CHECK(run("lbtest --kind orthcol --n 8 --m 2 --trials 50 --rounds 3", &out) == 0);
  CHECK_FALSE(out.empty());
  fs::remove_all(kScratch);
}

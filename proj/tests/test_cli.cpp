#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

// CLI end-to-end checks through the installed binary.
#ifndef PHASEFRONT_CLI_PATH
#error "PHASEFRONT_CLI_PATH must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("phasefront_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PHASEFRONT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kHeatDelta = R"({
  "Q": {"d": 1, "Q_re": [[0,0],[0,1]], "Q_im": [[0,0],[0,0]]},
  "t": [0.0, 0.1],
  "initial": {"kind": "delta", "center": [0]},
  "engine": "auto",
  "grid": {"n": 4096, "L": 16},
  "estimator": {"s": 1.0, "a_min": 0.5, "n_dirs": 360,
                "radii": {"r_min": 2, "r_max": 8, "count": 16}},
  "angular_tol_deg": 5,
  "seed": 7
})";

const char* kHeatConstant = R"({
  "Q": {"d": 1, "Q_re": [[0,0],[0,1]], "Q_im": [[0,0],[0,0]]},
  "t": [0.25, 1.0],
  "initial": {"kind": "plane_wave", "freq": [0]},
  "seed": 7
})";

}  // namespace

TEST_CASE("cli predict: heat scenarios") {
  TempDir tmp;
  SUBCASE("delta cone is absorbed for t > 0 and echoed at t = 0") {
    write_file(tmp.path / "s.json", kHeatDelta);
    const int rc = run_cli("predict --scenario " + (tmp.path / "s.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 0);
    const auto rep = read_json(tmp.path / "predict.json");
    REQUIRE(rep.at("per_t").size() == 2);
    CHECK(rep.at("per_t").at(0).at("t").get<double>() == 0.0);
    CHECK(rep.at("per_t").at(0).at("sharp").at("bases").size() == 1);  // echo
    CHECK(rep.at("per_t").at(1).at("sharp").at("bases").empty());      // absorbed
  }
  SUBCASE("constant's cone is kept at every t") {
    write_file(tmp.path / "s.json", kHeatConstant);
    const int rc = run_cli("predict --scenario " + (tmp.path / "s.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 0);
    const auto rep = read_json(tmp.path / "predict.json");
    for (const auto& entry : rep.at("per_t")) {
      REQUIRE(entry.at("sharp").at("bases").size() == 1);
      const auto v = entry.at("sharp").at("bases").at(0).at(0);
      CHECK(std::abs(std::abs(v.at(0).get<double>()) - 1.0) < 1e-10);
      CHECK(std::abs(v.at(1).get<double>()) < 1e-10);
    }
  }
  SUBCASE("invalid Hamiltonians exit with code 2") {
    write_file(tmp.path / "bad.json",
               R"({"Q": {"d": 1, "Q_re": [[-1,0],[0,0]], "Q_im": [[0,0],[0,0]]},
                   "t": [0.1], "initial": {"kind": "delta", "center": [0]}})");
    const int rc = run_cli("predict --scenario " + (tmp.path / "bad.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 2);
  }
}

TEST_CASE("cli verify: free particle delta scenario holds") {
  TempDir tmp;
  write_file(tmp.path / "s.json", R"({
    "Q": {"d": 1, "Q_re": [[0,0],[0,0]], "Q_im": [[0,0],[0,1]]},
    "t": [0.5],
    "initial": {"kind": "delta", "center": [0]},
    "grid": {"n": 4096, "L": 16},
    "estimator": {"s": 1.0, "a_min": 0.02, "n_dirs": 360,
                  "radii": {"r_min": 2, "r_max": 8, "count": 16}},
    "angular_tol_deg": 5, "seed": 3
  })");
  const int rc = run_cli("verify --scenario " + (tmp.path / "s.json").string() +
                         " --out " + tmp.path.string());
  CHECK(rc == 0);
  const auto rep = read_json(tmp.path / "verify.json");
  CHECK(rep.at("holds").get<bool>());
  const auto verdict = rep.at("verdicts").at(0);
  CHECK(verdict.at("n_singular").get<int>() > 0);
  CHECK(verdict.at("max_margin_deg").get<double>() <= 5.0);
  CHECK(fs::exists(tmp.path / verdict.at("profiles_csv").get<std::string>()));

  SUBCASE("reports are byte-deterministic") {
    fs::create_directories(tmp.path / "again");
    REQUIRE(run_cli("verify --scenario " + (tmp.path / "s.json").string() + " --out " +
                    (tmp.path / "again").string()) == 0);
    CHECK(read_all(tmp.path / "verify.json") ==
          read_all(tmp.path / "again" / "verify.json"));
    CHECK(read_all(tmp.path / "profiles_t0.csv") ==
          read_all(tmp.path / "again" / "profiles_t0.csv"));
  }

  SUBCASE("split-step engine and sampled STFT find the same sheared line") {
    fs::create_directories(tmp.path / "ss");
    REQUIRE(run_cli("verify --scenario " + (tmp.path / "s.json").string() +
                    " --engine splitstep --out " + (tmp.path / "ss").string()) == 0);
    const auto ss = read_json(tmp.path / "ss" / "verify.json");
    CHECK(ss.at("holds").get<bool>());
    const auto verdict = ss.at("verdicts").at(0);
    CHECK(verdict.at("engine").get<std::string>() == "splitstep");
    CHECK(verdict.at("n_singular").get<int>() > 0);
    CHECK(verdict.at("max_margin_deg").get<double>() <= 5.0);
  }
}

TEST_CASE("cli verify: heat absorbs the delta cone") {
  TempDir tmp;
  write_file(tmp.path / "s.json", kHeatDelta);
  // drop t = 0; keep the absorbing t = 0.1 case
  auto sc = read_json(tmp.path / "s.json");
  sc["t"] = {0.1};
  write_file(tmp.path / "s.json", sc.dump());
  const int rc = run_cli("verify --scenario " + (tmp.path / "s.json").string() +
                         " --out " + tmp.path.string());
  CHECK(rc == 0);
  const auto rep = read_json(tmp.path / "verify.json");
  const auto verdict = rep.at("verdicts").at(0);
  CHECK(verdict.at("holds").get<bool>());
  CHECK(verdict.at("n_singular").get<int>() == 0);
  CHECK(verdict.at("params").at("a_min").get<double>() == 0.5);
}

TEST_CASE("cli verify: inclusion violation exits 1") {
  TempDir tmp;
  // claim the wrong initial cone for a chirp: the estimate lands far from
  // the predicted rotation
  write_file(tmp.path / "s.json", R"({
    "Q": {"d": 1, "Q_re": [[0,0],[0,0]], "Q_im": [[1,0],[0,1]]},
    "t": [0.7853981633974483],
    "initial": {"kind": "chirp", "B": [[1]]},
    "initial_cone": {"ambient": 2, "kind": "exact", "bases": [[[1.0, 0.0]]]},
    "estimator": {"a_min": 0.02},
    "angular_tol_deg": 5, "seed": 3
  })");
  const int rc = run_cli("verify --scenario " + (tmp.path / "s.json").string() +
                         " --out " + tmp.path.string());
  CHECK(rc == 1);
}

TEST_CASE("cli simulate and estimate") {
  TempDir tmp;
  SUBCASE("simulate writes field dumps for sampled engines") {
    write_file(tmp.path / "s.json", R"({
      "Q": {"d": 1, "Q_re": [[0,0],[0,1]], "Q_im": [[0,0],[0,0]]},
      "t": [0.2],
      "initial": {"kind": "gaussian_chirp", "d": 1,
                  "terms": [{"amplitude_re": 1, "amplitude_im": 0,
                             "M_re": [[0]], "M_im": [[1]],
                             "b_re": [0], "b_im": [0]}]},
      "engine": "splitstep",
      "grid": {"n": 1024, "L": 12}, "seed": 1
    })");
    const int rc = run_cli("simulate --scenario " + (tmp.path / "s.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 0);
    const auto rep = read_json(tmp.path / "simulate.json");
    const auto entry = rep.at("per_t").at(0);
    CHECK(entry.at("engine").get<std::string>() == "splitstep");
    CHECK(fs::exists(tmp.path / "field_t0.csv"));
    // norm decreased under the heat flow
    CHECK(entry.at("l2").get<double>() <
          entry.at("diagnostics").at("l2_initial").get<double>());
  }
  SUBCASE("estimate emits one profile row per direction") {
    write_file(tmp.path / "s.json", R"({
      "initial": {"kind": "chirp", "B": [[1]]},
      "estimator": {"a_min": 0.02, "n_dirs": 180}, "seed": 1
    })");
    const int rc = run_cli("estimate --scenario " + (tmp.path / "s.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 0);
    const auto rep = read_json(tmp.path / "estimate.json");
    CHECK(rep.at("n_singular").get<int>() > 0);
    std::ifstream csv(tmp.path / "profiles.csv");
    int rows = -1;  // header
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 180);
  }
  SUBCASE("flags override scenario estimator settings") {
    write_file(tmp.path / "s.json", R"({
      "initial": {"kind": "chirp", "B": [[1]]},
      "estimator": {"a_min": 0.02, "n_dirs": 180}, "seed": 1
    })");
    const int rc = run_cli("estimate --scenario " + (tmp.path / "s.json").string() +
                           " --out " + tmp.path.string() +
                           " --dirs 120 --radii 2:6:12 --amin 0.05 --s 1.5");
    CHECK(rc == 0);
    const auto rep = read_json(tmp.path / "estimate.json");
    CHECK(rep.at("params").at("n_dirs").get<int>() == 120);
    CHECK(rep.at("params").at("a_min").get<double>() == 0.05);
    CHECK(rep.at("params").at("s").get<double>() == 1.5);
    CHECK(rep.at("params").at("radii").size() == 12);
  }
}

TEST_CASE("cli oscillatory") {
  TempDir tmp;
  SUBCASE("chirp phase gives the graph cone") {
    write_file(tmp.path / "p.json", R"({"d":1,"N":0,"P_re":[[0.5]],"P_im":[[0]]})");
    const int rc = run_cli("oscillatory --phase " + (tmp.path / "p.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 0);
    const auto rep = read_json(tmp.path / "oscillatory.json");
    const auto v = rep.at("cone").at("bases").at(0).at(0);
    CHECK(std::abs(v.at(0).get<double>() - v.at(1).get<double>()) < 1e-9);
  }
  SUBCASE("delta phase gives the frequency axis") {
    write_file(tmp.path / "p.json",
               R"({"d":1,"N":1,"P_re":[[0,0.5],[0.5,0]],"P_im":[[0,0],[0,0]]})");
    const int rc = run_cli("oscillatory --phase " + (tmp.path / "p.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 0);
    const auto rep = read_json(tmp.path / "oscillatory.json");
    const auto v = rep.at("cone").at("bases").at(0).at(0);
    CHECK(std::abs(v.at(0).get<double>()) < 1e-9);
  }
  SUBCASE("condition (2) violation exits 2 with margins reported") {
    write_file(tmp.path / "p.json",
               R"({"d":1,"N":1,"P_re":[[1,0],[0,0]],"P_im":[[0,0],[0,0]]})");
    const int rc = run_cli("oscillatory --phase " + (tmp.path / "p.json").string() +
                           " --out " + tmp.path.string());
    CHECK(rc == 2);
    const auto rep = read_json(tmp.path / "oscillatory.json");
    CHECK_FALSE(rep.at("condition2_theta_rows").get<bool>());
    CHECK(rep.contains("min_sv_theta"));
  }
}

TEST_CASE("cli seminorms flags the delta divergence with a frequency witness") {
  TempDir tmp;
  write_file(tmp.path / "s.json", R"({
    "initial": {"kind": "delta", "center": [0]},
    "seminorms": {"A": [1.0], "s": 1.0, "R": 10.0}, "seed": 1
  })");
  const int rc = run_cli("seminorms --scenario " + (tmp.path / "s.json").string() +
                         " --out " + tmp.path.string());
  CHECK(rc == 0);
  const auto rep = read_json(tmp.path / "seminorms.json");
  const auto entry = rep.at("per_A").at(0).at("stft");
  CHECK(entry.at("divergent").get<bool>());
  const auto w = entry.at("witness_direction");
  CHECK(std::abs(w.at(0).get<double>()) < 0.05);
  CHECK(std::abs(w.at(1).get<double>()) > 0.99);
}

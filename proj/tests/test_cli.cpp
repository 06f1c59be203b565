#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spherebit/io.hpp"
#include "spherebit/partition.hpp"
#include "spherebit/sampling.hpp"

using namespace spherebit;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SPHEREBIT_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "spherebit_cli_tests";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json first_json(const std::string& text) {
  const auto start = text.find('{');
  REQUIRE(start != std::string::npos);
  return nlohmann::json::parse(text.substr(start));
}

}  // namespace

TEST_CASE("io: csv round trip is lossless") {
  const PointSet Z = random_set(2, 16, 99);
  std::stringstream ss;
  write_pointset_csv(Z, ss);
  const PointSet back = read_pointset_csv(ss);
  CHECK(back.dim() == Z.dim());
  CHECK(back.size() == Z.size());
  CHECK(back.flat() == Z.flat());
  CHECK(back.meta().method == PointSetMeta::Method::file);
}

TEST_CASE("io: json round trip keeps the meta block") {
  const PointSet Z = jittered_set(2, 8, 5);
  const nlohmann::json j = pointset_to_json(Z);
  const PointSet back = pointset_from_json(j);
  CHECK(back.flat() == Z.flat());
  CHECK(back.meta().method == PointSetMeta::Method::jittered);
  CHECK(back.meta().seed == 5);
  CHECK(back.meta().partition_cells == 8);
}

TEST_CASE("io: parse errors carry line numbers") {
  {
    std::stringstream ss("2,3\n1,0,0\n0,banana,0\n0,0,1\n");
    try {
      read_pointset_csv(ss);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(e.line_number == 3);
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }
  {
    std::stringstream ss("2,2\n1,0,0\n");
    try {
      read_pointset_csv(ss);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(e.line_number == 3);
    }
  }
  {
    std::stringstream ss("2,1\n0.5,0,0\n");  // far off the sphere
    CHECK_THROWS_AS(read_pointset_csv(ss), IoError);
  }
  {
    std::stringstream ss("2,1\n1,0\n");  // wrong width
    CHECK_THROWS_AS(read_pointset_csv(ss), IoError);
  }
}

TEST_CASE("io: format_double survives the round trip") {
  RandomStream rng(1);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.normal();
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("io: bit vectors export as +-1 rows") {
  const PointSet Z = PointSet::from_points({Point::axis(2, 0), Point::axis(2, 1)});
  std::stringstream ss;
  write_bitvector_csv(sign_embed(Z, Point({0.6, -0.8, 0.0})), ss);
  CHECK(ss.str() == "1,-1\n");
}

TEST_CASE("cli: gen is deterministic and validates") {
  const fs::path dir = temp_dir();
  const fs::path a = dir / "a.csv";
  const fs::path b = dir / "b.csv";
  auto r1 = run_cli("gen --method jittered -d 2 -N 64 --seed 7 -o " + a.string());
  CHECK(r1.exit_code == 0);
  CHECK(r1.out.find("N=64") != std::string::npos);
  auto r2 = run_cli("gen --method jittered -d 2 -N 64 --seed 7 -o " + b.string());
  CHECK(r2.exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).substr(0, 5) == "2,64\n");

  auto bad = run_cli("gen -d 2 -N 0 --seed 1 -o " + (dir / "junk.csv").string());
  CHECK(bad.exit_code == 2);
  CHECK(bad.out.find("N >= 1") != std::string::npos);
}

TEST_CASE("cli: exact wedge and cap reports") {
  const fs::path dir = temp_dir();
  const fs::path basis = dir / "basis.csv";
  {
    std::ofstream out(basis);
    out << "2,3\n1,0,0\n0,1,0\n0,0,1\n";
  }
  auto r = run_cli("disc " + basis.string() + " --family wedge --mode exact");
  CHECK(r.exit_code == 0);
  const auto j = first_json(r.out);
  CHECK(j.at("value").get<double>() ==
        doctest::Approx(2.0 / (M_PI * M_PI) - 1.0 / 6.0).epsilon(1e-12));
  CHECK(j.at("mode") == "exact_stolarsky");

  const fs::path single = dir / "single.csv";
  {
    std::ofstream out(single);
    out << "2,1\n0,0,1\n";
  }
  auto rc = run_cli("disc " + single.string() + " --family cap --mode exact");
  CHECK(rc.exit_code == 0);
  CHECK(first_json(rc.out).at("value").get<double>() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto missing = run_cli("disc " + (dir / "nope.csv").string() + " --mode exact");
  CHECK(missing.exit_code == 3);
}

TEST_CASE("cli: monte-carlo agrees with exact at four stderr") {
  const fs::path dir = temp_dir();
  const fs::path basis = dir / "mc.csv";
  {
    std::ofstream out(basis);
    out << "2,3\n1,0,0\n0,1,0\n0,0,1\n";
  }
  auto r = run_cli("disc " + basis.string() +
                   " --family wedge --mode mc -M 200000 --seed 1");
  CHECK(r.exit_code == 0);
  const auto j = first_json(r.out);
  const double exact = 2.0 / (M_PI * M_PI) - 1.0 / 6.0;
  const double mc = j.at("value").get<double>();
  const double se = j.at("stderr").get<double>();
  CHECK(std::abs(mc - exact) <= 4.0 * se);
  CHECK(j.at("samples").get<long long>() == 200000);
}

TEST_CASE("cli: stolarsky-verify emits the fixed table format") {
  auto r = run_cli("stolarsky-verify -d 2 --N-list 1 2 --seeds 2 -M 100000");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("N,seed,exact,mc,stderr,zscore\n") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
  // every N=1 row reports the closed-form exact value 2/pi^2
  std::istringstream lines(r.out);
  std::string line;
  int n1_rows = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("1,", 0) == 0) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const auto c3 = line.find(',', c2 + 1);
      const double exact = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
      CHECK(exact == doctest::Approx(2.0 / (M_PI * M_PI)).epsilon(1e-12));
      ++n1_rows;
    }
  }
  CHECK(n1_rows == 2);
}

TEST_CASE("cli: thread count does not change numbers") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "threads.csv";
  {
    std::ofstream out(file);
    write_pointset_csv(random_set(2, 8, 12), out);
  }
  auto r1 = run_cli("--threads 1 disc " + file.string() +
                    " --family wedge --mode mc -M 100000 --seed 9");
  auto r2 = run_cli("--threads 2 disc " + file.string() +
                    " --family wedge --mode mc -M 100000 --seed 9");
  CHECK(r1.exit_code == 0);
  CHECK(first_json(r1.out).at("value").get<double>() ==
        first_json(r2.out).at("value").get<double>());
}

TEST_CASE("cli: scaling reports a slope") {
  auto r = run_cli("scaling -d 2 --method random --N-grid 8 16 32 --seeds 20");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("N,seeds,mean_l2,stderr,jitter_bound\n") != std::string::npos);
  CHECK(r.out.find("slope=") != std::string::npos);
  CHECK(r.out.find("target=-1") != std::string::npos);

  auto bad = run_cli("scaling -d 2 --N-grid 8 16 --seeds 5");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: bounds table with and without delta") {
  auto r = run_cli("bounds -d 2");
  CHECK(r.exit_code == 0);
  const auto j = first_json(r.out);
  CHECK(j.at("K_d").get<double>() == doctest::Approx(16.0));
  CHECK_FALSE(j.contains("N_final_form"));

  auto rd = run_cli("bounds -d 2 --delta 0.1");
  CHECK(rd.exit_code == 0);
  const auto jd = first_json(rd.out);
  CHECK(jd.at("N_final_form").get<long long>() == 773297);
  CHECK(jd.at("check").get<bool>());

  auto bad = run_cli("bounds -d 1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: minimize from a critical start accepts no steps") {
  const fs::path dir = temp_dir();
  const fs::path basis = dir / "min_in.csv";
  {
    std::ofstream out(basis);
    out << "2,3\n1,0,0\n0,1,0\n0,0,1\n";
  }
  const fs::path out_set = dir / "min_out.csv";
  const fs::path trace = dir / "trace.csv";
  auto r = run_cli("minimize --in " + basis.string() + " --steps 50 --tol 1e-9 -o " +
                   out_set.string() + " --trace " + trace.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("accepted_steps=0") != std::string::npos);
  CHECK(r.out.find("converged=true") != std::string::npos);
  const std::string tr = slurp(trace);
  CHECK(tr.find("step,energy,grad_norm,step_size\n") == 0);

  auto bad = run_cli("minimize --steps 5");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: minimize descends from a random start") {
  const fs::path dir = temp_dir();
  const fs::path trace = dir / "rand_trace.csv";
  auto r = run_cli("minimize --random -d 2 -N 12 --seed 3 --steps 60 --tol 1e-9 --trace " +
                   trace.string());
  CHECK(r.exit_code == 0);
  // energy column of the trace is monotone nonincreasing
  std::ifstream in(trace);
  std::string line;
  std::getline(in, line);  // header
  double prev = 1e300;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const double e = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("cli: partition-inspect matches the library") {
  auto r = run_cli("partition-inspect -d 2 -N 16");
  CHECK(r.exit_code == 0);
  const auto j = first_json(r.out);
  CHECK(j.at("d").get<int>() == 2);
  CHECK(j.at("N").get<long long>() == 16);
  const Partition p = Partition::build(2, 16);
  CHECK(j.at("max_diameter_bound").get<double>() ==
        doctest::Approx(p.max_cell_diameter_bound()).epsilon(1e-14));
  CHECK(Partition::from_json(j) == p);
}

TEST_CASE("cli: sup bracket on a small set") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "sup_in.csv";
  {
    std::ofstream out(file);
    write_pointset_csv(jittered_set(2, 32, 2), out);
  }
  auto r = run_cli("sup " + file.string() +
                   " --budget 20000 --seed 4 --net-upper --epsilon 0.2");
  CHECK(r.exit_code == 0);
  const auto j = first_json(r.out);
  CHECK(j.at("bracket_ok").get<bool>());
  CHECK(j.at("lower").at("value").get<double>() <=
        j.at("upper").at("value").get<double>());
}

TEST_CASE("cli: unknown usage exits 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("gen -d 2 -o x.csv").exit_code == 2);  // missing -N
}

// spherebit -- CLI for generating spherical point sets, evaluating their
// one-bit tessellation discrepancies, and printing the bound tables.
//
// Exit codes: 0 success, 2 usage/validation error, 3 I/O error,
// 4 numeric failure (quadrature or line-search exhaustion).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spherebit/bounds.hpp"
#include "spherebit/discrepancy.hpp"
#include "spherebit/energy.hpp"
#include "spherebit/io.hpp"
#include "spherebit/parallel.hpp"
#include "spherebit/partition.hpp"
#include "spherebit/quadrature.hpp"
#include "spherebit/sampling.hpp"

namespace {

using namespace spherebit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return RandomStream(base).split(index).stream_id();
}

PointSet load_pointset(const std::filesystem::path& path) {
  if (path.extension() == ".json") return read_pointset_json(path);
  return read_pointset_csv(path);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
}

struct GenArgs {
  std::string method = "random";
  int d = 2;
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

int cmd_gen(const GenArgs& a) {
  PointSet Z = a.method == "jittered" ? jittered_set(a.d, a.N, a.seed)
                                      : random_set(a.d, a.N, a.seed);
  const std::filesystem::path path(a.out);
  if (a.format == "json")
    write_pointset_json(Z, path);
  else
    write_pointset_csv(Z, path);
  std::cout << "wrote " << path.string() << ": N=" << Z.size()
            << " d=" << Z.dim() << " method=" << a.method
            << " seed=" << a.seed << "\n";
  return kExitOk;
}

struct DiscArgs {
  std::string in;
  std::string family = "wedge";
  std::string mode = "exact";
  std::int64_t mc_pairs = 1000000;
  std::int64_t budget = 100000;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
};

int cmd_disc(const DiscArgs& a) {
  const PointSet Z = load_pointset(a.in);
  DiscrepancyReport rep;
  std::optional<std::uint64_t> used_seed;
  if (a.family == "cap") {
    if (a.mode != "exact")
      throw std::invalid_argument("cap family supports --mode exact only");
    rep.family = RegionFamily::cap;
    rep.mode = ReportMode::exact_stolarsky;
    rep.value = l2_cap_exact(Z);
  } else if (a.mode == "exact") {
    rep.family = RegionFamily::wedge;
    rep.mode = ReportMode::exact_stolarsky;
    rep.value = l2_wedge_exact(Z);
  } else if (a.mode == "mc") {
    const RandomStream rng(a.seed);
    const McEstimate mc = l2_wedge_montecarlo(Z, a.mc_pairs, rng, a.threads);
    rep.family = RegionFamily::wedge;
    rep.mode = ReportMode::monte_carlo;
    rep.value = mc.estimate;
    rep.std_error = mc.std_error;
    rep.samples = mc.samples;
    used_seed = a.seed;
  } else if (a.mode == "sup-lower") {
    const RandomStream rng(a.seed);
    rep = sup_wedge_lower(Z, a.budget, rng);
    used_seed = a.seed;
  } else if (a.mode == "net-upper") {
    rep = sup_wedge_net_upper(Z, a.epsilon, a.threads);
  } else {
    throw std::invalid_argument("unknown --mode: " + a.mode);
  }
  const nlohmann::json j = report_to_json(rep, used_seed, Z.meta());
  std::cout << j.dump(2) << "\n";
  if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
  return kExitOk;
}

struct VerifyArgs {
  int d = 2;
  std::vector<std::int64_t> n_list{1, 2, 8, 32};
  int seeds = 5;
  std::int64_t mc_pairs = 2000000;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
};

int cmd_stolarsky_verify(const VerifyArgs& a) {
  struct Row {
    std::int64_t N;
    int seed;
    double exact, mc, stderr_, z;
  };
  std::vector<Row> rows;
  for (std::int64_t n : a.n_list)
    for (int s = 0; s < a.seeds; ++s) rows.push_back({n, s, 0, 0, 0, 0});

  parallel_chunks(static_cast<std::int64_t>(rows.size()), a.threads,
                  [&](std::int64_t i) {
                    Row& r = rows[static_cast<std::size_t>(i)];
                    const std::uint64_t gen_seed =
                        derive_seed(a.seed, 2 * static_cast<std::uint64_t>(i));
                    const std::uint64_t mc_seed =
                        derive_seed(a.seed, 2 * static_cast<std::uint64_t>(i) + 1);
                    const PointSet Z = random_set(a.d, r.N, gen_seed);
                    r.exact = l2_wedge_exact(Z);
                    const RandomStream rng(mc_seed);
                    const McEstimate mc = l2_wedge_montecarlo(Z, a.mc_pairs, rng, 1);
                    r.mc = mc.estimate;
                    r.stderr_ = mc.std_error;
                    r.z = (mc.estimate - r.exact) / mc.std_error;
                  });

  std::string csv = "N,seed,exact,mc,stderr,zscore\n";
  double worst = 0.0;
  for (const Row& r : rows) {
    csv += std::to_string(r.N) + "," + std::to_string(r.seed) + "," +
           format_double(r.exact) + "," + format_double(r.mc) + "," +
           format_double(r.stderr_) + "," + format_double(r.z) + "\n";
    worst = std::max(worst, std::abs(r.z));
  }
  std::cout << csv;
  if (!a.out.empty()) write_text(a.out, csv);
  const bool pass = worst <= 4.0;
  std::cout << (pass ? "PASS" : "FAIL") << ": worst |z| = " << worst
            << " (gate 4.0)\n";
  return kExitOk;
}

struct ScalingArgs {
  int d = 2;
  std::string method = "jittered";
  std::vector<std::int64_t> n_grid{16, 64, 256, 1024};
  int seeds = 200;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
};

int cmd_scaling(const ScalingArgs& a) {
  if (a.n_grid.size() < 3)
    throw std::invalid_argument("scaling: need at least 3 grid points");
  struct Row {
    std::int64_t N;
    double mean = 0, stderr_ = 0, bound = 0;
  };
  std::vector<Row> rows;
  for (std::int64_t n : a.n_grid) rows.push_back({n});

  const double Kd = partition_Kd(a.d);
  parallel_chunks(static_cast<std::int64_t>(rows.size()), a.threads,
                  [&](std::int64_t i) {
                    Row& r = rows[static_cast<std::size_t>(i)];
                    double sum = 0, sum_sq = 0;
                    for (int s = 0; s < a.seeds; ++s) {
                      const std::uint64_t gs = derive_seed(
                          a.seed, static_cast<std::uint64_t>(i) * 1000003ULL +
                                      static_cast<std::uint64_t>(s));
                      const PointSet Z = a.method == "jittered"
                                             ? jittered_set(a.d, r.N, gs)
                                             : random_set(a.d, r.N, gs);
                      const double v = l2_wedge_exact(Z);
                      sum += v;
                      sum_sq += v * v;
                    }
                    r.mean = sum / a.seeds;
                    const double var =
                        std::max(0.0, sum_sq / a.seeds - r.mean * r.mean);
                    r.stderr_ = std::sqrt(var / a.seeds);
                    r.bound = Kd * std::pow(static_cast<double>(r.N),
                                            -1.0 - 1.0 / a.d);
                  });

  std::string csv = "N,seeds,mean_l2,stderr,jitter_bound\n";
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const Row& r : rows) {
    csv += std::to_string(r.N) + "," + std::to_string(a.seeds) + "," +
           format_double(r.mean) + "," + format_double(r.stderr_) + "," +
           format_double(r.bound) + "\n";
    const double lx = std::log(static_cast<double>(r.N));
    const double ly = std::log(r.mean);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const auto n = static_cast<double>(rows.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double target = a.method == "jittered" ? -(1.0 + 1.0 / a.d) : -1.0;
  std::cout << csv;
  std::cout << "slope=" << format_double(slope) << " target=" << target
            << "\n";
  if (!a.out.empty()) write_text(a.out, csv);
  return kExitOk;
}

struct SupArgs {
  std::string in;
  std::int64_t budget = 100000;
  std::uint64_t seed = 0;
  bool net_upper = false;
  double epsilon = 0.1;
  std::string out;
  int threads = 0;
};

int cmd_sup(const SupArgs& a) {
  const PointSet Z = load_pointset(a.in);
  const RandomStream rng(a.seed);
  const DiscrepancyReport lower = sup_wedge_lower(Z, a.budget, rng);
  nlohmann::json j;
  j["lower"] = report_to_json(lower, a.seed, Z.meta());
  if (a.net_upper) {
    const DiscrepancyReport upper = sup_wedge_net_upper(Z, a.epsilon, a.threads);
    j["upper"] = report_to_json(upper, std::nullopt, Z.meta());
    j["bracket_ok"] = lower.value <= upper.value;
  }
  std::cout << j.dump(2) << "\n";
  if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
  return kExitOk;
}

struct BoundsArgs {
  int d = 2;
  double delta = 0.0;
  bool has_delta = false;
};

int cmd_bounds(const BoundsArgs& a) {
  nlohmann::json j = BoundsTable::make(a.d).to_json();
  if (a.has_delta) {
    const NUpperResult r = rip_n_upper(a.d, a.delta);
    j["delta"] = a.delta;
    j["N_proof_form"] = r.proof_form;
    j["N_final_form"] = r.final_form;
    j["bound_at_proof"] = r.bound_at_proof;
    j["bound_at_final"] = r.bound_at_final;
    j["check"] = r.proof_verified && r.final_verified;
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

struct MinimizeArgs {
  std::string in;
  bool random_init = false;
  int d = 2;
  std::int64_t N = 12;
  std::int64_t steps = 200;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
};

int cmd_minimize(const MinimizeArgs& a) {
  if (a.in.empty() && !a.random_init)
    throw std::invalid_argument("minimize: need --in FILE or --random");
  PointSet Z0 =
      a.random_init ? random_set(a.d, a.N, a.seed) : load_pointset(a.in);
  const MinimizeResult res = minimize(Z0, a.steps, a.tol);
  if (!a.out.empty()) write_pointset_csv(res.Z, std::filesystem::path(a.out));
  if (!a.trace.empty())
    write_trace_csv(res.trace, std::filesystem::path(a.trace));
  std::cout << "initial_energy=" << format_double(res.trace.front().energy)
            << " final_energy=" << format_double(res.trace.back().energy)
            << " accepted_steps=" << res.accepted_steps
            << " converged=" << (res.converged ? "true" : "false")
            << " final_l2_wedge=" << format_double(l2_wedge_exact(res.Z))
            << " frame_potential=" << format_double(frame_potential(res.Z))
            << "\n";
  if (!res.converged && res.accepted_steps == 0) return kExitNumeric;
  return kExitOk;
}

struct InspectArgs {
  int d = 2;
  std::int64_t N = 16;
  std::string out;
};

int cmd_partition_inspect(const InspectArgs& a) {
  const Partition p = Partition::build(a.d, a.N);
  nlohmann::json j = p.to_json();
  j["max_diameter_bound"] = p.max_cell_diameter_bound();
  if (a.d >= 2) {
    j["K_d"] = partition_Kd(a.d);
    j["diameter_threshold"] =
        partition_Kd(a.d) * std::pow(static_cast<double>(a.N), -1.0 / a.d);
  }
  std::cout << j.dump(2) << "\n";
  if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spherebit: low-discrepancy one-bit tessellations of the sphere"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (0 = hardware); never changes results");

  GenArgs gen;
  auto* cgen = app.add_subcommand("gen", "generate a point set file");
  cgen->add_option("--method", gen.method, "random | jittered")
      ->check(CLI::IsMember({"random", "jittered"}));
  cgen->add_option("-d,--dim", gen.d, "sphere dimension d (S^d)")->required();
  cgen->add_option("-N,--points", gen.N, "number of points")->required();
  cgen->add_option("--seed", gen.seed, "seed");
  cgen->add_option("-o,--out", gen.out, "output path")->required();
  cgen->add_option("--format", gen.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  DiscArgs disc;
  auto* cdisc = app.add_subcommand("disc", "discrepancy of a point-set file");
  cdisc->add_option("input", disc.in, "point-set file (csv or json)")
      ->required();
  cdisc->add_option("--family", disc.family, "wedge | cap")
      ->check(CLI::IsMember({"wedge", "cap"}));
  cdisc->add_option("--mode", disc.mode, "exact | mc | sup-lower | net-upper")
      ->check(CLI::IsMember({"exact", "mc", "sup-lower", "net-upper"}));
  cdisc->add_option("-M,--pairs", disc.mc_pairs, "Monte-Carlo pairs");
  cdisc->add_option("--budget", disc.budget, "sup search evaluations");
  cdisc->add_option("--epsilon", disc.epsilon, "net approximation level");
  cdisc->add_option("--seed", disc.seed, "seed");
  cdisc->add_option("-o,--out", disc.out, "also write report JSON here");

  VerifyArgs verify;
  auto* cver = app.add_subcommand(
      "stolarsky-verify", "batch check: exact identity vs Monte-Carlo");
  cver->add_option("-d,--dim", verify.d, "sphere dimension");
  cver->add_option("--N-list", verify.n_list, "point counts");
  cver->add_option("--seeds", verify.seeds, "seeds per N");
  cver->add_option("-M,--pairs", verify.mc_pairs, "Monte-Carlo pairs");
  cver->add_option("--seed", verify.seed, "base seed");
  cver->add_option("-o,--out", verify.out, "CSV output path");

  ScalingArgs scaling;
  auto* cscal = app.add_subcommand(
      "scaling", "mean exact L2 over an N-grid with fitted log-log slope");
  cscal->add_option("-d,--dim", scaling.d, "sphere dimension");
  cscal->add_option("--method", scaling.method, "jittered | random")
      ->check(CLI::IsMember({"jittered", "random"}));
  cscal->add_option("--N-grid", scaling.n_grid, "point counts");
  cscal->add_option("--seeds", scaling.seeds, "seeds per N");
  cscal->add_option("--seed", scaling.seed, "base seed");
  cscal->add_option("-o,--out", scaling.out, "CSV output path");

  SupArgs sup;
  auto* csup = app.add_subcommand(
      "sup", "sup-discrepancy bracket: search lower bound, optional net upper");
  csup->add_option("input", sup.in, "point-set file")->required();
  csup->add_option("--budget", sup.budget, "search evaluations");
  csup->add_option("--seed", sup.seed, "seed");
  csup->add_flag("--net-upper", sup.net_upper,
                 "also compute the net upper bound");
  csup->add_option("--epsilon", sup.epsilon, "net approximation level");
  csup->add_option("-o,--out", sup.out, "also write JSON here");

  BoundsArgs bounds;
  auto* cbounds = app.add_subcommand("bounds", "print the bounds table");
  cbounds->add_option("-d,--dim", bounds.d, "sphere dimension")->required();
  auto* delta_opt =
      cbounds->add_option("--delta", bounds.delta, "RIP target delta");

  MinimizeArgs mini;
  auto* cmin = app.add_subcommand("minimize", "descend the wedge energy");
  cmin->add_option("--in", mini.in, "initial point-set file");
  cmin->add_flag("--random", mini.random_init, "random initial set");
  cmin->add_option("-d,--dim", mini.d, "sphere dimension (random init)");
  cmin->add_option("-N,--points", mini.N, "points (random init)");
  cmin->add_option("--steps", mini.steps, "max descent steps");
  cmin->add_option("--tol", mini.tol, "gradient sup-norm tolerance");
  cmin->add_option("--seed", mini.seed, "seed (random init)");
  cmin->add_option("-o,--out", mini.out, "minimized set path");
  cmin->add_option("--trace", mini.trace, "energy trace CSV path");

  InspectArgs inspect;
  auto* cins =
      app.add_subcommand("partition-inspect", "print a partition as JSON");
  cins->add_option("-d,--dim", inspect.d, "sphere dimension")->required();
  cins->add_option("-N,--cells", inspect.N, "cell count")->required();
  cins->add_option("-o,--out", inspect.out, "also write JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    disc.threads = threads;
    verify.threads = threads;
    scaling.threads = threads;
    sup.threads = threads;
    bounds.has_delta = delta_opt->count() > 0;
    if (cgen->parsed()) return cmd_gen(gen);
    if (cdisc->parsed()) return cmd_disc(disc);
    if (cver->parsed()) return cmd_stolarsky_verify(verify);
    if (cscal->parsed()) return cmd_scaling(scaling);
    if (csup->parsed()) return cmd_sup(sup);
    if (cbounds->parsed()) return cmd_bounds(bounds);
    if (cmin->parsed()) return cmd_minimize(mini);
    if (cins->parsed()) return cmd_partition_inspect(inspect);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const QuadratureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

// Command-line front end for the wic library: partition and diagram
// enumeration, Mobius queries, moments, cumulants, products, CLT reports,
// simulation, and a built-in cross-check suite.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wic/chaos.hpp"
#include "wic/clt.hpp"
#include "wic/cumulants.hpp"
#include "wic/diagrams.hpp"
#include "wic/kernels.hpp"
#include "wic/partitions.hpp"
#include "wic/simulate.hpp"

namespace {

using namespace wic;

struct Out {
  bool machine = false;

  void kv(const std::string& key, const std::string& value) const {
    std::cout << key << (machine ? "=" : ": ") << value << "\n";
  }
  void kv(const std::string& key, double value) const {
    kv(key, format_double(value));
  }
  void kv(const std::string& key, long long value) const {
    kv(key, std::to_string(value));
  }
  void kv(const std::string& key, bool value) const {
    kv(key, std::string(value ? "true" : "false"));
  }
  void line(const std::string& text) const { std::cout << text << "\n"; }
};

SetPartition parse_partition_arg(const std::string& text, int n) {
  if (text == "0hat") return SetPartition::zero(n);
  if (text == "1hat") return SetPartition::one(n);
  SetPartition p = SetPartition::parse(text);
  if (n > 0 && p.ground_size() != n)
    throw std::invalid_argument("partition covers [" +
                                std::to_string(p.ground_size()) +
                                "], expected [" + std::to_string(n) + "]");
  return p;
}

std::string tuple_text(const std::vector<int>& tuple) {
  std::string s;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(tuple[i] + 1);
  }
  return s;
}

void print_decomposition(const Out& out, const ChaosDecomposition& d) {
  out.kv("scalar", d.scalar());
  for (const auto& [order, kern] : d.kernels()) {
    if (out.machine) {
      for (const auto& [tuple, value] : kern.coeffs())
        out.line("order=" + std::to_string(order) + " tuple=" +
                 tuple_text(tuple) + " value=" + format_double(value));
    } else {
      out.line("order " + std::to_string(order) + ":");
      for (const auto& [tuple, value] : kern.coeffs())
        out.line("  (" + tuple_text(tuple) + ") -> " + format_double(value));
    }
  }
}

struct KernelArgs {
  std::vector<std::string> paths;
  int copies = 1;

  std::vector<Kernel> load() const {
    std::vector<Kernel> fs;
    for (int c = 0; c < copies; ++c)
      for (const auto& path : paths) fs.push_back(load_kernel_file(path));
    return fs;
  }
};

int cmd_partitions(const Out& out, int n, int max_block, bool count_only) {
  long long count = 0;
  auto visit = [&](const SetPartition& p) {
    ++count;
    if (!count_only)
      out.line(out.machine ? "partition=" + p.to_string() : p.to_string());
    return true;
  };
  if (max_block > 0)
    for_each_set_partition_max_block(n, max_block, visit);
  else
    for_each_set_partition(n, visit);
  out.kv("count", count);
  return 0;
}

int cmd_mobius(const Out& out, int n, const std::string& sigma_text,
               const std::string& pi_text) {
  const SetPartition sigma = parse_partition_arg(sigma_text, n);
  const SetPartition pi = parse_partition_arg(pi_text, n);
  out.kv("mobius", static_cast<long long>(mobius(sigma, pi)));
  return 0;
}

int cmd_diagrams(const Out& out, const std::string& pi_text,
                 const std::string& sigma_text, bool nonflat,
                 const std::string& class_name, bool count_only) {
  const SetPartition pi = SetPartition::parse(pi_text);
  const int n = pi.ground_size();

  if (!sigma_text.empty()) {
    const SetPartition sigma = parse_partition_arg(sigma_text, n);
    const Diagram diagram{pi, sigma};
    const DiagramFlags flags = classify(diagram);
    out.kv("connected", flags.connected);
    out.kv("nonflat", flags.nonflat);
    out.kv("gaussian", flags.gaussian);
    out.kv("circular", flags.circular);
    if (flags.gaussian) {
      const Multigraph graph = to_multigraph(diagram);
      for (const auto& [a, b] : graph.edges)
        out.line((out.machine ? "edge=" : "edge ") + std::to_string(a + 1) +
                 "," + std::to_string(b + 1));
    }
    if (!out.machine) {
      const std::string picture = render_diagram(diagram);
      std::size_t start = 0;
      while (start < picture.size()) {
        const std::size_t stop = picture.find('\n', start);
        out.line(picture.substr(start, stop - start));
        if (stop == std::string::npos) break;
        start = stop + 1;
      }
    }
    return 0;
  }

  std::vector<SetPartition> found;
  if (nonflat)
    found = solve_nonflat(pi);
  else if (!class_name.empty())
    found = enumerate_class(n, pi, parse_partition_class(class_name));
  else
    throw std::invalid_argument(
        "diagrams: pass --sigma, --nonflat, or --class");
  if (!count_only)
    for (const auto& sigma : found)
      out.line(out.machine ? "sigma=" + sigma.to_string() : sigma.to_string());
  out.kv("count", static_cast<long long>(found.size()));
  return 0;
}

int cmd_moment(const Out& out, MeasureKind kind, const KernelArgs& args,
               int order, bool cumulant) {
  const std::vector<Kernel> fs = args.load();
  if (order > 0 && static_cast<int>(fs.size()) != order)
    throw std::invalid_argument("order " + std::to_string(order) +
                                " does not match " +
                                std::to_string(fs.size()) + " factors");
  if (cumulant)
    out.kv("cumulant", joint_cumulant(kind, fs));
  else
    out.kv("moment", joint_moment(kind, fs));
  return 0;
}

int cmd_product(const Out& out, MeasureKind kind, const KernelArgs& args,
                bool general) {
  const std::vector<Kernel> fs = args.load();
  if (fs.size() < 2)
    throw std::invalid_argument("product: need at least two kernels");
  if (general) {
    const std::vector<SigmaTerm> terms = product_general(kind, fs);
    out.kv("sigma_terms", static_cast<long long>(terms.size()));
    print_decomposition(out, flatten_terms(fs[0].system(), terms));
  } else {
    print_decomposition(out, multiply_iterated(kind, fs));
  }
  return 0;
}

int cmd_clt(const Out& out, const std::string& kernel_path, double threshold,
            bool poisson_double, const std::string& sigma_text) {
  const Kernel f = load_kernel_file(kernel_path);

  if (poisson_double) {
    const PoissonDoubleReport r = poisson_double_check(f);
    out.kv("normalization", r.normalization);
    out.kv("fourth_integral", r.fourth_integral);
    out.kv("star21_norm2", r.star21_norm2);
    out.kv("star11_norm2", r.star11_norm2);
    out.kv("sigma1_integral", r.sigma1_integral);
    out.kv("sigma2_integral", r.sigma2_integral);
    out.kv("sigma3_integral", r.sigma3_integral);
    return 0;
  }

  if (!sigma_text.empty()) {
    const SetPartition sigma =
        parse_partition_arg(sigma_text, 4 * f.degree());
    const RankIdentity id = circular_rank_identity(f, sigma);
    out.kv("rank", static_cast<long long>(id.rank));
    out.kv("integral", id.integral);
    out.kv("norm_r", id.norm_r);
    out.kv("norm_d_minus_r", id.norm_d_minus_r);
    return 0;
  }

  const CltReport r = clt_report(f, threshold);
  out.kv("degree", static_cast<long long>(r.degree));
  out.kv("norm2", r.norm2);
  out.kv("normalization_gap", r.normalization_gap);
  out.kv("chi4_diagrams", r.chi4_diagrams);
  out.kv("chi4_contractions", r.chi4_contractions);
  for (std::size_t i = 0; i < r.contraction_norms.size(); ++i)
    out.kv("contraction_norm_" + std::to_string(i + 1),
           r.contraction_norms[i]);
  out.kv("tv_bound", r.tv);
  out.kv("threshold", r.threshold);
  out.kv("normalized_ok", r.normalized_ok);
  out.kv("chi4_small", r.chi4_small);
  out.kv("contractions_small", r.contractions_small);
  return 0;
}

int cmd_simulate(const Out& out, MeasureKind kind, const KernelArgs& args,
                 std::uint64_t n_samples, std::uint64_t seed, int refine_factor) {
  std::vector<Kernel> fs = args.load();
  if (refine_factor > 1) {
    const Refinement r = refine(fs[0].system(), refine_factor);
    for (auto& f : fs) f = lift_kernel(f, r);
  }
  const EmpiricalReport report = estimate_moments(kind, fs, n_samples, seed);
  out.kv("kind", measure_kind_name(kind));
  out.kv("n_samples", static_cast<long long>(report.n_samples));
  out.kv("seed", static_cast<long long>(report.seed));
  out.kv("refine", static_cast<long long>(refine_factor));
  for (const auto& entry : report.entries) {
    out.kv(entry.name, entry.value);
    out.kv(entry.name + "_se", entry.std_error);
    out.kv(entry.name + "_exact", entry.exact);
  }
  return 0;
}

// --- the verify suite ---

Kernel random_kernel(const CellSystem& sys, int degree, bool offdiag,
                     CounterRng& rng) {
  const int m = sys.size();
  std::map<std::vector<int>, double> coeffs;
  std::vector<int> tuple(degree, 0);
  for (;;) {
    bool repeat = false;
    for (int i = 1; i < degree; ++i)
      if (tuple[i] == tuple[i - 1]) repeat = true;
    if (!offdiag || !repeat) coeffs[tuple] = 2.0 * rng.next_unit() - 1.0;
    int pos = degree - 1;
    while (pos >= 0 && tuple[pos] == m - 1) --pos;
    if (pos < 0) break;
    const int v = tuple[pos] + 1;
    for (int i = pos; i < degree; ++i) tuple[i] = v;
  }
  return Kernel(sys, degree, std::move(coeffs));
}

double subset_cumulant_reference(MeasureKind kind,
                                 const std::vector<Kernel>& fs) {
  const int k = static_cast<int>(fs.size());
  SubsetTable moments = SubsetTable::zeros(k);
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<Kernel> part;
    for (int j = 0; j < k; ++j)
      if (mask >> j & 1u) part.push_back(fs[j]);
    moments.at(mask) = reference_moment(kind, part);
  }
  return cumulants_from_moments(moments).at((1u << k) - 1);
}

int cmd_verify(const Out& out) {
  bool all_ok = true;
  auto check = [&](const std::string& name, double lhs, double rhs,
                   double tol) {
    const double gap = std::abs(lhs - rhs);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    const bool ok = gap <= tol * scale;
    all_ok = all_ok && ok;
    if (out.machine) {
      out.line("check=" + name + " status=" + (ok ? "ok" : "fail") +
               " gap=" + format_double(gap));
    } else {
      out.line(std::string(ok ? "ok   " : "FAIL ") + name +
               "  lhs=" + format_double(lhs) + " rhs=" + format_double(rhs));
    }
  };

  CellSystem sys3;
  sys3.labels = {"a", "b", "c"};
  sys3.masses = {0.5, 1.0, 2.0};
  CellSystem sys4;
  sys4.labels = {"a", "b", "c", "d"};
  sys4.masses = {0.3, 0.7, 1.1, 1.9};

  CounterRng rng(20260826u, 1u);

  // expectation oracle: diagram sums against polynomial expansion
  struct OracleCase {
    MeasureKind kind;
    std::vector<int> degrees;
    bool offdiag;
  };
  const std::vector<OracleCase> cases = {
      {MeasureKind::gaussian, {2, 2}, false},
      {MeasureKind::gaussian, {1, 2, 3}, false},
      {MeasureKind::gaussian, {2, 2, 2}, true},
      {MeasureKind::poisson, {2, 2}, true},
      {MeasureKind::poisson, {1, 1, 2}, true},
      {MeasureKind::poisson, {2, 3}, true},
  };
  int case_id = 0;
  for (const auto& oc : cases) {
    ++case_id;
    const CellSystem& sys = oc.degrees.size() > 2 ? sys3 : sys4;
    std::vector<Kernel> fs;
    for (int d : oc.degrees)
      fs.push_back(random_kernel(
          sys, d, oc.offdiag || oc.kind == MeasureKind::poisson, rng));
    const std::string tag =
        measure_kind_name(oc.kind) + "_case" + std::to_string(case_id);
    check("oracle_moment_" + tag, joint_moment(oc.kind, fs),
          reference_moment(oc.kind, fs), 1e-9);
    check("oracle_cumulant_" + tag, joint_cumulant(oc.kind, fs),
          subset_cumulant_reference(oc.kind, fs), 1e-9);
  }

  // projection consistency of the product formulas
  {
    const Kernel f2 = random_kernel(sys3, 2, false, rng);
    const Kernel g2 = random_kernel(sys3, 2, false, rng);
    const Kernel g1 = random_kernel(sys3, 1, false, rng);
    const Kernel h3 = random_kernel(sys3, 3, false, rng);
    check("projection_gaussian_222",
          projection_consistency(MeasureKind::gaussian, f2, g2, g2), 0.0, 1e-9);
    check("projection_gaussian_213",
          projection_consistency(MeasureKind::gaussian, f2, g1, h3), 0.0, 1e-9);
    const Kernel pf = random_kernel(sys3, 2, true, rng);
    const Kernel pg = random_kernel(sys3, 2, true, rng);
    const Kernel ph1 = random_kernel(sys3, 1, true, rng);
    check("projection_poisson_222",
          projection_consistency(MeasureKind::poisson, pf, pg, pf), 0.0, 1e-9);
    check("projection_poisson_221",
          projection_consistency(MeasureKind::poisson, pf, pg, ph1), 0.0, 1e-9);
  }

  // circular rank identities on every circular pairing of four rows
  for (int d = 2; d <= 3; ++d) {
    const Kernel f = random_kernel(d == 2 ? sys4 : sys3, d, false, rng);
    std::vector<std::vector<int>> rows(4);
    for (int j = 0; j < 4; ++j)
      for (int t = 1; t <= d; ++t) rows[j].push_back(j * d + t);
    const SetPartition pi_star(4 * d, rows);
    const auto circ = enumerate_class(4 * d, pi_star, PartitionClass::M2c);
    double worst_lhs = 0.0, worst_rhs = 0.0;
    double worst_gap = -1.0;
    for (const auto& sigma : circ) {
      const RankIdentity id = circular_rank_identity(f, sigma);
      const double gap1 = std::abs(id.integral - id.norm_r);
      const double gap2 = std::abs(id.norm_r - id.norm_d_minus_r);
      if (std::max(gap1, gap2) > worst_gap) {
        worst_gap = std::max(gap1, gap2);
        worst_lhs = id.integral;
        worst_rhs = id.norm_r;
      }
    }
    out.kv("rank_identity_d" + std::to_string(d) + "_count",
           static_cast<long long>(circ.size()));
    check("rank_identity_d" + std::to_string(d), worst_lhs, worst_rhs, 1e-9);
  }

  // second-order Poisson CLT quantities against their diagram integrals
  {
    const Kernel f = random_kernel(sys4, 2, true, rng);
    const PoissonDoubleReport r = poisson_double_check(f);
    check("poisson_double_fourth", r.fourth_integral, r.sigma1_integral, 1e-10);
    check("poisson_double_star21", r.star21_norm2, r.sigma2_integral, 1e-10);
    check("poisson_double_star11", r.star11_norm2, r.sigma3_integral, 1e-10);
  }

  out.kv("verify", std::string(all_ok ? "pass" : "fail"));
  return all_ok ? 0 : 1;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"set-partition combinatorics and multiple-integral calculus"};
  app.require_subcommand(1);

  std::string format = "human";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"human", "machine"}));
  int cap = 0;
  app.add_option("--cap", cap, "enumeration cap override")
      ->check(CLI::Range(1, 20));

  auto* partitions = app.add_subcommand("partitions", "enumerate set partitions");
  partitions->fallthrough();
  int part_n = 0, part_max_block = 0;
  bool part_count = false;
  partitions->add_option("--n", part_n, "ground set size")->required();
  partitions->add_option("--max-block", part_max_block,
                         "largest allowed block size");
  partitions->add_flag("--count", part_count, "print only the count");

  auto* mob = app.add_subcommand("mobius", "Mobius function of the lattice");
  mob->fallthrough();
  int mob_n = 0;
  std::string mob_sigma, mob_pi;
  mob->add_option("--n", mob_n, "ground set size")->required();
  mob->add_option("--sigma", mob_sigma, "lower partition or 0hat/1hat")
      ->required();
  mob->add_option("--pi", mob_pi, "upper partition or 0hat/1hat")->required();

  auto* dia = app.add_subcommand("diagrams", "diagram queries for a row partition");
  dia->fallthrough();
  std::string dia_pi, dia_sigma, dia_class;
  bool dia_nonflat = false, dia_count = false;
  dia->add_option("--pi", dia_pi, "row partition")->required();
  dia->add_option("--sigma", dia_sigma, "classify this partition");
  dia->add_flag("--nonflat", dia_nonflat, "enumerate non-flat partners");
  dia->add_option("--class", dia_class,
                  "enumerate a family: M, M0, M2, M2_0, Mge2, Mge2_0, M2c");
  dia->add_flag("--count", dia_count, "print only the count");

  std::string kind_name = "gaussian";
  KernelArgs kernel_args;
  int order = 0;

  auto add_kernel_opts = [&](CLI::App* sub, bool need_kind = true) {
    if (need_kind)
      sub->add_option("--kind", kind_name, "measure kind")
          ->check(CLI::IsMember({"gaussian", "poisson"}));
    sub->add_option("--kernel", kernel_args.paths, "kernel spec file")
        ->required();
    sub->add_option("--copies", kernel_args.copies, "replicate the kernel list")
        ->check(CLI::Range(1, 12));
  };

  auto* mom = app.add_subcommand("moment", "joint moment of multiple integrals");
  mom->fallthrough();
  add_kernel_opts(mom);
  mom->add_option("--order", order, "expected number of factors");

  auto* cum = app.add_subcommand("cumulant", "joint cumulant of multiple integrals");
  cum->fallthrough();
  add_kernel_opts(cum);
  cum->add_option("--order", order, "expected number of factors");

  auto* prod = app.add_subcommand("product", "chaos expansion of a product");
  prod->fallthrough();
  add_kernel_opts(prod);
  bool prod_general = false;
  prod->add_flag("--general", prod_general,
                 "use the partition-sum expansion");

  auto* clt = app.add_subcommand("clt", "fourth-moment diagnostics");
  clt->fallthrough();
  std::string clt_kernel, clt_sigma;
  double clt_threshold = 1e-3;
  bool clt_poisson_double = false;
  clt->add_option("--kernel", clt_kernel, "kernel spec file")->required();
  clt->add_option("--threshold", clt_threshold, "verdict threshold");
  clt->add_flag("--poisson-double", clt_poisson_double,
                "second-order Poisson CLT report");
  clt->add_option("--sigma", clt_sigma, "circular rank identity for sigma");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo moment estimates");
  sim->fallthrough();
  add_kernel_opts(sim);
  std::uint64_t sim_n = 10000, sim_seed = 0;
  int sim_refine = 1;
  sim->add_option("--n-samples", sim_n, "number of replicates");
  sim->add_option("--seed", sim_seed, "random seed")->required();
  sim->add_option("--refine", sim_refine, "split each cell this many ways")
      ->check(CLI::Range(1, 4096));

  auto* ver = app.add_subcommand("verify", "run the built-in cross-check suite");
  ver->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  if (cap > 0) set_enumeration_cap(cap);
  const Out out{format == "machine"};
  const MeasureKind kind = parse_measure_kind(kind_name);

  if (partitions->parsed())
    return cmd_partitions(out, part_n, part_max_block, part_count);
  if (mob->parsed()) return cmd_mobius(out, mob_n, mob_sigma, mob_pi);
  if (dia->parsed())
    return cmd_diagrams(out, dia_pi, dia_sigma, dia_nonflat, dia_class,
                        dia_count);
  if (mom->parsed()) return cmd_moment(out, kind, kernel_args, order, false);
  if (cum->parsed()) return cmd_moment(out, kind, kernel_args, order, true);
  if (prod->parsed()) return cmd_product(out, kind, kernel_args, prod_general);
  if (clt->parsed())
    return cmd_clt(out, clt_kernel, clt_threshold, clt_poisson_double,
                   clt_sigma);
  if (sim->parsed())
    return cmd_simulate(out, kind, kernel_args, sim_n, sim_seed, sim_refine);
  if (ver->parsed()) return cmd_verify(out);
  std::cerr << "missing subcommand\n\n" << app.help();
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n"
              << "run 'wic --help' for usage\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

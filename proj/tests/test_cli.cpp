#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "wic/chaos.hpp"
#include "wic/kernels.hpp"

#ifndef WIC_CLI_PATH
#error "WIC_CLI_PATH must point at the built command line tool"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(WIC_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.output.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = status >= 0 && WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string write_kernel_file(const std::string& path, const wic::Kernel& f) {
  std::ofstream out(path);
  out << wic::serialize_kernel(f);
  return path;
}

}  // namespace

TEST_CASE("cli mobius matches the closed form") {
  auto r = run_cli("--format machine mobius --n 4 --sigma 0hat --pi 1hat");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "mobius=-6"));

  auto partial = run_cli(
      "--format machine mobius --n 4 --sigma \"{{1,2},{3},{4}}\" --pi 1hat");
  CHECK(partial.exit_code == 0);
  CHECK(contains(partial.output, "mobius=2"));
}

TEST_CASE("cli partition streams are deterministic") {
  auto a = run_cli("--format machine partitions --n 4");
  auto b = run_cli("--format machine partitions --n 4");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(contains(a.output, "partition={{1,2,3,4}}"));
  CHECK(contains(a.output, "partition={{1},{2},{3},{4}}"));
  CHECK(contains(a.output, "count=15"));

  auto count = run_cli("--format machine partitions --n 5 --max-block 2 --count");
  CHECK(count.exit_code == 0);
  CHECK(contains(count.output, "count=26"));
}

TEST_CASE("cli diagram queries") {
  auto nf = run_cli(
      "--format machine diagrams --pi \"{{1,2},{3,4}}\" --nonflat --count");
  CHECK(nf.exit_code == 0);
  CHECK(contains(nf.output, "count=7"));

  auto nf2 = run_cli(
      "--format machine diagrams --pi \"{{1,2},{3},{4}}\" --nonflat --count");
  CHECK(contains(nf2.output, "count=10"));

  auto cls = run_cli(
      "--format machine diagrams --pi \"{{1,2},{3,4},{5,6},{7,8}}\" "
      "--class M2c --count");
  CHECK(cls.exit_code == 0);
  CHECK(contains(cls.output, "count=16"));

  auto one = run_cli(
      "--format machine diagrams --pi \"{{1,2},{3,4}}\" "
      "--sigma \"{{1,3},{2,4}}\"");
  CHECK(one.exit_code == 0);
  CHECK(contains(one.output, "connected=true"));
  CHECK(contains(one.output, "nonflat=true"));
  CHECK(contains(one.output, "gaussian=true"));
  CHECK(contains(one.output, "circular=true"));
}

TEST_CASE("cli moments and products read kernel files") {
  wic::CellSystem sys{{"a", "b", "c"}, {0.5, 1.0, 2.0}};
  wic::Kernel f(sys, 2, {{{0, 1}, 0.5}, {{1, 2}, -0.25}});
  const std::string path = "wic_cli_kernel.txt";
  write_kernel_file(path, f);

  auto mom = run_cli("--format machine moment --kind gaussian --kernel " +
                     path + " --kernel " + path);
  CHECK(mom.exit_code == 0);
  const double expected = wic::joint_moment(wic::MeasureKind::gaussian, {f, f});
  CHECK(contains(mom.output, "moment=" + wic::format_double(expected)));

  auto bad_order = run_cli("--format machine moment --kind gaussian --kernel " +
                           path + " --order 3");
  CHECK(bad_order.exit_code == 2);

  auto cum = run_cli("--format machine cumulant --kind poisson --kernel " +
                     path + " --copies 2");
  CHECK(cum.exit_code == 0);
  const double kappa = wic::joint_cumulant(wic::MeasureKind::poisson, {f, f});
  CHECK(contains(cum.output, "cumulant=" + wic::format_double(kappa)));

  auto prod = run_cli("--format machine product --kind gaussian --kernel " +
                      path + " --copies 2");
  CHECK(prod.exit_code == 0);
  CHECK(contains(prod.output, "scalar="));
  CHECK(contains(prod.output, "order=4"));

  auto general = run_cli("--format machine product --kind poisson --kernel " +
                         path + " --copies 2 --general");
  CHECK(general.exit_code == 0);
  CHECK(contains(general.output, "sigma_terms="));

  auto clt = run_cli("--format machine clt --kernel " + path);
  CHECK(clt.exit_code == 0);
  CHECK(contains(clt.output, "chi4_diagrams="));
  CHECK(contains(clt.output, "tv_bound="));

  auto sim = run_cli("--format machine simulate --kind gaussian --kernel " +
                     path + " --copies 2 --n-samples 2000 --seed 7");
  CHECK(sim.exit_code == 0);
  CHECK(contains(sim.output, "moment="));
  CHECK(contains(sim.output, "moment_se="));
  CHECK(contains(sim.output, "cumulant_exact="));

  auto sim2 = run_cli("--format machine simulate --kind gaussian --kernel " +
                      path + " --copies 2 --n-samples 2000 --seed 7");
  CHECK(sim.output == sim2.output);

  std::remove(path.c_str());
}

TEST_CASE("cli error handling") {
  auto nothing = run_cli("");
  CHECK(nothing.exit_code == 2);

  auto unknown = run_cli("unknown-subcommand");
  CHECK(unknown.exit_code == 2);

  auto bad_flag = run_cli("partitions --n 4 --bogus");
  CHECK(bad_flag.exit_code == 2);
  CHECK(contains(bad_flag.output, "argument error"));

  auto missing = run_cli("mobius --n 4 --sigma 0hat");
  CHECK(missing.exit_code == 2);

  auto bad_partition = run_cli("diagrams --pi \"{{1,2},{2,3}}\" --nonflat");
  CHECK(bad_partition.exit_code == 2);
  CHECK(contains(bad_partition.output, "input error"));

  auto bad_file = run_cli("moment --kind gaussian --kernel no_such_file.txt");
  CHECK(bad_file.exit_code == 2);

  auto over_cap = run_cli("partitions --n 19 --count");
  CHECK(over_cap.exit_code == 1);

  auto help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(contains(help.output, "partitions"));
  CHECK(contains(help.output, "verify"));
}

TEST_CASE("cli verify passes") {
  auto r = run_cli("--format machine verify");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "verify=pass"));
}

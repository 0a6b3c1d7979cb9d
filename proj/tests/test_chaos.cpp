#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wic/chaos.hpp"
#include "wic/simulate.hpp"

using namespace wic;

namespace {

void check_close(double got, double want, double tol) {
  CHECK(std::abs(got - want) <= tol * std::max({1.0, std::abs(got), std::abs(want)}));
}

std::vector<int> decomposition_orders(const ChaosDecomposition& d) {
  std::vector<int> orders;
  for (const auto& [m, k] : d.kernels()) {
    (void)k;
    orders.push_back(m);
  }
  return orders;
}

}  // namespace

TEST_CASE("measure kinds and diagonal expectations") {
  CHECK(parse_measure_kind("gaussian") == MeasureKind::gaussian);
  CHECK(parse_measure_kind("poisson") == MeasureKind::poisson);
  CHECK_THROWS(parse_measure_kind("brownian"));
  CHECK(measure_kind_name(MeasureKind::poisson) == "poisson");

  CHECK(expected_diagonal(MeasureKind::gaussian, 1, 2.0) == 0.0);
  CHECK(expected_diagonal(MeasureKind::gaussian, 2, 2.0) == 2.0);
  CHECK(expected_diagonal(MeasureKind::gaussian, 3, 2.0) == 0.0);
  CHECK(expected_diagonal(MeasureKind::poisson, 1, 2.0) == 0.0);
  CHECK(expected_diagonal(MeasureKind::poisson, 2, 2.0) == 2.0);
  CHECK(expected_diagonal(MeasureKind::poisson, 5, 2.0) == 2.0);
  CHECK_THROWS(expected_diagonal(MeasureKind::poisson, 0, 2.0));
  CHECK_THROWS(expected_diagonal(MeasureKind::poisson, 2, -1.0));
}

TEST_CASE("single diagram integrals") {
  CellSystem sys{{"a", "b"}, {0.5, 2.0}};
  Kernel f(sys, 1, {{{0}, 1.0}, {{1}, 3.0}});
  Kernel g(sys, 1, {{{0}, -2.0}, {{1}, 1.0}});

  auto pairing = SetPartition::parse("{{1,2}}");
  double want = 1.0 * -2.0 * 0.5 + 3.0 * 1.0 * 2.0;
  CHECK(f_sigma_integral(pairing, {f, g}, MeasureKind::gaussian) ==
        doctest::Approx(want));
  CHECK(f_sigma_integral(pairing, {f, g}, MeasureKind::poisson) ==
        doctest::Approx(want));

  CHECK(f_sigma_integral(SetPartition::zero(2), {f, g}, MeasureKind::gaussian) ==
        0.0);
  auto triple = SetPartition::parse("{{1,2,3}}");
  CHECK(f_sigma_integral(triple, {f, g, f}, MeasureKind::gaussian) == 0.0);
  CHECK(f_sigma_integral(triple, {f, g, f}, MeasureKind::poisson) ==
        doctest::Approx(1.0 * -2.0 * 1.0 * 0.5 + 3.0 * 1.0 * 3.0 * 2.0));
}

TEST_CASE("joint moments by hand") {
  CellSystem sys{{"a"}, {2.0}};
  Kernel f(sys, 1, {{{0}, 1.0}});
  CHECK(joint_moment(MeasureKind::gaussian, {f}) == 0.0);
  CHECK(joint_moment(MeasureKind::gaussian, {f, f}) == doctest::Approx(2.0));
  CHECK(joint_moment(MeasureKind::poisson, {f, f}) == doctest::Approx(2.0));
  CHECK(joint_moment(MeasureKind::gaussian, {f, f, f}) == 0.0);
  CHECK(joint_moment(MeasureKind::poisson, {f, f, f}) == doctest::Approx(2.0));

  Kernel d(sys, 2, {{{0, 0}, 1.0}});
  CHECK(joint_moment(MeasureKind::gaussian, {d}) == 0.0);
  CHECK(joint_moment(MeasureKind::gaussian, {d, d}) == doctest::Approx(8.0));

  CHECK(joint_cumulant(MeasureKind::gaussian, {f, f}) == doctest::Approx(2.0));
  CHECK(joint_cumulant(MeasureKind::gaussian, {d, d, d}) == doctest::Approx(64.0));

  CHECK_THROWS(joint_moment(MeasureKind::poisson, {d}));
  CHECK(joint_moment(MeasureKind::gaussian, {}) == 1.0);
  CHECK_THROWS(joint_cumulant(MeasureKind::gaussian, {}));
}

TEST_CASE("moments and cumulants against the expansion oracle") {
  CounterRng rng(41, 0);
  for (int trial = 0; trial < 12; ++trial) {
    const bool poisson = trial % 2 == 1;
    const auto kind = poisson ? MeasureKind::poisson : MeasureKind::gaussian;
    const int cells = 2 + static_cast<int>(rng.next_u64() % 3);
    auto sys = oracle::random_system(cells, rng);
    const int count = 2 + static_cast<int>(rng.next_u64() % 2);
    std::vector<Kernel> fs;
    int budget = 7;
    for (int j = 0; j < count; ++j) {
      int d = 1 + static_cast<int>(rng.next_u64() % 2);
      d = std::min(d, poisson ? cells : d);
      budget -= d;
      if (budget < 0) break;
      fs.push_back(oracle::random_kernel(sys, d, poisson, rng));
    }
    if (fs.size() < 2) continue;
    check_close(joint_moment(kind, fs), oracle::moment(kind, fs), 1e-10);
    check_close(joint_cumulant(kind, fs), oracle::cumulant(kind, fs), 1e-10);
  }
}

TEST_CASE("reference expansion matches the diagram sum") {
  CounterRng rng(42, 0);
  auto sys = oracle::random_system(3, rng);
  auto diag = oracle::random_kernel(sys, 2, false, rng);
  auto off = oracle::random_kernel(sys, 2, true, rng);
  for (const auto& fs : std::vector<std::vector<Kernel>>{

           {diag, diag}, {diag, off}, {off, off}, {diag, diag, off}}) {
    check_close(reference_moment(MeasureKind::gaussian, fs),
                joint_moment(MeasureKind::gaussian, fs), 1e-11);
  }
  check_close(reference_moment(MeasureKind::poisson, {off, off}),
              joint_moment(MeasureKind::poisson, {off, off}), 1e-11);
}

TEST_CASE("binary products agree with projections") {
  CounterRng rng(43, 0);
  auto sys = oracle::random_system(3, rng);
  for (int trial = 0; trial < 6; ++trial) {
    const bool poisson = trial % 2 == 1;
    const auto kind = poisson ? MeasureKind::poisson : MeasureKind::gaussian;
    const int p = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    auto f = oracle::random_kernel(sys, p, poisson, rng);
    auto g = oracle::random_kernel(sys, q, poisson, rng);
    auto prod = poisson ? product_poisson(f, g) : product_gaussian(f, g);

    CHECK(prod.scalar() == doctest::Approx(joint_moment(kind, {f, g})).epsilon(1e-11));
    for (int m = 1; m <= p + q; ++m) {
      auto h = oracle::random_kernel(sys, m, poisson, rng);
      CHECK(projection_consistency(kind, f, g, h) <= 1e-10);
    }
  }
}

TEST_CASE("gaussian pair product orders") {
  auto sys = CellSystem::uniform(3, 1.0);
  Kernel f(sys, 2, {{{0, 1}, 1.0}, {{1, 2}, -0.5}});
  auto prod = product_gaussian(f, f);
  CHECK(decomposition_orders(prod) == std::vector<int>{2, 4});
  CHECK(prod.scalar() == doctest::Approx(2.0 * inner_product(f, f)));

  Kernel g(sys, 1, {{{2}, 1.0}});
  auto fg = product_gaussian(f, g);
  CHECK(decomposition_orders(fg) == std::vector<int>{1, 3});
  CHECK(fg.scalar() == 0.0);
}

TEST_CASE("iterated products keep expectations") {
  CounterRng rng(44, 0);
  auto sys = oracle::random_system(4, rng);
  for (const bool poisson : {false, true}) {
    const auto kind = poisson ? MeasureKind::poisson : MeasureKind::gaussian;
    std::vector<Kernel> fs{oracle::random_kernel(sys, 2, poisson, rng),
                           oracle::random_kernel(sys, 1, poisson, rng),
                           oracle::random_kernel(sys, 2, poisson, rng)};
    auto all = multiply_iterated(kind, fs);
    CHECK(all.scalar() == doctest::Approx(joint_moment(kind, fs)).epsilon(1e-10));

    auto twice = multiply_iterated(kind, {fs[0], fs[1]});
    auto binary = poisson ? product_poisson(fs[0], fs[1])
                          : product_gaussian(fs[0], fs[1]);
    CHECK(twice.scalar() == doctest::Approx(binary.scalar()));
    for (const auto& [m, k] : binary.kernels()) {
      REQUIRE(twice.kernel_at(m) != nullptr);
      for (const auto& [t, v] : k.coeffs())
        CHECK(twice.kernel_at(m)->at(t) == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("general sigma expansion flattens to the binary product") {
  CounterRng rng(45, 0);
  auto sys = oracle::random_system(3, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const bool poisson = trial % 2 == 1;
    const auto kind = poisson ? MeasureKind::poisson : MeasureKind::gaussian;
    const int p = 1 + static_cast<int>(rng.next_u64() % 2);
    const int q = 1 + static_cast<int>(rng.next_u64() % 2);
    auto f = oracle::random_kernel(sys, p, poisson, rng);
    auto g = oracle::random_kernel(sys, q, poisson, rng);

    auto terms = product_general(kind, {f, g});
    auto flat = flatten_terms(sys, terms);
    auto binary = poisson ? product_poisson(f, g) : product_gaussian(f, g);

    CHECK(flat.scalar() == doctest::Approx(binary.scalar()).epsilon(1e-11));
    for (int m = 1; m <= p + q; ++m) {
      const Kernel* a = flat.kernel_at(m);
      const Kernel* b = binary.kernel_at(m);
      if (b == nullptr) {
        if (a != nullptr)
          for (const auto& [t, v] : a->coeffs()) CHECK(std::abs(v) <= 1e-12);
        continue;
      }
      REQUIRE(a != nullptr);
      for (const auto& [t, v] : b->coeffs())
        CHECK(a->at(t) == doctest::Approx(v).epsilon(1e-11));
    }
  }
}

TEST_CASE("three-factor sigma expansion keeps moments") {
  CounterRng rng(46, 0);
  auto sys = oracle::random_system(3, rng);
  for (const bool poisson : {false, true}) {
    const auto kind = poisson ? MeasureKind::poisson : MeasureKind::gaussian;
    std::vector<Kernel> fs{oracle::random_kernel(sys, 1, poisson, rng),
                           oracle::random_kernel(sys, 2, poisson, rng),
                           oracle::random_kernel(sys, 1, poisson, rng)};
    auto flat = flatten_terms(sys, product_general(kind, fs));
    CHECK(flat.scalar() == doctest::Approx(joint_moment(kind, fs)).epsilon(1e-10));

    auto iterated = multiply_iterated(kind, fs);
    for (const auto& [m, k] : iterated.kernels()) {
      if (flat.kernel_at(m) == nullptr) {
        for (const auto& [t, v] : k.coeffs()) CHECK(std::abs(v) <= 1e-11);
        continue;
      }
      for (const auto& [t, v] : k.coeffs())
        CHECK(flat.kernel_at(m)->at(t) == doctest::Approx(v).epsilon(1e-10));
    }
  }
}

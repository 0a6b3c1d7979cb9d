#include "wic/clt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wic/cumulants.hpp"
#include "wic/diagrams.hpp"

namespace wic {

namespace {

double contraction_norm2(const Kernel& f, int r) {
  return raw_norm_squared(f.system(), contract(f, f, r, r));
}

SetPartition four_rows(int d) {
  std::vector<std::vector<int>> rows(4);
  for (int j = 0; j < 4; ++j)
    for (int t = 1; t <= d; ++t) rows[j].push_back(j * d + t);
  return SetPartition(4 * d, rows);
}

}  // namespace

FourthCumulantPair fourth_cumulant_two_ways(const Kernel& f) {
  const int d = f.degree();
  if (d < 2)
    throw std::invalid_argument("fourth cumulant: degree must be >= 2");
  FourthCumulantPair out;
  out.via_diagrams = joint_cumulant(MeasureKind::gaussian, {f, f, f, f});
  const double dfact = static_cast<double>(factorial(d));
  for (int p = 1; p <= d - 1; ++p) {
    const double denom = static_cast<double>(factorial(p)) *
                         static_cast<double>(factorial(d - p));
    const double coeff = dfact * dfact * dfact * dfact / (denom * denom);
    const RawKernel raw = contract(f, f, p, p);
    const double plain = raw_norm_squared(f.system(), raw);
    const Kernel sym = symmetrize(f.system(), raw);
    const double symmetric = inner_product(sym, sym);
    const double choose =
        static_cast<double>(binomial(2 * d - 2 * p, d - p));
    out.via_contractions += coeff * (plain + choose * symmetric);
  }
  return out;
}

double tv_bound(const Kernel& f) {
  const int d = f.degree();
  if (d < 2) throw std::invalid_argument("tv_bound: degree must be >= 2");
  const double dfact = static_cast<double>(factorial(d));
  const double gap = 1.0 - dfact * inner_product(f, f);
  double total = gap * gap;
  for (int r = 1; r <= d - 1; ++r) {
    const double rf = static_cast<double>(factorial(r - 1));
    const double ch = static_cast<double>(binomial(d - 1, r - 1));
    total += static_cast<double>(d) * d *
             static_cast<double>(factorial(2 * d - 2 * r)) * rf * rf * ch * ch *
             contraction_norm2(f, r);
  }
  return std::sqrt(total);
}

RankIdentity circular_rank_identity(const Kernel& f, const SetPartition& sigma) {
  const int d = f.degree();
  const SetPartition rows = four_rows(d);
  RankIdentity out;
  out.rank = circular_rank(rows, sigma);  // validates circularity
  out.integral = f_sigma_integral(sigma, {f, f, f, f}, MeasureKind::gaussian);
  out.norm_r = contraction_norm2(f, out.rank);
  out.norm_d_minus_r = contraction_norm2(f, d - out.rank);
  return out;
}

MultidimReport multidim_check(const std::vector<Kernel>& fs,
                              const std::vector<std::vector<double>>& target_cov) {
  const int m = static_cast<int>(fs.size());
  if (m < 1) throw std::invalid_argument("multidim_check: need components");
  if (static_cast<int>(target_cov.size()) != m)
    throw std::invalid_argument("multidim_check: covariance size mismatch");
  for (const auto& row : target_cov)
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("multidim_check: covariance size mismatch");

  MultidimReport report;
  report.covariance_gap.assign(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      report.covariance_gap[i][j] = std::abs(
          joint_moment(MeasureKind::gaussian, {fs[i], fs[j]}) -
          target_cov[i][j]);

  for (const auto& f : fs) {
    if (f.degree() < 2) {
      report.fourth_cumulant.push_back(0.0);
      report.max_contraction.push_back(0.0);
      continue;
    }
    report.fourth_cumulant.push_back(fourth_cumulant_two_ways(f).via_diagrams);
    double worst = 0.0;
    for (int r = 1; r <= f.degree() - 1; ++r)
      worst = std::max(worst, std::sqrt(contraction_norm2(f, r)));
    report.max_contraction.push_back(worst);
  }

  // mixed fourth moments: one index apart, middle pair, or all distinct
  auto admissible = [](int a, int b, int c, int d) {
    const bool case1 = a != b && b == c && c == d;
    const bool case2 = a != b && b == c && c != d && d != a;
    const bool case3 = a != b && a != c && a != d && b != c && b != d && c != d;
    return case1 || case2 || case3;
  };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          if (!admissible(a, b, c, d)) continue;
          VmEntry entry;
          entry.index = {a, b, c, d};
          entry.moment =
              joint_moment(MeasureKind::gaussian, {fs[a], fs[b], fs[c], fs[d]});
          const std::array<int, 4> idx = {a, b, c, d};
          std::vector<std::vector<double>> cov(4, std::vector<double>(4));
          for (int s = 0; s < 4; ++s)
            for (int t = 0; t < 4; ++t) cov[s][t] = target_cov[idx[s]][idx[t]];
          entry.wick = gaussian_joint_moment(cov);
          report.mixed_fourth.push_back(entry);
        }

  double total_var = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) total_var += target_cov[i][j];
  report.sum_fourth_target = 3.0 * total_var * total_var;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d)
          report.sum_fourth += joint_moment(MeasureKind::gaussian,
                                            {fs[a], fs[b], fs[c], fs[d]});
  return report;
}

PoissonDoubleReport poisson_double_check(const Kernel& f) {
  if (f.degree() != 2)
    throw std::invalid_argument("poisson_double_check: degree must be 2");
  if (!f.offdiag())
    throw std::invalid_argument("poisson_double_check: kernel must be off-diagonal");

  PoissonDoubleReport report;
  report.normalization = 2.0 * inner_product(f, f);
  for (const auto& [tuple, c] : f.coeffs()) {
    const double c2 = c * c;
    report.fourth_integral += 2.0 * c2 * c2 * f.system().mass(tuple[0]) *
                              f.system().mass(tuple[1]);
  }
  report.star21_norm2 = raw_norm_squared(f.system(), contract(f, f, 2, 1));
  report.star11_norm2 = raw_norm_squared(f.system(), contract(f, f, 1, 1));

  const SetPartition sigma1(8, {{1, 3, 5, 7}, {2, 4, 6, 8}});
  const SetPartition sigma2(8, {{1, 3, 5, 7}, {2, 4}, {6, 8}});
  const SetPartition sigma3(8, {{1, 3}, {4, 6}, {5, 7}, {2, 8}});
  const std::vector<Kernel> fs = {f, f, f, f};
  report.sigma1_integral = f_sigma_integral(sigma1, fs, MeasureKind::poisson);
  report.sigma2_integral = f_sigma_integral(sigma2, fs, MeasureKind::poisson);
  report.sigma3_integral = f_sigma_integral(sigma3, fs, MeasureKind::poisson);
  return report;
}

FiniteCltReport finite_chaos_clt_check(
    const std::vector<ChaosDecomposition>& sequence,
    const std::map<int, double>& target_variance) {
  FiniteCltReport report;
  report.tail_note = "finite decomposition: tail condition vacuously satisfied";
  for (const auto& element : sequence) {
    std::vector<FiniteCltOrder> orders;
    std::map<int, const Kernel*> present;
    for (const auto& [order, kern] : element.kernels())
      present.emplace(order, &kern);
    std::map<int, double> targets = target_variance;
    for (const auto& [order, kern] : present)
      targets.emplace(order, 0.0);
    for (const auto& [order, sigma2] : targets) {
      FiniteCltOrder row;
      row.order = order;
      auto it = present.find(order);
      const double n2 =
          it == present.end() ? 0.0 : inner_product(*it->second, *it->second);
      row.normalization_gap =
          std::abs(static_cast<double>(factorial(order)) * n2 - sigma2);
      if (it != present.end() && order >= 2)
        for (int r = 1; r <= order - 1; ++r)
          row.max_contraction = std::max(
              row.max_contraction, std::sqrt(contraction_norm2(*it->second, r)));
      orders.push_back(row);
    }
    report.elements.push_back(std::move(orders));
  }
  return report;
}

CltReport clt_report(const Kernel& f, double threshold) {
  CltReport report;
  report.degree = f.degree();
  report.threshold = threshold;
  report.norm2 = inner_product(f, f);
  report.normalization_gap =
      std::abs(static_cast<double>(factorial(f.degree())) * report.norm2 - 1.0);
  const FourthCumulantPair chi4 = fourth_cumulant_two_ways(f);
  report.chi4_diagrams = chi4.via_diagrams;
  report.chi4_contractions = chi4.via_contractions;
  for (int r = 1; r <= f.degree() - 1; ++r)
    report.contraction_norms.push_back(std::sqrt(contraction_norm2(f, r)));
  report.tv = tv_bound(f);
  report.normalized_ok = report.normalization_gap <= threshold;
  report.chi4_small = report.chi4_diagrams <= threshold;
  report.contractions_small = true;
  for (double v : report.contraction_norms)
    if (v > threshold) report.contractions_small = false;
  return report;
}

}  // namespace wic

#ifndef WIC_CLT_HPP
#define WIC_CLT_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "wic/chaos.hpp"
#include "wic/kernels.hpp"
#include "wic/partitions.hpp"

namespace wic {

// chi_4(I_d(f)) for Gaussian integrals, evaluated independently as a
// connected-diagram sum and as the contraction-norm sum.  Both are
// non-negative and agree.
struct FourthCumulantPair {
  double via_diagrams = 0.0;
  double via_contractions = 0.0;
};

FourthCumulantPair fourth_cumulant_two_ways(const Kernel& f);

// Upper bound on d_TV(I_d(f), N(0,1)) from the normalization gap and the
// contraction norms.
double tv_bound(const Kernel& f);

// For a circular pairing sigma on four rows of degree d, the diagram
// integral of f^{x4} equals ||f (x)_r f||^2 with r the rank, and the rank
// can be read from either side of the cycle.
struct RankIdentity {
  int rank = 0;
  double integral = 0.0;
  double norm_r = 0.0;
  double norm_d_minus_r = 0.0;
};

RankIdentity circular_rank_identity(const Kernel& f, const SetPartition& sigma);

// Numeric report for the multidimensional fourth-moment conditions: pairwise
// covariance gaps, per-component fourth cumulants and contraction norms, the
// mixed fourth moments against their Wick values, and the fourth moment of
// the sum against 3 (total variance)^2.
struct VmEntry {
  std::array<int, 4> index{};  // 0-based component indices
  double moment = 0.0;
  double wick = 0.0;
};

struct MultidimReport {
  std::vector<std::vector<double>> covariance_gap;
  std::vector<double> fourth_cumulant;
  std::vector<double> max_contraction;
  std::vector<VmEntry> mixed_fourth;
  double sum_fourth = 0.0;
  double sum_fourth_target = 0.0;
};

MultidimReport multidim_check(const std::vector<Kernel>& fs,
                              const std::vector<std::vector<double>>& target_cov);

// The normalization, fourth-power integral and the two contraction norms of
// the second-order Poisson CLT conditions, each next to its combinatorial
// counterpart: sigma1 = {{1,3,5,7},{2,4,6,8}}, sigma2 = {{1,3,5,7},{2,4},{6,8}},
// sigma3 = {{1,3},{4,6},{5,7},{2,8}}.
struct PoissonDoubleReport {
  double normalization = 0.0;  // 2 ||f||^2
  double fourth_integral = 0.0;
  double star21_norm2 = 0.0;
  double star11_norm2 = 0.0;
  double sigma1_integral = 0.0;
  double sigma2_integral = 0.0;
  double sigma3_integral = 0.0;
};

PoissonDoubleReport poisson_double_check(const Kernel& f);

// Per-order CLT conditions for elements with a finite decomposition; the
// tail condition needs no check and is reported as such.
struct FiniteCltOrder {
  int order = 0;
  double normalization_gap = 0.0;
  double max_contraction = 0.0;
};

struct FiniteCltReport {
  std::vector<std::vector<FiniteCltOrder>> elements;
  std::string tail_note;
};

FiniteCltReport finite_chaos_clt_check(
    const std::vector<ChaosDecomposition>& sequence,
    const std::map<int, double>& target_variance);

// One-kernel summary used by the command-line front end.
struct CltReport {
  int degree = 0;
  double norm2 = 0.0;               // ||f||^2
  double normalization_gap = 0.0;   // |d! ||f||^2 - 1|
  double chi4_diagrams = 0.0;
  double chi4_contractions = 0.0;
  std::vector<double> contraction_norms;  // ||f (x)_r f||, r = 1..d-1
  double tv = 0.0;
  double threshold = 0.0;
  bool normalized_ok = false;
  bool chi4_small = false;
  bool contractions_small = false;
};

CltReport clt_report(const Kernel& f, double threshold = 1e-3);

}  // namespace wic

#endif

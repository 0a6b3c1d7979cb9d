#ifndef WIC_SIMULATE_HPP
#define WIC_SIMULATE_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wic/chaos.hpp"
#include "wic/kernels.hpp"

namespace wic {

// Probabilists' Hermite polynomial (monic), q <= 30.
double hermite_poly(int q, double x);

// Counter-based generator: each draw is a pure function of
// (seed, stream, counter), so runs are reproducible regardless of order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_unit();      // uniform on (0, 1)
  double next_gaussian();  // standard normal
  long next_poisson(double lambda);

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// One realization of the centered measure: one value per cell.
struct MeasureSample {
  MeasureKind kind = MeasureKind::gaussian;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

MeasureSample sample_measure(MeasureKind kind, const CellSystem& system,
                             std::uint64_t seed, std::uint64_t stream);

// Pathwise multiple integral of an off-diagonal kernel: the polynomial
// d! sum over sorted distinct tuples of coeff times the measure values.
double eval_offdiag(const Kernel& f, const MeasureSample& sample);

// Pathwise Gaussian integral of any kernel through its Hermite coordinates;
// agrees with eval_offdiag on off-diagonal kernels.
double eval_gaussian_exact(const Kernel& f, const MeasureSample& sample);

// Pathwise value of a finite decomposition.  Gaussian terms use the exact
// evaluator; Poisson terms are evaluated with their diagonal coefficients
// dropped, which is the finite-system reading of a continuum identity.
double eval_decomposition(const ChaosDecomposition& d,
                          const MeasureSample& sample);

// Splits every cell into `factor` equal-mass subcells.  Subcell i of base
// cell c gets index c * factor + i.
struct Refinement {
  CellSystem base;
  CellSystem fine;
  int factor = 1;
};

Refinement refine(const CellSystem& base, int factor);

// Constant lift along the refinement; preserves norms and off-diagonal
// support.
Kernel lift_kernel(const Kernel& f, const Refinement& r);

// I(f) I(g) minus the off-diagonally evaluated Poisson product expansion,
// for one sample.  Degrees at most 2.  The gap vanishes in the mean and its
// variance shrinks as the cells refine.
double poisson_product_residual(const Kernel& f, const Kernel& g,
                                const MeasureSample& sample);

struct EstimateEntry {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  double exact = 0.0;
};

struct EmpiricalReport {
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<EstimateEntry> entries;
};

// Monte Carlo for E[prod_j I(f_j)] and the joint cumulant, with batch-means
// standard errors and the exact diagram-sum values alongside.
EmpiricalReport estimate_moments(MeasureKind kind,
                                 const std::vector<Kernel>& fs,
                                 std::uint64_t n_samples, std::uint64_t seed);

// log E[exp(i lambda I_1(h))] for a degree-1 kernel: exact for Gaussian,
// the compensated-exponential cell sum for Poisson.
std::complex<double> log_cf_first_order(MeasureKind kind, const Kernel& h,
                                        double lambda);

}  // namespace wic

#endif

#ifndef WIC_TESTS_ORACLES_HPP
#define WIC_TESTS_ORACLES_HPP

#include <functional>
#include <map>
#include <vector>

#include "wic/chaos.hpp"
#include "wic/kernels.hpp"
#include "wic/simulate.hpp"

// Slow reference implementations kept deliberately separate from the library:
// integrals become explicit polynomials in the per-cell measure values, cell
// moments come from Stirling numbers (Poisson) or the double-factorial
// recurrence (Gaussian), and partitions are enumerated by a local recursion.
namespace oracle {

// Exponent vector over the cells -> coefficient.
using Poly = std::map<std::vector<int>, double>;

Poly poly_mul(const Poly& a, const Poly& b);

// I_d(f) as a polynomial in the cell values.  Poisson kernels must be
// off-diagonal; Gaussian kernels may charge the diagonal.
Poly integral_as_poly(wic::MeasureKind kind, const wic::Kernel& f);

// E[phi_c^e] for a single cell of the centered measure.
double central_cell_moment(wic::MeasureKind kind, double mass, int e);

double expect_poly(wic::MeasureKind kind, const wic::CellSystem& sys,
                   const Poly& p);

double moment(wic::MeasureKind kind, const std::vector<wic::Kernel>& fs);
double cumulant(wic::MeasureKind kind, const std::vector<wic::Kernel>& fs);

// Blocks (0-based, sorted) of every partition of {0..n-1}.
void each_partition(
    int n, const std::function<void(const std::vector<std::vector<int>>&)>& visit);

// Sum over perfect matchings of products of covariances.
double wick_moment(const std::vector<std::vector<double>>& cov);

wic::CellSystem random_system(int cells, wic::CounterRng& rng);
wic::Kernel random_kernel(const wic::CellSystem& sys, int degree, bool offdiag,
                          wic::CounterRng& rng);

}  // namespace oracle

#endif

#ifndef WIC_CHAOS_HPP
#define WIC_CHAOS_HPP

#include <string>
#include <vector>

#include "wic/diagrams.hpp"
#include "wic/kernels.hpp"
#include "wic/partitions.hpp"

namespace wic {

enum class MeasureKind { gaussian, poisson };

MeasureKind parse_measure_kind(const std::string& name);
std::string measure_kind_name(MeasureKind kind);

// Expectation of the product of the centered measure over a block of
// coinciding cells: the cell mass when the block size is admissible for the
// kind (exactly 2 for Gaussian, at least 2 for Poisson), 0 otherwise.
double expected_diagonal(MeasureKind kind, int blocksize, double cell_mass);

// Integral of the tensor product of the kernels over the diagonal set of
// sigma, one mass factor per block.  Zero when sigma has a block whose size
// is inadmissible for the kind.  Slot s of sigma's ground set refers to
// variable s of the concatenated kernel arguments.
double f_sigma_integral(const SetPartition& sigma, const std::vector<Kernel>& fs,
                        MeasureKind kind);

// E[prod_j I_{d_j}(f_j)] via the diagram sum: admissible sigma that meet the
// row partition trivially.  Poisson requires every kernel off-diagonal.
double joint_moment(MeasureKind kind, const std::vector<Kernel>& fs);

// chi(I(f_1), ..., I(f_k)): the same sum restricted to connected diagrams.
double joint_cumulant(MeasureKind kind, const std::vector<Kernel>& fs);

// Product formulas, as finite chaos decompositions.
ChaosDecomposition product_gaussian(const Kernel& f, const Kernel& g);
ChaosDecomposition product_poisson(const Kernel& f, const Kernel& g);

// Left fold of the binary product over three or more factors.
ChaosDecomposition multiply_iterated(MeasureKind kind,
                                     const std::vector<Kernel>& fs);

// One sigma of the pointwise product expansion, reduced to plain integrals:
// value of the term = sum over pieces of I_{piece degree}(symmetrized piece).
// A degree-0 piece is a constant.  Gaussian terms with a block of size >= 3
// reduce to nothing.
struct SigmaTerm {
  SetPartition sigma;
  std::vector<RawKernel> pieces;
};

std::vector<SigmaTerm> product_general(MeasureKind kind,
                                       const std::vector<Kernel>& fs);

ChaosDecomposition flatten_terms(const CellSystem& system,
                                 const std::vector<SigmaTerm>& terms);

// | m! <(f x g)_m, h> - E[I(f) I(g) I(h)] | where (f x g)_m is the order-m
// part of the product decomposition and m = deg h.
double projection_consistency(MeasureKind kind, const Kernel& f,
                              const Kernel& g, const Kernel& h);

// Slow reference for E[prod_j I_{d_j}(f_j)]: expands every integral as a
// polynomial in the per-cell measure values and takes expectations
// monomial by monomial.
double reference_moment(MeasureKind kind, const std::vector<Kernel>& fs);

}  // namespace wic

#endif

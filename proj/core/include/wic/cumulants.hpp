#ifndef WIC_CUMULANTS_HPP
#define WIC_CUMULANTS_HPP

#include <vector>

#include "wic/partitions.hpp"

namespace wic {

// A real value for every nonempty subset of [n], indexed by bitmask.  Serves
// both for joint moments E[X^b] and joint cumulants chi(X_b).
struct SubsetTable {
  int n = 0;
  std::vector<double> values;  // size 1 << n, slot 0 unused

  static SubsetTable zeros(int n);
  double& at(unsigned mask) { return values[mask]; }
  double at(unsigned mask) const { return values[mask]; }
};

// E[X^b] = sum over partitions {b_1..b_k} of b of chi(X_{b_1})...chi(X_{b_k}).
SubsetTable moments_from_cumulants(const SubsetTable& cumulants);

// chi(X_b) = sum over partitions of (-1)^{k-1} (k-1)! E[X^{b_1}]...E[X^{b_k}].
SubsetTable cumulants_from_moments(const SubsetTable& moments);

// Cumulant of the grouped products X^{b_1},...,X^{b_k} for a grouping of [n]:
// the sum of prod_t chi(X_t) over partitions tau with tau v grouping = 1.
double malyshev(const SetPartition& grouping, const SubsetTable& cumulants);

// Moment of a centered Gaussian vector: 0 for odd n, otherwise the sum over
// perfect matchings of products of covariances.
double gaussian_joint_moment(const std::vector<std::vector<double>>& cov);

}  // namespace wic

#endif

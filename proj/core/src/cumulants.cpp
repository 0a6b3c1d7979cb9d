#include "wic/cumulants.hpp"

#include <stdexcept>

namespace wic {

namespace {

void check_table(const SubsetTable& t, int max_n) {
  if (t.n < 1 || t.n > max_n)
    throw std::invalid_argument("subset table: n out of range");
  if (t.values.size() != (std::size_t{1} << t.n))
    throw std::invalid_argument("subset table: wrong value count");
}

std::vector<int> mask_elements(unsigned mask) {
  std::vector<int> out;
  for (int i = 0; mask >> i; ++i)
    if (mask >> i & 1u) out.push_back(i);
  return out;
}

// Sums prod over blocks of table[block mask], weighted per block count, over
// all set partitions of the elements of `mask`.
double partition_sum(const SubsetTable& table, unsigned mask,
                     double (*weight)(int blocks)) {
  const std::vector<int> elems = mask_elements(mask);
  const int k = static_cast<int>(elems.size());
  double total = 0.0;
  for_each_set_partition(k, [&](const SetPartition& p) {
    double prod = 1.0;
    for (const auto& block : p.blocks()) {
      unsigned bm = 0;
      for (int e : block) bm |= 1u << elems[e - 1];
      prod *= table.at(bm);
    }
    total += prod * weight(p.block_count());
    return true;
  });
  return total;
}

double weight_one(int) { return 1.0; }

double weight_signed(int blocks) {
  double w = 1.0;
  for (int j = 1; j < blocks; ++j) w *= -j;
  return w;  // (-1)^{blocks-1} (blocks-1)!
}

}  // namespace

SubsetTable SubsetTable::zeros(int n) {
  if (n < 1 || n > 25) throw std::invalid_argument("subset table: bad n");
  SubsetTable t;
  t.n = n;
  t.values.assign(std::size_t{1} << n, 0.0);
  return t;
}

SubsetTable moments_from_cumulants(const SubsetTable& cumulants) {
  check_table(cumulants, 10);
  SubsetTable m = SubsetTable::zeros(cumulants.n);
  for (unsigned mask = 1; mask < m.values.size(); ++mask)
    m.at(mask) = partition_sum(cumulants, mask, weight_one);
  return m;
}

SubsetTable cumulants_from_moments(const SubsetTable& moments) {
  check_table(moments, 10);
  SubsetTable c = SubsetTable::zeros(moments.n);
  for (unsigned mask = 1; mask < c.values.size(); ++mask)
    c.at(mask) = partition_sum(moments, mask, weight_signed);
  return c;
}

double malyshev(const SetPartition& grouping, const SubsetTable& cumulants) {
  const int n = grouping.ground_size();
  check_table(cumulants, 25);
  if (cumulants.n != n)
    throw std::invalid_argument("malyshev: table size does not match grouping");
  double total = 0.0;
  for_each_set_partition(n, [&](const SetPartition& tau) {
    if (!join(tau, grouping).is_one()) return true;
    double prod = 1.0;
    for (const auto& block : tau.blocks()) {
      unsigned bm = 0;
      for (int e : block) bm |= 1u << (e - 1);
      prod *= cumulants.at(bm);
    }
    total += prod;
    return true;
  });
  return total;
}

double gaussian_joint_moment(const std::vector<std::vector<double>>& cov) {
  const int n = static_cast<int>(cov.size());
  for (const auto& row : cov)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("gaussian_joint_moment: matrix not square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (cov[i][j] != cov[j][i])
        throw std::invalid_argument("gaussian_joint_moment: matrix not symmetric");
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;

  std::vector<int> unmatched(n);
  for (int i = 0; i < n; ++i) unmatched[i] = i;
  // Pair the first unmatched index with each later one, recursively.
  auto rec = [&](auto&& self, std::vector<int>& idx) -> double {
    if (idx.empty()) return 1.0;
    const int a = idx.front();
    double total = 0.0;
    for (std::size_t j = 1; j < idx.size(); ++j) {
      const int b = idx[j];
      std::vector<int> rest;
      rest.reserve(idx.size() - 2);
      for (std::size_t t = 1; t < idx.size(); ++t)
        if (t != j) rest.push_back(idx[t]);
      total += cov[a][b] * self(self, rest);
    }
    return total;
  };
  return rec(rec, unmatched);
}

}  // namespace wic

#ifndef WIC_PARTITIONS_HPP
#define WIC_PARTITIONS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wic {

// Thrown when an enumeration would exceed the configured ground-size cap.
struct enumeration_cap_error : std::length_error {
  using std::length_error::length_error;
};

// Global cap on the ground size of full partition enumerations.  Defaults to
// 13, or to the value of the WIC_ENUM_CAP environment variable if set.
int enumeration_cap();
void set_enumeration_cap(int cap);

std::int64_t factorial(int n);        // n <= 20
std::int64_t binomial(int n, int k);
std::int64_t bell_number(int n);      // n <= 25

// A partition of the integer n into non-increasing parts.
struct IntegerPartition {
  int n = 0;
  std::vector<int> parts;

  static IntegerPartition from_parts(int n, std::vector<int> parts);
  // r[i-1] = number of parts equal to i.
  static IntegerPartition from_multiplicities(const std::vector<int>& r);
  std::vector<int> multiplicities() const;
  std::string to_string() const;  // e.g. "(1^1 2^3)"
  bool operator==(const IntegerPartition&) const = default;
};

std::vector<IntegerPartition> enumerate_integer_partitions(int n);

// A partition of {1..n} into disjoint nonempty blocks, kept in canonical
// order: the block containing 1 first, then ascending minimal elements,
// with elements ascending inside each block.
class SetPartition {
 public:
  SetPartition(int ground_size, std::vector<std::vector<int>> blocks);

  static SetPartition zero(int n);  // all singletons
  static SetPartition one(int n);   // a single block
  // rgs[i] = index of the block containing element i+1, blocks numbered by
  // first appearance (a restricted growth string).
  static SetPartition from_rgs(const std::vector<int>& rgs);
  static SetPartition parse(const std::string& text);

  int ground_size() const { return n_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& rgs() const { return rgs_; }
  int block_of(int element) const { return rgs_[element - 1]; }
  bool is_zero() const { return block_count() == n_; }
  bool is_one() const { return block_count() == 1; }
  std::string to_string() const;  // {{1,6},{2},{3,5},{4}}

  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.n_ == b.n_ && a.rgs_ == b.rgs_;
  }
  friend bool operator!=(const SetPartition& a, const SetPartition& b) { return !(a == b); }
  friend bool operator<(const SetPartition& a, const SetPartition& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.rgs_ < b.rgs_;
  }

 private:
  SetPartition() = default;
  void rebuild_blocks_from_rgs();

  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> rgs_;
};

// Streams every partition of [n] exactly once, in restricted-growth-string
// lexicographic order (which sorts canonical forms as well).
void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit);
// Same stream restricted to partitions whose blocks all have size <= max_block_size.
void for_each_set_partition_max_block(int n, int max_block_size,
                                      const std::function<void(const SetPartition&)>& visit);
std::vector<SetPartition> enumerate_set_partitions(int n);

// Refinement order: every block of sigma lies inside a block of pi.
bool leq(const SetPartition& sigma, const SetPartition& pi);
SetPartition meet(const SetPartition& sigma, const SetPartition& pi);
SetPartition join(const SetPartition& sigma, const SetPartition& pi);

// The class of the segment [sigma, pi]: part j of the result is the number
// of sigma-blocks inside the j-th pi-block, reported as an integer partition
// of |sigma| with |pi| parts.
IntegerPartition segment_class(const SetPartition& sigma, const SetPartition& pi);

// Number of partitions of [n] whose class against the singletons is lambda:
// n! / prod_i (i!)^{r_i} r_i!.
std::int64_t count_partitions_with_class(int n, const IntegerPartition& lambda);

// Moebius function of the partition lattice; 0 unless sigma <= pi.
std::int64_t mobius(const SetPartition& sigma, const SetPartition& pi);

// All rho with sigma <= rho <= pi, in canonical order.
std::vector<SetPartition> enumerate_segment(const SetPartition& sigma, const SetPartition& pi);

enum class InvertDirection { down, up };

// Inverts cumulative sums over the lattice.  With direction `down` the input
// is G(s) = sum_{p <= s} F(p) and the output is F; with `up` the input is
// G(s) = sum_{p >= s} F(p).  The table must cover all of P([n]).
std::map<SetPartition, double> mobius_invert(const std::map<SetPartition, double>& values,
                                             InvertDirection direction);

}  // namespace wic

#endif

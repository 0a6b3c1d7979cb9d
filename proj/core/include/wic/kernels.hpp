#ifndef WIC_KERNELS_HPP
#define WIC_KERNELS_HPP

#include <map>
#include <string>
#include <vector>

namespace wic {

// Finite collection of disjoint cells with positive masses.  Every kernel is
// a function of cell indices (0-based), standing for a step function that is
// constant on products of cells.
struct CellSystem {
  std::vector<std::string> labels;
  std::vector<double> masses;

  static CellSystem uniform(int cells, double mass,
                            const std::string& prefix = "c");
  int size() const { return static_cast<int>(masses.size()); }
  double mass(int cell) const { return masses[cell]; }
  int index_of(const std::string& label) const;  // -1 when absent
  bool operator==(const CellSystem&) const = default;
};

void validate_system(const CellSystem& system);

// Coefficients on ordered tuples of cells; the output form of tensor products
// and contractions, and the input form of symmetrize.  Degree 0 is allowed
// and holds a single coefficient on the empty tuple.
struct RawKernel {
  int degree = 0;
  std::map<std::vector<int>, double> coeffs;

  double at(const std::vector<int>& tuple) const;
};

double raw_norm_squared(const CellSystem& system, const RawKernel& raw);

// Symmetric function of `degree` cells, stored on sorted tuples with zero
// coefficients dropped.  `offdiag` reports whether the support avoids every
// tuple with a repeated cell.
class Kernel {
 public:
  Kernel(CellSystem system, int degree,
         std::map<std::vector<int>, double> sorted_coeffs);
  static Kernel zero(CellSystem system, int degree);

  const CellSystem& system() const { return system_; }
  int degree() const { return degree_; }
  bool offdiag() const { return offdiag_; }
  const std::map<std::vector<int>, double>& coeffs() const { return coeffs_; }

  double at(std::vector<int> tuple) const;  // accepts any tuple order

 private:
  CellSystem system_;
  int degree_ = 0;
  bool offdiag_ = true;
  std::map<std::vector<int>, double> coeffs_;
};

// Canonical symmetrization: each ordered coefficient lands on its sorted
// tuple with weight (product of multiplicities)!/degree!.  Symmetric input
// comes back unchanged.
Kernel symmetrize(const CellSystem& system, const RawKernel& raw);

RawKernel tensor0(const Kernel& f, const Kernel& g);

// (f star_r^l g): identify r variable pairs across f and g, integrate the
// first l of them against the masses.  Shared variables come first in both
// argument lists, so the output order is (kept shared, rest of f, rest of g).
// contract(f, g, r, r) is the r-fold contraction, contract(f, g, 0, 0) the
// plain tensor product.
RawKernel contract(const Kernel& f, const Kernel& g, int r, int l);

double inner_product(const Kernel& f, const Kernel& g);
double norm(const Kernel& f);

Kernel scale(const Kernel& f, double factor);
Kernel add(const Kernel& f, const Kernel& g);

// Drops every coefficient whose tuple repeats a cell.
Kernel restrict_offdiag(const Kernel& f);

// Coordinates of f in the product Hermite basis: multi-index alpha over the
// cells (sum = degree) -> coefficient.  The map omits zero coordinates.
std::map<std::vector<int>, double> hermite_decompose(const Kernel& f);

// The basis element for one multi-index; its coordinates under
// hermite_decompose are 1 on alpha and 0 elsewhere.
Kernel hermite_basis_kernel(const CellSystem& system,
                            const std::vector<int>& alpha);

// Finite sum c + sum_d I_d(kernel_d) with one symmetric kernel per order.
class ChaosDecomposition {
 public:
  explicit ChaosDecomposition(CellSystem system);

  const CellSystem& system() const { return system_; }
  double scalar() const { return scalar_; }
  const std::map<int, Kernel>& kernels() const { return kernels_; }

  void add_scalar(double value) { scalar_ += value; }
  void add_kernel(const Kernel& k, double weight = 1.0);
  void add_raw(const RawKernel& raw, double weight = 1.0);  // symmetrizes
  const Kernel* kernel_at(int order) const;  // nullptr when absent
  void prune(double tol = 0.0);  // drop orders with all |coeff| <= tol

 private:
  CellSystem system_;
  double scalar_ = 0.0;
  std::map<int, Kernel> kernels_;
};

// Shortest decimal that parses back to the same double; no locale.
std::string format_double(double value);
double parse_double(const std::string& text);

// Text form:
//   cells <m>
//   <label> <mass>            (m lines)
//   degree <d>
//   offdiag <true|false>
//   coeff <i_1> ... <i_d> <value>   (1-based cells, ascending)
// Blank lines and lines starting with '#' are skipped.
Kernel parse_kernel(const std::string& text);
std::string serialize_kernel(const Kernel& f);
Kernel load_kernel_file(const std::string& path);

}  // namespace wic

#endif

#include "wic/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wic {

namespace {

struct ProductContext {
  const std::vector<Kernel>* fs = nullptr;
  MeasureKind kind = MeasureKind::gaussian;
  int n = 0;  // total slot count
  std::vector<int> kernel_of;                  // slot (0-based) -> kernel
  std::vector<std::vector<int>> kernel_slots;  // kernel -> its slots
};

ProductContext make_context(MeasureKind kind, const std::vector<Kernel>& fs,
                            bool require_offdiag) {
  if (fs.empty())
    throw std::invalid_argument("need at least one kernel");
  ProductContext ctx;
  ctx.fs = &fs;
  ctx.kind = kind;
  ctx.kernel_slots.resize(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    if (!(fs[j].system() == fs[0].system()))
      throw std::invalid_argument("kernels live on different cell systems");
    if (require_offdiag && kind == MeasureKind::poisson && !fs[j].offdiag())
      throw std::invalid_argument(
          "poisson integrals need off-diagonal kernels");
    for (int t = 0; t < fs[j].degree(); ++t) {
      ctx.kernel_of.push_back(static_cast<int>(j));
      ctx.kernel_slots[j].push_back(ctx.n++);
    }
  }
  return ctx;
}

// Product of kernel values with every slot of every block in `blocks` set to
// one cell per block; blocks hold 1-based slot numbers.  The blocks are
// visited in a greedy order that completes kernel argument lists early, so a
// zero coefficient prunes the remaining assignments.
double integral_over(const ProductContext& ctx,
                     const std::vector<std::vector<int>>& blocks) {
  const std::vector<Kernel>& fs = *ctx.fs;
  const CellSystem& sys = fs[0].system();
  const int m = sys.size();
  const int nblocks = static_cast<int>(blocks.size());

  for (const auto& b : blocks)
    if (expected_diagonal(ctx.kind, static_cast<int>(b.size()), 1.0) == 0.0)
      return 0.0;

  std::vector<int> order;
  {
    std::vector<char> used(nblocks, 0);
    std::vector<char> touched(fs.size(), 0);
    for (int step = 0; step < nblocks; ++step) {
      int best = -1, best_score = -1;
      for (int b = 0; b < nblocks; ++b) {
        if (used[b]) continue;
        int score = 0;
        for (int e : blocks[b])
          if (touched[ctx.kernel_of[e - 1]]) ++score;
        if (score > best_score) { best_score = score; best = b; }
      }
      used[best] = 1;
      order.push_back(best);
      for (int e : blocks[best]) touched[ctx.kernel_of[e - 1]] = 1;
    }
  }

  std::vector<int> cell_of(ctx.n, -1);
  std::vector<int> remaining(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) remaining[j] = fs[j].degree();

  double total = 0.0;
  auto rec = [&](auto&& self, int step, double factor) -> void {
    if (step == nblocks) { total += factor; return; }
    const auto& b = blocks[order[step]];
    for (int z = 0; z < m; ++z) {
      double f2 = factor * sys.mass(z);
      for (int e : b) {
        cell_of[e - 1] = z;
        --remaining[ctx.kernel_of[e - 1]];
      }
      // evaluate each kernel completed by this block, exactly once
      for (std::size_t bi = 0; bi < b.size() && f2 != 0.0; ++bi) {
        const int j = ctx.kernel_of[b[bi] - 1];
        if (remaining[j] != 0) continue;
        bool first_here = true;
        for (std::size_t bj = 0; bj < bi; ++bj)
          if (ctx.kernel_of[b[bj] - 1] == j) { first_here = false; break; }
        if (!first_here) continue;
        std::vector<int> args;
        args.reserve(fs[j].degree());
        for (int s : ctx.kernel_slots[j]) args.push_back(cell_of[s]);
        f2 *= fs[j].at(std::move(args));
      }
      if (f2 != 0.0) self(self, step + 1, f2);
      for (int e : b) ++remaining[ctx.kernel_of[e - 1]];
    }
  };
  rec(rec, 0, 1.0);
  return total;
}

bool meets_rows_trivially(const ProductContext& ctx, const SetPartition& sigma) {
  for (const auto& b : sigma.blocks()) {
    unsigned seen = 0;
    for (int e : b) {
      const unsigned bit = 1u << ctx.kernel_of[e - 1];
      if (seen & bit) return false;
      seen |= bit;
    }
  }
  return true;
}

bool joins_rows_fully(const ProductContext& ctx, const SetPartition& sigma) {
  const int k = static_cast<int>(ctx.kernel_slots.size());
  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& b : sigma.blocks())
    for (std::size_t i = 1; i < b.size(); ++i) {
      int a = find(ctx.kernel_of[b[0] - 1]);
      int c = find(ctx.kernel_of[b[i] - 1]);
      if (a != c) parent[a] = c;
    }
  for (int i = 1; i < k; ++i)
    if (find(i) != find(0)) return false;
  return true;
}

double diagram_sum(MeasureKind kind, const std::vector<Kernel>& fs,
                   bool connected_only) {
  ProductContext ctx = make_context(kind, fs, true);
  double total = 0.0;
  auto visit = [&](const SetPartition& sigma) {
    for (const auto& b : sigma.blocks())
      if (b.size() < 2) return true;
    if (kind == MeasureKind::gaussian && 2 * sigma.block_count() != ctx.n)
      return true;
    if (!meets_rows_trivially(ctx, sigma)) return true;
    if (connected_only && !joins_rows_fully(ctx, sigma)) return true;
    total += integral_over(ctx, sigma.blocks());
    return true;
  };
  if (kind == MeasureKind::gaussian)
    for_each_set_partition_max_block(ctx.n, 2, visit);
  else
    for_each_set_partition(ctx.n, visit);
  return total;
}

ChaosDecomposition binary_product(MeasureKind kind, const Kernel& f,
                                  const Kernel& g, bool check_offdiag) {
  if (!(f.system() == g.system()))
    throw std::invalid_argument("kernels live on different cell systems");
  if (kind == MeasureKind::poisson && check_offdiag &&
      (!f.offdiag() || !g.offdiag()))
    throw std::invalid_argument("poisson product needs off-diagonal kernels");
  const int p = f.degree(), q = g.degree();
  ChaosDecomposition out(f.system());
  for (int r = 0; r <= std::min(p, q); ++r) {
    const double base = static_cast<double>(factorial(r)) *
                        static_cast<double>(binomial(p, r)) *
                        static_cast<double>(binomial(q, r));
    if (kind == MeasureKind::gaussian) {
      out.add_raw(contract(f, g, r, r), base);
    } else {
      for (int l = 0; l <= r; ++l)
        out.add_raw(contract(f, g, r, l),
                    base * static_cast<double>(binomial(r, l)));
    }
  }
  out.prune();
  return out;
}

// Shared assignment walk for the sigma-term reductions: sums the product of
// kernel values over all cell assignments of `summed` blocks (with a mass
// factor each), for fixed cells on `fixed` slots.
double summed_block_values(const ProductContext& ctx,
                           const std::vector<std::vector<int>>& summed,
                           std::vector<int>& cell_of) {
  const std::vector<Kernel>& fs = *ctx.fs;
  const CellSystem& sys = fs[0].system();
  const int m = sys.size();
  double total = 0.0;
  auto rec = [&](auto&& self, std::size_t i, double factor) -> void {
    if (i == summed.size()) {
      double prod = factor;
      for (std::size_t j = 0; j < fs.size() && prod != 0.0; ++j) {
        std::vector<int> args;
        args.reserve(fs[j].degree());
        for (int s : ctx.kernel_slots[j]) args.push_back(cell_of[s]);
        prod *= fs[j].at(std::move(args));
      }
      total += prod;
      return;
    }
    for (int z = 0; z < m; ++z) {
      for (int e : summed[i]) cell_of[e - 1] = z;
      self(self, i + 1, factor * sys.mass(z));
    }
  };
  rec(rec, 0, 1.0);
  return total;
}

// Coefficients of the reduced integral with `free_groups` of slots kept as
// output variables (one variable per group, in the given order) and `summed`
// blocks integrated out.
RawKernel reduced_piece(const ProductContext& ctx,
                        const std::vector<std::vector<int>>& free_groups,
                        const std::vector<std::vector<int>>& summed) {
  const int m = (*ctx.fs)[0].system().size();
  const int deg = static_cast<int>(free_groups.size());
  RawKernel out;
  out.degree = deg;
  std::vector<int> cell_of(ctx.n, -1);
  std::vector<int> tuple(deg, 0);
  for (;;) {
    for (int v = 0; v < deg; ++v)
      for (int e : free_groups[v]) cell_of[e - 1] = tuple[v];
    const double value = summed_block_values(ctx, summed, cell_of);
    if (value != 0.0) out.coeffs[tuple] = value;
    int pos = deg - 1;
    while (pos >= 0 && ++tuple[pos] == m) tuple[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

void gaussian_pieces(const ProductContext& ctx, const SetPartition& sigma,
                     std::vector<RawKernel>& pieces) {
  std::vector<std::vector<int>> pairs, singles;
  for (const auto& b : sigma.blocks()) {
    if (b.size() > 2) return;  // the term vanishes
    (b.size() == 2 ? pairs : singles).push_back(b);
  }
  std::sort(singles.begin(), singles.end());
  pieces.push_back(reduced_piece(ctx, singles, pairs));
}

void poisson_pieces(const ProductContext& ctx, const SetPartition& sigma,
                    std::vector<RawKernel>& pieces) {
  const PoissonBlockSplit split = poisson_split(sigma);
  std::vector<std::vector<int>> singles = split.b1;
  std::sort(singles.begin(), singles.end());

  auto emit = [&](const std::vector<int>& summed_idx,
                  const std::vector<int>& kept_idx) {
    std::vector<std::vector<int>> summed, free_groups;
    for (int i : summed_idx) summed.push_back(split.b2[i]);
    for (int i : kept_idx) free_groups.push_back(split.b2[i]);
    free_groups.insert(free_groups.end(), singles.begin(), singles.end());
    pieces.push_back(reduced_piece(ctx, free_groups, summed));
  };

  for (const auto& [r1, r2] : split.pb2) emit(r1, r2);
  std::vector<int> all(split.b2.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  emit({}, all);            // every multi-slot block kept as one variable
  if (!split.b2.empty())
    emit(all, {});          // every multi-slot block integrated out
}

// --- reference expectation via polynomial expansion ---

using Monomial = std::vector<int>;  // exponent per cell
using Poly = std::map<Monomial, double>;

Poly poly_constant(int m, double v) {
  Poly p;
  if (v != 0.0) p.emplace(Monomial(m, 0), v);
  return p;
}

Poly poly_mul(const Poly& a, const Poly& b, int m) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Monomial e(m);
      for (int c = 0; c < m; ++c) e[c] = ea[c] + eb[c];
      out[e] += ca * cb;
    }
  return out;
}

void poly_accumulate(Poly& into, const Poly& from) {
  for (const auto& [e, c] : from) into[e] += c;
}

Poly integral_poly(MeasureKind kind, const Kernel& f) {
  const int m = f.system().size();
  Poly out;
  if (kind == MeasureKind::poisson) {
    if (!f.offdiag())
      throw std::invalid_argument("poisson integrals need off-diagonal kernels");
    const double perms = static_cast<double>(factorial(f.degree()));
    for (const auto& [tuple, c] : f.coeffs()) {
      Monomial e(m, 0);
      for (int cell : tuple) ++e[cell];
      out[e] += c * perms;
    }
    return out;
  }
  // Gaussian: expand through the product Hermite basis, which also covers
  // kernels supported on repeated cells.
  for (const auto& [alpha, c_alpha] : hermite_decompose(f)) {
    // c_alpha pairs with plain H_a(x / sqrt(nu)) factors; the nu^{a/2}
    // absorbed into each per-cell polynomial below has to come back out.
    double base = c_alpha;
    for (int cell = 0; cell < m; ++cell)
      base /= std::pow(f.system().mass(cell), alpha[cell] / 2.0);
    Poly term = poly_constant(m, base);
    for (int cell = 0; cell < m; ++cell) {
      const int a = alpha[cell];
      if (a == 0) continue;
      // nu^{a/2} H_a(x / sqrt(nu)) as a polynomial in x
      Poly h;
      double coef = 1.0;  // a! / (i! (a - 2i)! 2^i), built up incrementally
      for (int i = 0; 2 * i <= a; ++i) {
        if (i > 0)
          coef *= -static_cast<double>((a - 2 * i + 2) * (a - 2 * i + 1)) /
                  (2.0 * i);
        Monomial e(m, 0);
        e[cell] = a - 2 * i;
        h[e] = coef * std::pow(f.system().mass(cell), i);
      }
      term = poly_mul(term, h, m);
    }
    poly_accumulate(out, term);
  }
  return out;
}

double cell_moment(MeasureKind kind, double mass, int e) {
  if (e == 0) return 1.0;
  if (kind == MeasureKind::gaussian) {
    if (e % 2 == 1) return 0.0;
    double v = 1.0;
    for (int j = e - 1; j >= 1; j -= 2) v *= j;
    return v * std::pow(mass, e / 2);
  }
  // centered Poisson: moments from cumulants chi_1 = 0, chi_j = mass
  std::vector<double> mom(e + 1, 0.0);
  mom[0] = 1.0;
  for (int t = 1; t <= e; ++t) {
    double s = 0.0;
    double choose = 1.0;  // C(t-1, j-1)
    for (int j = 1; j <= t; ++j) {
      if (j > 1) choose = choose * (t - j + 1) / (j - 1);
      if (j >= 2) s += choose * mass * mom[t - j];
    }
    mom[t] = s;
  }
  return mom[e];
}

}  // namespace

MeasureKind parse_measure_kind(const std::string& name) {
  if (name == "gaussian") return MeasureKind::gaussian;
  if (name == "poisson") return MeasureKind::poisson;
  throw std::invalid_argument("unknown measure kind: '" + name + "'");
}

std::string measure_kind_name(MeasureKind kind) {
  return kind == MeasureKind::gaussian ? "gaussian" : "poisson";
}

double expected_diagonal(MeasureKind kind, int blocksize, double cell_mass) {
  if (blocksize < 1)
    throw std::invalid_argument("expected_diagonal: block size must be >= 1");
  if (!(cell_mass > 0.0))
    throw std::invalid_argument("expected_diagonal: mass must be positive");
  if (kind == MeasureKind::gaussian)
    return blocksize == 2 ? cell_mass : 0.0;
  return blocksize >= 2 ? cell_mass : 0.0;
}

double f_sigma_integral(const SetPartition& sigma, const std::vector<Kernel>& fs,
                        MeasureKind kind) {
  ProductContext ctx = make_context(kind, fs, false);
  if (sigma.ground_size() != ctx.n)
    throw std::invalid_argument(
        "f_sigma_integral: partition ground does not match total degree");
  return integral_over(ctx, sigma.blocks());
}

double joint_moment(MeasureKind kind, const std::vector<Kernel>& fs) {
  if (fs.empty()) return 1.0;
  return diagram_sum(kind, fs, false);
}

double joint_cumulant(MeasureKind kind, const std::vector<Kernel>& fs) {
  return diagram_sum(kind, fs, true);
}

ChaosDecomposition product_gaussian(const Kernel& f, const Kernel& g) {
  return binary_product(MeasureKind::gaussian, f, g, true);
}

ChaosDecomposition product_poisson(const Kernel& f, const Kernel& g) {
  return binary_product(MeasureKind::poisson, f, g, true);
}

ChaosDecomposition multiply_iterated(MeasureKind kind,
                                     const std::vector<Kernel>& fs) {
  make_context(kind, fs, true);  // shared-system and offdiag validation
  ChaosDecomposition acc(fs[0].system());
  acc.add_kernel(fs[0]);
  for (std::size_t j = 1; j < fs.size(); ++j) {
    ChaosDecomposition next(fs[0].system());
    if (acc.scalar() != 0.0) next.add_kernel(fs[j], acc.scalar());
    for (const auto& [order, kern] : acc.kernels()) {
      ChaosDecomposition sub = binary_product(kind, kern, fs[j], false);
      next.add_scalar(sub.scalar());
      for (const auto& [o2, k2] : sub.kernels()) next.add_kernel(k2);
    }
    acc = std::move(next);
  }
  acc.prune();
  return acc;
}

std::vector<SigmaTerm> product_general(MeasureKind kind,
                                       const std::vector<Kernel>& fs) {
  ProductContext ctx = make_context(kind, fs, true);
  std::vector<SigmaTerm> out;
  for_each_set_partition(ctx.n, [&](const SetPartition& sigma) {
    if (!meets_rows_trivially(ctx, sigma)) return true;
    SigmaTerm term{sigma, {}};
    if (kind == MeasureKind::gaussian)
      gaussian_pieces(ctx, sigma, term.pieces);
    else
      poisson_pieces(ctx, sigma, term.pieces);
    out.push_back(std::move(term));
    return true;
  });
  return out;
}

ChaosDecomposition flatten_terms(const CellSystem& system,
                                 const std::vector<SigmaTerm>& terms) {
  ChaosDecomposition out(system);
  for (const auto& term : terms)
    for (const auto& piece : term.pieces) out.add_raw(piece);
  out.prune();
  return out;
}

double projection_consistency(MeasureKind kind, const Kernel& f,
                              const Kernel& g, const Kernel& h) {
  const ChaosDecomposition decomp = binary_product(kind, f, g, true);
  const Kernel* part = decomp.kernel_at(h.degree());
  const double lhs =
      part == nullptr
          ? 0.0
          : static_cast<double>(factorial(h.degree())) * inner_product(*part, h);
  const double rhs = joint_moment(kind, {f, g, h});
  return std::abs(lhs - rhs);
}

double reference_moment(MeasureKind kind, const std::vector<Kernel>& fs) {
  make_context(kind, fs, true);  // shared-system and offdiag validation
  const CellSystem& sys = fs[0].system();
  const int m = sys.size();
  Poly prod = poly_constant(m, 1.0);
  for (const auto& f : fs) prod = poly_mul(prod, integral_poly(kind, f), m);
  double total = 0.0;
  for (const auto& [e, c] : prod) {
    double w = c;
    for (int cell = 0; cell < m && w != 0.0; ++cell)
      w *= cell_moment(kind, sys.mass(cell), e[cell]);
    total += w;
  }
  return total;
}

}  // namespace wic

#include "wic/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "wic/cumulants.hpp"
#include "wic/partitions.hpp"

namespace wic {

namespace {

constexpr int kMaxHermite = 30;
constexpr int kMaxCells = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void check_sample(const Kernel& f, const MeasureSample& sample) {
  if (static_cast<int>(sample.values.size()) != f.system().size())
    throw std::invalid_argument("sample does not match the cell system");
}

}  // namespace

double hermite_poly(int q, double x) {
  if (q < 0 || q > kMaxHermite)
    throw std::invalid_argument("hermite_poly: order out of range");
  double prev = 1.0;
  if (q == 0) return prev;
  double cur = x;
  for (int t = 1; t < q; ++t) {
    const double next = x * cur - t * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(splitmix64(seed ^ splitmix64(stream ^ 0x632be59bd9b4e019ull))) {}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(base_ + 0x9e3779b97f4a7c15ull * ++counter_);
}

double CounterRng::next_unit() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) *
         (1.0 / 9007199254740992.0);
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

long CounterRng::next_poisson(double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("next_poisson: lambda must be positive");
  if (lambda >= 30.0) {
    // thinning by halves keeps the Knuth loop short
    return next_poisson(lambda / 2.0) + next_poisson(lambda / 2.0);
  }
  const double limit = std::exp(-lambda);
  long k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= next_unit();
  } while (p > limit);
  return k - 1;
}

MeasureSample sample_measure(MeasureKind kind, const CellSystem& system,
                             std::uint64_t seed, std::uint64_t stream) {
  validate_system(system);
  CounterRng rng(seed, stream);
  MeasureSample s;
  s.kind = kind;
  s.seed = seed;
  s.stream = stream;
  s.values.reserve(system.masses.size());
  for (double mass : system.masses) {
    if (kind == MeasureKind::gaussian)
      s.values.push_back(std::sqrt(mass) * rng.next_gaussian());
    else
      s.values.push_back(static_cast<double>(rng.next_poisson(mass)) - mass);
  }
  return s;
}

double eval_offdiag(const Kernel& f, const MeasureSample& sample) {
  if (!f.offdiag())
    throw std::invalid_argument("eval_offdiag: kernel has diagonal support");
  check_sample(f, sample);
  const double perms = static_cast<double>(factorial(f.degree()));
  double total = 0.0;
  for (const auto& [tuple, c] : f.coeffs()) {
    double term = c;
    for (int cell : tuple) term *= sample.values[cell];
    total += term;
  }
  return perms * total;
}

double eval_gaussian_exact(const Kernel& f, const MeasureSample& sample) {
  if (sample.kind != MeasureKind::gaussian)
    throw std::invalid_argument("eval_gaussian_exact: needs a Gaussian sample");
  check_sample(f, sample);
  const int m = f.system().size();
  std::vector<double> x(m);
  for (int c = 0; c < m; ++c)
    x[c] = sample.values[c] / std::sqrt(f.system().mass(c));
  double total = 0.0;
  for (const auto& [alpha, c_alpha] : hermite_decompose(f)) {
    double term = c_alpha;
    for (int c = 0; c < m && term != 0.0; ++c)
      if (alpha[c] > 0) term *= hermite_poly(alpha[c], x[c]);
    total += term;
  }
  return total;
}

double eval_decomposition(const ChaosDecomposition& d,
                          const MeasureSample& sample) {
  double total = d.scalar();
  for (const auto& [order, kern] : d.kernels()) {
    if (sample.kind == MeasureKind::gaussian)
      total += eval_gaussian_exact(kern, sample);
    else
      total += eval_offdiag(restrict_offdiag(kern), sample);
  }
  return total;
}

Refinement refine(const CellSystem& base, int factor) {
  validate_system(base);
  if (factor < 1) throw std::invalid_argument("refine: factor must be >= 1");
  if (base.size() * static_cast<long>(factor) > kMaxCells)
    throw std::invalid_argument("refine: too many subcells");
  Refinement r;
  r.base = base;
  r.factor = factor;
  if (factor == 1) {
    r.fine = base;
    return r;
  }
  for (int c = 0; c < base.size(); ++c)
    for (int i = 0; i < factor; ++i) {
      r.fine.labels.push_back(base.labels[c] + "." + std::to_string(i + 1));
      r.fine.masses.push_back(base.mass(c) / factor);
    }
  return r;
}

Kernel lift_kernel(const Kernel& f, const Refinement& r) {
  if (!(f.system() == r.base))
    throw std::invalid_argument("lift_kernel: kernel not on the base system");
  if (r.factor == 1) return Kernel(r.fine, f.degree(), f.coeffs());

  std::map<std::vector<int>, double> out;
  for (const auto& [tuple, value] : f.coeffs()) {
    // runs of equal base cells expand to non-decreasing subcell tuples
    std::vector<std::pair<int, int>> runs;  // (base cell, length)
    for (int cell : tuple) {
      if (!runs.empty() && runs.back().first == cell)
        ++runs.back().second;
      else
        runs.emplace_back(cell, 1);
    }
    std::vector<std::vector<int>> choice(runs.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == runs.size()) {
        std::vector<int> fine_tuple;
        fine_tuple.reserve(tuple.size());
        for (std::size_t t = 0; t < runs.size(); ++t)
          for (int sub : choice[t])
            fine_tuple.push_back(runs[t].first * r.factor + sub);
        out[fine_tuple] = value;
        return;
      }
      std::vector<int> subs(runs[i].second, 0);
      for (;;) {
        choice[i] = subs;
        self(self, i + 1);
        int pos = static_cast<int>(subs.size()) - 1;
        while (pos >= 0 && subs[pos] == r.factor - 1) --pos;
        if (pos < 0) break;
        const int v = subs[pos] + 1;
        for (std::size_t t = pos; t < subs.size(); ++t) subs[t] = v;
      }
    };
    rec(rec, 0);
  }
  return Kernel(r.fine, f.degree(), std::move(out));
}

namespace {

// Dense symmetric matrix of a degree-2 kernel (zero diagonal when offdiag).
std::vector<double> dense2(const Kernel& f) {
  const int m = f.system().size();
  std::vector<double> d(static_cast<std::size_t>(m) * m, 0.0);
  for (const auto& [t, c] : f.coeffs()) {
    d[static_cast<std::size_t>(t[0]) * m + t[1]] = c;
    d[static_cast<std::size_t>(t[1]) * m + t[0]] = c;
  }
  return d;
}

std::vector<double> dense1(const Kernel& f) {
  std::vector<double> d(f.system().size(), 0.0);
  for (const auto& [t, c] : f.coeffs()) d[t[0]] = c;
  return d;
}

}  // namespace

double poisson_product_residual(const Kernel& f, const Kernel& g,
                                const MeasureSample& sample) {
  if (sample.kind != MeasureKind::poisson)
    throw std::invalid_argument("poisson_product_residual: needs a Poisson sample");
  if (!(f.system() == g.system()))
    throw std::invalid_argument("kernels live on different cell systems");
  if (!f.offdiag() || !g.offdiag())
    throw std::invalid_argument("poisson product needs off-diagonal kernels");
  const int p = f.degree(), q = g.degree();
  if (p < 1 || p > 2 || q < 1 || q > 2)
    throw std::invalid_argument("poisson_product_residual: degrees must be 1 or 2");
  if (p < q) return poisson_product_residual(g, f, sample);
  check_sample(f, sample);

  const int m = f.system().size();
  const std::vector<double>& phi = sample.values;
  std::vector<double> nu(m);
  for (int c = 0; c < m; ++c) nu[c] = f.system().mass(c);

  if (p == 1) {  // q == 1
    const std::vector<double> fv = dense1(f), gv = dense1(g);
    double i_f = 0.0, i_g = 0.0, cross_phi2 = 0.0, cross_phi = 0.0, ip = 0.0;
    for (int c = 0; c < m; ++c) {
      i_f += fv[c] * phi[c];
      i_g += gv[c] * phi[c];
      cross_phi2 += fv[c] * gv[c] * phi[c] * phi[c];
      cross_phi += fv[c] * gv[c] * phi[c];
      ip += fv[c] * gv[c] * nu[c];
    }
    const double rhs = (i_f * i_g - cross_phi2) + cross_phi + ip;
    return i_f * i_g - rhs;
  }

  const std::vector<double> fd = dense2(f);
  auto fm = [&](int a, int b) { return fd[static_cast<std::size_t>(a) * m + b]; };

  if (q == 1) {  // p == 2
    const std::vector<double> gv = dense1(g);
    std::vector<double> row_f(m, 0.0);  // sum_b f(a,b) phi_b
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) row_f[a] += fm(a, b) * phi[b];
    double i_f = 0.0, i_g = 0.0;
    for (int a = 0; a < m; ++a) {
      i_f += phi[a] * row_f[a];
      i_g += gv[a] * phi[a];
    }
    double s_cross = 0.0, t10 = 0.0, t11 = 0.0;
    for (int a = 0; a < m; ++a) {
      s_cross += phi[a] * phi[a] * row_f[a] * gv[a];
      t10 += gv[a] * phi[a] * row_f[a];
    }
    for (int t = 0; t < m; ++t) {
      double h = 0.0;
      for (int z = 0; z < m; ++z) h += fm(z, t) * gv[z] * nu[z];
      t11 += h * phi[t];
    }
    const double t00 = i_f * i_g - 2.0 * s_cross;
    const double rhs = t00 + 2.0 * t10 + 2.0 * t11;
    return i_f * i_g - rhs;
  }

  // p == q == 2
  const std::vector<double> gd = dense2(g);
  auto gm = [&](int a, int b) { return gd[static_cast<std::size_t>(a) * m + b]; };
  std::vector<double> row_f(m, 0.0), row_g(m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      row_f[a] += fm(a, b) * phi[b];
      row_g[a] += gm(a, b) * phi[b];
    }
  double i_f = 0.0, i_g = 0.0, s_cross = 0.0;
  for (int a = 0; a < m; ++a) {
    i_f += phi[a] * row_f[a];
    i_g += phi[a] * row_g[a];
    s_cross += phi[a] * phi[a] * row_f[a] * row_g[a];
  }
  double s_pair = 0.0, t20 = 0.0, ip = 0.0, t10 = 0.0, t21 = 0.0;
  for (int a = 0; a < m; ++a) {
    double h21 = 0.0;
    for (int b = 0; b < m; ++b) {
      const double fg = fm(a, b) * gm(a, b);
      s_pair += fg * phi[a] * phi[a] * phi[b] * phi[b];
      t20 += fg * phi[a] * phi[b];
      ip += fg * nu[a] * nu[b];
      h21 += fg * nu[b];
    }
    t21 += h21 * phi[a];
    t10 += phi[a] * row_f[a] * row_g[a];
  }
  // t10 so far is the unrestricted sum; remove the t = s pattern
  double s_ts = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      s_ts += fm(a, b) * gm(a, b) * phi[a] * phi[b] * phi[b];
  t10 -= s_ts;
  // t11 from the contracted matrix k(t, s) = sum_z f(z,t) g(z,s) nu_z
  double t11_full = 0.0, t11_diag = 0.0;
  {
    std::vector<double> fnu_phi(m, 0.0), gnu_phi(m, 0.0);
    for (int z = 0; z < m; ++z) {
      double af = 0.0, ag = 0.0;
      for (int t = 0; t < m; ++t) {
        af += fm(z, t) * phi[t];
        ag += gm(z, t) * phi[t];
      }
      t11_full += nu[z] * af * ag;
      double diag = 0.0;
      for (int t = 0; t < m; ++t) diag += fm(z, t) * gm(z, t) * phi[t] * phi[t];
      t11_diag += nu[z] * diag;
    }
  }
  const double t11 = t11_full - t11_diag;
  const double t00 = i_f * i_g - 4.0 * s_cross + 2.0 * s_pair;
  const double rhs =
      t00 + 4.0 * t10 + 4.0 * t11 + 2.0 * t20 + 4.0 * t21 + 2.0 * ip;
  return i_f * i_g - rhs;
}

namespace {

// Precomputed pathwise evaluator: term list for off-diagonal kernels,
// Hermite coordinates otherwise (Gaussian only).
struct PathEvaluator {
  bool use_offdiag = true;
  std::vector<std::pair<std::vector<int>, double>> terms;  // tuple, d! coeff
  std::vector<std::pair<std::vector<int>, double>> hermite;  // alpha, c_alpha
  std::vector<double> inv_sqrt_mass;

  static PathEvaluator build(MeasureKind kind, const Kernel& f) {
    PathEvaluator e;
    if (f.offdiag()) {
      const double perms = static_cast<double>(factorial(f.degree()));
      for (const auto& [tuple, c] : f.coeffs())
        e.terms.emplace_back(tuple, c * perms);
      return e;
    }
    if (kind == MeasureKind::poisson)
      throw std::invalid_argument(
          "poisson simulation needs off-diagonal kernels");
    e.use_offdiag = false;
    for (const auto& [alpha, c] : hermite_decompose(f))
      e.hermite.emplace_back(alpha, c);
    for (double mass : f.system().masses)
      e.inv_sqrt_mass.push_back(1.0 / std::sqrt(mass));
    return e;
  }

  double operator()(const std::vector<double>& phi) const {
    double total = 0.0;
    if (use_offdiag) {
      for (const auto& [tuple, c] : terms) {
        double term = c;
        for (int cell : tuple) term *= phi[cell];
        total += term;
      }
      return total;
    }
    for (const auto& [alpha, c] : hermite) {
      double term = c;
      for (std::size_t cell = 0; cell < alpha.size() && term != 0.0; ++cell)
        if (alpha[cell] > 0)
          term *= hermite_poly(alpha[cell], phi[cell] * inv_sqrt_mass[cell]);
      total += term;
    }
    return total;
  }
};

double table_cumulant(int k, const std::vector<double>& sums, double scale) {
  SubsetTable moments = SubsetTable::zeros(k);
  for (unsigned mask = 1; mask < (1u << k); ++mask)
    moments.at(mask) = sums[mask] * scale;
  const SubsetTable cums = cumulants_from_moments(moments);
  return cums.at((1u << k) - 1);
}

}  // namespace

EmpiricalReport estimate_moments(MeasureKind kind,
                                 const std::vector<Kernel>& fs,
                                 std::uint64_t n_samples, std::uint64_t seed) {
  if (fs.empty()) throw std::invalid_argument("need at least one kernel");
  if (n_samples == 0) throw std::invalid_argument("need at least one sample");
  const int k = static_cast<int>(fs.size());
  if (k > 10) throw std::invalid_argument("too many factors");
  for (const auto& f : fs)
    if (!(f.system() == fs[0].system()))
      throw std::invalid_argument("kernels live on different cell systems");

  std::vector<PathEvaluator> evals;
  evals.reserve(fs.size());
  for (const auto& f : fs) evals.push_back(PathEvaluator::build(kind, f));

  const unsigned full = (1u << k) - 1;
  const std::uint64_t batches =
      n_samples < 100 ? n_samples : std::uint64_t{100};
  std::vector<double> global(full + 1, 0.0);
  std::vector<std::vector<double>> batch(batches,
                                         std::vector<double>(full + 1, 0.0));
  std::vector<std::uint64_t> batch_count(batches, 0);

  std::vector<double> vals(k), prods(full + 1);
  prods[0] = 1.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const MeasureSample s = sample_measure(kind, fs[0].system(), seed, i);
    for (int j = 0; j < k; ++j) vals[j] = evals[j](s.values);
    for (unsigned mask = 1; mask <= full; ++mask) {
      const unsigned low = mask & (mask - 1);
      const int j = std::countr_zero(mask);
      prods[mask] = prods[low] * vals[j];
    }
    const std::size_t b = i % batches;
    ++batch_count[b];
    for (unsigned mask = 1; mask <= full; ++mask) {
      global[mask] += prods[mask];
      batch[b][mask] += prods[mask];
    }
  }

  auto batch_se = [&](auto&& value_of) {
    if (batches < 2) return 0.0;
    std::vector<double> vs;
    vs.reserve(batches);
    for (std::size_t b = 0; b < batches; ++b)
      if (batch_count[b] > 0) vs.push_back(value_of(b));
    double mean = 0.0;
    for (double v : vs) mean += v;
    mean /= static_cast<double>(vs.size());
    double var = 0.0;
    for (double v : vs) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vs.size() - 1);
    return std::sqrt(var / static_cast<double>(vs.size()));
  };

  EmpiricalReport report;
  report.n_samples = n_samples;
  report.seed = seed;

  EstimateEntry moment;
  moment.name = "moment";
  moment.value = global[full] / static_cast<double>(n_samples);
  moment.std_error = batch_se([&](std::size_t b) {
    return batch[b][full] / static_cast<double>(batch_count[b]);
  });
  moment.exact = joint_moment(kind, fs);
  report.entries.push_back(std::move(moment));

  EstimateEntry cumulant;
  cumulant.name = "cumulant";
  cumulant.value = table_cumulant(k, global, 1.0 / static_cast<double>(n_samples));
  cumulant.std_error = batch_se([&](std::size_t b) {
    return table_cumulant(k, batch[b], 1.0 / static_cast<double>(batch_count[b]));
  });
  cumulant.exact = joint_cumulant(kind, fs);
  report.entries.push_back(std::move(cumulant));

  return report;
}

std::complex<double> log_cf_first_order(MeasureKind kind, const Kernel& h,
                                        double lambda) {
  if (h.degree() != 1)
    throw std::invalid_argument("log_cf_first_order: kernel must have degree 1");
  const int m = h.system().size();
  if (kind == MeasureKind::gaussian) {
    double s = 0.0;
    for (int c = 0; c < m; ++c) {
      const double v = h.at({c});
      s += v * v * h.system().mass(c);
    }
    return {-0.5 * lambda * lambda * s, 0.0};
  }
  std::complex<double> total = 0.0;
  const std::complex<double> iu(0.0, 1.0);
  for (int c = 0; c < m; ++c) {
    const double v = h.at({c});
    total += (std::exp(iu * (lambda * v)) - 1.0 - iu * (lambda * v)) *
             h.system().mass(c);
  }
  return total;
}

}  // namespace wic

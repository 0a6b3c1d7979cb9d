#include "wic/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wic/partitions.hpp"

namespace wic {

namespace {

// d! / prod(multiplicities!) as a double: the number of distinct orderings
// of a sorted tuple.
double orderings_count(const std::vector<int>& sorted) {
  double count = 1.0;
  int pos = 1;      // position within the tuple, 1-based
  int run = 1;      // length of the current equal-cell run
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    ++pos;
    run = sorted[i] == sorted[i - 1] ? run + 1 : 1;
    count *= static_cast<double>(pos) / run;
  }
  return count;
}

void check_tuple(const std::vector<int>& tuple, int degree, int cells,
                 bool sorted_required) {
  if (static_cast<int>(tuple.size()) != degree)
    throw std::invalid_argument("kernel: tuple length does not match degree");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 0 || tuple[i] >= cells)
      throw std::invalid_argument("kernel: cell index out of range");
    if (sorted_required && i > 0 && tuple[i] < tuple[i - 1])
      throw std::invalid_argument("kernel: tuple not sorted");
  }
}

bool has_repeat(const std::vector<int>& sorted) {
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) return true;
  return false;
}

void check_same_system(const Kernel& f, const Kernel& g) {
  if (!(f.system() == g.system()))
    throw std::invalid_argument("kernels live on different cell systems");
}

}  // namespace

CellSystem CellSystem::uniform(int cells, double mass,
                               const std::string& prefix) {
  if (cells < 1) throw std::invalid_argument("cell system: need a cell");
  if (!(mass > 0.0)) throw std::invalid_argument("cell system: mass must be positive");
  CellSystem s;
  for (int i = 0; i < cells; ++i) {
    s.labels.push_back(prefix + std::to_string(i + 1));
    s.masses.push_back(mass);
  }
  return s;
}

int CellSystem::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

void validate_system(const CellSystem& system) {
  if (system.labels.size() != system.masses.size() || system.masses.empty())
    throw std::invalid_argument("cell system: labels and masses mismatch");
  for (double m : system.masses)
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::invalid_argument("cell system: masses must be positive");
  for (std::size_t i = 0; i < system.labels.size(); ++i) {
    if (system.labels[i].empty())
      throw std::invalid_argument("cell system: empty label");
    for (std::size_t j = 0; j < i; ++j)
      if (system.labels[i] == system.labels[j])
        throw std::invalid_argument("cell system: duplicate label");
  }
}

double RawKernel::at(const std::vector<int>& tuple) const {
  auto it = coeffs.find(tuple);
  return it == coeffs.end() ? 0.0 : it->second;
}

double raw_norm_squared(const CellSystem& system, const RawKernel& raw) {
  double total = 0.0;
  for (const auto& [tuple, value] : raw.coeffs) {
    double w = value * value;
    for (int c : tuple) w *= system.mass(c);
    total += w;
  }
  return total;
}

Kernel::Kernel(CellSystem system, int degree,
               std::map<std::vector<int>, double> sorted_coeffs)
    : system_(std::move(system)), degree_(degree) {
  validate_system(system_);
  if (degree_ < 1 || degree_ > 20)
    throw std::invalid_argument("kernel: degree out of range");
  for (const auto& [tuple, value] : sorted_coeffs) {
    check_tuple(tuple, degree_, system_.size(), true);
    if (!std::isfinite(value))
      throw std::invalid_argument("kernel: non-finite coefficient");
    if (value == 0.0) continue;
    if (has_repeat(tuple)) offdiag_ = false;
    coeffs_.emplace(tuple, value);
  }
}

Kernel Kernel::zero(CellSystem system, int degree) {
  return Kernel(std::move(system), degree, {});
}

double Kernel::at(std::vector<int> tuple) const {
  check_tuple(tuple, degree_, system_.size(), false);
  std::sort(tuple.begin(), tuple.end());
  auto it = coeffs_.find(tuple);
  return it == coeffs_.end() ? 0.0 : it->second;
}

Kernel symmetrize(const CellSystem& system, const RawKernel& raw) {
  if (raw.degree < 1) throw std::invalid_argument("symmetrize: degree must be >= 1");
  std::map<std::vector<int>, double> out;
  for (const auto& [tuple, value] : raw.coeffs) {
    check_tuple(tuple, raw.degree, system.size(), false);
    std::vector<int> sorted = tuple;
    std::sort(sorted.begin(), sorted.end());
    out[sorted] += value / orderings_count(sorted);
  }
  return Kernel(system, raw.degree, std::move(out));
}

RawKernel tensor0(const Kernel& f, const Kernel& g) {
  check_same_system(f, g);
  RawKernel out;
  out.degree = f.degree() + g.degree();
  for (const auto& [tf, cf] : f.coeffs()) {
    std::vector<int> uf = tf;
    do {
      for (const auto& [tg, cg] : g.coeffs()) {
        std::vector<int> ug = tg;
        do {
          std::vector<int> joined = uf;
          joined.insert(joined.end(), ug.begin(), ug.end());
          out.coeffs[joined] = cf * cg;
        } while (std::next_permutation(ug.begin(), ug.end()));
      }
    } while (std::next_permutation(uf.begin(), uf.end()));
  }
  return out;
}

RawKernel contract(const Kernel& f, const Kernel& g, int r, int l) {
  check_same_system(f, g);
  const int p = f.degree(), q = g.degree();
  if (l < 0 || r < l || r > std::min(p, q))
    throw std::invalid_argument("contract: need 0 <= l <= r <= min(p, q)");
  const int m = f.system().size();
  const int shared = r - l, keep_f = p - r, keep_g = q - r;
  const int out_deg = shared + keep_f + keep_g;

  RawKernel out;
  out.degree = out_deg;
  std::vector<int> tuple(out_deg, 0);
  std::vector<int> z(l, 0);
  std::vector<int> arg_f(p), arg_g(q);
  for (;;) {
    double total = 0.0;
    for (;;) {
      for (int i = 0; i < l; ++i) arg_f[i] = arg_g[i] = z[i];
      for (int i = 0; i < shared; ++i) arg_f[l + i] = arg_g[l + i] = tuple[i];
      for (int i = 0; i < keep_f; ++i) arg_f[r + i] = tuple[shared + i];
      for (int i = 0; i < keep_g; ++i) arg_g[r + i] = tuple[shared + keep_f + i];
      double term = f.at(arg_f);
      if (term != 0.0) {
        term *= g.at(arg_g);
        for (int i = 0; i < l; ++i) term *= f.system().mass(z[i]);
        total += term;
      }
      int pos = l - 1;
      while (pos >= 0 && ++z[pos] == m) z[pos--] = 0;
      if (pos < 0) break;
    }
    if (total != 0.0) out.coeffs[tuple] = total;
    if (out_deg == 0) break;
    int pos = out_deg - 1;
    while (pos >= 0 && ++tuple[pos] == m) tuple[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

double inner_product(const Kernel& f, const Kernel& g) {
  check_same_system(f, g);
  if (f.degree() != g.degree())
    throw std::invalid_argument("inner_product: degrees differ");
  double total = 0.0;
  for (const auto& [tuple, cf] : f.coeffs()) {
    auto it = g.coeffs().find(tuple);
    if (it == g.coeffs().end()) continue;
    double w = cf * it->second * orderings_count(tuple);
    for (int c : tuple) w *= f.system().mass(c);
    total += w;
  }
  return total;
}

double norm(const Kernel& f) { return std::sqrt(inner_product(f, f)); }

Kernel scale(const Kernel& f, double factor) {
  std::map<std::vector<int>, double> out;
  for (const auto& [tuple, value] : f.coeffs()) out[tuple] = value * factor;
  return Kernel(f.system(), f.degree(), std::move(out));
}

Kernel add(const Kernel& f, const Kernel& g) {
  check_same_system(f, g);
  if (f.degree() != g.degree())
    throw std::invalid_argument("add: degrees differ");
  std::map<std::vector<int>, double> out = f.coeffs();
  for (const auto& [tuple, value] : g.coeffs()) out[tuple] += value;
  return Kernel(f.system(), f.degree(), std::move(out));
}

Kernel restrict_offdiag(const Kernel& f) {
  std::map<std::vector<int>, double> out;
  for (const auto& [tuple, value] : f.coeffs())
    if (!has_repeat(tuple)) out.emplace(tuple, value);
  return Kernel(f.system(), f.degree(), std::move(out));
}

std::map<std::vector<int>, double> hermite_decompose(const Kernel& f) {
  const int m = f.system().size();
  std::map<std::vector<int>, double> out;
  for (const auto& [tuple, value] : f.coeffs()) {
    std::vector<int> alpha(m, 0);
    double scale = orderings_count(tuple);
    for (int c : tuple) {
      ++alpha[c];
      scale *= std::sqrt(f.system().mass(c));
    }
    out[alpha] = value * scale;
  }
  return out;
}

Kernel hermite_basis_kernel(const CellSystem& system,
                            const std::vector<int>& alpha) {
  validate_system(system);
  if (static_cast<int>(alpha.size()) != system.size())
    throw std::invalid_argument("hermite basis: multi-index length mismatch");
  std::vector<int> tuple;
  double scale = 1.0;
  for (int c = 0; c < system.size(); ++c) {
    if (alpha[c] < 0) throw std::invalid_argument("hermite basis: negative index");
    for (int t = 0; t < alpha[c]; ++t) {
      tuple.push_back(c);
      scale /= std::sqrt(system.mass(c));
    }
  }
  if (tuple.empty()) throw std::invalid_argument("hermite basis: degree 0");
  scale /= orderings_count(tuple);
  std::map<std::vector<int>, double> coeffs;
  coeffs.emplace(tuple, scale);
  return Kernel(system, static_cast<int>(tuple.size()), std::move(coeffs));
}

ChaosDecomposition::ChaosDecomposition(CellSystem system)
    : system_(std::move(system)) {
  validate_system(system_);
}

void ChaosDecomposition::add_kernel(const Kernel& k, double weight) {
  if (!(k.system() == system_))
    throw std::invalid_argument("decomposition: kernel on a different system");
  const Kernel scaled = weight == 1.0 ? k : scale(k, weight);
  auto it = kernels_.find(k.degree());
  if (it == kernels_.end())
    kernels_.emplace(k.degree(), scaled);
  else
    it->second = add(it->second, scaled);
}

void ChaosDecomposition::add_raw(const RawKernel& raw, double weight) {
  if (raw.degree == 0) {
    scalar_ += weight * raw.at({});
    return;
  }
  add_kernel(symmetrize(system_, raw), weight);
}

const Kernel* ChaosDecomposition::kernel_at(int order) const {
  auto it = kernels_.find(order);
  return it == kernels_.end() ? nullptr : &it->second;
}

void ChaosDecomposition::prune(double tol) {
  for (auto it = kernels_.begin(); it != kernels_.end();) {
    bool keep = false;
    for (const auto& [tuple, value] : it->second.coeffs())
      if (std::abs(value) > tol) { keep = true; break; }
    it = keep ? std::next(it) : kernels_.erase(it);
  }
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument("bad number: '" + text + "'");
  return value;
}

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

int parse_int_token(const std::string& text) {
  int value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("bad integer: '" + text + "'");
  return value;
}

}  // namespace

Kernel parse_kernel(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    auto tokens = tokenize_line(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    rows.push_back(std::move(tokens));
  }
  std::size_t at = 0;
  auto need = [&](const char* what) -> const std::vector<std::string>& {
    if (at >= rows.size())
      throw std::invalid_argument(std::string("kernel file: missing ") + what);
    return rows[at++];
  };

  const auto& head = need("cells header");
  if (head.size() != 2 || head[0] != "cells")
    throw std::invalid_argument("kernel file: expected 'cells <m>'");
  const int m = parse_int_token(head[1]);
  if (m < 1) throw std::invalid_argument("kernel file: need at least one cell");

  CellSystem system;
  for (int i = 0; i < m; ++i) {
    const auto& row = need("cell line");
    if (row.size() != 2)
      throw std::invalid_argument("kernel file: expected '<label> <mass>'");
    system.labels.push_back(row[0]);
    system.masses.push_back(parse_double(row[1]));
  }
  validate_system(system);

  const auto& deg = need("degree line");
  if (deg.size() != 2 || deg[0] != "degree")
    throw std::invalid_argument("kernel file: expected 'degree <d>'");
  const int d = parse_int_token(deg[1]);

  const auto& od = need("offdiag line");
  if (od.size() != 2 || od[0] != "offdiag" ||
      (od[1] != "true" && od[1] != "false"))
    throw std::invalid_argument("kernel file: expected 'offdiag <true|false>'");
  const bool declared_offdiag = od[1] == "true";

  std::map<std::vector<int>, double> coeffs;
  while (at < rows.size()) {
    const auto& row = rows[at++];
    if (row[0] != "coeff" || static_cast<int>(row.size()) != d + 2)
      throw std::invalid_argument("kernel file: expected 'coeff <cells...> <value>'");
    std::vector<int> tuple;
    for (int i = 0; i < d; ++i) {
      int cell = parse_int_token(row[1 + i]);
      if (cell < 1 || cell > m)
        throw std::invalid_argument("kernel file: cell index out of range");
      tuple.push_back(cell - 1);
    }
    std::sort(tuple.begin(), tuple.end());
    double value = parse_double(row.back());
    if (coeffs.count(tuple))
      throw std::invalid_argument("kernel file: duplicate tuple");
    coeffs.emplace(std::move(tuple), value);
  }

  Kernel k(std::move(system), d, std::move(coeffs));
  if (declared_offdiag && !k.offdiag())
    throw std::invalid_argument(
        "kernel file: declared offdiag but a tuple repeats a cell");
  return k;
}

std::string serialize_kernel(const Kernel& f) {
  std::string out = "cells " + std::to_string(f.system().size()) + "\n";
  for (int c = 0; c < f.system().size(); ++c)
    out += f.system().labels[c] + " " + format_double(f.system().mass(c)) + "\n";
  out += "degree " + std::to_string(f.degree()) + "\n";
  out += std::string("offdiag ") + (f.offdiag() ? "true" : "false") + "\n";
  for (const auto& [tuple, value] : f.coeffs()) {
    out += "coeff";
    for (int c : tuple) out += " " + std::to_string(c + 1);
    out += " " + format_double(value) + "\n";
  }
  return out;
}

Kernel load_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open kernel file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kernel(buf.str());
}

}  // namespace wic

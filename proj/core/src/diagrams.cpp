#include "wic/diagrams.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace wic {

Diagram::Diagram(SetPartition rows_, SetPartition edges_)
    : rows(std::move(rows_)), edges(std::move(edges_)) {
  if (rows.ground_size() != edges.ground_size())
    throw std::invalid_argument("diagram partitions have different ground sizes");
}

namespace {

bool all_blocks_size(const SetPartition& p, int size) {
  for (const auto& b : p.blocks())
    if (static_cast<int>(b.size()) != size) return false;
  return true;
}

bool min_block_size(const SetPartition& p, int size) {
  for (const auto& b : p.blocks())
    if (static_cast<int>(b.size()) < size) return false;
  return true;
}

// Circularity on the row multigraph: no loops, every cyclically consecutive
// row pair is linked, and nothing else is.
bool circular_from_multigraph(const Multigraph& g) {
  int k = g.vertex_count;
  if (k < 2 || g.edges.empty()) return false;
  std::vector<char> consecutive_hit(k, 0);
  for (const auto& [a, b] : g.edges) {
    if (a == b) return false;
    int gap = b - a;
    if (gap == 1 || gap == k - 1) {
      consecutive_hit[a == 0 && b == k - 1 ? k - 1 : a] = 1;
    } else {
      return false;
    }
  }
  if (k == 2) return true;  // a single consecutive pair, already linked
  for (char hit : consecutive_hit)
    if (!hit) return false;
  return true;
}

}  // namespace

DiagramFlags classify(const Diagram& d) {
  DiagramFlags f;
  f.connected = join(d.rows, d.edges).is_one();
  f.nonflat = meet(d.rows, d.edges).is_zero();
  f.gaussian = all_blocks_size(d.edges, 2);
  f.circular = f.gaussian && circular_from_multigraph(to_multigraph(d));
  return f;
}

bool Multigraph::connected() const {
  if (vertex_count <= 1) return true;
  std::vector<int> parent(vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : edges) parent[find(a)] = find(b);
  int root = find(0);
  for (int v = 1; v < vertex_count; ++v)
    if (find(v) != root) return false;
  return true;
}

bool Multigraph::has_loops() const {
  for (const auto& [a, b] : edges)
    if (a == b) return true;
  return false;
}

std::vector<int> Multigraph::degrees() const {
  std::vector<int> deg(vertex_count, 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

Multigraph to_multigraph(const Diagram& d) {
  if (!all_blocks_size(d.edges, 2))
    throw std::invalid_argument("to_multigraph requires two-element edge blocks");
  Multigraph g;
  g.vertex_count = d.rows.block_count();
  for (const auto& b : d.edges.blocks()) {
    int u = d.rows.block_of(b[0]);
    int v = d.rows.block_of(b[1]);
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<SetPartition> solve_nonflat(const SetPartition& pi) {
  std::vector<SetPartition> out;
  for_each_set_partition(pi.ground_size(), [&](const SetPartition& sigma) {
    if (meet(sigma, pi).is_zero()) out.push_back(sigma);
  });
  return out;
}

PartitionClass parse_partition_class(const std::string& name) {
  if (name == "M") return PartitionClass::M;
  if (name == "M0") return PartitionClass::M0;
  if (name == "M2") return PartitionClass::M2;
  if (name == "M2_0") return PartitionClass::M2_0;
  if (name == "Mge2") return PartitionClass::Mge2;
  if (name == "Mge2_0") return PartitionClass::Mge2_0;
  if (name == "M2c") return PartitionClass::M2c;
  throw std::invalid_argument("unknown partition class: " + name);
}

std::string partition_class_name(PartitionClass which) {
  switch (which) {
    case PartitionClass::M: return "M";
    case PartitionClass::M0: return "M0";
    case PartitionClass::M2: return "M2";
    case PartitionClass::M2_0: return "M2_0";
    case PartitionClass::Mge2: return "Mge2";
    case PartitionClass::Mge2_0: return "Mge2_0";
    case PartitionClass::M2c: return "M2c";
  }
  throw std::invalid_argument("unknown partition class");
}

std::vector<SetPartition> enumerate_class(int n, const SetPartition& pi_star,
                                          PartitionClass which) {
  if (pi_star.ground_size() != n)
    throw std::invalid_argument("pi_star does not partition [n]");
  if (n > 12)
    throw enumeration_cap_error("class enumeration is capped at ground size 12");

  bool need_gaussian = which == PartitionClass::M2 || which == PartitionClass::M2_0 ||
                       which == PartitionClass::M2c;
  bool need_ge2 = which == PartitionClass::Mge2 || which == PartitionClass::Mge2_0;
  bool need_connected = which == PartitionClass::M || which == PartitionClass::M2 ||
                        which == PartitionClass::Mge2 || which == PartitionClass::M2c;

  std::vector<SetPartition> out;
  auto visit = [&](const SetPartition& sigma) {
    if (need_gaussian && !all_blocks_size(sigma, 2)) return;
    if (need_ge2 && !min_block_size(sigma, 2)) return;
    if (!meet(sigma, pi_star).is_zero()) return;
    if (need_connected && !join(sigma, pi_star).is_one()) return;
    if (which == PartitionClass::M2c &&
        !circular_from_multigraph(to_multigraph(Diagram(pi_star, sigma))))
      return;
    out.push_back(sigma);
  };
  if (need_gaussian)
    for_each_set_partition_max_block(n, 2, visit);
  else
    for_each_set_partition(n, visit);
  return out;
}

PoissonBlockSplit poisson_split(const SetPartition& sigma) {
  PoissonBlockSplit split;
  for (const auto& b : sigma.blocks()) {
    if (b.size() == 1)
      split.b1.push_back(b);
    else
      split.b2.push_back(b);
  }
  int m = static_cast<int>(split.b2.size());
  if (m >= 1) {
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
      std::vector<int> r1, r2;
      for (int i = 0; i < m; ++i)
        (mask >> i & 1u ? r1 : r2).push_back(i);
      split.pb2.emplace_back(std::move(r1), std::move(r2));
    }
  }
  return split;
}

int circular_rank(const SetPartition& pi_star, const SetPartition& sigma) {
  if (pi_star.block_count() != 4)
    throw std::invalid_argument("circular_rank requires exactly four rows");
  std::size_t d = pi_star.blocks().front().size();
  for (const auto& b : pi_star.blocks())
    if (b.size() != d) throw std::invalid_argument("circular_rank requires equal-size rows");
  Diagram diagram(pi_star, sigma);
  if (!classify(diagram).circular)
    throw std::invalid_argument("sigma is not circular against the given rows");
  int r = 0;
  for (const auto& b : sigma.blocks()) {
    int u = pi_star.block_of(b[0]);
    int v = pi_star.block_of(b[1]);
    if (std::min(u, v) == 0 && std::max(u, v) == 1) ++r;
  }
  return r;
}

std::string render_diagram(const Diagram& d) {
  auto label = [&](int block) {
    if (d.edges.block_count() <= 26) return std::string(1, static_cast<char>('a' + block));
    return std::to_string(block);
  };
  std::ostringstream out;
  for (int j = 0; j < d.rows.block_count(); ++j) {
    out << "row " << j + 1 << ":";
    for (int e : d.rows.blocks()[j]) out << ' ' << e << '(' << label(d.edges.block_of(e)) << ')';
    out << '\n';
  }
  return out.str();
}

}  // namespace wic

#include "wic/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace wic {

namespace {

int initial_cap() {
  if (const char* env = std::getenv("WIC_ENUM_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 20) return static_cast<int>(v);
  }
  return 13;
}

int& cap_ref() {
  static int cap = initial_cap();
  return cap;
}

void check_cap(int n) {
  if (n < 1) throw std::invalid_argument("ground size must be positive");
  if (n > cap_ref())
    throw enumeration_cap_error("ground size " + std::to_string(n) +
                                " exceeds enumeration cap " + std::to_string(cap_ref()));
}

}  // namespace

int enumeration_cap() { return cap_ref(); }

void set_enumeration_cap(int cap) {
  if (cap < 1 || cap > 20) throw std::invalid_argument("enumeration cap out of range");
  cap_ref() = cap;
}

std::int64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial argument out of range");
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::int64_t bell_number(int n) {
  if (n < 0 || n > 25) throw std::invalid_argument("bell_number argument out of range");
  // Bell triangle.
  std::vector<std::int64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::int64_t> next(i + 1);
    next[0] = row.back();
    for (int j = 0; j < i; ++j) next[j + 1] = next[j] + row[j];
    row = std::move(next);
  }
  return row[0];
}

IntegerPartition IntegerPartition::from_parts(int n, std::vector<int> parts) {
  std::sort(parts.begin(), parts.end(), std::greater<int>());
  std::int64_t sum = 0;
  for (int p : parts) {
    if (p < 1) throw std::invalid_argument("integer partition parts must be positive");
    sum += p;
  }
  if (sum != n) throw std::invalid_argument("integer partition parts must sum to n");
  IntegerPartition lambda;
  lambda.n = n;
  lambda.parts = std::move(parts);
  return lambda;
}

IntegerPartition IntegerPartition::from_multiplicities(const std::vector<int>& r) {
  std::vector<int> parts;
  int n = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0) throw std::invalid_argument("multiplicities must be nonnegative");
    for (int c = 0; c < r[i]; ++c) parts.push_back(static_cast<int>(i) + 1);
    n += static_cast<int>(i + 1) * r[i];
  }
  return from_parts(n, std::move(parts));
}

std::vector<int> IntegerPartition::multiplicities() const {
  std::vector<int> r(n, 0);
  for (int p : parts) ++r[p - 1];
  return r;
}

std::string IntegerPartition::to_string() const {
  std::ostringstream out;
  out << '(';
  auto r = multiplicities();
  bool first = true;
  for (int i = 1; i <= n; ++i) {
    if (r[i - 1] == 0) continue;
    if (!first) out << ' ';
    out << i << '^' << r[i - 1];
    first = false;
  }
  out << ')';
  return out.str();
}

std::vector<IntegerPartition> enumerate_integer_partitions(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  std::vector<IntegerPartition> all;
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      all.push_back(IntegerPartition::from_parts(n, parts));
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(n, n);
  return all;
}

SetPartition::SetPartition(int ground_size, std::vector<std::vector<int>> blocks) {
  if (ground_size < 1) throw std::invalid_argument("ground size must be positive");
  n_ = ground_size;
  std::vector<int> seen(n_, 0);
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("blocks must be nonempty");
    std::sort(b.begin(), b.end());
    for (int e : b) {
      if (e < 1 || e > n_) throw std::invalid_argument("element outside ground set");
      if (seen[e - 1]++) throw std::invalid_argument("blocks must be disjoint");
    }
  }
  for (int i = 0; i < n_; ++i)
    if (!seen[i]) throw std::invalid_argument("blocks must cover the ground set");
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  blocks_ = std::move(blocks);
  rgs_.assign(n_, 0);
  for (int j = 0; j < block_count(); ++j)
    for (int e : blocks_[j]) rgs_[e - 1] = j;
}

SetPartition SetPartition::zero(int n) {
  std::vector<int> rgs(n);
  std::iota(rgs.begin(), rgs.end(), 0);
  return from_rgs(rgs);
}

SetPartition SetPartition::one(int n) { return from_rgs(std::vector<int>(n, 0)); }

SetPartition SetPartition::from_rgs(const std::vector<int>& rgs) {
  if (rgs.empty()) throw std::invalid_argument("ground size must be positive");
  int mx = -1;
  for (int v : rgs) {
    if (v < 0 || v > mx + 1) throw std::invalid_argument("not a restricted growth string");
    mx = std::max(mx, v);
  }
  SetPartition p;
  p.n_ = static_cast<int>(rgs.size());
  p.rgs_ = rgs;
  p.rebuild_blocks_from_rgs();
  return p;
}

void SetPartition::rebuild_blocks_from_rgs() {
  int k = 1 + *std::max_element(rgs_.begin(), rgs_.end());
  blocks_.assign(k, {});
  for (int i = 0; i < n_; ++i) blocks_[rgs_[i]].push_back(i + 1);
}

SetPartition SetPartition::parse(const std::string& text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= text.size() || text[i] != c)
      throw std::invalid_argument("bad partition syntax: expected '" + std::string(1, c) +
                                  "' in \"" + text + "\"");
    ++i;
  };
  auto read_int = [&]() -> int {
    skip_ws();
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) throw std::invalid_argument("bad partition syntax: expected integer");
    return std::stoi(text.substr(start, i - start));
  };

  expect('{');
  std::vector<std::vector<int>> blocks;
  int max_elem = 0;
  while (true) {
    expect('{');
    std::vector<int> block;
    while (true) {
      int e = read_int();
      max_elem = std::max(max_elem, e);
      block.push_back(e);
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    expect('}');
    blocks.push_back(std::move(block));
    skip_ws();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    break;
  }
  expect('}');
  skip_ws();
  if (i != text.size()) throw std::invalid_argument("trailing characters after partition");
  return SetPartition(max_elem, std::move(blocks));
}

std::string SetPartition::to_string() const {
  std::ostringstream out;
  out << '{';
  for (int j = 0; j < block_count(); ++j) {
    if (j) out << ',';
    out << '{';
    for (std::size_t i = 0; i < blocks_[j].size(); ++i) {
      if (i) out << ',';
      out << blocks_[j][i];
    }
    out << '}';
  }
  out << '}';
  return out.str();
}

namespace {

void stream_rgs(int n, int max_block_size, const std::function<void(const SetPartition&)>& visit) {
  check_cap(n);
  std::vector<int> rgs(n, 0);
  std::vector<int> block_size(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == n) {
      visit(SetPartition::from_rgs(rgs));
      return;
    }
    for (int b = 0; b <= used; ++b) {
      if (block_size[b] == max_block_size) continue;
      rgs[pos] = b;
      ++block_size[b];
      rec(pos + 1, std::max(used, b + 1));
      --block_size[b];
    }
  };
  rec(0, 0);
}

}  // namespace

void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit) {
  stream_rgs(n, n, visit);
}

void for_each_set_partition_max_block(int n, int max_block_size,
                                      const std::function<void(const SetPartition&)>& visit) {
  if (max_block_size < 1) throw std::invalid_argument("max block size must be positive");
  stream_rgs(n, max_block_size, visit);
}

std::vector<SetPartition> enumerate_set_partitions(int n) {
  std::vector<SetPartition> all;
  for_each_set_partition(n, [&](const SetPartition& p) { all.push_back(p); });
  return all;
}

namespace {

void check_same_ground(const SetPartition& a, const SetPartition& b) {
  if (a.ground_size() != b.ground_size())
    throw std::invalid_argument("partitions have different ground sizes");
}

}  // namespace

bool leq(const SetPartition& sigma, const SetPartition& pi) {
  check_same_ground(sigma, pi);
  for (const auto& b : sigma.blocks()) {
    int target = pi.block_of(b.front());
    for (int e : b)
      if (pi.block_of(e) != target) return false;
  }
  return true;
}

SetPartition meet(const SetPartition& sigma, const SetPartition& pi) {
  check_same_ground(sigma, pi);
  int n = sigma.ground_size();
  // Pair (sigma-block, pi-block) of each element indexes its meet block.
  std::map<std::pair<int, int>, int> index;
  std::vector<int> rgs(n);
  for (int e = 1; e <= n; ++e) {
    auto key = std::make_pair(sigma.block_of(e), pi.block_of(e));
    auto it = index.emplace(key, static_cast<int>(index.size())).first;
    rgs[e - 1] = it->second;
  }
  // Renumber by first appearance to get a valid growth string.
  std::vector<int> relabel(index.size(), -1);
  int next = 0;
  for (int& v : rgs) {
    if (relabel[v] < 0) relabel[v] = next++;
    v = relabel[v];
  }
  return SetPartition::from_rgs(rgs);
}

SetPartition join(const SetPartition& sigma, const SetPartition& pi) {
  check_same_ground(sigma, pi);
  int n = sigma.ground_size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (const auto& p : {&sigma, &pi})
    for (const auto& b : p->blocks())
      for (std::size_t i = 1; i < b.size(); ++i) unite(b[0] - 1, b[i] - 1);
  std::vector<int> rgs(n), relabel(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int root = find(i);
    if (relabel[root] < 0) relabel[root] = next++;
    rgs[i] = relabel[root];
  }
  return SetPartition::from_rgs(rgs);
}

IntegerPartition segment_class(const SetPartition& sigma, const SetPartition& pi) {
  if (!leq(sigma, pi)) throw std::invalid_argument("segment_class requires sigma <= pi");
  std::vector<int> counts(pi.block_count(), 0);
  for (const auto& b : sigma.blocks()) ++counts[pi.block_of(b.front())];
  return IntegerPartition::from_parts(sigma.block_count(), std::move(counts));
}

std::int64_t count_partitions_with_class(int n, const IntegerPartition& lambda) {
  if (lambda.n != n) throw std::invalid_argument("lambda is not a partition of n");
  std::int64_t value = factorial(n);
  auto r = lambda.multiplicities();
  for (int i = 1; i <= n; ++i) {
    if (r[i - 1] == 0) continue;
    for (int c = 0; c < r[i - 1]; ++c) value /= factorial(i);
    value /= factorial(r[i - 1]);
  }
  return value;
}

std::int64_t mobius(const SetPartition& sigma, const SetPartition& pi) {
  check_same_ground(sigma, pi);
  if (!leq(sigma, pi)) return 0;
  auto lambda = segment_class(sigma, pi);
  auto r = lambda.multiplicities();
  std::int64_t value = 1;
  for (int j = 1; j <= lambda.n; ++j)
    for (int c = 0; c < r[j - 1]; ++c) value *= factorial(j - 1);
  int sign_exp = sigma.block_count() - pi.block_count();
  return (sign_exp % 2 == 0) ? value : -value;
}

std::vector<SetPartition> enumerate_segment(const SetPartition& sigma, const SetPartition& pi) {
  if (!leq(sigma, pi)) throw std::invalid_argument("enumerate_segment requires sigma <= pi");
  int n = sigma.ground_size();

  // Group the sigma-blocks by the pi-block containing them; every rho in the
  // segment merges sigma-blocks independently inside each group.
  std::vector<std::vector<int>> groups(pi.block_count());
  for (int j = 0; j < sigma.block_count(); ++j)
    groups[pi.block_of(sigma.blocks()[j].front())].push_back(j);

  // Per group, all ways of partitioning its sigma-blocks, as merged element blocks.
  std::vector<std::vector<std::vector<std::vector<int>>>> choices(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    int k = static_cast<int>(groups[g].size());
    for_each_set_partition(k, [&](const SetPartition& q) {
      std::vector<std::vector<int>> merged(q.block_count());
      for (int i = 0; i < k; ++i) {
        const auto& src = sigma.blocks()[groups[g][i]];
        auto& dst = merged[q.block_of(i + 1)];
        dst.insert(dst.end(), src.begin(), src.end());
      }
      choices[g].push_back(std::move(merged));
    });
  }

  std::vector<SetPartition> segment;
  std::vector<std::size_t> pick(groups.size(), 0);
  while (true) {
    std::vector<std::vector<int>> blocks;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (const auto& b : choices[g][pick[g]]) blocks.push_back(b);
    segment.emplace_back(n, std::move(blocks));
    std::size_t g = 0;
    while (g < groups.size() && ++pick[g] == choices[g].size()) pick[g++] = 0;
    if (g == groups.size()) break;
  }
  std::sort(segment.begin(), segment.end());
  return segment;
}

std::map<SetPartition, double> mobius_invert(const std::map<SetPartition, double>& values,
                                             InvertDirection direction) {
  if (values.empty()) throw std::invalid_argument("empty table");
  int n = values.begin()->first.ground_size();
  auto all = enumerate_set_partitions(n);
  if (values.size() != all.size())
    throw std::invalid_argument("table does not cover the whole lattice");
  for (const auto& p : all)
    if (!values.count(p)) throw std::invalid_argument("table does not cover the whole lattice");

  std::map<SetPartition, double> out;
  for (const auto& p : all) {
    double acc = 0.0;
    for (const auto& q : all) {
      if (direction == InvertDirection::down) {
        if (leq(q, p)) acc += static_cast<double>(mobius(q, p)) * values.at(q);
      } else {
        if (leq(p, q)) acc += static_cast<double>(mobius(p, q)) * values.at(q);
      }
    }
    out.emplace(p, acc);
  }
  return out;
}

}  // namespace wic

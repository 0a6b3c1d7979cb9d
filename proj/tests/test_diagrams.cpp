#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "wic/diagrams.hpp"
#include "wic/partitions.hpp"

using namespace wic;

namespace {

std::vector<int> row_of_element(const SetPartition& rows) {
  std::vector<int> owner(rows.ground_size() + 1, -1);
  for (int e = 1; e <= rows.ground_size(); ++e) owner[e] = rows.block_of(e);
  return owner;
}

bool nonflat_oracle(const SetPartition& rows, const SetPartition& edges) {
  auto owner = row_of_element(rows);
  for (const auto& block : edges.blocks())
    for (std::size_t i = 1; i < block.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (owner[block[i]] == owner[block[j]]) return false;
  return true;
}

bool connected_oracle(const SetPartition& rows, const SetPartition& edges) {
  auto owner = row_of_element(rows);
  std::vector<int> parent(rows.block_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& block : edges.blocks())
    for (std::size_t i = 1; i < block.size(); ++i)
      parent[find(owner[block[i]])] = find(owner[block[0]]);
  for (int r = 1; r < rows.block_count(); ++r)
    if (find(r) != find(0)) return false;
  return true;
}

bool gaussian_oracle(const SetPartition& edges) {
  for (const auto& block : edges.blocks())
    if (block.size() != 2) return false;
  return true;
}

// Matching walks the row cycle: pairs only touch cyclically consecutive rows,
// and every consecutive pair is touched at least once.
bool circular_oracle(const SetPartition& rows, const SetPartition& edges) {
  const int k = rows.block_count();
  if (k < 2 || !gaussian_oracle(edges)) return false;
  auto owner = row_of_element(rows);
  for (const auto& block : edges.blocks())
    if (owner[block[0]] == owner[block[1]]) return false;
  if (k == 2) return true;
  std::map<std::pair<int, int>, int> links;
  for (const auto& block : edges.blocks()) {
    int a = owner[block[0]], b = owner[block[1]];
    if (a > b) std::swap(a, b);
    const bool consecutive = (b - a == 1) || (a == 0 && b == k - 1);
    if (!consecutive) return false;
    ++links[{a, b}];
  }
  for (int r = 0; r < k; ++r) {
    int a = r, b = (r + 1) % k;
    if (a > b) std::swap(a, b);
    if (links.find({a, b}) == links.end()) return false;
  }
  return true;
}

SetPartition equal_rows(int count, int width) {
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < count; ++r) {
    std::vector<int> row;
    for (int j = 1; j <= width; ++j) row.push_back(r * width + j);
    rows.push_back(row);
  }
  return SetPartition(count * width, rows);
}

}  // namespace

TEST_CASE("classify the basic flags") {
  Diagram d(SetPartition::parse("{{1,2},{3,4}}"), SetPartition::parse("{{1,3},{2,4}}"));
  auto f = classify(d);
  CHECK(f.connected);
  CHECK(f.nonflat);
  CHECK(f.gaussian);
  CHECK(f.circular);

  Diagram flat(SetPartition::parse("{{1,2},{3,4}}"), SetPartition::parse("{{1,2},{3,4}}"));
  auto g = classify(flat);
  CHECK_FALSE(g.connected);
  CHECK_FALSE(g.nonflat);
  CHECK(g.gaussian);
  CHECK_FALSE(g.circular);

  Diagram triple(SetPartition::parse("{{1,2,3},{4,5,6}}"),
                 SetPartition::parse("{{1,4},{2,5},{3,6}}"));
  auto h = classify(triple);
  CHECK(h.connected);
  CHECK(h.nonflat);
  CHECK(h.gaussian);
  CHECK(h.circular);

  CHECK_THROWS(Diagram(SetPartition::one(3), SetPartition::one(4)));
}

TEST_CASE("multigraph view") {
  Diagram d(SetPartition::parse("{{1,2},{3,4}}"), SetPartition::parse("{{1,2},{3,4}}"));
  auto g = to_multigraph(d);
  CHECK(g.vertex_count == 2);
  CHECK(g.has_loops());
  CHECK_FALSE(g.connected());
  CHECK(g.degrees() == std::vector<int>{2, 2});

  Diagram x(SetPartition::parse("{{1,2},{3,4}}"), SetPartition::parse("{{1,3},{2,4}}"));
  auto gx = to_multigraph(x);
  CHECK_FALSE(gx.has_loops());
  CHECK(gx.connected());
  CHECK(gx.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 1}});
}

TEST_CASE("non-flat partner counts") {
  CHECK(solve_nonflat(SetPartition::parse("{{1,2},{3,4}}")).size() == 7);
  CHECK(solve_nonflat(SetPartition::parse("{{1,2},{3},{4}}")).size() == 10);
  auto pi = SetPartition::parse("{{1,2,3},{4,5}}");
  auto found = solve_nonflat(pi);
  std::set<SetPartition> seen(found.begin(), found.end());
  CHECK(seen.size() == found.size());
  std::size_t brute = 0;
  for_each_set_partition(5, [&](const SetPartition& s) {
    if (nonflat_oracle(pi, s)) {
      ++brute;
      CHECK(seen.count(s) == 1);
    }
  });
  CHECK(brute == found.size());
}

TEST_CASE("partition classes against brute filters") {
  for (const char* text : {"{{1,2},{3,4},{5,6}}", "{{1,2,3},{4,5,6}}"}) {
    auto pi = SetPartition::parse(text);
    std::map<PartitionClass, std::set<SetPartition>> brute;
    for_each_set_partition(6, [&](const SetPartition& s) {
      const bool nf = nonflat_oracle(pi, s);
      const bool conn = connected_oracle(pi, s);
      const bool ga = gaussian_oracle(s);
      bool ge2 = true;
      for (const auto& b : s.blocks()) ge2 = ge2 && b.size() >= 2;
      if (conn && nf) brute[PartitionClass::M].insert(s);
      if (nf) brute[PartitionClass::M0].insert(s);
      if (conn && nf && ga) brute[PartitionClass::M2].insert(s);
      if (nf && ga) brute[PartitionClass::M2_0].insert(s);
      if (conn && nf && ge2) brute[PartitionClass::Mge2].insert(s);
      if (nf && ge2) brute[PartitionClass::Mge2_0].insert(s);
      if (conn && nf && ga && circular_oracle(pi, s))
        brute[PartitionClass::M2c].insert(s);
    });
    for (auto which :
         {PartitionClass::M, PartitionClass::M0, PartitionClass::M2,
          PartitionClass::M2_0, PartitionClass::Mge2, PartitionClass::Mge2_0,
          PartitionClass::M2c}) {
      auto got = enumerate_class(6, pi, which);
      std::set<SetPartition> gotset(got.begin(), got.end());
      CHECK(gotset == brute[which]);
    }
  }
}

TEST_CASE("connected pairing counts over two-element rows") {
  std::int64_t expected = 1;
  for (int k = 2; k <= 5; ++k) {
    expected *= 2 * (k - 1);
    auto pi = equal_rows(k, 2);
    CHECK(static_cast<std::int64_t>(
              enumerate_class(2 * k, pi, PartitionClass::M2).size()) == expected);
  }
}

TEST_CASE("circular flag matches the walk description") {
  for (auto [k, w] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {4, 2}, {2, 3}, {5, 2}}) {
    auto pi = equal_rows(k, w);
    for_each_set_partition_max_block(k * w, 2, [&](const SetPartition& s) {
      Diagram d(pi, s);
      CHECK(classify(d).circular == circular_oracle(pi, s));
    });
  }
  auto mixed = SetPartition::parse("{{1,2,3},{4,5},{6}}");
  for_each_set_partition(6, [&](const SetPartition& s) {
    CHECK(classify(Diagram(mixed, s)).circular == circular_oracle(mixed, s));
  });
  CHECK_FALSE(classify(Diagram(SetPartition::one(2), SetPartition::parse("{{1,2}}"))).circular);
}

TEST_CASE("circular ranks over four equal rows") {
  auto pi2 = equal_rows(4, 2);
  auto m2c2 = enumerate_class(8, pi2, PartitionClass::M2c);
  CHECK(m2c2.size() == 16);
  for (const auto& s : m2c2) CHECK(circular_rank(pi2, s) == 1);

  auto pi3 = equal_rows(4, 3);
  auto m2c3 = enumerate_class(12, pi3, PartitionClass::M2c);
  CHECK(m2c3.size() == 648);
  std::map<int, int> ranks;
  for (const auto& s : m2c3) ++ranks[circular_rank(pi3, s)];
  CHECK(ranks == std::map<int, int>{{1, 324}, {2, 324}});

  CHECK_THROWS(circular_rank(equal_rows(3, 2), SetPartition::one(6)));
  CHECK_THROWS(circular_rank(pi2, SetPartition::parse("{{1,2},{3,4},{5,6},{7,8}}")));
}

TEST_CASE("poisson block split") {
  auto s = SetPartition::parse("{{1},{2,3},{4,5,6}}");
  auto split = poisson_split(s);
  CHECK(split.b1 == std::vector<std::vector<int>>{{1}});
  CHECK(split.b2 == std::vector<std::vector<int>>{{2, 3}, {4, 5, 6}});
  CHECK(split.pb2.size() == 2);
  for (const auto& [r1, r2] : split.pb2) {
    CHECK(!r1.empty());
    CHECK(!r2.empty());
    CHECK(r1.size() + r2.size() == 2);
  }

  auto three = poisson_split(SetPartition::parse("{{1,2},{3,4},{5,6}}"));
  CHECK(three.pb2.size() == 6);

  auto singles = poisson_split(SetPartition::zero(3));
  CHECK(singles.b2.empty());
  CHECK(singles.pb2.empty());
}

TEST_CASE("diagram rendering") {
  Diagram d(SetPartition::parse("{{1,2,3},{4,5,6}}"),
            SetPartition::parse("{{1,4},{2,5},{3,6}}"));
  CHECK(render_diagram(d) == "row 1: 1(a) 2(b) 3(c)\nrow 2: 4(a) 5(b) 6(c)\n");
}

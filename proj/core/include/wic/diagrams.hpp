#ifndef WIC_DIAGRAMS_HPP
#define WIC_DIAGRAMS_HPP

#include <string>
#include <utility>
#include <vector>

#include "wic/partitions.hpp"

namespace wic {

// Rows are the blocks of `rows`; the blocks of `edges` tie row elements
// together (the closed curves of the picture).
struct Diagram {
  SetPartition rows;
  SetPartition edges;

  Diagram(SetPartition rows_, SetPartition edges_);
};

struct DiagramFlags {
  bool connected = false;  // rows v edges is the one-block partition
  bool nonflat = false;    // rows ^ edges is the singleton partition
  bool gaussian = false;   // every edge block has exactly two elements
  bool circular = false;   // the matching walks the rows in a single cycle
};

DiagramFlags classify(const Diagram& d);

// One vertex per row, one edge per two-element block of `edges`; a block
// inside a single row becomes a loop.
struct Multigraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // 0-based, first <= second

  bool connected() const;
  bool has_loops() const;
  std::vector<int> degrees() const;  // loops count twice
};

Multigraph to_multigraph(const Diagram& d);

// All sigma with sigma ^ pi = 0.
std::vector<SetPartition> solve_nonflat(const SetPartition& pi);

// Families of partitions sigma classified against a fixed row partition:
//   M      connected and non-flat            M0      non-flat
//   M2     M, all blocks of size 2           M2_0    M0, all blocks of size 2
//   Mge2   M, all blocks of size >= 2        Mge2_0  M0, all blocks of size >= 2
//   M2c    M2 with a circular diagram
enum class PartitionClass { M, M0, M2, M2_0, Mge2, Mge2_0, M2c };

PartitionClass parse_partition_class(const std::string& name);
std::string partition_class_name(PartitionClass which);

std::vector<SetPartition> enumerate_class(int n, const SetPartition& pi_star,
                                          PartitionClass which);

struct PoissonBlockSplit {
  std::vector<std::vector<int>> b1;  // singleton blocks
  std::vector<std::vector<int>> b2;  // blocks with two or more elements
  // Ordered pairs (r1; r2) of nonempty disjoint index sets into b2 whose
  // union is all of b2; empty when b2 is empty.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pb2;
};

PoissonBlockSplit poisson_split(const SetPartition& sigma);

// Number of edge blocks linking the first and the second row.  Requires
// four equal-size rows and a circular diagram.
int circular_rank(const SetPartition& pi_star, const SetPartition& sigma);

// Plain-text picture: one line per row, each element tagged with the label
// of its edge block.
std::string render_diagram(const Diagram& d);

}  // namespace wic

#endif

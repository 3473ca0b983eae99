#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace treewalk {

/// Which glued-trees family a graph belongs to.
///
/// The simple glued trees (SGT) share a single middle column of 2^d leaves.
/// The modified glued trees (MGT) keep two separate leaf columns and join
/// them with an alternating cycle, either the fixed regular one or a random
/// one drawn from a seed.
enum class Variant { SGT, MGTRegular, MGTRandom };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);
inline bool is_mgt(Variant v) { return v != Variant::SGT; }

/// Column/row position of a vertex: j is the distance from the left root,
/// n the index within that column.
struct Coord {
  int j = 0;
  std::int64_t n = 0;
  bool operator==(const Coord&) const = default;
};

/// Number of columns: 2d+1 for SGT, 2d+2 for MGT.
int column_count(int d, Variant variant);

/// Number of vertices in column j. Throws std::domain_error for j out of range.
std::int64_t column_size(int j, int d, Variant variant);

/// Total vertex count: 3*2^d - 2 (SGT) or 2^(d+2) - 2 (MGT).
std::int64_t vertex_count(int d, Variant variant);

/// 1-based SGT vertex label, v = 2^j + n on the left half and
/// 3*2^d - 2^(2d+1-j) + n on the right half.
std::int64_t coord_to_vertex(Coord c, int d);
/// Inverse of coord_to_vertex.
Coord vertex_to_coord(std::int64_t v, int d);

/// Undirected graph with sorted neighbour lists and per-vertex column labels.
/// Vertex ids are 0-based and column-major, so id = (1-based label) - 1.
class Graph {
 public:
  Graph(int depth, Variant variant, std::uint64_t seed,
        std::vector<std::vector<std::int32_t>> adjacency,
        std::vector<int> column_of);

  int depth() const { return depth_; }
  Variant variant() const { return variant_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t size() const { return static_cast<std::int64_t>(adj_.size()); }
  int columns() const { return column_count(depth_, variant_); }

  std::span<const std::int32_t> neighbors(std::int64_t v) const { return adj_[v]; }
  int column_of(std::int64_t v) const { return column_of_[v]; }
  const std::vector<int>& column_labels() const { return column_of_; }

  /// First vertex id of column j; the column occupies a contiguous id range.
  std::int64_t column_offset(int j) const { return offsets_.at(j); }
  std::int64_t column_size(int j) const { return offsets_.at(j + 1) - offsets_.at(j); }

  std::int64_t edge_count() const;
  int max_degree() const;

  /// Left and right roots (single-vertex end columns).
  std::int64_t left_root() const { return 0; }
  std::int64_t right_root() const { return size() - 1; }

 private:
  int depth_;
  Variant variant_;
  std::uint64_t seed_;
  std::vector<std::vector<std::int32_t>> adj_;
  std::vector<int> column_of_;
  std::vector<std::int64_t> offsets_;
};

Graph build_sgt(int d);

/// MGT with the fixed cycle left_0-right_0-left_1-right_1-...-left_0.
Graph build_mgt_regular(int d);

/// MGT whose leaf cycle is a uniformly random alternating Hamiltonian cycle,
/// deterministic in `seed`.
Graph build_mgt_random(int d, std::uint64_t seed);

/// Dispatch on variant; seed is ignored unless variant is MGTRandom.
Graph build_graph(int d, Variant variant, std::uint64_t seed = 0);

/// Graph used by realization r of an ensemble: random-gluing MGTs draw their
/// leaf cycle from a stream keyed by (seed, r); other variants ignore both.
Graph realization_graph(int d, Variant variant, std::uint64_t seed, std::uint64_t realization);

/// Uniform superposition over column j, as a dense vector over all vertices.
std::vector<double> column_state(const Graph& g, int j);

/// Edge-list export: one JSON header line starting with '#', then "u v" per
/// edge with u < v (0-based ids).
void write_edge_list(std::ostream& os, const Graph& g);

/// Throws std::logic_error if any structural invariant is broken
/// (symmetry, self-loops, duplicates, |dj| = 1, degree pattern).
void check_invariants(const Graph& g);

}  // namespace treewalk

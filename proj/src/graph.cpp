#include "treewalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

#include "treewalk/random.hpp"

namespace treewalk {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::SGT: return "sgt";
    case Variant::MGTRegular: return "mgt-regular";
    case Variant::MGTRandom: return "mgt-random";
  }
  return "?";
}

Variant variant_from_string(const std::string& name) {
  if (name == "sgt") return Variant::SGT;
  if (name == "mgt-regular" || name == "mgt") return Variant::MGTRegular;
  if (name == "mgt-random") return Variant::MGTRandom;
  throw std::invalid_argument("unknown graph variant '" + name + "'");
}

int column_count(int d, Variant variant) { return is_mgt(variant) ? 2 * d + 2 : 2 * d + 1; }

std::int64_t column_size(int j, int d, Variant variant) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  if (j < 0 || j >= column_count(d, variant))
    throw std::domain_error("column index " + std::to_string(j) + " out of range");
  if (j <= d) return std::int64_t{1} << j;
  const int mirror = is_mgt(variant) ? 2 * d + 1 - j : 2 * d - j;
  return std::int64_t{1} << mirror;
}

std::int64_t vertex_count(int d, Variant variant) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  return is_mgt(variant) ? (std::int64_t{1} << (d + 2)) - 2 : 3 * (std::int64_t{1} << d) - 2;
}

std::int64_t coord_to_vertex(Coord c, int d) {
  if (c.n < 0 || c.n >= column_size(c.j, d, Variant::SGT))
    throw std::domain_error("row index out of range for column");
  if (c.j <= d) return (std::int64_t{1} << c.j) + c.n;
  return 3 * (std::int64_t{1} << d) - (std::int64_t{1} << (2 * d + 1 - c.j)) + c.n;
}

Coord vertex_to_coord(std::int64_t v, int d) {
  if (v < 1 || v > vertex_count(d, Variant::SGT)) throw std::domain_error("vertex label out of range");
  std::int64_t start = 1;
  for (int j = 0; j <= 2 * d; ++j) {
    const std::int64_t size = column_size(j, d, Variant::SGT);
    if (v < start + size) return Coord{j, v - start};
    start += size;
  }
  throw std::logic_error("unreachable");
}

Graph::Graph(int depth, Variant variant, std::uint64_t seed,
             std::vector<std::vector<std::int32_t>> adjacency, std::vector<int> column_of)
    : depth_(depth), variant_(variant), seed_(seed), adj_(std::move(adjacency)),
      column_of_(std::move(column_of)) {
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  const int cols = column_count(depth_, variant_);
  offsets_.assign(cols + 1, 0);
  for (int c : column_of_) ++offsets_[c + 1];
  for (int j = 0; j < cols; ++j) offsets_[j + 1] += offsets_[j];
}

std::int64_t Graph::edge_count() const {
  std::int64_t twice = 0;
  for (const auto& nb : adj_) twice += static_cast<std::int64_t>(nb.size());
  return twice / 2;
}

int Graph::max_degree() const {
  std::size_t m = 0;
  for (const auto& nb : adj_) m = std::max(m, nb.size());
  return static_cast<int>(m);
}

namespace {

struct Builder {
  int d;
  Variant variant;
  std::vector<std::int64_t> offset;  // per column
  std::vector<std::vector<std::int32_t>> adj;
  std::vector<int> column_of;

  Builder(int depth, Variant v) : d(depth), variant(v) {
    if (d < 1) throw std::domain_error("depth must be >= 1");
    if (d > 24) throw std::domain_error("depth too large");
    const int cols = column_count(d, variant);
    offset.assign(cols + 1, 0);
    for (int j = 0; j < cols; ++j) offset[j + 1] = offset[j] + column_size(j, d, variant);
    adj.resize(offset[cols]);
    column_of.resize(offset[cols]);
    for (int j = 0; j < cols; ++j)
      for (std::int64_t v = offset[j]; v < offset[j + 1]; ++v) column_of[v] = j;
  }

  std::int64_t id(int j, std::int64_t n) const { return offset[j] + n; }

  void link(std::int64_t a, std::int64_t b) {
    adj[a].push_back(static_cast<std::int32_t>(b));
    adj[b].push_back(static_cast<std::int32_t>(a));
  }

  // Binary tree rooted at column `root` growing toward `leaf`; (j, n) has
  // children (j', 2n) and (j', 2n+1) one column closer to `leaf`.
  void tree(int root, int leaf) {
    const int step = leaf > root ? 1 : -1;
    for (int j = root; j != leaf; j += step) {
      const std::int64_t size = offset[j + 1] - offset[j];
      for (std::int64_t n = 0; n < size; ++n) {
        link(id(j, n), id(j + step, 2 * n));
        link(id(j, n), id(j + step, 2 * n + 1));
      }
    }
  }

  Graph finish(std::uint64_t seed) {
    return Graph(d, variant, seed, std::move(adj), std::move(column_of));
  }
};

Graph build_mgt(int d, Variant variant, std::uint64_t seed) {
  Builder b(d, variant);
  b.tree(0, d);
  b.tree(2 * d + 1, d + 1);
  const std::int64_t leaves = std::int64_t{1} << d;
  std::vector<std::int64_t> left(leaves), right(leaves);
  if (variant == Variant::MGTRandom) {
    StreamRng rng(seed, 0, Stream::Gluing);
    left = rng.permutation(leaves);
    right = rng.permutation(leaves);
  } else {
    for (std::int64_t i = 0; i < leaves; ++i) left[i] = right[i] = i;
  }
  // left[0]-right[0]-left[1]-right[1]-...-right[L-1]-left[0]
  for (std::int64_t i = 0; i < leaves; ++i) {
    b.link(b.id(d, left[i]), b.id(d + 1, right[i]));
    b.link(b.id(d + 1, right[i]), b.id(d, left[(i + 1) % leaves]));
  }
  return b.finish(variant == Variant::MGTRandom ? seed : 0);
}

}  // namespace

Graph build_sgt(int d) {
  Builder b(d, Variant::SGT);
  b.tree(0, d);
  b.tree(2 * d, d);
  return b.finish(0);
}

Graph build_mgt_regular(int d) { return build_mgt(d, Variant::MGTRegular, 0); }

Graph build_mgt_random(int d, std::uint64_t seed) { return build_mgt(d, Variant::MGTRandom, seed); }

Graph build_graph(int d, Variant variant, std::uint64_t seed) {
  switch (variant) {
    case Variant::SGT: return build_sgt(d);
    case Variant::MGTRegular: return build_mgt_regular(d);
    case Variant::MGTRandom: return build_mgt_random(d, seed);
  }
  throw std::logic_error("unknown variant");
}

Graph realization_graph(int d, Variant variant, std::uint64_t seed, std::uint64_t realization) {
  if (variant != Variant::MGTRandom) return build_graph(d, variant);
  return build_mgt_random(d, StreamRng(seed, realization, Stream::Gluing).next());
}

std::vector<double> column_state(const Graph& g, int j) {
  if (j < 0 || j >= g.columns()) throw std::domain_error("column index out of range");
  std::vector<double> psi(g.size(), 0.0);
  const std::int64_t size = g.column_size(j);
  const double amp = 1.0 / std::sqrt(static_cast<double>(size));
  for (std::int64_t v = g.column_offset(j); v < g.column_offset(j) + size; ++v) psi[v] = amp;
  return psi;
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << "# {\"d\": " << g.depth() << ", \"variant\": \"" << to_string(g.variant())
     << "\", \"seed\": " << g.seed() << ", \"N\": " << g.size() << ", \"edges\": " << g.edge_count()
     << "}\n";
  for (std::int64_t u = 0; u < g.size(); ++u)
    for (auto v : g.neighbors(u))
      if (u < v) os << u << ' ' << v << '\n';
}

void check_invariants(const Graph& g) {
  const int d = g.depth();
  if (g.size() != vertex_count(d, g.variant())) throw std::logic_error("vertex count mismatch");
  for (std::int64_t u = 0; u < g.size(); ++u) {
    const auto nb = g.neighbors(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const std::int64_t v = nb[i];
      if (v == u) throw std::logic_error("self-loop at " + std::to_string(u));
      if (i > 0 && nb[i - 1] == nb[i]) throw std::logic_error("duplicate edge at " + std::to_string(u));
      const auto back = g.neighbors(v);
      if (!std::binary_search(back.begin(), back.end(), static_cast<std::int32_t>(u)))
        throw std::logic_error("asymmetric adjacency " + std::to_string(u) + "-" + std::to_string(v));
      if (std::abs(g.column_of(u) - g.column_of(v)) != 1)
        throw std::logic_error("edge between non-adjacent columns");
    }
    const int j = g.column_of(u);
    const bool root = (j == 0 || j == g.columns() - 1);
    const bool sgt_middle = (g.variant() == Variant::SGT && j == d);
    const std::size_t expected = (root || sgt_middle) ? 2 : 3;
    if (nb.size() != expected)
      throw std::logic_error("vertex " + std::to_string(u) + " has degree " + std::to_string(nb.size()));
  }
}

}  // namespace treewalk

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pbh {

/// Directed graph in compressed sparse row form. Rows are sorted by target
/// and hold no self-loops or parallel edges.
struct CsrGraph {
  std::uint32_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::vector<std::uint64_t> offsets;  // vertex_count + 1 entries
  std::vector<std::uint32_t> targets;  // edge_count entries, < vertex_count
  std::vector<std::uint32_t> weights;  // edge_count entries, >= 1

  std::uint32_t max_out_degree() const;
  bool operator==(const CsrGraph&) const = default;
};

/// Throws InvariantError when the CSR arrays are inconsistent.
void validate_graph(const CsrGraph& g);

/// E distinct directed edges uniform over ordered pairs (no self-loops),
/// weights uniform in [1, max_weight]. Deterministic per seed.
CsrGraph gen_random(std::uint32_t v, std::uint64_t e, std::uint32_t max_weight,
                    std::uint64_t seed);

/// Contains the chain 0->1->...->V-1 with weight-1 edges; the remaining
/// E-(V-1) random edges get weights in [V, V + max_weight - 1], so the chain
/// is the unique shortest route and the graph's diameter is V.
CsrGraph gen_high_diameter(std::uint32_t v, std::uint64_t e, std::uint32_t max_weight,
                           std::uint64_t seed);

/// Acyclic by construction: vertex u gets min(out_degree, V-1-u) distinct
/// targets with higher index; weights uniform in [1, max_weight].
CsrGraph gen_dag(std::uint32_t v, std::uint32_t out_degree, std::uint32_t max_weight,
                 std::uint64_t seed);

/// All V(V-1) directed edges with symmetric weights uniform in [1, max_weight].
CsrGraph gen_complete(std::uint32_t v, std::uint32_t max_weight, std::uint64_t seed);

/// Text format: first line "V E", then one "src dst weight" line per edge.
/// The loader reports malformed lines by number and rejects self-loops,
/// parallel edges and negative weights.
CsrGraph load_edge_list(const std::string& path);
void save_edge_list(const CsrGraph& g, const std::string& path);

}  // namespace pbh

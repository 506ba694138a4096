#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbh/engine.hpp"
#include "pbh/graphs.hpp"

namespace pbh {

/// Distance of an unreachable vertex.
constexpr std::uint64_t kInfDist = ~std::uint64_t{0};

struct SsspResult {
  std::vector<std::uint64_t> dist;         // kInfDist where unreachable
  std::vector<std::uint32_t> settled_order;  // extraction order of settled vertices
  std::uint64_t rounds = 0;
  Metrics metrics;  // engine counters; zero for the reference solvers
};

/// Dijkstra on the bucket heap: per round one extract_min settles a vertex,
/// then all improving relaxations of its out-edges are combined by minimum
/// per target, sorted, and fed as batched updates of at most d each.
/// engine_config.d == 0 selects the graph's maximum out-degree. dag_mode
/// skips the settled check on relaxation targets (sound on acyclic graphs;
/// the caller asserts acyclicity).
SsspResult par_dijkstra(const CsrGraph& g, std::uint32_t source, EngineConfig engine_config,
                        bool dag_mode = false);

/// Textbook binary-heap Dijkstra with lazy deletion; ties broken by
/// (distance, vertex) exactly like par_dijkstra.
SsspResult reference_dijkstra(const CsrGraph& g, std::uint32_t source);

/// Full relaxation sweeps (descending source order) until fixpoint;
/// rounds = sweeps executed.
SsspResult bellman_ford(const CsrGraph& g, std::uint32_t source);

/// All-pairs distances; guarded to V <= 4096.
std::vector<std::vector<std::uint64_t>> floyd_warshall(const CsrGraph& g);

/// CSV with header "vertex,dist"; unreachable printed as "inf".
std::string distances_to_csv(const std::vector<std::uint64_t>& dist);

/// FNV-1a over the distance words; equal distance vectors have equal sums.
std::uint64_t distance_checksum(const std::vector<std::uint64_t>& dist);

}  // namespace pbh

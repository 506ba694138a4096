#include "pbh/graphs.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "pbh/error.hpp"

namespace pbh {

namespace {

// rng() % n is deterministic across standard-library implementations, unlike
// std::uniform_int_distribution; the bias is irrelevant at these ranges.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::uint32_t weight_in(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t max_weight) {
  return lo + static_cast<std::uint32_t>(bounded(rng, max_weight));
}

std::uint64_t pair_code(std::uint32_t u, std::uint32_t v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

CsrGraph from_edges(std::uint32_t v, std::vector<std::pair<std::uint64_t, std::uint32_t>> coded) {
  // coded: (pair_code(src,dst), weight), to be sorted into CSR order.
  std::sort(coded.begin(), coded.end());
  CsrGraph g;
  g.vertex_count = v;
  g.edge_count = coded.size();
  g.offsets.assign(static_cast<std::size_t>(v) + 1, 0);
  g.targets.reserve(coded.size());
  g.weights.reserve(coded.size());
  for (const auto& [code, w] : coded) {
    ++g.offsets[(code >> 32) + 1];
    g.targets.push_back(static_cast<std::uint32_t>(code & 0xffffffffu));
    g.weights.push_back(w);
  }
  for (std::size_t i = 1; i < g.offsets.size(); ++i) g.offsets[i] += g.offsets[i - 1];
  return g;
}

}  // namespace

std::uint32_t CsrGraph::max_out_degree() const {
  std::uint64_t best = 0;
  for (std::uint32_t u = 0; u < vertex_count; ++u) {
    best = std::max(best, offsets[u + 1] - offsets[u]);
  }
  return static_cast<std::uint32_t>(best);
}

void validate_graph(const CsrGraph& g) {
  if (g.offsets.size() != static_cast<std::size_t>(g.vertex_count) + 1 || g.offsets[0] != 0 ||
      g.offsets[g.vertex_count] != g.edge_count || g.targets.size() != g.edge_count ||
      g.weights.size() != g.edge_count) {
    throw InvariantError("graph: inconsistent array sizes");
  }
  for (std::uint32_t u = 0; u < g.vertex_count; ++u) {
    if (g.offsets[u] > g.offsets[u + 1]) throw InvariantError("graph: offsets not monotone");
    for (std::uint64_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
      if (g.targets[i] >= g.vertex_count) throw InvariantError("graph: target out of range");
      if (g.targets[i] == u) throw InvariantError("graph: self-loop");
      if (i > g.offsets[u] && g.targets[i - 1] >= g.targets[i]) {
        throw InvariantError("graph: row not sorted or parallel edge");
      }
      if (g.weights[i] == 0) throw InvariantError("graph: zero weight");
    }
  }
}

CsrGraph gen_random(std::uint32_t v, std::uint64_t e, std::uint32_t max_weight,
                    std::uint64_t seed) {
  if (v == 0) throw PreconditionError("gen_random: need at least one vertex");
  if (max_weight == 0) throw PreconditionError("gen_random: max_weight must be >= 1");
  const std::uint64_t all = static_cast<std::uint64_t>(v) * (v - 1);
  if (e > all) throw PreconditionError("gen_random: more edges than ordered vertex pairs");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> coded;
  coded.reserve(e);
  if (e > all / 2) {
    // Dense: enumerate every pair and keep a random prefix of a shuffle.
    std::vector<std::uint64_t> codes;
    codes.reserve(all);
    for (std::uint32_t u = 0; u < v; ++u) {
      for (std::uint32_t t = 0; t < v; ++t) {
        if (u != t) codes.push_back(pair_code(u, t));
      }
    }
    for (std::uint64_t i = 0; i < e; ++i) {
      std::swap(codes[i], codes[i + bounded(rng, codes.size() - i)]);
    }
    codes.resize(e);
    for (std::uint64_t code : codes) coded.emplace_back(code, weight_in(rng, 1, max_weight));
  } else {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(e * 2);
    while (seen.size() < e) {
      const auto u = static_cast<std::uint32_t>(bounded(rng, v));
      const auto t = static_cast<std::uint32_t>(bounded(rng, v));
      if (u == t) continue;
      if (seen.insert(pair_code(u, t)).second) {
        coded.emplace_back(pair_code(u, t), weight_in(rng, 1, max_weight));
      }
    }
  }
  return from_edges(v, std::move(coded));
}

CsrGraph gen_high_diameter(std::uint32_t v, std::uint64_t e, std::uint32_t max_weight,
                           std::uint64_t seed) {
  if (v < 2) throw PreconditionError("gen_high_diameter: need at least two vertices");
  if (max_weight == 0) throw PreconditionError("gen_high_diameter: max_weight must be >= 1");
  if (e < static_cast<std::uint64_t>(v) - 1) {
    throw PreconditionError("gen_high_diameter: need at least V-1 edges for the chain");
  }
  const std::uint64_t all = static_cast<std::uint64_t>(v) * (v - 1);
  if (e > all) throw PreconditionError("gen_high_diameter: more edges than ordered pairs");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> coded;
  coded.reserve(e);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(e * 2);
  for (std::uint32_t u = 0; u + 1 < v; ++u) {
    seen.insert(pair_code(u, u + 1));
    coded.emplace_back(pair_code(u, u + 1), 1);  // the spine
  }
  while (seen.size() < e) {
    const auto u = static_cast<std::uint32_t>(bounded(rng, v));
    const auto t = static_cast<std::uint32_t>(bounded(rng, v));
    if (u == t) continue;
    if (seen.insert(pair_code(u, t)).second) {
      // Heavier than the whole spine, so no shortcut ever wins.
      coded.emplace_back(pair_code(u, t), weight_in(rng, v, max_weight));
    }
  }
  return from_edges(v, std::move(coded));
}

CsrGraph gen_dag(std::uint32_t v, std::uint32_t out_degree, std::uint32_t max_weight,
                 std::uint64_t seed) {
  if (v == 0) throw PreconditionError("gen_dag: need at least one vertex");
  if (out_degree >= v) throw PreconditionError("gen_dag: out_degree must be < V");
  if (max_weight == 0) throw PreconditionError("gen_dag: max_weight must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> coded;
  coded.reserve(static_cast<std::uint64_t>(v) * out_degree);
  for (std::uint32_t u = 0; u + 1 < v; ++u) {
    const std::uint32_t room = v - 1 - u;  // targets in (u, v)
    const std::uint32_t deg = std::min(out_degree, room);
    if (deg == room) {
      for (std::uint32_t t = u + 1; t < v; ++t) {
        coded.emplace_back(pair_code(u, t), weight_in(rng, 1, max_weight));
      }
      continue;
    }
    std::unordered_set<std::uint32_t> row;
    row.reserve(deg * 2);
    while (row.size() < deg) {
      const auto t = u + 1 + static_cast<std::uint32_t>(bounded(rng, room));
      if (row.insert(t).second) {
        coded.emplace_back(pair_code(u, t), weight_in(rng, 1, max_weight));
      }
    }
  }
  return from_edges(v, std::move(coded));
}

CsrGraph gen_complete(std::uint32_t v, std::uint32_t max_weight, std::uint64_t seed) {
  if (v < 2) throw PreconditionError("gen_complete: need at least two vertices");
  if (v > 8192) throw PreconditionError("gen_complete: V too large for a dense graph");
  if (max_weight == 0) throw PreconditionError("gen_complete: max_weight must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> coded;
  coded.reserve(static_cast<std::uint64_t>(v) * (v - 1));
  for (std::uint32_t u = 0; u < v; ++u) {
    for (std::uint32_t t = u + 1; t < v; ++t) {
      const std::uint32_t w = weight_in(rng, 1, max_weight);
      coded.emplace_back(pair_code(u, t), w);
      coded.emplace_back(pair_code(t, u), w);
    }
  }
  return from_edges(v, std::move(coded));
}

CsrGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open graph file: " + path);
  std::string raw;
  std::size_t line_no = 0;
  auto next_line = [&](std::istringstream& line) {
    while (std::getline(in, raw)) {
      ++line_no;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
      line = std::istringstream(raw);
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& msg) -> void {
    throw PreconditionError("line " + std::to_string(line_no) + ": " + msg);
  };

  std::istringstream line;
  if (!next_line(line)) throw PreconditionError("empty graph file: " + path);
  std::uint64_t v = 0, e = 0;
  std::string extra;
  if (!(line >> v >> e) || (line >> extra)) fail("expected header 'V E'");
  if (v == 0 || v > 0xffffffffu) fail("vertex count out of range");

  std::vector<std::pair<std::uint64_t, std::uint32_t>> coded;
  coded.reserve(std::min<std::uint64_t>(e, std::uint64_t{1} << 24));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(coded.capacity());
  for (std::uint64_t i = 0; i < e; ++i) {
    if (!next_line(line)) {
      throw PreconditionError("unexpected end of file: expected " + std::to_string(e) +
                              " edges, got " + std::to_string(i));
    }
    std::int64_t src = -1, dst = -1, w = -1;
    if (!(line >> src >> dst >> w) || (line >> extra)) fail("expected 'src dst weight'");
    if (src < 0 || dst < 0 || src >= static_cast<std::int64_t>(v) ||
        dst >= static_cast<std::int64_t>(v)) {
      fail("endpoint out of range");
    }
    if (w < 0) fail("negative weight");
    if (w == 0 || w > 0xffffffff) fail("weight out of range [1, 2^32)");
    if (src == dst) fail("self-loop");
    const std::uint64_t code =
        pair_code(static_cast<std::uint32_t>(src), static_cast<std::uint32_t>(dst));
    if (!seen.insert(code).second) fail("parallel edge");
    coded.emplace_back(code, static_cast<std::uint32_t>(w));
  }
  if (next_line(line)) fail("trailing content after last edge");
  return from_edges(static_cast<std::uint32_t>(v), std::move(coded));
}

void save_edge_list(const CsrGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot open graph file for writing: " + path);
  out << g.vertex_count << ' ' << g.edge_count << '\n';
  for (std::uint32_t u = 0; u < g.vertex_count; ++u) {
    for (std::uint64_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
      out << u << ' ' << g.targets[i] << ' ' << g.weights[i] << '\n';
    }
  }
}

}  // namespace pbh

#include "pbh/sssp.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "pbh/error.hpp"

namespace pbh {

namespace {

std::uint64_t checked_add(std::uint64_t base, std::uint32_t w) {
  const std::uint64_t sum = base + w;
  if (sum < base) throw InvariantError("sssp: distance accumulation overflow");
  return sum;
}

}  // namespace

SsspResult par_dijkstra(const CsrGraph& g, std::uint32_t source, EngineConfig engine_config,
                        bool dag_mode) {
  if (source >= g.vertex_count) throw PreconditionError("par_dijkstra: source out of range");
  if (engine_config.d == 0) {
    engine_config.d = std::max<std::uint32_t>(1, g.max_out_degree());
  }
  const std::size_t d = engine_config.d;
  Engine eng(engine_config);

  SsspResult r;
  r.dist.assign(g.vertex_count, kInfDist);
  std::vector<std::uint64_t> tentative(g.vertex_count, kInfDist);
  std::vector<bool> settled(g.vertex_count, false);
  std::vector<Element> batch;

  eng.update(Element::live(source, 0));
  tentative[source] = 0;

  while (eng.live_size() > 0) {
    const Element top = eng.extract_min();
    const std::uint32_t v = top.value;
    if (settled[v]) continue;  // stale copy surfaced before its delete signal
    settled[v] = true;
    r.dist[v] = top.priority;
    r.settled_order.push_back(v);
    ++r.rounds;

    batch.clear();
    for (std::uint64_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      const std::uint32_t u = g.targets[i];
      if (!dag_mode && settled[u]) continue;
      const std::uint64_t cand = checked_add(top.priority, g.weights[i]);
      if (cand < tentative[u]) {
        tentative[u] = cand;
        batch.push_back(Element::live(u, cand));
      }
    }
    if (batch.empty()) continue;
    // CSR rows are target-sorted and the improvement filter keeps the last
    // write per target, so the batch is value-sorted and unique already.
    for (std::size_t off = 0; off < batch.size(); off += d) {
      const std::size_t n = std::min(d, batch.size() - off);
      eng.bulk_update(std::span<const Element>(batch.data() + off, n));
    }
  }
  eng.drain();
  r.metrics = eng.snapshot_metrics();
  return r;
}

SsspResult reference_dijkstra(const CsrGraph& g, std::uint32_t source) {
  if (source >= g.vertex_count) throw PreconditionError("reference_dijkstra: source out of range");
  SsspResult r;
  r.dist.assign(g.vertex_count, kInfDist);
  std::vector<bool> settled(g.vertex_count, false);
  using Entry = std::pair<std::uint64_t, std::uint32_t>;  // (dist, vertex)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  r.dist[source] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    const auto [dist, v] = pq.top();
    pq.pop();
    if (settled[v]) continue;
    settled[v] = true;
    r.settled_order.push_back(v);
    ++r.rounds;
    for (std::uint64_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      const std::uint32_t u = g.targets[i];
      const std::uint64_t cand = checked_add(dist, g.weights[i]);
      if (cand < r.dist[u]) {
        r.dist[u] = cand;
        pq.push({cand, u});
      }
    }
  }
  return r;
}

SsspResult bellman_ford(const CsrGraph& g, std::uint32_t source) {
  if (source >= g.vertex_count) throw PreconditionError("bellman_ford: source out of range");
  SsspResult r;
  r.dist.assign(g.vertex_count, kInfDist);
  r.dist[source] = 0;
  bool changed = true;
  // Descending source order makes an ascending chain propagate one hop per
  // sweep — the documented worst case.
  do {
    changed = false;
    ++r.rounds;
    for (std::uint32_t v = g.vertex_count; v-- > 0;) {
      const std::uint64_t base = r.dist[v];
      if (base == kInfDist) continue;
      for (std::uint64_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
        const std::uint64_t cand = checked_add(base, g.weights[i]);
        if (cand < r.dist[g.targets[i]]) {
          r.dist[g.targets[i]] = cand;
          changed = true;
        }
      }
    }
  } while (changed && r.rounds < g.vertex_count - 1);
  // settled_order is meaningless for sweep relaxation; report distance order.
  for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
    if (r.dist[v] != kInfDist) r.settled_order.push_back(v);
  }
  std::stable_sort(r.settled_order.begin(), r.settled_order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return r.dist[a] < r.dist[b]; });
  return r;
}

std::vector<std::vector<std::uint64_t>> floyd_warshall(const CsrGraph& g) {
  if (g.vertex_count > 4096) {
    throw PreconditionError("floyd_warshall: V > 4096 needs more than the guarded V^2 matrix");
  }
  const std::uint32_t n = g.vertex_count;
  std::vector<std::vector<std::uint64_t>> dist(n, std::vector<std::uint64_t>(n, kInfDist));
  for (std::uint32_t v = 0; v < n; ++v) {
    dist[v][v] = 0;
    for (std::uint64_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      dist[v][g.targets[i]] = std::min<std::uint64_t>(dist[v][g.targets[i]], g.weights[i]);
    }
  }
  for (std::uint32_t k = 0; k < n; ++k) {
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint64_t dik = dist[i][k];
      if (dik == kInfDist) continue;
      const auto& row_k = dist[k];
      auto& row_i = dist[i];
      for (std::uint32_t j = 0; j < n; ++j) {
        if (row_k[j] == kInfDist) continue;
        const std::uint64_t via = dik + row_k[j];
        if (via < row_i[j]) row_i[j] = via;
      }
    }
  }
  return dist;
}

std::string distances_to_csv(const std::vector<std::uint64_t>& dist) {
  std::ostringstream out;
  out << "vertex,dist\n";
  for (std::size_t v = 0; v < dist.size(); ++v) {
    out << v << ',';
    if (dist[v] == kInfDist) {
      out << "inf";
    } else {
      out << dist[v];
    }
    out << '\n';
  }
  return out.str();
}

std::uint64_t distance_checksum(const std::vector<std::uint64_t>& dist) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint64_t x : dist) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace pbh

// Acceptance gate: runs every release-blocking check and prints one
// PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "pbh/engine.hpp"
#include "pbh/error.hpp"
#include "pbh/graphs.hpp"
#include "pbh/scheduler.hpp"
#include "pbh/sssp.hpp"

#include "oracle.hpp"

namespace {

using namespace pbh;
using pbh::testing::gen_legal_trace;
using pbh::testing::run_oracle;

struct Gate {
  int failures = 0;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void report(int idx, const std::string& name, bool ok, const std::string& detail = "") {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%d] %-52s %s  (%.1fs)%s%s\n", idx, name.c_str(), ok ? "PASS" : "FAIL", secs,
                detail.empty() ? "" : "  ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
    t0 = std::chrono::steady_clock::now();
  }
};

EngineConfig config(std::size_t d, std::size_t workers) {
  EngineConfig cfg;
  cfg.d = d;
  cfg.workers = workers;
  return cfg;
}

// Criteria 1 and 2 share one suite: 100 random legal traces of 10^5 ops
// replayed across d and worker settings with debug assertions on. Criterion 1
// demands extraction sequences identical to the reference model; criterion 2
// demands every resolve entered within its stated preconditions: signal
// buffers in bounds (thrown on violation), no invariant complaints at rest,
// and zero bucket-floor misses (counted on the sequential legs; deletes and
// decrease-keys annihilate elements between a level's own resolves, which
// the refill cadence does not compensate for, so this count is expected to
// be honest rather than zero — see README).
void run_trace_suite(Gate& gate) {
  const std::size_t kTraces = 100;
  const std::size_t kOps = 100000;
  const std::size_t kD[] = {1, 4, 64};
  const std::size_t kWorkers[] = {1, 4};

  std::size_t mismatches = 0;
  std::size_t violations = 0;
  std::uint64_t floor_misses = 0;
  std::size_t sequential_legs = 0;
  std::string first_bad;
  for (std::size_t t = 0; t < kTraces; ++t) {
    const std::size_t d = kD[t % 3];
    const std::size_t workers = kWorkers[t % 2];
    Trace trace = gen_legal_trace(kOps, d, 1000 + t);
    std::vector<Element> want = run_oracle(trace);
    try {
      Engine eng(config(d, workers));
      Engine::RunResult got = eng.run_trace(trace);
      if (got.extracted != want) {
        ++mismatches;
        if (first_bad.empty())
          first_bad = "trace " + std::to_string(t) + " diverged from the model";
      }
      auto complaints = eng.heap().check_invariants();
      if (!complaints.empty()) {
        ++violations;
        if (first_bad.empty()) first_bad = "trace " + std::to_string(t) + ": " + complaints[0];
      }
      if (workers == 1) {
        ++sequential_legs;
        floor_misses += eng.heap().floor_misses();
      }
    } catch (const std::exception& e) {
      ++violations;
      if (first_bad.empty()) first_bad = "trace " + std::to_string(t) + ": " + e.what();
    }
  }
  gate.report(1, "extraction sequences match the reference model", mismatches == 0,
              mismatches ? first_bad : "100 traces x 100k ops, d in {1,4,64}, workers in {1,4}");
  std::string pre_detail;
  if (violations) {
    pre_detail = first_bad;
  } else if (floor_misses) {
    pre_detail = std::to_string(floor_misses) + " bucket-floor misses across " +
                 std::to_string(sequential_legs) +
                 " sequential legs: annihilation outruns the refill cadence";
  }
  gate.report(2, "resolves always start within their preconditions",
              violations == 0 && floor_misses == 0, pre_detail);
}

void check_closed_form(Gate& gate) {
  bool ok = true;
  std::string detail;
  ScheduleTrace trace =
      lockstep_simulate(4096, [](std::size_t i) { return std::uint64_t{1} << (2 * i); });
  for (const ScheduleEvent& e : trace.events) {
    if (e.level > 6) continue;
    if (e.start != closed_form_start(e.level, e.k)) {
      ok = false;
      detail = "level " + std::to_string(e.level) + " k " + std::to_string(e.k);
      break;
    }
  }
  ok = ok && verify_schedule(trace);
  gate.report(3, "lockstep starts equal the closed form (n=4096)", ok, detail);
}

void check_exclusion(Gate& gate) {
  std::uint64_t overlaps = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Trace trace = gen_legal_trace(10000, 2, 555 + seed);
    Engine eng(config(2, 8));
    (void)eng.run_trace(trace);
    overlaps += Engine::count_adjacent_overlaps(eng.intervals());
  }
  gate.report(4, "adjacent-level resolves never interleave (8 workers)", overlaps == 0,
              "20 seeds x 10k ops");
}

bool same_dist(const SsspResult& a, const SsspResult& b) { return a.dist == b.dist; }

void check_sssp_families(Gate& gate) {
  bool ok = true;
  std::string detail;
  auto expect = [&](bool cond, const std::string& what) {
    if (ok && !cond) {
      ok = false;
      detail = what;
    }
  };

  // Random density grid.
  for (std::uint32_t v : {256u, 1024u, 4096u}) {
    for (std::uint64_t epv : {4ull, 32ull, 256ull}) {
      const std::uint64_t e = std::min<std::uint64_t>(epv * v, std::uint64_t{v} * (v - 1));
      CsrGraph g = gen_random(v, e, 1000, v + epv);
      expect(same_dist(par_dijkstra(g, 0, config(0, epv == 32 ? 4 : 1)), reference_dijkstra(g, 0)),
             "random v=" + std::to_string(v) + " e/v=" + std::to_string(epv));
    }
  }
  // High-diameter: D = V verified through the chain distance.
  for (std::uint32_t v : {1024u, 4096u}) {
    CsrGraph g = gen_high_diameter(v, 8ull * v, 500, v);
    SsspResult r = par_dijkstra(g, 0, config(0, 4));
    expect(same_dist(r, reference_dijkstra(g, 0)), "highdiam v=" + std::to_string(v));
    expect(r.dist[v - 1] == v - 1, "highdiam diameter v=" + std::to_string(v));
  }
  // DAGs with the settled-check fast path.
  for (std::uint32_t outdeg : {8u, 64u}) {
    CsrGraph g = gen_dag(4096, outdeg, 300, outdeg);
    expect(same_dist(par_dijkstra(g, 0, config(0, 1), /*dag_mode=*/true), reference_dijkstra(g, 0)),
           "dag outdeg=" + std::to_string(outdeg));
  }
  // Complete graphs, cross-checked against the all-pairs matrix.
  for (std::uint32_t v : {256u, 512u}) {
    CsrGraph g = gen_complete(v, 1000, v);
    SsspResult want = reference_dijkstra(g, 0);
    expect(same_dist(par_dijkstra(g, 0, config(0, 4)), want),
           "complete v=" + std::to_string(v));
    expect(floyd_warshall(g)[0] == want.dist, "floyd row v=" + std::to_string(v));
  }
  gate.report(5, "shortest paths exact on all graph families", ok, detail);
}

void check_work_scaling(Gate& gate) {
  // Planned trace: n/2 inserts then n/2 extracts at d=16. Touches per
  // operation, normalized by d*log4(n/d), must stay within 2x across sizes.
  const std::size_t d = 16;
  double lo = 1e300, hi = 0;
  std::string detail;
  for (std::size_t n : {std::size_t{1} << 10, std::size_t{1} << 12, std::size_t{1} << 14,
                        std::size_t{1} << 16}) {
    Trace trace;
    trace.reserve(n);
    std::mt19937_64 rng(n);
    for (std::size_t i = 0; i < n / 2; ++i)
      trace.push_back(TraceOp::update(static_cast<Value>(i), 1 + rng() % 1000000000));
    for (std::size_t i = 0; i < n / 2; ++i) trace.push_back(TraceOp::extract());

    Engine eng(config(d, 1));
    Engine::RunResult run = eng.run_trace(trace);
    std::uint64_t touches = 0;
    for (auto t : run.metrics.touches_per_level) touches += t;
    const double per_op = double(touches) / double(n);
    const double norm = per_op / (d * (std::log2(double(n) / d) / 2.0));
    detail += (detail.empty() ? "" : ", ") + std::to_string(norm).substr(0, 4);
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  gate.report(6, "touches per op scale as d*log4(n/d) within 2x", hi / lo <= 2.0,
              "normalized: " + detail);
}

void check_io_halving(Gate& gate) {
  ScheduleTrace trace =
      lockstep_simulate(std::size_t{1} << 14,
                        [](std::size_t i) { return std::uint64_t{1} << (2 * i); });
  std::vector<std::uint64_t> costs;
  std::string detail;
  for (std::uint64_t b : {8, 16, 32, 64}) {
    costs.push_back(io_cost(trace, b, 1, 16));
    detail += (detail.empty() ? "" : "/") + std::to_string(costs.back());
  }
  bool ok = true;
  for (std::size_t i = 1; i < costs.size(); ++i) {
    const double ratio = double(costs[i]) / double(costs[i - 1]);
    if (ratio < 0.4 || ratio > 0.6) ok = false;  // halving within 20%
  }
  gate.report(7, "estimated transfers halve when the block doubles", ok, detail);
}

void check_declared_gaps(Gate& gate) {
  // The original experiments' GPU wall-times, the nvGRAPH speedup factors,
  // and the watt-hour measurements are hardware- and library-specific and
  // are NOT reproduced here. What this build offers instead is the density
  // sweep below: both solvers on the same high-diameter graphs, reporting
  // how wall time grows with density (no numeric tolerance asserted).
  bool ok = true;
  std::string detail;
  std::vector<double> pd_ms, bf_ms;
  for (std::uint64_t den : {2, 8, 32}) {
    CsrGraph g = gen_high_diameter(2048, den * 2048, 100, den);
    auto t0 = std::chrono::steady_clock::now();
    SsspResult pd = par_dijkstra(g, 0, config(0, 1));
    pd_ms.push_back(std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count());
    t0 = std::chrono::steady_clock::now();
    SsspResult bf = bellman_ford(g, 0);
    bf_ms.push_back(std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count());
    if (distance_checksum(pd.dist) != distance_checksum(bf.dist)) ok = false;
  }
  const double pd_growth = pd_ms.back() / std::max(pd_ms.front(), 1e-9);
  const double bf_growth = bf_ms.back() / std::max(bf_ms.front(), 1e-9);
  char buf[160];
  std::snprintf(buf, sizeof buf, "growth 2->32 edges/vertex: bucket-heap %.1fx, sweeps %.1fx",
                pd_growth, bf_growth);
  detail = buf;
  std::printf("    note: GPU wall-times, vendor-library speedups and power\n"
              "    measurements are not reproduced; trends reported instead.\n");
  gate.report(8, "non-reproduced results declared; trend sweep runs", ok, detail);
}

}  // namespace

int main() {
  Gate gate;
  try {
    run_trace_suite(gate);
    check_closed_form(gate);
    check_exclusion(gate);
    check_sssp_families(gate);
    check_work_scaling(gate);
    check_io_halving(gate);
    check_declared_gaps(gate);
  } catch (const std::exception& e) {
    std::printf("unexpected failure outside a criterion: %s\n", e.what());
    return 1;
  }
  if (gate.failures) {
    std::printf("%d criterion(s) failed\n", gate.failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}

// pbh_bench: graph generation, trace replay, SSSP runs, schedule simulation,
// and density sweeps, with JSON/CSV output for scripting.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbh/engine.hpp"
#include "pbh/error.hpp"
#include "pbh/graphs.hpp"
#include "pbh/scheduler.hpp"
#include "pbh/sssp.hpp"
#include "pbh/trace_format.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pbh::PreconditionError("cannot open for writing: " + path);
  out << body;
  if (!out) throw pbh::PreconditionError("write failed: " + path);
}

struct GenArgs {
  std::string family;
  std::string out = "graph.txt";
  std::uint32_t v = 1000;
  std::uint64_t e = 4000;
  std::uint32_t outdeg = 8;
  std::uint32_t maxw = 100;
  std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a) {
  pbh::CsrGraph g;
  if (a.family == "random") {
    g = pbh::gen_random(a.v, a.e, a.maxw, a.seed);
  } else if (a.family == "dag") {
    g = pbh::gen_dag(a.v, a.outdeg, a.maxw, a.seed);
  } else if (a.family == "complete") {
    g = pbh::gen_complete(a.v, a.maxw, a.seed);
  } else {
    g = pbh::gen_high_diameter(a.v, a.e, a.maxw, a.seed);
  }
  pbh::save_edge_list(g, a.out);
  json echo = {{"schema", "pbh.gen.v1"},     {"family", a.family},
               {"v", g.vertex_count},        {"e", g.edge_count},
               {"max_weight", a.maxw},       {"seed", a.seed},
               {"out", a.out}};
  if (a.family == "dag") echo["outdeg"] = a.outdeg;
  std::cout << echo.dump() << "\n";
  return kExitOk;
}

struct SsspArgs {
  std::string graph_path;
  std::string algo = "pardijkstra";
  std::string out;  // distances CSV; empty = don't write
  std::uint32_t source = 0;
  std::size_t d = 0;  // 0 = max out-degree
  std::size_t workers = 1;
};

int cmd_sssp(const SsspArgs& a) {
  pbh::CsrGraph g = pbh::load_edge_list(a.graph_path);
  if (a.source >= g.vertex_count)
    throw pbh::PreconditionError("source out of range");

  std::vector<std::uint64_t> dist;
  pbh::Metrics metrics;
  std::size_t effective_d = a.d;
  auto t0 = std::chrono::steady_clock::now();
  double wall_ms = 0.0;
  if (a.algo == "pardijkstra") {
    pbh::EngineConfig cfg;
    cfg.d = a.d;  // 0 becomes max out-degree inside
    cfg.workers = a.workers;
    cfg.debug_assertions = false;
    pbh::SsspResult r = pbh::par_dijkstra(g, a.source, cfg);
    wall_ms = elapsed_ms(t0);
    dist = std::move(r.dist);
    metrics = std::move(r.metrics);
    effective_d = a.d == 0 ? std::max<std::size_t>(1, g.max_out_degree()) : a.d;
  } else if (a.algo == "dijkstra") {
    dist = pbh::reference_dijkstra(g, a.source).dist;
    wall_ms = elapsed_ms(t0);
  } else if (a.algo == "bellmanford") {
    dist = pbh::bellman_ford(g, a.source).dist;
    wall_ms = elapsed_ms(t0);
  } else if (a.algo == "floydwarshall") {
    auto all = pbh::floyd_warshall(g);
    wall_ms = elapsed_ms(t0);
    dist = std::move(all[a.source]);
  } else {
    throw pbh::PreconditionError("unknown algorithm: " + a.algo);
  }

  if (!a.out.empty()) write_file(a.out, pbh::distances_to_csv(dist));

  std::uint64_t touches = 0;
  std::uint64_t resolves = 0;
  for (auto t : metrics.touches_per_level) touches += t;
  for (auto r : metrics.resolves_per_level) resolves += r;
  json rec = {{"schema", "pbh.bench.v1"},
              {"algorithm", a.algo},
              {"v", g.vertex_count},
              {"e", g.edge_count},
              {"source", a.source},
              {"d", effective_d},
              {"workers", a.algo == "pardijkstra" ? a.workers : std::size_t{1}},
              {"wall_ms", wall_ms},
              {"touches", touches},
              {"resolves", resolves},
              {"checksum", pbh::distance_checksum(dist)}};
  std::cout << rec.dump() << "\n";
  return kExitOk;
}

struct TraceArgs {
  std::string trace_path;
  std::size_t d = 1;
  std::size_t workers = 1;
};

int cmd_trace(const TraceArgs& a) {
  pbh::Trace trace = pbh::load_trace(a.trace_path);
  pbh::EngineConfig cfg;
  cfg.d = a.d;
  cfg.workers = a.workers;
  cfg.debug_assertions = false;
  pbh::Engine eng(cfg);
  pbh::Engine::RunResult run = eng.run_trace(trace);
  std::ostringstream lines;
  for (const pbh::Element& e : run.extracted)
    lines << e.value << " " << e.priority << "\n";
  std::cout << lines.str();
  std::cout << run.metrics.to_json() << "\n";
  return kExitOk;
}

struct SimArgs {
  std::uint64_t n_ops = 1024;
  std::size_t max_level = 33;
  std::string durations = "pow4";  // pow4 | unit
  std::string out;                 // CSV path; empty = stdout
};

int cmd_simulate(const SimArgs& a) {
  std::function<std::uint64_t(std::size_t)> dur;
  if (a.durations == "pow4") {
    dur = [](std::size_t i) { return std::uint64_t{1} << (2 * i); };
  } else if (a.durations == "unit") {
    dur = [](std::size_t) { return std::uint64_t{1}; };
  } else {
    throw pbh::PreconditionError("unknown durations: " + a.durations);
  }
  pbh::ScheduleTrace trace = pbh::lockstep_simulate(a.n_ops, dur);
  pbh::ScheduleTrace shown;
  for (const pbh::ScheduleEvent& ev : trace.events)
    if (ev.level <= a.max_level) shown.events.push_back(ev);
  std::string csv = pbh::schedule_to_csv(shown);
  if (a.out.empty())
    std::cout << csv;
  else
    write_file(a.out, csv);

  if (a.durations == "pow4") {
    bool ok = true;
    for (const pbh::ScheduleEvent& ev : trace.events)
      if (ev.start != pbh::closed_form_start(ev.level, ev.k)) ok = false;
    std::cout << "closed-form: " << (ok ? "PASS" : "FAIL") << "\n";
  }
  std::cout << "verify: " << (pbh::verify_schedule(trace) ? "PASS" : "FAIL") << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::uint32_t v = 4096;
  std::vector<std::uint64_t> densities = {2, 4, 8, 16};
  std::uint32_t maxw = 100;
  std::uint64_t seed = 7;
  std::size_t workers = 1;
  std::string out;  // CSV path; empty = stdout
};

// Density sweep on high-diameter graphs: wall time of the bucket-heap solver
// vs repeated-sweep relaxation as edges per vertex grow.
int cmd_bench(const BenchArgs& a) {
  std::ostringstream csv;
  csv << "schema,algorithm,v,e,density,workers,wall_ms,checksum\n";
  std::vector<double> par_ms;
  std::vector<double> bf_ms;
  for (std::uint64_t den : a.densities) {
    std::uint64_t e = std::max<std::uint64_t>(a.v - 1, den * a.v);
    pbh::CsrGraph g = pbh::gen_high_diameter(a.v, e, a.maxw, a.seed + den);

    pbh::EngineConfig cfg;
    cfg.d = 0;
    cfg.workers = a.workers;
    cfg.debug_assertions = false;
    auto t0 = std::chrono::steady_clock::now();
    pbh::SsspResult pd = pbh::par_dijkstra(g, 0, cfg);
    double pd_ms = elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    pbh::SsspResult bf = pbh::bellman_ford(g, 0);
    double bf_ms_one = elapsed_ms(t0);

    if (pbh::distance_checksum(pd.dist) != pbh::distance_checksum(bf.dist))
      throw pbh::InvariantError("bench: solvers disagree on distances");

    par_ms.push_back(pd_ms);
    bf_ms.push_back(bf_ms_one);
    csv << "pbh.bench.v1,pardijkstra," << a.v << "," << g.edge_count << "," << den
        << "," << a.workers << "," << pd_ms << ","
        << pbh::distance_checksum(pd.dist) << "\n";
    csv << "pbh.bench.v1,bellmanford," << a.v << "," << g.edge_count << "," << den
        << ",1," << bf_ms_one << "," << pbh::distance_checksum(bf.dist) << "\n";
  }
  if (a.out.empty())
    std::cout << csv.str();
  else
    write_file(a.out, csv.str());

  double par_growth = par_ms.back() / std::max(par_ms.front(), 1e-9);
  double bf_growth = bf_ms.back() / std::max(bf_ms.front(), 1e-9);
  json summary = {{"schema", "pbh.trend.v1"},
                  {"densities", a.densities},
                  {"pardijkstra_ms", par_ms},
                  {"bellmanford_ms", bf_ms},
                  {"pardijkstra_growth", par_growth},
                  {"bellmanford_growth", bf_growth},
                  {"pardijkstra_degrades_slower", par_growth <= bf_growth}};
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bucket-heap priority queue and shortest-path benchmark tool"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* cgen = app.add_subcommand("gen", "Generate a graph edge-list file");
  cgen->add_option("family", gen.family, "random | dag | complete | highdiam")
      ->required()
      ->check(CLI::IsMember({"random", "dag", "complete", "highdiam"}));
  cgen->add_option("--v", gen.v, "vertex count");
  cgen->add_option("--e", gen.e, "edge count (random/highdiam)");
  cgen->add_option("--outdeg", gen.outdeg, "out-degree (dag)");
  cgen->add_option("--maxw", gen.maxw, "max edge weight");
  cgen->add_option("--seed", gen.seed, "RNG seed");
  cgen->add_option("--out", gen.out, "output path");

  SsspArgs sssp;
  CLI::App* csssp = app.add_subcommand("sssp", "Single-source shortest paths");
  csssp->add_option("graph", sssp.graph_path, "edge-list file")->required();
  csssp->add_option("--algo", sssp.algo,
                    "pardijkstra | dijkstra | bellmanford | floydwarshall")
      ->check(CLI::IsMember({"pardijkstra", "dijkstra", "bellmanford", "floydwarshall"}));
  csssp->add_option("--source", sssp.source, "source vertex");
  csssp->add_option("--d", sssp.d, "batch parameter; 0 = max out-degree");
  csssp->add_option("--workers", sssp.workers, "engine threads (pardijkstra)");
  csssp->add_option("--out", sssp.out, "distances CSV path");

  TraceArgs trace;
  CLI::App* ctrace = app.add_subcommand("trace", "Replay an operation trace");
  ctrace->add_option("trace", trace.trace_path, "trace file")->required();
  ctrace->add_option("--d", trace.d, "batch parameter");
  ctrace->add_option("--workers", trace.workers, "engine threads");

  SimArgs sim;
  CLI::App* csim = app.add_subcommand("simulate", "Lockstep resolve-schedule simulation");
  csim->add_option("--n-ops", sim.n_ops, "operation count");
  csim->add_option("--max-level", sim.max_level, "deepest level in the CSV");
  csim->add_option("--durations", sim.durations, "pow4 | unit")
      ->check(CLI::IsMember({"pow4", "unit"}));
  csim->add_option("--out", sim.out, "CSV path (default stdout)");

  BenchArgs bench;
  CLI::App* cbench = app.add_subcommand("bench", "Density sweep on high-diameter graphs");
  cbench->add_option("--v", bench.v, "vertex count");
  cbench->add_option("--densities", bench.densities, "edges-per-vertex values")
      ->delimiter(',');
  cbench->add_option("--maxw", bench.maxw, "max extra-edge weight spread");
  cbench->add_option("--seed", bench.seed, "RNG seed");
  cbench->add_option("--workers", bench.workers, "engine threads");
  cbench->add_option("--out", bench.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cgen) return cmd_gen(gen);
    if (*csssp) return cmd_sssp(sssp);
    if (*ctrace) return cmd_trace(trace);
    if (*csim) return cmd_simulate(sim);
    if (*cbench) return cmd_bench(bench);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const pbh::TraceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const pbh::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const pbh::EmptyHeapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const pbh::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

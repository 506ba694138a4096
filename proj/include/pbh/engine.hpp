#pragma once

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "pbh/bucket_heap.hpp"
#include "pbh/scheduler.hpp"
#include "pbh/trace_format.hpp"

namespace pbh {

struct EngineConfig {
  std::size_t d = 1;
  std::size_t workers = 1;  // total parallelism; 1 runs everything on the client thread
  bool debug_assertions = true;
};

struct Metrics {
  std::uint64_t ops = 0;
  std::vector<std::uint64_t> resolves_per_level;
  std::vector<std::uint64_t> touches_per_level;
  double wall_ms = 0.0;

  std::string to_json() const;
};

/// Logical span of one resolve: begin/end ticks drawn from a shared counter
/// at grant and release. Two resolves ran concurrently iff their spans
/// interleave, so adjacent-level exclusion is checkable after the fact.
struct ResolveInterval {
  std::uint32_t level = 0;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

/// Runs a bucket heap under the 4-to-1 resolve schedule. The client thread
/// owns levels 0-1: each operation is applied together with its resolve(0)
/// under a scheduler grant, blocking while the grant is unavailable. With
/// workers = P > 1, P-1 background threads execute deeper resolves as the
/// dependency counters release them; with workers = 1 the client thread runs
/// them inline after each operation. Results are identical either way.
class Engine {
 public:
  explicit Engine(EngineConfig cfg);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void update(Element e);
  void bulk_update(std::span<const Element> batch);
  Element extract_min();
  void delete_value(Value value);
  std::int64_t live_size() const { return heap_.live_size(); }

  /// Wait for all scheduled resolves to finish, then run drain passes until
  /// the heap is quiescent. The engine stays usable afterwards.
  void drain();

  /// Counter snapshot; call when quiescent (after drain).
  Metrics snapshot_metrics() const;

  BucketHeap& heap() { return heap_; }
  const BucketHeap& heap() const { return heap_; }

  /// All scheduled resolve spans so far, grant-ordered. Read when quiescent.
  const std::vector<ResolveInterval>& intervals() const { return intervals_; }

  /// Number of interval pairs on adjacent levels that interleave (expected 0).
  static std::uint64_t count_adjacent_overlaps(const std::vector<ResolveInterval>& spans);

  struct RunResult {
    std::vector<Element> extracted;
    Metrics metrics;
  };

  /// Replay a parsed trace, drain, and collect metrics. Operation failures
  /// are rethrown as TraceError carrying the op index.
  RunResult run_trace(const Trace& trace);

 private:
  void apply_op(const TraceOp& op, std::vector<Element>& out);
  /// Acquire the level-0 grant (blocking), run fn() on levels 0-1, release.
  template <typename Fn>
  auto with_level0_grant(Fn&& fn) -> decltype(fn());
  void catch_up_inline();  // workers == 1: run due deeper resolves
  void worker_loop();

  BucketHeap heap_;
  const std::size_t workers_;

  std::mutex mu_;
  std::condition_variable cv_;
  DependencyState state_;
  std::uint64_t seq_ = 0;  // logical tick source for intervals
  std::vector<ResolveInterval> intervals_;
  bool stop_ = false;
  std::vector<std::thread> threads_;
};

}  // namespace pbh

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pbh/bucket_heap.hpp"  // kMaxLevels

namespace pbh {

/// Counter state of the resolve schedule. Level i may start its k-th resolve
/// (k = completed_[i] + 1) when:
///   - the feeder is four ahead: completed_[i-1] >= 4k (for i >= 1),
///   - on each fourth resolve (k = 4j+1, j >= 1) the level below has
///     completed its j-th resolve: completed_[i+1] >= j,
///   - no resolve is in flight on level i-1, i, or i+1.
/// The rules make resolves on adjacent levels mutually exclusive and keep
/// every level exactly in step with its feeder; they also imply
/// completed_[i] <= completed_[i-1]/4 at all times.
class DependencyState {
 public:
  bool can_resolve(std::size_t i) const;
  void record_start(std::size_t i);  // requires can_resolve(i)
  void record_end(std::size_t i);    // requires an in-flight resolve on i

  std::uint64_t completed(std::size_t i) const { return completed_[i]; }
  bool in_flight(std::size_t i) const { return in_flight_[i]; }
  bool any_in_flight() const;
  /// True when some level could start a resolve right now.
  bool any_eligible(std::size_t max_level) const;

 private:
  std::uint64_t completed_[kMaxLevels] = {};
  bool in_flight_[kMaxLevels] = {};
};

struct ScheduleEvent {
  std::uint32_t level = 0;
  std::uint64_t k = 0;  // 1-based ordinal within the level
  std::uint64_t start = 0;
  std::uint64_t end = 0;
};

struct ScheduleTrace {
  std::vector<ScheduleEvent> events;
};

/// Earliest-start schedule for the resolves generated by n_ops operations,
/// honoring feeder, deeper and adjacency constraints, with level-0 starts
/// pinned to the operation cadence (op k arrives at timestep 5k-5) and ties
/// between levels broken toward the shallower level. resolve_duration(i)
/// gives the timesteps a level-i resolve occupies (>= 1).
ScheduleTrace lockstep_simulate(std::uint64_t n_ops,
                                const std::function<std::uint64_t(std::size_t)>& resolve_duration);

/// Start timestep of the k-th level-i resolve under durations 4^i:
/// 5k*4^i - 5 + (4^i - 1)/3.
std::uint64_t closed_form_start(std::size_t i, std::uint64_t k);

/// True iff every event in the trace respects seriality within its level,
/// the feeder and deeper dependencies, and adjacency exclusion, and no
/// required event is missing.
bool verify_schedule(const ScheduleTrace& trace);

/// Estimated parallel block transfers to execute the trace: each level-i
/// event scans 2*d*4^i elements at ceil(touched/B) transfers; levels are
/// assigned to the P processors round-robin and the busiest processor's
/// total is returned.
std::uint64_t io_cost(const ScheduleTrace& trace, std::uint64_t block_size,
                      std::uint64_t processors, std::uint64_t d = 1);

/// CSV with header "level,k,start,end".
std::string schedule_to_csv(const ScheduleTrace& trace);

}  // namespace pbh

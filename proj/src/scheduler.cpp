#include "pbh/scheduler.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pbh/error.hpp"

namespace pbh {

bool DependencyState::can_resolve(std::size_t i) const {
  if (i + 1 >= kMaxLevels) return false;
  if (in_flight_[i]) return false;
  if (i > 0 && in_flight_[i - 1]) return false;
  if (in_flight_[i + 1]) return false;
  const std::uint64_t k = completed_[i] + 1;
  if (i > 0 && completed_[i - 1] < 4 * k) return false;
  if (k % 4 == 1 && k > 1 && completed_[i + 1] < (k - 1) / 4) return false;
  return true;
}

void DependencyState::record_start(std::size_t i) {
  if (!can_resolve(i)) {
    throw InvariantError("record_start(" + std::to_string(i) + "): dependencies not satisfied");
  }
  in_flight_[i] = true;
}

void DependencyState::record_end(std::size_t i) {
  if (i >= kMaxLevels || !in_flight_[i]) {
    throw InvariantError("record_end(" + std::to_string(i) + "): no resolve in flight");
  }
  in_flight_[i] = false;
  ++completed_[i];
}

bool DependencyState::any_in_flight() const {
  for (bool f : in_flight_) {
    if (f) return true;
  }
  return false;
}

bool DependencyState::any_eligible(std::size_t max_level) const {
  // Level 0 is driven by the operation stream, not by this query.
  for (std::size_t i = 1; i <= max_level && i + 1 < kMaxLevels; ++i) {
    if (can_resolve(i)) return true;
  }
  return false;
}

std::uint64_t closed_form_start(std::size_t i, std::uint64_t k) {
  const std::uint64_t pow4 = std::uint64_t{1} << (2 * i);
  return 5 * k * pow4 - 5 + (pow4 - 1) / 3;
}

ScheduleTrace lockstep_simulate(
    std::uint64_t n_ops, const std::function<std::uint64_t(std::size_t)>& resolve_duration) {
  ScheduleTrace trace;
  if (n_ops == 0) return trace;

  // Level i sees one resolve per 4^i operations.
  std::vector<std::uint64_t> total;  // events per level
  std::uint64_t remaining = n_ops;
  while (remaining >= 1) {
    total.push_back(remaining);
    remaining /= 4;
  }
  const std::size_t levels = total.size();

  std::vector<std::uint64_t> dur(levels);
  std::uint64_t dur_sum = 0;
  for (std::size_t i = 0; i < levels; ++i) {
    dur[i] = resolve_duration(i);
    if (dur[i] == 0) throw PreconditionError("lockstep_simulate: durations must be >= 1");
    dur_sum += dur[i];
  }

  std::vector<std::uint64_t> next_k(levels, 1);
  std::vector<std::uint64_t> busy_until(levels, 0);  // exclusive; 0 = idle
  std::vector<std::vector<std::uint64_t>> ends(levels);
  std::uint64_t done = 0, want = 0;
  for (std::uint64_t n : total) want += n;

  auto busy_at = [&](std::size_t i, std::uint64_t t) { return busy_until[i] > t; };

  const std::uint64_t t_cap = 1000 + 10 * n_ops + 40 * dur_sum;
  for (std::uint64_t t = 0; done < want; ++t) {
    if (t > t_cap) throw InvariantError("lockstep_simulate: schedule failed to make progress");
    for (std::size_t i = 0; i < levels; ++i) {
      if (next_k[i] > total[i] || busy_at(i, t)) continue;
      if (i > 0 && busy_at(i - 1, t)) continue;
      if (i + 1 < levels && busy_at(i + 1, t)) continue;
      const std::uint64_t k = next_k[i];
      if (i == 0 && t < 5 * k - 5) continue;  // operations arrive every 5 timesteps
      if (i > 0 && (ends[i - 1].size() < 4 * k || ends[i - 1][4 * k - 1] > t)) continue;
      if (k % 4 == 1 && k > 1 && i + 1 < levels) {
        const std::uint64_t j = (k - 1) / 4;
        if (ends[i + 1].size() < j || ends[i + 1][j - 1] > t) continue;
      }
      const std::uint64_t end = t + dur[i];
      trace.events.push_back({static_cast<std::uint32_t>(i), k, t, end});
      ends[i].push_back(end);
      busy_until[i] = end;
      ++next_k[i];
      ++done;
    }
  }
  return trace;
}

bool verify_schedule(const ScheduleTrace& trace) {
  std::map<std::pair<std::uint32_t, std::uint64_t>, const ScheduleEvent*> by_key;
  std::uint32_t max_level = 0;
  for (const ScheduleEvent& e : trace.events) {
    if (e.k == 0 || e.end <= e.start) return false;
    if (!by_key.emplace(std::make_pair(e.level, e.k), &e).second) return false;  // duplicate
    max_level = std::max(max_level, e.level);
  }
  auto end_of = [&](std::uint32_t level, std::uint64_t k) -> const std::uint64_t* {
    auto it = by_key.find({level, k});
    return it == by_key.end() ? nullptr : &it->second->end;
  };
  std::vector<bool> level_present(static_cast<std::size_t>(max_level) + 2, false);
  for (const ScheduleEvent& e : trace.events) level_present[e.level] = true;
  for (const ScheduleEvent& e : trace.events) {
    if (e.k > 1) {  // serial within the level
      const std::uint64_t* prev = end_of(e.level, e.k - 1);
      if (!prev || *prev > e.start) return false;
    }
    if (e.level > 0) {  // feeder four ahead
      const std::uint64_t* feed = end_of(e.level - 1, 4 * e.k);
      if (!feed || *feed > e.start) return false;
    }
    if (e.k % 4 == 1 && e.k > 1 && level_present[e.level + 1]) {
      // Every fourth round waits on the level below.
      const std::uint64_t j = (e.k - 1) / 4;
      const std::uint64_t* deep = end_of(e.level + 1, j);
      if (!deep || *deep > e.start) return false;
    }
  }
  // Adjacency exclusion: sweep each level pair by start time.
  std::vector<std::vector<const ScheduleEvent*>> per_level(max_level + 1);
  for (const ScheduleEvent& e : trace.events) per_level[e.level].push_back(&e);
  for (auto& v : per_level) {
    std::sort(v.begin(), v.end(),
              [](const ScheduleEvent* a, const ScheduleEvent* b) { return a->start < b->start; });
  }
  for (std::uint32_t i = 0; i + 1 <= max_level; ++i) {
    std::vector<const ScheduleEvent*> both = per_level[i];
    both.insert(both.end(), per_level[i + 1].begin(), per_level[i + 1].end());
    std::sort(both.begin(), both.end(),
              [](const ScheduleEvent* a, const ScheduleEvent* b) { return a->start < b->start; });
    std::uint64_t max_end[2] = {0, 0};
    for (const ScheduleEvent* e : both) {
      const int side = e->level == i ? 0 : 1;
      if (max_end[1 - side] > e->start) return false;  // overlaps the other level
      max_end[side] = std::max(max_end[side], e->end);
    }
  }
  return true;
}

std::uint64_t io_cost(const ScheduleTrace& trace, std::uint64_t block_size,
                      std::uint64_t processors, std::uint64_t d) {
  if (block_size == 0 || processors == 0 || d == 0) {
    throw PreconditionError("io_cost: block size, processors and d must be positive");
  }
  std::vector<std::uint64_t> load(processors, 0);
  for (const ScheduleEvent& e : trace.events) {
    const std::uint64_t touched = 2 * d * (std::uint64_t{1} << (2 * e.level));
    load[e.level % processors] += (touched + block_size - 1) / block_size;
  }
  return *std::max_element(load.begin(), load.end());
}

std::string schedule_to_csv(const ScheduleTrace& trace) {
  std::ostringstream out;
  out << "level,k,start,end\n";
  for (const ScheduleEvent& e : trace.events) {
    out << e.level << ',' << e.k << ',' << e.start << ',' << e.end << '\n';
  }
  return out.str();
}

}  // namespace pbh

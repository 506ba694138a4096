#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "pbh/error.hpp"
#include "pbh/scheduler.hpp"

using namespace pbh;

namespace {

std::uint64_t pow4_duration(std::size_t i) { return std::uint64_t{1} << (2 * i); }
std::uint64_t unit_duration(std::size_t) { return 1; }

// Run start/end pairs on the smallest eligible level until `pred` holds.
template <typename Pred>
void drive_until(DependencyState& s, Pred pred) {
  for (int guard = 0; guard < 100000; ++guard) {
    if (pred()) return;
    bool advanced = false;
    for (std::size_t i = 0; i < 8; ++i) {
      if (s.can_resolve(i)) {
        s.record_start(i);
        s.record_end(i);
        advanced = true;
        break;
      }
    }
    REQUIRE(advanced);
  }
  REQUIRE(false);
}

}  // namespace

TEST_CASE("can_resolve gates level 1 on four completed feeders") {
  DependencyState s;
  for (int i = 0; i < 3; ++i) {
    s.record_start(0);
    s.record_end(0);
  }
  CHECK(s.completed(0) == 3);
  CHECK(!s.can_resolve(1));  // needs 4 feeder rounds
  s.record_start(0);
  s.record_end(0);
  CHECK(s.can_resolve(1));
}

TEST_CASE("every fourth round waits on the deeper level, level 0 included") {
  DependencyState s;
  for (int i = 0; i < 4; ++i) {
    s.record_start(0);
    s.record_end(0);
  }
  // k=5 with k%4==1 requires one completed round below.
  CHECK(!s.can_resolve(0));
  s.record_start(1);
  s.record_end(1);
  CHECK(s.can_resolve(0));
}

TEST_CASE("in-flight resolves exclude their neighbors only") {
  DependencyState s;
  drive_until(s, [&] { return s.can_resolve(2); });
  const bool level0_was_free = s.can_resolve(0);
  s.record_start(2);
  CHECK(s.in_flight(2));
  CHECK(s.any_in_flight());
  CHECK(!s.can_resolve(1));
  CHECK(!s.can_resolve(2));
  CHECK(!s.can_resolve(3));
  CHECK(s.can_resolve(0) == level0_was_free);  // non-adjacent: unaffected
  s.record_end(2);
  CHECK(!s.any_in_flight());
  CHECK(s.completed(2) == 1);
}

TEST_CASE("record protocol violations throw") {
  DependencyState s;
  CHECK_THROWS_AS(s.record_end(1), InvariantError);
  CHECK_THROWS_AS(s.record_start(5), InvariantError);  // feeder count zero
  s.record_start(0);
  CHECK_THROWS_AS(s.record_start(0), InvariantError);  // already in flight
  s.record_end(0);
}

TEST_CASE("any_eligible scans background levels only") {
  DependencyState s;
  CHECK(!s.any_eligible(kMaxLevels - 2));  // level 0 is the client's business
  for (int i = 0; i < 4; ++i) {
    s.record_start(0);
    s.record_end(0);
  }
  CHECK(s.any_eligible(kMaxLevels - 2));
}

TEST_CASE("random legal interleavings never co-schedule adjacent levels") {
  std::mt19937_64 rng(2024);
  DependencyState s;
  std::vector<std::size_t> flying;
  for (int step = 0; step < 10000; ++step) {
    const bool want_start = flying.empty() || rng() % 5 < 3;
    if (want_start) {
      std::vector<std::size_t> eligible;
      for (std::size_t i = 0; i < 10; ++i)
        if (s.can_resolve(i)) eligible.push_back(i);
      if (!eligible.empty()) {
        std::size_t pick = eligible[rng() % eligible.size()];
        s.record_start(pick);
        flying.push_back(pick);
      } else if (!flying.empty()) {
        std::size_t at = rng() % flying.size();
        s.record_end(flying[at]);
        flying.erase(flying.begin() + at);
      }
    } else {
      std::size_t at = rng() % flying.size();
      s.record_end(flying[at]);
      flying.erase(flying.begin() + at);
    }
    for (std::size_t a : flying)
      for (std::size_t b : flying)
        if (a != b) CHECK(a + 1 != b);
  }
  // Counter sanity at rest: each level consumed four feeder rounds per round.
  for (std::size_t f : flying) s.record_end(f);
  for (std::size_t i = 1; i < 10; ++i) {
    if (s.completed(i) > 0) CHECK(s.completed(i - 1) >= 4 * s.completed(i));
  }
}

TEST_CASE("closed form start times") {
  CHECK(closed_form_start(0, 1) == 0);
  CHECK(closed_form_start(0, 2) == 5);
  CHECK(closed_form_start(0, 5) == 20);
  CHECK(closed_form_start(1, 1) == 16);
  CHECK(closed_form_start(2, 1) == 80);
}

TEST_CASE("lockstep simulation matches the closed form for power-of-four durations") {
  for (std::uint64_t n : {1ull, 4ull, 64ull, 512ull}) {
    ScheduleTrace trace = lockstep_simulate(n, pow4_duration);
    for (const ScheduleEvent& e : trace.events) {
      CAPTURE(n);
      CAPTURE(e.level);
      CAPTURE(e.k);
      REQUIRE(e.start == closed_form_start(e.level, e.k));
      REQUIRE(e.end == e.start + pow4_duration(e.level));
    }
  }
}

TEST_CASE("lockstep event counts follow the one-per-4^i rule") {
  ScheduleTrace trace = lockstep_simulate(4, pow4_duration);
  std::size_t level0 = 0, level1 = 0, deeper = 0;
  for (const ScheduleEvent& e : trace.events) {
    if (e.level == 0) ++level0;
    else if (e.level == 1) ++level1;
    else ++deeper;
  }
  CHECK(level0 == 4);
  CHECK(level1 == 1);
  CHECK(deeper == 0);

  ScheduleTrace one = lockstep_simulate(1, pow4_duration);
  REQUIRE(one.events.size() == 1);
  CHECK(one.events[0].level == 0);
  CHECK(one.events[0].start == 0);
}

TEST_CASE("lockstep rejects zero durations") {
  CHECK_THROWS_AS(lockstep_simulate(4, [](std::size_t) { return std::uint64_t{0}; }),
                  PreconditionError);
}

TEST_CASE("verify_schedule accepts simulator output") {
  CHECK(verify_schedule(lockstep_simulate(256, pow4_duration)));
  CHECK(verify_schedule(lockstep_simulate(256, unit_duration)));
  CHECK(verify_schedule(lockstep_simulate(77, [](std::size_t i) {
    return std::uint64_t{1} + i;  // below the 4^i budget
  })));
}

TEST_CASE("verify_schedule flags injected violations") {
  ScheduleTrace good = lockstep_simulate(64, pow4_duration);
  REQUIRE(verify_schedule(good));

  auto find = [&](ScheduleTrace& t, std::uint32_t level, std::uint64_t k) -> ScheduleEvent& {
    for (ScheduleEvent& e : t.events)
      if (e.level == level && e.k == k) return e;
    REQUIRE(false);
    return t.events.front();
  };

  {  // start before the fourth feeder finished
    ScheduleTrace bad = good;
    ScheduleEvent& e = find(bad, 1, 1);
    e.start = 15;  // Res(0,4) ends at 16
    e.end = 19;
    CHECK(!verify_schedule(bad));
  }
  {  // overlap with an adjacent level
    ScheduleTrace bad = good;
    ScheduleEvent& e = find(bad, 2, 1);
    const ScheduleEvent& n = find(bad, 1, 2);
    e.start = n.start;
    e.end = n.start + 16;
    CHECK(!verify_schedule(bad));
  }
  {  // serial order broken within a level
    ScheduleTrace bad = good;
    ScheduleEvent& e = find(bad, 0, 2);
    e.start = 0;
    e.end = 1;
    CHECK(!verify_schedule(bad));
  }
  {  // duplicate event key
    ScheduleTrace bad = good;
    bad.events.push_back(bad.events.front());
    CHECK(!verify_schedule(bad));
  }
  {  // empty interval
    ScheduleTrace bad = good;
    bad.events.front().end = bad.events.front().start;
    CHECK(!verify_schedule(bad));
  }
}

TEST_CASE("io_cost counts block transfers per busiest processor") {
  ScheduleTrace one;
  one.events.push_back({0, 1, 0, 1});
  CHECK(io_cost(one, 8, 1) == 1);  // 2 words touched -> one block

  ScheduleTrace trace = lockstep_simulate(256, pow4_duration);
  CHECK(io_cost(trace, 8, 1) == 512);
  CHECK(io_cost(trace, 16, 1) == 416);
  CHECK(io_cost(trace, 8, 2) == 384);  // levels 0,2,4 land on processor 0

  CHECK_THROWS_AS(io_cost(trace, 0, 1), PreconditionError);
  CHECK_THROWS_AS(io_cost(trace, 8, 0), PreconditionError);
}

TEST_CASE("schedule CSV has a header and one line per event") {
  ScheduleTrace trace = lockstep_simulate(4, pow4_duration);
  std::string csv = schedule_to_csv(trace);
  CHECK(csv.rfind("level,k,start,end\n", 0) == 0);
  CHECK(csv.find("1,1,16,20\n") != std::string::npos);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == trace.events.size() + 1);
}

#pragma once

#include <cstdint>
#include <limits>

namespace pbh {

using Value = std::uint32_t;
using Priority = std::uint64_t;

constexpr Priority kMaxPriority = std::numeric_limits<Priority>::max();

/// A queue entry. `del` marks a delete signal: it carries only a value and
/// compares below every live priority. Delete signals live in signal buffers
/// only, never in buckets.
struct Element {
  Value value = 0;
  bool del = false;
  Priority priority = 0;

  static Element live(Value v, Priority p) { return Element{v, false, p}; }
  static Element del_signal(Value v) { return Element{v, true, 0}; }

  friend bool operator==(const Element& a, const Element& b) {
    return a.value == b.value && a.del == b.del && (a.del || a.priority == b.priority);
  }
};

/// Composite key order for live elements: (priority, value) lexicographic.
inline bool key_less(const Element& a, const Element& b) {
  if (a.priority != b.priority) return a.priority < b.priority;
  return a.value < b.value;
}

/// Order used by value-sorted sequences: ascending value; within one value,
/// delete signals first, then ascending priority.
inline bool value_order_less(const Element& a, const Element& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.del != b.del) return a.del;
  return a.priority < b.priority;
}

/// A splitter is a composite key (priority, value) or +infinity. Level i's
/// splitter separates its bucket (keys <= splitter) from everything deeper
/// (keys > splitter); the deepest occupied level carries +infinity.
struct Splitter {
  Priority priority = 0;
  Value tie_value = 0;
  bool infinite = true;

  static Splitter inf() { return Splitter{}; }
  static Splitter at(Priority p, Value v) { return Splitter{p, v, false}; }

  /// True when a live element's key is <= this splitter.
  bool admits(const Element& e) const {
    if (infinite) return true;
    if (e.priority != priority) return e.priority < priority;
    return e.value <= tie_value;
  }

  /// Key-compare two splitters; infinity sorts above every finite key.
  friend bool operator<(const Splitter& a, const Splitter& b) {
    if (a.infinite || b.infinite) return !a.infinite && b.infinite;
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.tie_value < b.tie_value;
  }
  friend bool operator==(const Splitter& a, const Splitter& b) {
    if (a.infinite != b.infinite) return false;
    if (a.infinite) return true;
    return a.priority == b.priority && a.tie_value == b.tie_value;
  }
};

}  // namespace pbh

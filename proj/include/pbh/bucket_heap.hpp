#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pbh/element.hpp"

namespace pbh {

/// Fixed ceiling on levels. Capacity through level i grows as d*4^i, so 34
/// slots cover any reachable content for 64-bit operation counts.
constexpr std::size_t kMaxLevels = 34;

/// One level of the heap: a value-sorted bucket of residents (capacity
/// 2*d*4^i), a value-sorted signal buffer of in-transit entries (capacity
/// d*4^i), the level's splitter, and bookkeeping counters.
struct Level {
  std::vector<Element> bucket;
  std::vector<Element> signal;
  Splitter splitter = Splitter::inf();
  std::uint64_t resolve_count = 0;
  /// |bucket| + |signal|, published at the end of each resolve so that
  /// resolves on shallower levels can test "is anything down there" without
  /// touching the vectors.
  std::atomic<std::uint64_t> content{0};

  Level() = default;
  Level(const Level&) = delete;
  Level& operator=(const Level&) = delete;
};

struct HeapConfig {
  std::size_t d = 1;          ///< batch parameter; scales every capacity
  bool debug_checks = true;   ///< verify resolve entry conditions at runtime
  bool trace_checks = false;  ///< shadow-track values to reject illegal traces
};

/// A multi-level bucket heap. Mutations happen through operations on level 0
/// (update / bulk_update / delete_value / extract_min, each followed by
/// resolve(0)) and through resolve(i), which moves content across the (i, i+1)
/// boundary. resolve(i) touches levels i and i+1 only, so resolves on
/// non-adjacent levels may run concurrently under an external schedule.
class BucketHeap {
 public:
  explicit BucketHeap(HeapConfig cfg);

  std::size_t d() const { return d_; }

  std::size_t bucket_capacity(std::size_t i) const { return 2 * d_ * (std::size_t{1} << (2 * i)); }
  std::size_t signal_capacity(std::size_t i) const { return d_ * (std::size_t{1} << (2 * i)); }

  /// Minimum-key live element of the bucket at level 0. The heap keeps the
  /// global minimum there whenever any live element exists.
  Element find_min() const;

  /// Remove and return the minimum. Emits a delete signal for the extracted
  /// value into S_0; the caller must resolve(0) before the next operation.
  Element extract_min();

  /// Insert or decrease: places e into S_0. If the value is already live, the
  /// new priority must not exceed the stored one; the stale copy annihilates
  /// when the two meet during a later resolve.
  void update(Element e);

  /// Queue a delete signal for `value` into S_0. Deleting an absent value is
  /// a no-op once the signal drains. Re-inserting a deleted or extracted
  /// value is unsupported.
  void delete_value(Value value);

  /// Place a value-sorted batch (unique values, no delete signals, size <= d)
  /// into S_0.
  void bulk_update(std::span<const Element> batch);

  /// Move content across the (i, i+1) boundary: absorb S_i into B_i, push
  /// overflow and signals down, then refill B_i from below up to capacity.
  /// No-op on empty levels.
  void resolve(std::size_t i);

  /// True when resolve(i) would change anything: S_i non-empty, B_i over
  /// capacity, or B_i under capacity with content at level i+1.
  bool wants_resolve(std::size_t i) const;

  /// Run top-down resolve passes until quiescent: every signal buffer empty
  /// and every bucket at its fill target or the content below exhausted.
  /// Requires exclusive access to the whole heap. The schedule-derived
  /// bucket-floor checks are suspended for the duration (drain resolves run
  /// off-schedule by design).
  void drain();

  /// Number of live values: inserted and neither extracted nor deleted.
  /// Stale duplicate copies and delete signals are not counted.
  std::int64_t live_size() const { return live_size_.load(std::memory_order_relaxed); }
  bool live_empty() const { return live_size() == 0; }

  /// Highest level index that ever held content, plus one. At least 1.
  std::size_t allocated_levels() const;

  std::span<const Element> bucket(std::size_t i) const { return levels_[i].bucket; }
  std::span<const Element> signal(std::size_t i) const { return levels_[i].signal; }
  const Splitter& splitter(std::size_t i) const { return levels_[i].splitter; }
  std::uint64_t resolve_count(std::size_t i) const { return levels_[i].resolve_count; }
  std::uint64_t touches(std::size_t i) const { return touch_counts_[i]; }
  std::uint64_t total_touches() const;
  std::uint64_t op_count() const { return op_count_; }

  /// Times a resolve began with a bucket below its schedule-derived floor
  /// (|B_i| >= d*4^i, and |B_{i+1}| >= d*4^(i+1) + d*4^i, each applicable
  /// while deeper content exists). The 4-to-1 schedule maintains these floors
  /// as long as elements only move between levels; annihilation — a delete
  /// signal meeting its value's live copy, or a stale decrease-key copy
  /// meeting its replacement — removes elements without a compensating
  /// refill, so delete- or decrease-heavy traces can legitimately dip below
  /// them. Misses are therefore counted, not thrown; the signal-buffer
  /// capacity preconditions, which hold unconditionally, still throw.
  /// Counted only in single-threaded runs (trace checks on).
  std::uint64_t floor_misses() const {
    return floor_misses_.load(std::memory_order_relaxed);
  }

  /// Structural audit for a quiescent heap (no resolve in flight). Returns
  /// one message per violated invariant; empty means clean. The cross-level
  /// key ordering is only checked when every signal buffer is empty.
  std::vector<std::string> check_invariants() const;

  friend struct BucketHeapTestAccess;  // invariant-checker fault injection

 private:
  void assert_resolve_entry(std::size_t i) const;
  void require_empty_s0(const char* op) const;
  void note_insert(const Element& e);
  void publish_content(std::size_t i);
  std::uint64_t content_at(std::size_t i) const {
    return levels_[i].content.load(std::memory_order_acquire);
  }
  /// Total content at levels >= j (published values; exact for levels this
  /// resolve does not own because only non-adjacent resolves run in parallel
  /// and they cannot add content at or below j from above).
  std::uint64_t content_from(std::size_t j) const;

  std::size_t d_;
  bool debug_checks_;
  bool trace_checks_;
  bool floor_checks_ = true;  // suspended during drain
  std::vector<Level> levels_{kMaxLevels};
  // Values currently live (inserted, not yet extracted or deleted). Mutated
  // only by level-0 operations; live_size_ mirrors its size for lock-free
  // reads. Stale duplicate copies in deep levels do not appear here.
  std::unordered_set<Value> live_values_;
  std::atomic<std::int64_t> live_size_{0};
  mutable std::atomic<std::uint64_t> floor_misses_{0};
  std::atomic<std::uint64_t> high_water_{0};  // deepest level index ever non-empty
  std::uint64_t touch_counts_[kMaxLevels] = {};
  std::uint64_t op_count_ = 0;

  // Shadow state for trace validation (single-threaded: mutated by level-0
  // operations only).
  std::unordered_set<Value> shadow_dead_;
  std::unordered_map<Value, Priority> shadow_live_;
};

}  // namespace pbh

#include "pbh/bucket_heap.hpp"

#include <algorithm>
#include <limits>

#include "pbh/error.hpp"
#include "pbh/primitives.hpp"

namespace pbh {

BucketHeap::BucketHeap(HeapConfig cfg)
    : d_(cfg.d), debug_checks_(cfg.debug_checks), trace_checks_(cfg.trace_checks) {
  if (d_ == 0) throw PreconditionError("bucket heap: d must be positive");
  if (d_ > (std::size_t{1} << 40)) throw PreconditionError("bucket heap: d too large");
}

std::uint64_t BucketHeap::content_from(std::size_t j) const {
  std::uint64_t total = 0;
  for (std::size_t m = j; m < kMaxLevels; ++m) total += content_at(m);
  return total;
}

void BucketHeap::publish_content(std::size_t i) {
  const Level& lv = levels_[i];
  std::uint64_t c = lv.bucket.size() + lv.signal.size();
  // Release store paired with the acquire loads in content_at: a reader that
  // sees a level drained also sees where its content went.  resolve()
  // publishes the deeper level first for the same reason.
  levels_[i].content.store(c, std::memory_order_release);
  if (c > 0) {
    std::uint64_t hw = high_water_.load(std::memory_order_relaxed);
    while (hw < i && !high_water_.compare_exchange_weak(hw, i, std::memory_order_relaxed)) {
    }
  }
}

std::size_t BucketHeap::allocated_levels() const {
  return static_cast<std::size_t>(high_water_.load(std::memory_order_relaxed)) + 1;
}

std::uint64_t BucketHeap::total_touches() const {
  std::uint64_t t = 0;
  for (std::uint64_t c : touch_counts_) t += c;
  return t;
}

void BucketHeap::require_empty_s0(const char* op) const {
  if (!levels_[0].signal.empty()) {
    throw InvariantError(std::string(op) + ": signal buffer of level 0 not drained");
  }
}

void BucketHeap::note_insert(const Element& e) {
  if (!trace_checks_) return;
  if (shadow_dead_.count(e.value)) {
    throw PreconditionError("update: value " + std::to_string(e.value) +
                            " was already extracted or deleted; re-insertion is unsupported");
  }
  auto it = shadow_live_.find(e.value);
  if (it != shadow_live_.end() && e.priority > it->second) {
    throw PreconditionError("update: priority increase for value " + std::to_string(e.value));
  }
  shadow_live_[e.value] = e.priority;
}

Element BucketHeap::find_min() const {
  const auto& b0 = levels_[0].bucket;
  if (b0.empty()) {
    if (live_empty()) throw EmptyHeapError("find_min: heap is empty");
    throw InvariantError("find_min: level-0 bucket empty while live elements remain");
  }
  const Element* best = &b0[0];
  for (const Element& e : b0) {
    if (key_less(e, *best)) best = &e;
  }
  return *best;
}

Element BucketHeap::extract_min() {
  require_empty_s0("extract_min");
  if (trace_checks_ && floor_checks_ && content_from(1) > 0 && levels_[0].bucket.size() < d_) {
    throw InvariantError("extract_min: level-0 bucket under d with deeper content");
  }
  Element e = find_min();
  auto& b0 = levels_[0].bucket;
  b0.erase(std::find(b0.begin(), b0.end(), e));
  levels_[0].signal.assign(1, Element::del_signal(e.value));
  if (live_values_.erase(e.value) == 0) {
    throw InvariantError("extract_min: minimum was not a live value");
  }
  live_size_.fetch_sub(1, std::memory_order_relaxed);
  ++op_count_;
  if (trace_checks_) {
    shadow_dead_.insert(e.value);
    shadow_live_.erase(e.value);
  }
  publish_content(0);
  return e;
}

void BucketHeap::update(Element e) {
  require_empty_s0("update");
  if (e.del) throw PreconditionError("update: element must be live");
  note_insert(e);
  levels_[0].signal.assign(1, e);
  if (live_values_.insert(e.value).second) {
    live_size_.fetch_add(1, std::memory_order_relaxed);
  }
  ++op_count_;
  publish_content(0);
}

void BucketHeap::delete_value(Value value) {
  require_empty_s0("delete_value");
  levels_[0].signal.assign(1, Element::del_signal(value));
  if (live_values_.erase(value)) {
    live_size_.fetch_sub(1, std::memory_order_relaxed);
  }
  ++op_count_;
  if (trace_checks_) {
    shadow_dead_.insert(value);
    shadow_live_.erase(value);
  }
  publish_content(0);
}

void BucketHeap::bulk_update(std::span<const Element> batch) {
  require_empty_s0("bulk_update");
  if (batch.empty()) throw PreconditionError("bulk_update: empty batch");
  if (batch.size() > d_) throw PreconditionError("bulk_update: batch larger than d");
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].del) throw PreconditionError("bulk_update: delete signals not allowed");
    if (i > 0 && batch[i - 1].value >= batch[i].value) {
      throw PreconditionError("bulk_update: batch must be value-sorted with unique values");
    }
  }
  for (const Element& e : batch) note_insert(e);
  levels_[0].signal.assign(batch.begin(), batch.end());
  std::int64_t fresh = 0;
  for (const Element& e : batch) {
    if (live_values_.insert(e.value).second) ++fresh;
  }
  live_size_.fetch_add(fresh, std::memory_order_relaxed);
  ++op_count_;
  publish_content(0);
}

void BucketHeap::assert_resolve_entry(std::size_t i) const {
  const Level& lv = levels_[i];
  const Level& dn = levels_[i + 1];
  const std::size_t cs = signal_capacity(i);
  if (lv.signal.size() > cs) {
    throw InvariantError("resolve(" + std::to_string(i) + "): signal buffer over capacity");
  }
  if (dn.signal.size() > signal_capacity(i + 1) - cs) {
    throw InvariantError("resolve(" + std::to_string(i) +
                         "): next signal buffer too full to absorb a push");
  }
  // The bucket-floor checks read content snapshots of levels this resolve
  // does not own, so they are only meaningful in single-threaded runs; they
  // ride on trace_checks_ alongside the other sequential-only diagnostics.
  // drain() suspends them: its passes run off-schedule on purpose. Misses
  // are counted rather than thrown — annihilation removes elements between
  // a level's own resolves, so the floors are not unconditional invariants
  // (see floor_misses() in the header).
  if (!trace_checks_ || !floor_checks_) return;
  const bool deeper_than_self = dn.bucket.size() + dn.signal.size() > 0 || content_from(i + 2) > 0;
  if (deeper_than_self && lv.bucket.size() < signal_capacity(i)) {
    floor_misses_.fetch_add(1, std::memory_order_relaxed);
  }
  if (content_from(i + 2) > 0 &&
      dn.bucket.size() < signal_capacity(i + 1) + signal_capacity(i)) {
    floor_misses_.fetch_add(1, std::memory_order_relaxed);
  }
}

bool BucketHeap::wants_resolve(std::size_t i) const {
  if (i + 1 >= kMaxLevels) return false;
  const Level& lv = levels_[i];
  const Level& dn = levels_[i + 1];
  if (!lv.signal.empty()) return true;
  if (lv.bucket.size() > bucket_capacity(i)) return true;
  return lv.bucket.size() < bucket_capacity(i) && (dn.bucket.size() + dn.signal.size()) > 0;
}

void BucketHeap::resolve(std::size_t i) {
  if (i + 1 >= kMaxLevels) throw InvariantError("resolve: level index out of range");
  if (debug_checks_) assert_resolve_entry(i);

  Level& lv = levels_[i];
  Level& dn = levels_[i + 1];
  const std::size_t cap = bucket_capacity(i);
  std::uint64_t touched = 0;

  // Absorb the signal buffer and shed anything that no longer belongs here.
  if (!lv.signal.empty() || lv.bucket.size() > cap) {
    const bool deeper =
        dn.bucket.size() + dn.signal.size() > 0 || content_from(i + 2) > 0;
    touched += 2 * (lv.signal.size() + lv.bucket.size());
    auto pool = merge_by_value(lv.signal, lv.bucket);
    lv.signal.clear();
    pool = delete_duplicates(pool, nullptr);
    touched += pool.size();
    auto [lives, dels] = split_signals(pool);
    touched += pool.size();
    std::size_t admitted = count_admitted(lives, lv.splitter);
    touched += lives.size();
    if (admitted > cap) {
      lv.splitter = select_kth(lives, cap);
      touched += lives.size();
    }
    auto [keep, push] = partition_by_splitter(lives, lv.splitter);
    touched += lives.size();
    lv.bucket = std::move(keep);
    if (!deeper) {
      // Nothing below can match these signals; they die here.
      dels.clear();
    }
    if (!push.empty() || !dels.empty()) {
      auto down = merge_by_value(push, dels);
      touched += 2 * down.size() + 2 * dn.signal.size();
      dn.signal = merge_by_value(dn.signal, down);
    }
  }

  // Refill the bucket from the level below, settling in-transit entries into
  // the lower bucket along the way.
  if (lv.bucket.size() < cap && (dn.bucket.size() + dn.signal.size()) > 0) {
    touched += 2 * (dn.signal.size() + dn.bucket.size());
    auto pool = merge_by_value(dn.signal, dn.bucket);
    dn.signal.clear();
    dn.bucket.clear();
    pool = delete_duplicates(pool, nullptr);
    touched += pool.size();
    auto [lives, dels] = split_signals(pool);
    touched += pool.size();
    lives = drop_stale_duplicates(lives, lv.bucket, nullptr);
    touched += lives.size() + lv.bucket.size();

    const std::size_t need = cap - lv.bucket.size();
    std::vector<Element> rest;
    if (lives.size() <= need) {
      touched += 2 * (lv.bucket.size() + lives.size());
      lv.bucket = merge_by_value(lv.bucket, lives);
      // The whole pool moved up, so this level now reaches down to the lower
      // level's boundary.
      lv.splitter = dn.splitter;
    } else {
      Splitter cut = select_kth(lives, need);
      touched += lives.size();
      auto [pulled, hi] = partition_by_splitter(lives, cut);
      touched += lives.size();
      lv.splitter = cut;
      touched += 2 * (lv.bucket.size() + pulled.size());
      lv.bucket = merge_by_value(lv.bucket, pulled);
      rest = std::move(hi);
    }

    auto [stay, back] = partition_by_splitter(rest, dn.splitter);
    touched += rest.size();
    dn.bucket = std::move(stay);
    if (dn.bucket.empty() && back.empty() && content_from(i + 2) == 0) {
      // The level below ran dry: this level is now the deepest.
      dels.clear();
      lv.splitter = Splitter::inf();
      dn.splitter = Splitter::inf();
    } else {
      touched += back.size() + dels.size();
      dn.signal = merge_by_value(back, dels);
    }
  }

  ++lv.resolve_count;
  touch_counts_[i] += touched;
  publish_content(i + 1);
  publish_content(i);
}

void BucketHeap::drain() {
  bool saved = floor_checks_;
  floor_checks_ = false;
  // Delete signals descend at most one level per pass and content retreats
  // at most one level per pass, so a small multiple of the level count
  // bounds the passes any reachable state needs.
  for (std::size_t pass = 0; pass < 4 * kMaxLevels; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i + 1 < kMaxLevels; ++i) {
      if (wants_resolve(i)) {
        resolve(i);
        changed = true;
      }
    }
    if (!changed) {
      floor_checks_ = saved;
      return;
    }
  }
  floor_checks_ = saved;
  throw InvariantError("drain: did not reach quiescence");
}

std::vector<std::string> BucketHeap::check_invariants() const {
  std::vector<std::string> bad;
  auto complain = [&](std::size_t i, const std::string& msg) {
    bad.push_back("level " + std::to_string(i) + ": " + msg);
  };

  bool signals_all_empty = true;
  std::unordered_set<Value> values_seen;
  for (std::size_t i = 0; i < kMaxLevels; ++i) {
    const Level& lv = levels_[i];
    if (!lv.signal.empty()) signals_all_empty = false;
    if (lv.bucket.size() > bucket_capacity(i)) complain(i, "bucket over capacity");
    if (lv.signal.size() > signal_capacity(i)) complain(i, "signal buffer over capacity");
    for (std::size_t j = 0; j < lv.bucket.size(); ++j) {
      const Element& e = lv.bucket[j];
      if (e.del) {
        complain(i, "delete signal stored in bucket");
        break;
      }
      if (j > 0 && lv.bucket[j - 1].value >= e.value) {
        complain(i, "bucket not strictly value-sorted");
        break;
      }
    }
    for (std::size_t j = 1; j < lv.signal.size(); ++j) {
      if (value_order_less(lv.signal[j], lv.signal[j - 1])) {
        complain(i, "signal buffer not value-sorted");
        break;
      }
    }
    for (const Element& e : lv.bucket) {
      if (!lv.splitter.admits(e)) {
        complain(i, "bucket element above splitter");
        break;
      }
    }
    for (const Element& e : lv.bucket) values_seen.insert(e.value);
    for (const Element& e : lv.signal) {
      if (!e.del) values_seen.insert(e.value);
    }
    std::uint64_t published = content_at(i);
    if (published != lv.bucket.size() + lv.signal.size()) {
      complain(i, "published content count out of date");
    }
  }

  if (signals_all_empty) {
    // With no signals in flight every annihilation has happened, so the
    // distinct stored values are exactly the live ones.
    if (static_cast<std::int64_t>(values_seen.size()) != live_size()) {
      bad.push_back("live_size " + std::to_string(live_size()) + " != distinct stored values " +
                    std::to_string(values_seen.size()));
    }
    for (Value v : values_seen) {
      if (!live_values_.count(v)) {
        bad.push_back("stored value " + std::to_string(v) + " is not live");
        break;
      }
    }
  }

  if (signals_all_empty) {
    // Cross-level key ordering: every bucket sits strictly below everything
    // deeper, and the deepest occupied level carries an infinite splitter.
    std::size_t deepest = 0;
    bool any = false;
    for (std::size_t i = 0; i < kMaxLevels; ++i) {
      if (!levels_[i].bucket.empty()) {
        deepest = i;
        any = true;
      }
    }
    if (any) {
      if (!levels_[deepest].splitter.infinite) {
        complain(deepest, "deepest occupied level must carry an infinite splitter");
      }
      bool have_min = false;
      Element deeper_min{};  // minimum key strictly below level i
      for (std::size_t i = kMaxLevels; i-- > 0;) {
        const Level& lv = levels_[i];
        if (i < deepest && !lv.bucket.empty() && lv.splitter.infinite) {
          complain(i, "finite splitter required above occupied levels");
        }
        if (have_min && !lv.splitter.infinite) {
          if (lv.splitter.admits(deeper_min)) {
            complain(i, "splitter does not separate this level from deeper content");
          }
        }
        if (have_min && !lv.bucket.empty()) {
          Element local_max = lv.bucket[0];
          for (const Element& e : lv.bucket) {
            if (key_less(local_max, e)) local_max = e;
          }
          if (!key_less(local_max, deeper_min)) {
            complain(i, "bucket overlaps deeper content in key order");
          }
        }
        for (const Element& e : lv.bucket) {
          if (!have_min || key_less(e, deeper_min)) {
            deeper_min = e;
            have_min = true;
          }
        }
      }
    }
  }
  return bad;
}

}  // namespace pbh

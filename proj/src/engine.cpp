#include "pbh/engine.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

#include "pbh/error.hpp"

namespace pbh {

std::string Metrics::to_json() const {
  nlohmann::json j;
  j["schema"] = "pbh.metrics.v1";
  j["ops"] = ops;
  j["resolves_per_level"] = resolves_per_level;
  j["touches_per_level"] = touches_per_level;
  j["wall_ms"] = wall_ms;
  return j.dump();
}

Engine::Engine(EngineConfig cfg)
    : heap_(HeapConfig{cfg.d, cfg.debug_assertions,
                       cfg.debug_assertions && cfg.workers == 1}),
      workers_(cfg.workers) {
  if (workers_ == 0) throw PreconditionError("engine: workers must be >= 1");
  for (std::size_t w = 1; w < workers_; ++w) {
    threads_.emplace_back([this] { worker_loop(); });
  }
}

Engine::~Engine() {
  {
    std::lock_guard lk(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  for (std::thread& t : threads_) t.join();
}

template <typename Fn>
auto Engine::with_level0_grant(Fn&& fn) -> decltype(fn()) {
  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return state_.can_resolve(0); });
  state_.record_start(0);
  const std::uint64_t begin = seq_++;
  lk.unlock();

  struct Release {
    Engine* e;
    std::uint64_t begin;
    ~Release() {
      std::lock_guard lk(e->mu_);
      e->state_.record_end(0);
      e->intervals_.push_back({0, begin, e->seq_++});
      e->cv_.notify_all();
    }
  } release{this, begin};

  if constexpr (std::is_void_v<decltype(fn())>) {
    fn();
    heap_.resolve(0);
  } else {
    auto result = fn();
    heap_.resolve(0);
    return result;
  }
}

void Engine::catch_up_inline() {
  // workers == 1: the client thread runs every resolve the counters release,
  // shallowest first, exactly as the background pool would.
  for (;;) {
    std::size_t pick = kMaxLevels;
    for (std::size_t i = 1; i + 1 < kMaxLevels; ++i) {
      if (state_.can_resolve(i)) {
        pick = i;
        break;
      }
    }
    if (pick == kMaxLevels) return;
    state_.record_start(pick);
    const std::uint64_t begin = seq_++;
    heap_.resolve(pick);
    state_.record_end(pick);
    intervals_.push_back({static_cast<std::uint32_t>(pick), begin, seq_++});
  }
}

void Engine::update(Element e) {
  with_level0_grant([&] { heap_.update(e); });
  if (workers_ == 1) catch_up_inline();
}

void Engine::bulk_update(std::span<const Element> batch) {
  with_level0_grant([&] { heap_.bulk_update(batch); });
  if (workers_ == 1) catch_up_inline();
}

Element Engine::extract_min() {
  Element e = with_level0_grant([&] { return heap_.extract_min(); });
  if (workers_ == 1) catch_up_inline();
  return e;
}

void Engine::delete_value(Value value) {
  with_level0_grant([&] { heap_.delete_value(value); });
  if (workers_ == 1) catch_up_inline();
}

void Engine::worker_loop() {
  std::unique_lock lk(mu_);
  for (;;) {
    std::size_t pick = kMaxLevels;
    cv_.wait(lk, [&] {
      if (stop_) return true;
      for (std::size_t i = 1; i + 1 < kMaxLevels; ++i) {
        if (state_.can_resolve(i)) {
          pick = i;
          return true;
        }
      }
      return false;
    });
    if (stop_) return;
    if (pick == kMaxLevels) continue;
    state_.record_start(pick);
    const std::uint64_t begin = seq_++;
    lk.unlock();
    heap_.resolve(pick);
    lk.lock();
    state_.record_end(pick);
    intervals_.push_back({static_cast<std::uint32_t>(pick), begin, seq_++});
    cv_.notify_all();
  }
}

void Engine::drain() {
  if (workers_ > 1) {
    std::unique_lock lk(mu_);
    // The operation stream has paused, so the counters are frozen once the
    // pool works off everything currently eligible.
    cv_.wait(lk, [&] {
      return !state_.any_in_flight() && !state_.any_eligible(kMaxLevels - 2);
    });
    // Workers are parked (nothing eligible, and drain passes do not advance
    // the counters), so the heap is exclusively ours.
  }
  heap_.drain();
}

Metrics Engine::snapshot_metrics() const {
  Metrics m;
  m.ops = heap_.op_count();
  const std::size_t levels = heap_.allocated_levels();
  m.resolves_per_level.resize(levels);
  m.touches_per_level.resize(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    m.resolves_per_level[i] = heap_.resolve_count(i);
    m.touches_per_level[i] = heap_.touches(i);
  }
  return m;
}

std::uint64_t Engine::count_adjacent_overlaps(const std::vector<ResolveInterval>& spans) {
  std::uint32_t max_level = 0;
  for (const ResolveInterval& s : spans) max_level = std::max(max_level, s.level);
  std::vector<std::vector<const ResolveInterval*>> per_level(max_level + 1);
  for (const ResolveInterval& s : spans) per_level[s.level].push_back(&s);
  for (auto& v : per_level) {
    std::sort(v.begin(), v.end(),
              [](const ResolveInterval* a, const ResolveInterval* b) { return a->begin < b->begin; });
  }
  std::uint64_t overlaps = 0;
  for (std::uint32_t i = 0; i + 1 <= max_level; ++i) {
    std::vector<const ResolveInterval*> both = per_level[i];
    both.insert(both.end(), per_level[i + 1].begin(), per_level[i + 1].end());
    std::sort(both.begin(), both.end(),
              [](const ResolveInterval* a, const ResolveInterval* b) { return a->begin < b->begin; });
    std::uint64_t max_end[2] = {0, 0};
    for (const ResolveInterval* s : both) {
      const int side = s->level == i ? 0 : 1;
      if (max_end[1 - side] > s->begin) ++overlaps;
      max_end[side] = std::max(max_end[side], s->end);
    }
  }
  return overlaps;
}

void Engine::apply_op(const TraceOp& op, std::vector<Element>& out) {
  switch (op.kind) {
    case OpKind::kUpdate:
      update(op.batch[0]);
      break;
    case OpKind::kBulk:
      bulk_update(op.batch);
      break;
    case OpKind::kExtract:
      out.push_back(extract_min());
      break;
    case OpKind::kDelete:
      delete_value(op.batch[0].value);
      break;
  }
}

Engine::RunResult Engine::run_trace(const Trace& trace) {
  RunResult r;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t idx = 0; idx < trace.size(); ++idx) {
    try {
      apply_op(trace[idx], r.extracted);
    } catch (const TraceError&) {
      throw;
    } catch (const EmptyHeapError& e) {
      throw TraceError(idx, e.what());
    } catch (const PreconditionError& e) {
      throw TraceError(idx, e.what());
    }
  }
  drain();
  const auto t1 = std::chrono::steady_clock::now();
  r.metrics = snapshot_metrics();
  r.metrics.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return r;
}

}  // namespace pbh

#include "pbh/primitives.hpp"

#include <algorithm>

#include "pbh/error.hpp"

namespace pbh {

std::vector<Element> merge_by_value(std::span<const Element> a, std::span<const Element> b) {
  std::vector<Element> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (value_order_less(b[j], a[i])) {
      out.push_back(b[j++]);
    } else {
      out.push_back(a[i++]);
    }
  }
  out.insert(out.end(), a.begin() + i, a.end());
  out.insert(out.end(), b.begin() + j, b.end());
  return out;
}

std::vector<Element> delete_duplicates(std::span<const Element> l, std::size_t* lives_removed) {
  std::vector<Element> out;
  out.reserve(l.size());
  std::size_t removed = 0;
  std::size_t i = 0;
  while (i < l.size()) {
    std::size_t j = i;
    bool has_del = false;
    std::size_t min_live = l.size();  // index of minimum-priority live copy
    std::size_t live_count = 0;
    while (j < l.size() && l[j].value == l[i].value) {
      if (l[j].del) {
        has_del = true;
      } else {
        ++live_count;
        if (min_live == l.size() || l[j].priority < l[min_live].priority) min_live = j;
      }
      ++j;
    }
    if (has_del) {
      // The signal consumes every live copy and keeps descending: further
      // stale copies of this value may still live in deeper buckets.
      out.push_back(Element::del_signal(l[i].value));
      removed += live_count;
    } else {
      out.push_back(l[min_live]);
      removed += live_count - 1;
    }
    i = j;
  }
  if (lives_removed) *lives_removed = removed;
  return out;
}

Splitter select_kth(std::span<const Element> l, std::size_t k) {
  if (k == 0 || k > l.size()) {
    throw PreconditionError("select_kth: k out of range");
  }
  std::vector<Element> scratch(l.begin(), l.end());
  for (const Element& e : scratch) {
    if (e.del) throw PreconditionError("select_kth: input holds a delete signal");
  }
  std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end(), key_less);
  const Element& e = scratch[k - 1];
  return Splitter::at(e.priority, e.value);
}

std::pair<std::vector<Element>, std::vector<Element>> partition_by_splitter(
    std::span<const Element> l, const Splitter& s) {
  std::vector<Element> low, high;
  low.reserve(l.size());
  for (const Element& e : l) {
    if (!e.del && s.admits(e)) {
      low.push_back(e);
    } else {
      high.push_back(e);
    }
  }
  return {std::move(low), std::move(high)};
}

std::size_t count_admitted(std::span<const Element> l, const Splitter& s) {
  std::size_t n = 0;
  for (const Element& e : l) {
    if (!e.del && s.admits(e)) ++n;
  }
  return n;
}

std::pair<std::vector<Element>, std::vector<Element>> split_signals(std::span<const Element> l) {
  std::vector<Element> lives, dels;
  lives.reserve(l.size());
  for (const Element& e : l) {
    (e.del ? dels : lives).push_back(e);
  }
  return {std::move(lives), std::move(dels)};
}

std::vector<Element> drop_stale_duplicates(std::span<const Element> candidates,
                                           std::span<const Element> bucket,
                                           std::size_t* dropped) {
  std::vector<Element> out;
  out.reserve(candidates.size());
  std::size_t n_dropped = 0;
  std::size_t b = 0;
  for (const Element& e : candidates) {
    while (b < bucket.size() && bucket[b].value < e.value) ++b;
    if (!e.del && b < bucket.size() && bucket[b].value == e.value) {
      ++n_dropped;  // resident copy is fresher (smaller key); this one is stale
    } else {
      out.push_back(e);
    }
  }
  if (dropped) *dropped = n_dropped;
  return out;
}

}  // namespace pbh

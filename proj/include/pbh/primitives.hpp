#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pbh/element.hpp"

namespace pbh {

/// Merge two value-sorted sequences into one value-sorted sequence.
/// Duplicate values across (or within) inputs are preserved; within one value
/// the output keeps delete signals first, then ascending priority. Stable.
std::vector<Element> merge_by_value(std::span<const Element> a, std::span<const Element> b);

/// Collapse a value-sorted sequence to one survivor per value.
///   - a value with a delete signal loses every live copy; one delete signal
///     survives and keeps descending toward deeper levels
///   - a value with live copies only keeps the minimum-priority copy
/// `lives_removed`, when given, receives the number of live elements dropped.
std::vector<Element> delete_duplicates(std::span<const Element> l,
                                       std::size_t* lives_removed = nullptr);

/// k-th smallest composite key (1-based) of a live-only sequence, returned as
/// a finite splitter. Exactly k elements of `l` satisfy key <= result.
/// Requires 1 <= k <= |l| and no delete signals in `l`.
Splitter select_kth(std::span<const Element> l, std::size_t k);

/// Stable partition of a value-sorted sequence around a splitter:
/// low keeps live elements with key <= s, high gets the rest.
/// Delete signals always go high: they are in-transit signals, not residents.
std::pair<std::vector<Element>, std::vector<Element>> partition_by_splitter(
    std::span<const Element> l, const Splitter& s);

/// Number of live elements with key <= s. Delete signals are not counted.
std::size_t count_admitted(std::span<const Element> l, const Splitter& s);

/// Split a value-sorted sequence into (live elements, delete signals), both
/// value-sorted.
std::pair<std::vector<Element>, std::vector<Element>> split_signals(std::span<const Element> l);

/// Remove from value-sorted `candidates` every live element whose value
/// already resides in value-sorted, live-only `bucket`. Such candidates are
/// stale copies: the resident was inserted later and carries a smaller key.
/// Returns the filtered candidates; `dropped`, when given, receives the count.
std::vector<Element> drop_stale_duplicates(std::span<const Element> candidates,
                                           std::span<const Element> bucket,
                                           std::size_t* dropped = nullptr);

}  // namespace pbh

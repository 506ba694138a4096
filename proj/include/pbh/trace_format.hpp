#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pbh/element.hpp"

namespace pbh {

/// One replayable heap operation.
///   U <value> <priority>               update
///   B <k> <v1> <p1> ... <vk> <pk>      bulk_update of k pairs
///   E                                  extract_min
///   D <value>                          delete_value
enum class OpKind : char {
  kUpdate = 'U',
  kBulk = 'B',
  kExtract = 'E',
  kDelete = 'D',
};

struct TraceOp {
  OpKind kind = OpKind::kExtract;
  std::vector<Element> batch;  // U: 1 element; B: k elements; D: 1 value; E: empty

  static TraceOp update(Value v, Priority p) { return {OpKind::kUpdate, {Element::live(v, p)}}; }
  static TraceOp bulk(std::vector<Element> b) { return {OpKind::kBulk, std::move(b)}; }
  static TraceOp extract() { return {OpKind::kExtract, {}}; }
  static TraceOp del(Value v) { return {OpKind::kDelete, {Element::del_signal(v)}}; }
};

using Trace = std::vector<TraceOp>;

/// One op per line in the format above; '#' starts a comment, blank lines
/// are skipped. Throws TraceError (with the op ordinal and input line) on
/// malformed input.
Trace parse_trace(std::istream& in);
Trace load_trace(const std::string& path);

std::string serialize_trace(const Trace& trace);
void save_trace(const Trace& trace, const std::string& path);

}  // namespace pbh

#include "pbh/trace_format.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "pbh/error.hpp"

namespace pbh {

namespace {

std::uint64_t parse_number(std::istringstream& line, std::size_t op, std::size_t line_no,
                           const char* what, std::uint64_t max) {
  std::uint64_t x = 0;
  if (!(line >> x)) {
    throw TraceError(op, "line " + std::to_string(line_no) + ": missing or bad " + what);
  }
  if (x > max) {
    throw TraceError(op, "line " + std::to_string(line_no) + ": " + what + " out of range");
  }
  return x;
}

void require_line_end(std::istringstream& line, std::size_t op, std::size_t line_no) {
  std::string rest;
  if (line >> rest) {
    throw TraceError(op, "line " + std::to_string(line_no) + ": trailing tokens");
  }
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string raw;
  std::size_t line_no = 0;
  constexpr std::uint64_t kMaxValue = std::numeric_limits<Value>::max();
  constexpr std::uint64_t kMaxPrio = std::numeric_limits<Priority>::max();
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string tag;
    if (!(line >> tag)) continue;  // blank or comment-only line
    const std::size_t op = trace.size();
    if (tag.size() != 1) {
      throw TraceError(op, "line " + std::to_string(line_no) + ": unknown op '" + tag + "'");
    }
    switch (tag[0]) {
      case 'U': {
        auto v = parse_number(line, op, line_no, "value", kMaxValue);
        auto p = parse_number(line, op, line_no, "priority", kMaxPrio);
        require_line_end(line, op, line_no);
        trace.push_back(TraceOp::update(static_cast<Value>(v), p));
        break;
      }
      case 'B': {
        auto k = parse_number(line, op, line_no, "batch size", 1u << 24);
        if (k == 0) {
          throw TraceError(op, "line " + std::to_string(line_no) + ": empty batch");
        }
        std::vector<Element> batch;
        batch.reserve(k);
        for (std::uint64_t j = 0; j < k; ++j) {
          auto v = parse_number(line, op, line_no, "value", kMaxValue);
          auto p = parse_number(line, op, line_no, "priority", kMaxPrio);
          batch.push_back(Element::live(static_cast<Value>(v), p));
        }
        require_line_end(line, op, line_no);
        trace.push_back(TraceOp::bulk(std::move(batch)));
        break;
      }
      case 'E': {
        require_line_end(line, op, line_no);
        trace.push_back(TraceOp::extract());
        break;
      }
      case 'D': {
        auto v = parse_number(line, op, line_no, "value", kMaxValue);
        require_line_end(line, op, line_no);
        trace.push_back(TraceOp::del(static_cast<Value>(v)));
        break;
      }
      default:
        throw TraceError(op, "line " + std::to_string(line_no) + ": unknown op '" + tag + "'");
    }
  }
  return trace;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError(0, "cannot open trace file: " + path);
  return parse_trace(in);
}

std::string serialize_trace(const Trace& trace) {
  std::ostringstream out;
  for (const TraceOp& op : trace) {
    switch (op.kind) {
      case OpKind::kUpdate:
        out << "U " << op.batch[0].value << ' ' << op.batch[0].priority << '\n';
        break;
      case OpKind::kBulk:
        out << "B " << op.batch.size();
        for (const Element& e : op.batch) out << ' ' << e.value << ' ' << e.priority;
        out << '\n';
        break;
      case OpKind::kExtract:
        out << "E\n";
        break;
      case OpKind::kDelete:
        out << "D " << op.batch[0].value << '\n';
        break;
    }
  }
  return out.str();
}

void save_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TraceError(0, "cannot open trace file for writing: " + path);
  out << serialize_trace(trace);
}

}  // namespace pbh

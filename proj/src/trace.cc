// Copyright 2026 The rnncov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rnncov/trace.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "rnncov/error.h"
#include "rnncov/text.h"

namespace rnncov {

std::size_t TraceSet::TotalSteps() const {
  std::size_t n = 0;
  for (const Trace& t : traces) n += t.steps.size();
  return n;
}

namespace {

void CheckVector(std::span<const float> v, std::size_t dim,
                 const std::string& id, const char* what) {
  if (v.size() != dim) {
    throw ValidationError("trace '" + id + "': " + what + " has length " +
                          std::to_string(v.size()) + ", expected " +
                          std::to_string(dim));
  }
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw ValidationError("trace '" + id + "': " + what +
                            " has a non-finite entry");
    }
  }
}

void WriteVector(std::ostream& out, std::span<const float> v) {
  for (float x : v) out << ' ' << text::FormatFloat(x);
}

}  // namespace

void ValidateTrace(const Trace& trace, std::size_t state_dim,
                   std::size_t input_dim) {
  if (trace.id.empty() ||
      trace.id.find_first_of(" \t\r\n") != std::string::npos) {
    throw ValidationError("trace id '" + trace.id +
                          "' is empty or contains whitespace");
  }
  if (trace.steps.empty()) {
    throw ValidationError("trace '" + trace.id + "' has no steps");
  }
  for (const TraceStep& step : trace.steps) {
    CheckVector(step.state, state_dim, trace.id, "state");
    CheckVector(step.input, input_dim, trace.id, "input");
  }
  CheckVector(trace.final_state, state_dim, trace.id, "final state");
  for (float x : trace.steps.front().state) {
    if (x != 0.0f) {
      throw ValidationError("trace '" + trace.id +
                            "': initial state is not the zero vector");
    }
  }
}

void ValidateTraceSet(const TraceSet& ts) {
  if (ts.state_dim == 0 || ts.input_dim == 0) {
    throw ValidationError("trace set dimensions must be positive");
  }
  for (const Trace& t : ts.traces) ValidateTrace(t, ts.state_dim, ts.input_dim);
}

std::vector<ConcreteTransition> TraceTransitions(const Trace& trace) {
  std::vector<ConcreteTransition> out;
  out.reserve(trace.steps.size());
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& step = trace.steps[i];
    const StateVector& next = i + 1 < trace.steps.size()
                                  ? trace.steps[i + 1].state
                                  : trace.final_state;
    out.push_back({step.state, step.input, step.output, next});
  }
  return out;
}

TraceSet ReadTraces(std::istream& in) {
  TraceSet ts;
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError(1, "missing RNNTRACE header");
  {
    auto tok = text::SplitSpaces(line);
    if (tok.size() != 4 || tok[0] != "RNNTRACE") {
      throw ParseError(lineno, "expected 'RNNTRACE 1 <state_dim> <input_dim>'");
    }
    if (tok[1] != "1") {
      throw ParseError(lineno, "unsupported trace format version '" +
                                   std::string(tok[1]) + "'");
    }
    std::int64_t sd = text::ParseInt(tok[2], lineno);
    std::int64_t id = text::ParseInt(tok[3], lineno);
    if (sd <= 0 || id <= 0) {
      throw ParseError(lineno, "dimensions must be positive");
    }
    ts.state_dim = static_cast<std::size_t>(sd);
    ts.input_dim = static_cast<std::size_t>(id);
  }

  auto read_reals = [&](std::span<const std::string_view> toks) {
    std::vector<float> v;
    v.reserve(toks.size());
    for (std::string_view t : toks) v.push_back(text::ParseFloat(t, lineno));
    return v;
  };

  Trace* current = nullptr;
  while (next_line()) {
    if (line.empty()) throw ParseError(lineno, "empty line");
    auto tok = text::SplitSpaces(line);
    if (tok.empty()) throw ParseError(lineno, "blank line");
    std::string_view tag = tok[0];
    if (tag == "T") {
      if (current != nullptr) {
        throw ParseError(lineno, "trace '" + current->id + "' lacks an F line");
      }
      if (tok.size() != 2) throw ParseError(lineno, "expected 'T <trace_id>'");
      ts.traces.emplace_back();
      current = &ts.traces.back();
      current->id = std::string(tok[1]);
    } else if (tag == "S") {
      if (current == nullptr) throw ParseError(lineno, "S line outside a trace");
      // S <y> | x... | s...
      std::size_t bar1 = 0, bar2 = 0;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] != "|") continue;
        if (bar1 == 0) {
          bar1 = i;
        } else if (bar2 == 0) {
          bar2 = i;
        } else {
          throw ParseError(lineno, "too many '|' separators");
        }
      }
      if (bar1 != 2 || bar2 == 0) {
        throw ParseError(lineno, "expected 'S <y> | <inputs> | <state>'");
      }
      std::int64_t y = text::ParseInt(tok[1], lineno);
      if (y < 0 || y > static_cast<std::int64_t>(UINT32_MAX)) {
        throw ParseError(lineno, "token id out of range");
      }
      TraceStep step;
      step.output = static_cast<TokenId>(y);
      std::span<const std::string_view> all(tok);
      step.input = read_reals(all.subspan(bar1 + 1, bar2 - bar1 - 1));
      step.state = read_reals(all.subspan(bar2 + 1));
      current->steps.push_back(std::move(step));
    } else if (tag == "F") {
      if (current == nullptr) throw ParseError(lineno, "F line outside a trace");
      current->final_state = read_reals(std::span(tok).subspan(1));
      ValidateTrace(*current, ts.state_dim, ts.input_dim);
      current = nullptr;
    } else {
      throw ParseError(lineno, "unknown record tag '" + std::string(tag) + "'");
    }
  }
  if (current != nullptr) {
    throw ParseError(lineno, "unterminated trace '" + current->id + "'");
  }
  return ts;
}

void WriteTraces(const TraceSet& ts, std::ostream& out) {
  ValidateTraceSet(ts);
  out << "RNNTRACE 1 " << ts.state_dim << ' ' << ts.input_dim << '\n';
  for (const Trace& t : ts.traces) {
    out << "T " << t.id << '\n';
    for (const TraceStep& step : t.steps) {
      out << "S " << step.output << " |";
      WriteVector(out, step.input);
      out << " |";
      WriteVector(out, step.state);
      out << '\n';
    }
    out << 'F';
    WriteVector(out, t.final_state);
    out << '\n';
  }
}

TraceSet LoadTraces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace file " + path.string());
  return ReadTraces(in);
}

void SaveTraces(const TraceSet& ts, const std::filesystem::path& path) {
  std::ostringstream buf;
  WriteTraces(ts, buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write trace file " + path.string());
  out << buf.str();
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

}  // namespace rnncov

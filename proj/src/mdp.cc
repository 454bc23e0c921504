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


#include "rnncov/mdp.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "rnncov/error.h"
#include "rnncov/text.h"

namespace rnncov {

namespace {

std::uint64_t Fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t ComputeFingerprint(const MdpModel& model) {
  std::ostringstream out;
  WriteModel(model, out);
  return Fnv1a(out.str());
}

void CheckDims(const ModelParams& p) {
  if (p.state_dims == 0 || p.input_dims == 0) {
    throw ConfigError("PCA dimensions must be positive");
  }
  if (p.state_partitions == 0 || p.input_partitions == 0) {
    throw ConfigError("partition counts must be positive");
  }
}

template <typename Tag>
void WriteCell(std::ostream& out, const Cell<Tag>& c) {
  for (std::int32_t v : c.index) out << ' ' << v;
}

void WriteProjection(std::ostream& out, const char* name, const Projection& p) {
  out << "projection " << name << ' ' << p.input_dim() << ' ' << p.output_dim()
      << '\n';
  out << "mean";
  for (double v : p.mean) out << ' ' << text::FormatDouble(v);
  out << '\n';
  for (Eigen::Index i = 0; i < p.components.rows(); ++i) {
    out << "axis " << text::FormatDouble(p.explained_variance[i]);
    for (Eigen::Index j = 0; j < p.components.cols(); ++j) {
      out << ' ' << text::FormatDouble(p.components(i, j));
    }
    out << '\n';
  }
}

void WriteGrid(std::ostream& out, const char* name, const GridConfig& g) {
  out << "grid " << name << ' ' << g.dims() << ' ' << g.partitions << '\n';
  out << "lower";
  for (double v : g.lower) out << ' ' << text::FormatDouble(v);
  out << "\nupper";
  for (double v : g.upper) out << ' ' << text::FormatDouble(v);
  out << '\n';
}

// Line-oriented reader for the model format.
class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  // Reads the next line and checks its leading tag and token count
  // (0 = any).
  std::vector<std::string_view> Expect(std::string_view tag,
                                       std::size_t count = 0) {
    if (!std::getline(in_, line_)) {
      throw ParseError(lineno_ + 1, "unexpected end of model, wanted '" +
                                        std::string(tag) + "'");
    }
    ++lineno_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    auto tok = text::SplitSpaces(line_);
    if (tok.empty() || tok[0] != tag) {
      throw ParseError(lineno_, "expected '" + std::string(tag) + "'");
    }
    if (count != 0 && tok.size() != count) {
      throw ParseError(lineno_, "wrong field count for '" + std::string(tag) + "'");
    }
    return tok;
  }

  std::size_t Size(std::string_view tok) {
    std::int64_t v = text::ParseInt(tok, lineno_);
    if (v < 0) throw ParseError(lineno_, "negative size");
    return static_cast<std::size_t>(v);
  }
  double Real(std::string_view tok) { return text::ParseDouble(tok, lineno_); }

  template <typename Tag>
  Cell<Tag> ReadCell(std::span<const std::string_view> toks, std::size_t dims) {
    if (toks.size() != dims) throw ParseError(lineno_, "cell has wrong dimension");
    Cell<Tag> c;
    for (std::string_view t : toks) {
      std::int64_t v = text::ParseInt(t, lineno_);
      if (v < INT32_MIN || v > INT32_MAX) {
        throw ParseError(lineno_, "cell index out of range");
      }
      c.index.push_back(static_cast<std::int32_t>(v));
    }
    return c;
  }

  Projection ReadProjection(std::string_view name) {
    auto tok = Expect("projection", 4);
    if (tok[1] != name) throw ParseError(lineno_, "expected projection " + std::string(name));
    const std::size_t in_dim = Size(tok[2]);
    const std::size_t out_dim = Size(tok[3]);
    Projection p;
    auto mean = Expect("mean", in_dim + 1);
    p.mean.resize(static_cast<Eigen::Index>(in_dim));
    for (std::size_t i = 0; i < in_dim; ++i) p.mean[static_cast<Eigen::Index>(i)] = Real(mean[i + 1]);
    p.components.resize(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
    p.explained_variance.resize(static_cast<Eigen::Index>(out_dim));
    for (std::size_t r = 0; r < out_dim; ++r) {
      auto axis = Expect("axis", in_dim + 2);
      const auto row = static_cast<Eigen::Index>(r);
      p.explained_variance[row] = Real(axis[1]);
      for (std::size_t j = 0; j < in_dim; ++j) {
        p.components(row, static_cast<Eigen::Index>(j)) = Real(axis[j + 2]);
      }
    }
    return p;
  }

  GridConfig ReadGrid(std::string_view name) {
    auto tok = Expect("grid", 4);
    if (tok[1] != name) throw ParseError(lineno_, "expected grid " + std::string(name));
    const std::size_t dims = Size(tok[2]);
    GridConfig g;
    g.partitions = Size(tok[3]);
    auto lo = Expect("lower", dims + 1);
    for (std::size_t i = 0; i < dims; ++i) g.lower.push_back(Real(lo[i + 1]));
    auto hi = Expect("upper", dims + 1);
    for (std::size_t i = 0; i < dims; ++i) g.upper.push_back(Real(hi[i + 1]));
    for (std::size_t i = 0; i < dims; ++i) {
      if (!(g.upper[i] > g.lower[i])) {
        throw ParseError(lineno_, "grid bounds must satisfy lower < upper");
      }
    }
    if (g.partitions == 0) throw ParseError(lineno_, "partition count must be positive");
    return g;
  }

  std::size_t line() const { return lineno_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t lineno_ = 0;
};

void AddTransition(MdpModel& model, const AbstractTransition& t,
                   std::uint64_t count) {
  Outcomes& o = model.transitions[{t.src, t.input}];
  o.counts[t.dst] += count;
  o.total += count;
  model.states.insert(t.src);
  model.states.insert(t.dst);
  model.enabled_inputs[t.src].insert(t.input);
}

}  // namespace

AbstractState MdpModel::AbstractStateOf(std::span<const float> s) const {
  return AbstractState{CellIndices(state_grid, Project(state_projection, s))};
}

AbstractInput MdpModel::AbstractInputOf(std::span<const float> x) const {
  return AbstractInput{CellIndices(input_grid, Project(input_projection, x))};
}

const Outcomes* MdpModel::Find(const AbstractState& s,
                               const AbstractInput& x) const {
  auto it = transitions.find({s, x});
  return it == transitions.end() ? nullptr : &it->second;
}

MdpModel BuildModel(const TraceSet& ts, const ModelParams& params) {
  CheckDims(params);
  if (ts.traces.empty()) throw ValidationError("cannot build a model from an empty trace set");
  ValidateTraceSet(ts);

  const std::size_t n_inputs = ts.TotalSteps();
  const std::size_t n_states = n_inputs + ts.traces.size();
  Eigen::MatrixXd states(static_cast<Eigen::Index>(n_states),
                         static_cast<Eigen::Index>(ts.state_dim));
  Eigen::MatrixXd inputs(static_cast<Eigen::Index>(n_inputs),
                         static_cast<Eigen::Index>(ts.input_dim));
  {
    Eigen::Index si = 0, xi = 0;
    auto put = [](Eigen::MatrixXd& m, Eigen::Index row, std::span<const float> v) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        m(row, static_cast<Eigen::Index>(j)) = static_cast<double>(v[j]);
      }
    };
    for (const Trace& t : ts.traces) {
      for (const TraceStep& step : t.steps) {
        put(states, si++, step.state);
        put(inputs, xi++, step.input);
      }
      put(states, si++, t.final_state);
    }
  }

  MdpModel model;
  model.params = params;
  model.state_dim = ts.state_dim;
  model.input_dim = ts.input_dim;
  model.state_projection = FitProjection(states, params.state_dims);
  model.input_projection = FitProjection(inputs, params.input_dims);

  // Project row by row through the same routine used at query time so grid
  // bounds and later lookups see bit-identical coordinates.
  auto project_rows = [](const Projection& p, const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(p.output_dim()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out.row(r) = Project(p, Eigen::VectorXd(m.row(r).transpose())).transpose();
    }
    return out;
  };
  const Eigen::MatrixXd ps = project_rows(model.state_projection, states);
  const Eigen::MatrixXd px = project_rows(model.input_projection, inputs);
  model.state_grid = FitGrid(ps, params.state_partitions);
  model.input_grid = FitGrid(px, params.input_partitions);

  Eigen::Index si = 0, xi = 0;
  for (const Trace& t : ts.traces) {
    AbstractState cur{CellIndices(model.state_grid, ps.row(si++).transpose())};
    model.initial.insert(cur);
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      AbstractInput in{CellIndices(model.input_grid, px.row(xi++).transpose())};
      AbstractState next{CellIndices(model.state_grid, ps.row(si++).transpose())};
      AddTransition(model, {cur, in, next}, 1);
      ++model.concrete_transitions;
      cur = std::move(next);
    }
  }
  model.states.insert(model.initial.begin(), model.initial.end());
  model.fingerprint = ComputeFingerprint(model);
  return model;
}

double TransitionProbability(const MdpModel& model, const AbstractState& s,
                             const AbstractInput& x, const AbstractState& d) {
  const Outcomes* o = model.Find(s, x);
  if (o == nullptr) {
    throw UndefinedError("no distribution: input never observed at this state");
  }
  auto it = o->counts.find(d);
  if (it == o->counts.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(o->total);
}

std::set<AbstractInput> EnabledInputs(const MdpModel& model,
                                      const AbstractState& s) {
  auto it = model.enabled_inputs.find(s);
  if (it == model.enabled_inputs.end()) return {};
  return it->second;
}

std::vector<AbstractTransition> AbstractTrace(const MdpModel& model,
                                              const Trace& trace) {
  ValidateTrace(trace, model.state_dim, model.input_dim);
  std::vector<AbstractTransition> out;
  out.reserve(trace.steps.size());
  AbstractState cur = model.AbstractStateOf(trace.steps.front().state);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StateVector& next_state = i + 1 < trace.steps.size()
                                        ? trace.steps[i + 1].state
                                        : trace.final_state;
    AbstractState next = model.AbstractStateOf(next_state);
    out.push_back({cur, model.AbstractInputOf(trace.steps[i].input), next});
    cur = std::move(next);
  }
  return out;
}

void WriteModel(const MdpModel& model, std::ostream& out) {
  const ModelParams& p = model.params;
  out << "RNNMDP 1\n";
  out << "params " << p.state_dims << ' ' << p.state_partitions << ' '
      << p.input_dims << ' ' << p.input_partitions << '\n';
  out << "dims " << model.state_dim << ' ' << model.input_dim << '\n';
  WriteProjection(out, "state", model.state_projection);
  WriteGrid(out, "state", model.state_grid);
  WriteProjection(out, "input", model.input_projection);
  WriteGrid(out, "input", model.input_grid);
  out << "visits " << model.concrete_transitions << '\n';
  out << "initial " << model.initial.size() << '\n';
  for (const AbstractState& s : model.initial) {
    out << 'I';
    WriteCell(out, s);
    out << '\n';
  }
  std::size_t n = 0;
  for (const auto& [choice, o] : model.transitions) n += o.counts.size();
  out << "counts " << n << '\n';
  for (const auto& [choice, o] : model.transitions) {
    for (const auto& [dst, count] : o.counts) {
      out << "C " << count << " |";
      WriteCell(out, choice.first);
      out << " |";
      WriteCell(out, choice.second);
      out << " |";
      WriteCell(out, dst);
      out << '\n';
    }
  }
  out << "end\n";
}

MdpModel ReadModel(std::istream& in) {
  ModelReader r(in);
  auto header = r.Expect("RNNMDP", 2);
  if (header[1] != "1") throw ParseError(r.line(), "unsupported model version");
  MdpModel model;
  auto params = r.Expect("params", 5);
  model.params = {r.Size(params[1]), r.Size(params[2]), r.Size(params[3]),
                  r.Size(params[4])};
  CheckDims(model.params);
  auto dims = r.Expect("dims", 3);
  model.state_dim = r.Size(dims[1]);
  model.input_dim = r.Size(dims[2]);
  model.state_projection = r.ReadProjection("state");
  model.state_grid = r.ReadGrid("state");
  model.input_projection = r.ReadProjection("input");
  model.input_grid = r.ReadGrid("input");
  const ModelParams& p = model.params;
  if (model.state_projection.input_dim() != model.state_dim ||
      model.state_projection.output_dim() != p.state_dims ||
      model.state_grid.dims() != p.state_dims ||
      model.state_grid.partitions != p.state_partitions ||
      model.input_projection.input_dim() != model.input_dim ||
      model.input_projection.output_dim() != p.input_dims ||
      model.input_grid.dims() != p.input_dims ||
      model.input_grid.partitions != p.input_partitions) {
    throw ValidationError("model abstraction parameters are inconsistent");
  }
  model.concrete_transitions = r.Size(r.Expect("visits", 2)[1]);

  const std::size_t n_initial = r.Size(r.Expect("initial", 2)[1]);
  for (std::size_t i = 0; i < n_initial; ++i) {
    auto tok = r.Expect("I");
    model.initial.insert(
        r.ReadCell<StateTag>(std::span(tok).subspan(1), p.state_dims));
  }
  const std::size_t n_counts = r.Size(r.Expect("counts", 2)[1]);
  const std::size_t width = 2 + 3 + p.state_dims * 2 + p.input_dims;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n_counts; ++i) {
    auto tok = r.Expect("C", width);
    std::span<const std::string_view> all(tok);
    const std::size_t count = r.Size(tok[1]);
    std::size_t pos = 2;
    auto bar = [&] {
      if (all[pos++] != "|") throw ParseError(r.line(), "expected '|'");
    };
    bar();
    AbstractState src = r.ReadCell<StateTag>(all.subspan(pos, p.state_dims), p.state_dims);
    pos += p.state_dims;
    bar();
    AbstractInput input = r.ReadCell<InputTag>(all.subspan(pos, p.input_dims), p.input_dims);
    pos += p.input_dims;
    bar();
    AbstractState dst = r.ReadCell<StateTag>(all.subspan(pos, p.state_dims), p.state_dims);
    if (count == 0) throw ValidationError("transition count must be positive");
    const Outcomes* existing = model.Find(src, input);
    if (existing != nullptr && existing->counts.count(dst) != 0) {
      throw ParseError(r.line(), "duplicate transition entry");
    }
    AddTransition(model, {src, input, dst}, count);
    total += count;
  }
  r.Expect("end", 1);
  if (total != model.concrete_transitions) {
    throw ValidationError("transition counts do not sum to the visit total");
  }
  model.states.insert(model.initial.begin(), model.initial.end());
  model.fingerprint = ComputeFingerprint(model);
  return model;
}

void SaveModel(const MdpModel& model, const std::filesystem::path& path) {
  std::ostringstream buf;
  WriteModel(model, buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << buf.str();
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

MdpModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path.string());
  return ReadModel(in);
}

}  // namespace rnncov

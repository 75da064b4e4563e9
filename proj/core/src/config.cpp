#include "llb/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "llb/expression.hpp"
#include "llb/presets.hpp"
#include "llb/toml_lite.hpp"

namespace llb {

std::string to_string(Preconditioner p) {
  switch (p) {
    case Preconditioner::jacobi: return "jacobi";
    case Preconditioner::block_ilu0: return "block_ilu0";
    case Preconditioner::sparse_lu: return "sparse_lu";
    case Preconditioner::automatic: return "automatic";
  }
  return "?";
}

Preconditioner parse_preconditioner(const std::string& s) {
  if (s == "jacobi") return Preconditioner::jacobi;
  if (s == "block_ilu0") return Preconditioner::block_ilu0;
  if (s == "sparse_lu") return Preconditioner::sparse_lu;
  if (s == "automatic") return Preconditioner::automatic;
  throw std::invalid_argument("unknown preconditioner '" + s + "' (expected automatic, jacobi, block_ilu0 or sparse_lu)");
}

VectorFunction RunConfig::initial_field() const { return parse_vector_field(u0); }

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.preset == b.preset && a.domain == b.domain && a.n == b.n && a.params == b.params && a.time == b.time &&
         a.initial_preset == b.initial_preset && a.u0 == b.u0 && a.output == b.output &&
         a.solver.tol == b.solver.tol && a.solver.max_iter == b.solver.max_iter &&
         a.solver.restart == b.solver.restart && a.solver.preconditioner == b.solver.preconditioner &&
         a.study == b.study;
}

namespace {

using toml::Table;
using toml::Value;

std::string dotted(const std::string& table, const std::string& key) { return table.empty() ? key : table + "." + key; }

// Typed, consumed access to one table; leftover keys are reported as unknown.
class Reader {
 public:
  Reader(const Table* table, std::string name) : table_(table), name_(std::move(name)) {}

  const Value* find(const std::string& key) {
    if (table_ == nullptr) return nullptr;
    const auto it = table_->find(key);
    if (it == table_->end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  [[noreturn]] void fail(const std::string& key, const Value& v, const std::string& msg) const {
    throw ConfigError(dotted(name_, key), msg + " (line " + std::to_string(v.line) + ")");
  }

  std::optional<double> number(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) fail(key, *v, "expected a number, got " + v->type_name());
    return v->as_number();
  }

  std::optional<int> integer(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_integer()) fail(key, *v, "expected an integer, got " + v->type_name());
    const auto i = std::get<std::int64_t>(v->data);
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail(key, *v, "out of range");
    return static_cast<int>(i);
  }

  std::optional<bool> boolean(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_bool()) fail(key, *v, "expected true or false, got " + v->type_name());
    return std::get<bool>(v->data);
  }

  std::optional<std::string> string(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) fail(key, *v, "expected a string, got " + v->type_name());
    return std::get<std::string>(v->data);
  }

  const toml::Array* array(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) return nullptr;
    if (!v->is_array()) fail(key, *v, "expected an array, got " + v->type_name());
    return &std::get<toml::Array>(v->data);
  }

  void reject_unknown() const {
    if (table_ == nullptr) return;
    for (const auto& [key, v] : *table_)
      if (!used_.contains(key)) fail(key, v, "unknown key");
  }

  const std::string& name() const { return name_; }

 private:
  const Table* table_;
  std::string name_;
  std::set<std::string> used_;
};

void apply_preset(RunConfig& c, const Preset& p) {
  c.preset = p.name;
  c.domain = p.domain;
  c.n = p.n;
  c.params = p.params;
  c.time = p.time;
  c.initial_preset = p.name;
  c.u0 = p.u0;
}

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError(key, msg);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const toml::Document doc = toml::parse(text);
  static const std::set<std::string> known_tables{"", "params", "initial", "output", "solver", "study"};
  for (const auto& [name, table] : doc.tables)
    if (!known_tables.contains(name)) throw ConfigError(name, "unknown table");
  auto table = [&](const std::string& name) -> const Table* {
    const auto it = doc.tables.find(name);
    return it == doc.tables.end() ? nullptr : &it->second;
  };

  RunConfig c;
  Reader root(table(""), "");
  if (auto p = root.string("preset")) {
    try {
      apply_preset(c, find_preset(*p));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("preset", e.what());
    }
  }
  if (auto d = root.string("domain")) {
    const auto tag = parse_domain_tag(*d);
    if (!tag) throw ConfigError("domain", "unknown domain '" + *d + "' (expected interval, unit_square, unit_cube, l_shape or fichera)");
    c.domain = *tag;
  }
  if (auto n = root.integer("n")) c.n = *n;
  if (auto t = root.number("T")) c.time.T = *t;
  const std::optional<int> steps = root.integer("N");
  if (steps) {
    c.time.N = *steps;
  } else if (c.preset.empty()) {
    throw ConfigError("N", "missing (required unless a preset is given)");
  }
  root.reject_unknown();

  require(c.n >= 1, "n", "must be >= 1");
  require(c.time.T > 0.0 && std::isfinite(c.time.T), "T", "must be positive");
  require(c.time.N >= 1, "N", "must be >= 1");

  Reader params(table("params"), "params");
  if (auto v = params.number("kappa1")) c.params.kappa1 = *v;
  if (auto v = params.number("kappa2")) c.params.kappa2 = *v;
  if (auto v = params.number("gamma")) c.params.gamma = *v;
  if (auto v = params.number("mu")) c.params.mu = *v;
  if (auto v = params.number("epsilon")) c.params.epsilon = *v;
  params.reject_unknown();
  require(c.params.kappa1 > 0.0, "params.kappa1", "must be > 0");
  require(c.params.kappa2 > 0.0, "params.kappa2", "must be > 0");
  require(c.params.mu >= 0.0, "params.mu", "must be >= 0");
  require(c.params.epsilon >= 0.0, "params.epsilon", "must be >= 0");
  require(std::isfinite(c.params.gamma), "params.gamma", "must be finite");
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }

  Reader initial(table("initial"), "initial");
  const std::optional<std::string> initial_preset = initial.string("preset");
  const toml::Array* u0 = initial.array("u0");
  initial.reject_unknown();
  if (initial_preset && u0 != nullptr) throw ConfigError("initial", "give either preset or u0, not both");
  if (initial_preset) {
    try {
      const Preset& p = find_preset(*initial_preset);
      c.initial_preset = p.name;
      c.u0 = p.u0;
    } catch (const std::invalid_argument& e) {
      throw ConfigError("initial.preset", e.what());
    }
  } else if (u0 != nullptr) {
    if (u0->size() != 3) throw ConfigError("initial.u0", "expected three component expressions");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*u0)[i].is_string()) throw ConfigError("initial.u0", "components must be strings");
      c.u0[i] = std::get<std::string>((*u0)[i].data);
    }
    c.initial_preset.clear();
  }
  for (const std::string& e : c.u0) {
    try {
      (void)Expression::parse(e);
    } catch (const ExpressionError& err) {
      throw ConfigError("initial.u0", err.what());
    }
  }

  Reader output(table("output"), "output");
  c.output.snapshot_stride = std::max(1, c.time.N / 50);
  if (auto v = output.integer("snapshot_stride")) c.output.snapshot_stride = *v;
  if (auto v = output.boolean("vtk")) c.output.vtk = *v;
  if (auto v = output.string("norms_csv")) c.output.norms_csv = *v;
  if (auto v = output.string("table_csv")) c.output.table_csv = *v;
  if (auto v = output.string("decay_csv")) c.output.decay_csv = *v;
  if (auto v = output.string("linf_csv")) c.output.linf_csv = *v;
  if (auto v = output.string("energy_csv")) c.output.energy_csv = *v;
  output.reject_unknown();
  require(c.output.snapshot_stride >= 1, "output.snapshot_stride", "must be >= 1");

  Reader solver(table("solver"), "solver");
  if (auto v = solver.number("tol")) c.solver.tol = *v;
  if (auto v = solver.integer("max_iter")) c.solver.max_iter = *v;
  if (auto v = solver.integer("restart")) c.solver.restart = *v;
  if (auto v = solver.string("preconditioner")) {
    try {
      c.solver.preconditioner = parse_preconditioner(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("solver.preconditioner", e.what());
    }
  }
  solver.reject_unknown();
  require(c.solver.tol > 0.0 && c.solver.tol < 1.0, "solver.tol", "must be in (0, 1)");
  require(c.solver.max_iter >= 1, "solver.max_iter", "must be >= 1");
  require(c.solver.restart >= 1, "solver.restart", "must be >= 1");

  if (const Table* t = table("study")) {
    Reader study(t, "study");
    StudyConfig s;
    if (auto a = study.string("axis")) {
      try {
        s.axis = parse_study_axis(*a);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("study.axis", e.what());
      }
    }
    if (auto v = study.integer("levels")) s.levels = *v;
    if (const toml::Array* seq = study.array("n_sequence")) {
      for (const Value& v : *seq) {
        if (!v.is_integer()) throw ConfigError("study.n_sequence", "entries must be integers");
        s.n_sequence.push_back(static_cast<int>(std::get<std::int64_t>(v.data)));
      }
    }
    if (const toml::Array* seq = study.array("eps_sequence")) {
      for (const Value& v : *seq) {
        if (!v.is_number()) throw ConfigError("study.eps_sequence", "entries must be numbers");
        s.eps_sequence.push_back(v.as_number());
      }
    }
    study.reject_unknown();
    require(s.levels >= 3, "study.levels", "must be >= 3");
    for (std::size_t i = 1; i < s.n_sequence.size(); ++i)
      require(s.n_sequence[i] == 2 * s.n_sequence[i - 1], "study.n_sequence", "step counts must double");
    for (std::size_t i = 0; i < s.n_sequence.size(); ++i)
      require(s.n_sequence[i] >= 1, "study.n_sequence", "step counts must be >= 1");
    for (std::size_t i = 0; i < s.eps_sequence.size(); ++i)
      require(s.eps_sequence[i] > 0.0, "study.eps_sequence", "values must be positive");
    if (s.axis == StudyAxis::k)
      require(s.n_sequence.size() >= 3, "study.n_sequence", "k study needs at least three step counts");
    if (s.axis == StudyAxis::eps)
      require(s.eps_sequence.size() >= 3, "study.eps_sequence", "eps study needs at least three values");
    c.study = s;
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::string to_toml(const RunConfig& c) {
  std::ostringstream os;
  if (!c.preset.empty()) os << "preset = " << toml::quote(c.preset) << "\n";
  os << "domain = " << toml::quote(std::string(to_string(c.domain))) << "\n";
  os << "n = " << c.n << "\n";
  os << "T = " << number(c.time.T) << "\n";
  os << "N = " << c.time.N << "\n";
  os << "\n[params]\n";
  os << "kappa1 = " << number(c.params.kappa1) << "\n";
  os << "kappa2 = " << number(c.params.kappa2) << "\n";
  os << "gamma = " << number(c.params.gamma) << "\n";
  os << "mu = " << number(c.params.mu) << "\n";
  os << "epsilon = " << number(c.params.epsilon) << "\n";
  os << "\n[initial]\n";
  if (!c.initial_preset.empty()) {
    os << "preset = " << toml::quote(c.initial_preset) << "\n";
  } else {
    os << "u0 = [" << toml::quote(c.u0[0]) << ", " << toml::quote(c.u0[1]) << ", " << toml::quote(c.u0[2]) << "]\n";
  }
  os << "\n[output]\n";
  os << "snapshot_stride = " << c.output.snapshot_stride << "\n";
  os << "vtk = " << (c.output.vtk ? "true" : "false") << "\n";
  os << "norms_csv = " << toml::quote(c.output.norms_csv) << "\n";
  os << "table_csv = " << toml::quote(c.output.table_csv) << "\n";
  os << "decay_csv = " << toml::quote(c.output.decay_csv) << "\n";
  os << "linf_csv = " << toml::quote(c.output.linf_csv) << "\n";
  os << "energy_csv = " << toml::quote(c.output.energy_csv) << "\n";
  os << "\n[solver]\n";
  os << "tol = " << number(c.solver.tol) << "\n";
  os << "max_iter = " << c.solver.max_iter << "\n";
  os << "restart = " << c.solver.restart << "\n";
  os << "preconditioner = " << toml::quote(to_string(c.solver.preconditioner)) << "\n";
  if (c.study) {
    const StudyConfig& s = *c.study;
    os << "\n[study]\n";
    if (s.axis) os << "axis = " << toml::quote(to_string(*s.axis)) << "\n";
    os << "levels = " << s.levels << "\n";
    os << "n_sequence = [";
    for (std::size_t i = 0; i < s.n_sequence.size(); ++i) os << (i ? ", " : "") << s.n_sequence[i];
    os << "]\n";
    os << "eps_sequence = [";
    for (std::size_t i = 0; i < s.eps_sequence.size(); ++i) os << (i ? ", " : "") << number(s.eps_sequence[i]);
    os << "]\n";
  }
  return os.str();
}

}  // namespace llb

#include "rnc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rnc/errors.hpp"

namespace rnc {
namespace {

using json = nlohmann::json;

class SchemaReader {
 public:
  explicit SchemaReader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    std::ostringstream msg;
    msg << source_ << ": schema error at '" << path << "': " << what;
    throw ConfigError(msg.str());
  }

  const json& field(const json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) fail(path, "unknown field '" + key + "'");
    }
  }

  double real(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  std::uint64_t unsigned_int(const json& v, const std::string& path) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    fail(path, "expected a non-negative integer");
  }

  Matrix matrix(const json& v, const std::string& path, std::size_t n) const {
    if (!v.is_array()) fail(path, "expected an array of rows");
    if (v.size() != n) fail(path, "expected " + std::to_string(n) + " rows, got " + std::to_string(v.size()));
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string row_path = path + "[" + std::to_string(i) + "]";
      const json& row = v[i];
      if (!row.is_array()) fail(row_path, "expected an array of numbers");
      if (row.size() != n)
        fail(row_path, "expected " + std::to_string(n) + " entries, got " + std::to_string(row.size()));
      for (std::size_t j = 0; j < n; ++j) m(i, j) = real(row[j], row_path + "[" + std::to_string(j) + "]");
    }
    return m;
  }

  StochasticMatrix stochastic(const json& v, const std::string& path, std::size_t n) const {
    Matrix m = matrix(v, path, n);
    try {
      return validate_matrix(std::move(m));
    } catch (const ValidationError& e) {
      fail(path, std::string("matrix validation failed: ") + e.what());
    }
  }

  InitialState initial_state(const json& v, const std::string& path) const {
    if (v.is_string()) {
      if (v.get<std::string>() != "uniform01") fail(path, "expected \"uniform01\" or an array of reals");
      return InitialState::uniform();
    }
    if (!v.is_array()) fail(path, "expected \"uniform01\" or an array of reals");
    Vector x;
    for (std::size_t i = 0; i < v.size(); ++i) x.push_back(real(v[i], path + "[" + std::to_string(i) + "]"));
    return InitialState::explicit_values(std::move(x));
  }

 private:
  std::string source_;
};

json matrix_json(const Matrix& m) { return m.to_rows(); }

}  // namespace

Vector InitialState::resolve(std::size_t n, const RngPolicy& policy) const {
  if (!uniform01) {
    if (values.size() != n) {
      std::ostringstream msg;
      msg << "x0 has " << values.size() << " coordinates, expected " << n;
      throw PreconditionError(msg.str());
    }
    return values;
  }
  Rng rng = policy.stream(StreamDomain::initial_state, 0);
  Vector x(n);
  for (double& v : x) v = rnc::uniform01(rng);
  return x;
}

std::string InitialState::describe() const {
  if (uniform01) return "uniform01";
  return json(values).dump();
}

Config parse_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t k = 0; k + 1 < limit; ++k)
      if (text[k] == '\n') ++line;
    std::ostringstream msg;
    msg << source << ":" << line << ": parse error: " << e.what();
    throw ConfigError(msg.str());
  }

  SchemaReader r(source);
  if (!doc.is_object()) r.fail("$", "expected an object");
  r.only_keys(doc, "$", {"n", "distribution", "simulation"});
  const std::uint64_t n64 = r.unsigned_int(r.field(doc, "$", "n"), "n");
  if (n64 == 0 || n64 > 256) r.fail("n", "dimension must lie in [1, 256]");
  const auto n = static_cast<std::size_t>(n64);

  const json& d = r.field(doc, "$", "distribution");
  const json& type_field = r.field(d, "distribution", "type");
  if (!type_field.is_string()) r.fail("distribution.type", "expected a string");
  const std::string type = type_field.get<std::string>();

  std::optional<MatrixDistribution> dist;
  if (type == "dirac") {
    r.only_keys(d, "distribution", {"type", "matrix"});
    dist = MatrixDistribution::dirac(r.stochastic(r.field(d, "distribution", "matrix"), "distribution.matrix", n));
  } else if (type == "finite") {
    r.only_keys(d, "distribution", {"type", "atoms"});
    const json& atoms_json = r.field(d, "distribution", "atoms");
    if (!atoms_json.is_array() || atoms_json.empty())
      r.fail("distribution.atoms", "expected a non-empty array");
    std::vector<Atom> atoms;
    double total = 0.0;
    for (std::size_t k = 0; k < atoms_json.size(); ++k) {
      const std::string path = "distribution.atoms[" + std::to_string(k) + "]";
      const json& a = atoms_json[k];
      if (!a.is_object()) r.fail(path, "expected an object");
      r.only_keys(a, path, {"prob", "matrix"});
      const double prob = r.real(r.field(a, path, "prob"), path + ".prob");
      if (!(prob >= 0.0)) r.fail(path + ".prob", "probability must be non-negative");
      total += prob;
      atoms.push_back(Atom{prob, r.stochastic(r.field(a, path, "matrix"), path + ".matrix", n)});
    }
    if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
      std::ostringstream what;
      what.precision(12);
      what << "atom probabilities sum to " << total;
      r.fail("distribution.atoms", what.str());
    }
    dist = MatrixDistribution::finite(std::move(atoms));
  } else if (type == "generator") {
    r.only_keys(d, "distribution", {"type", "name", "params"});
    const json& name = r.field(d, "distribution", "name");
    if (!name.is_string()) r.fail("distribution.name", "expected a string");
    ParamMap params;
    if (auto it = d.find("params"); it != d.end()) {
      if (!it->is_object()) r.fail("distribution.params", "expected an object");
      for (const auto& [key, value] : it->items())
        params[key] = r.real(value, "distribution.params." + key);
    }
    if (!params.contains("n")) params["n"] = static_cast<double>(n);
    if (params["n"] != static_cast<double>(n))
      r.fail("distribution.params.n", "generator dimension disagrees with top-level n");
    try {
      dist = MatrixDistribution::generator(name.get<std::string>(), params);
    } catch (const ConfigError& e) {
      r.fail("distribution", e.what());
    }
  } else {
    r.fail("distribution.type", "expected one of \"dirac\", \"finite\", \"generator\", got \"" + type + "\"");
  }

  SimulationDefaults sim;
  if (auto it = doc.find("simulation"); it != doc.end()) {
    const json& s = *it;
    if (!s.is_object()) r.fail("simulation", "expected an object");
    r.only_keys(s, "simulation", {"paths", "horizon", "eps", "seed", "x0"});
    if (s.contains("paths")) sim.paths = r.unsigned_int(s["paths"], "simulation.paths");
    if (s.contains("horizon")) sim.horizon = r.unsigned_int(s["horizon"], "simulation.horizon");
    if (s.contains("eps")) {
      sim.eps = r.real(s["eps"], "simulation.eps");
      if (!(*sim.eps > 0.0)) r.fail("simulation.eps", "eps must be positive");
    }
    if (s.contains("seed")) sim.seed = r.unsigned_int(s["seed"], "simulation.seed");
    if (s.contains("x0")) {
      sim.x0 = r.initial_state(s["x0"], "simulation.x0");
      if (!sim.x0->uniform01 && sim.x0->values.size() != n)
        r.fail("simulation.x0", "expected " + std::to_string(n) + " coordinates");
    }
  }
  return Config{std::move(*dist), std::move(sim)};
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string dump_config(const MatrixDistribution& dist, const SimulationDefaults& simulation) {
  json doc;
  doc["n"] = dist.n();
  json d;
  if (const auto* dirac = dist.as_dirac()) {
    d["type"] = "dirac";
    d["matrix"] = matrix_json(dirac->matrix.matrix());
  } else if (const auto* fin = dist.as_finite()) {
    d["type"] = "finite";
    d["atoms"] = json::array();
    for (const Atom& a : fin->atoms) d["atoms"].push_back({{"prob", a.prob}, {"matrix", matrix_json(a.matrix.matrix())}});
  } else {
    const auto& gen = *dist.as_generated()->generator;
    if (!gen.registered())
      throw ConfigError("generator '" + std::string(gen.name()) + "' has no config representation");
    d["type"] = "generator";
    d["name"] = gen.name();
    d["params"] = gen.params();
  }
  doc["distribution"] = std::move(d);

  json s = json::object();
  if (simulation.paths) s["paths"] = *simulation.paths;
  if (simulation.horizon) s["horizon"] = *simulation.horizon;
  if (simulation.eps) s["eps"] = *simulation.eps;
  if (simulation.seed) s["seed"] = *simulation.seed;
  if (simulation.x0) {
    if (simulation.x0->uniform01)
      s["x0"] = "uniform01";
    else
      s["x0"] = simulation.x0->values;
  }
  if (!s.empty()) doc["simulation"] = std::move(s);
  return doc.dump(2) + "\n";
}

InitialState parse_initial_state(std::string_view text) {
  if (text == "uniform01") return InitialState::uniform();
  Vector x;
  if (!text.empty() && text.front() == '[') {
    json v;
    try {
      v = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("--x0: ") + e.what());
    }
    if (!v.is_array()) throw ConfigError("--x0: expected an array");
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("--x0: expected numbers");
      x.push_back(e.get<double>());
    }
    return InitialState::explicit_values(std::move(x));
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string token(text.substr(pos, end - pos));
    try {
      std::size_t used = 0;
      x.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError("--x0: cannot parse '" + token + "' as a real (use \"uniform01\", a JSON array, or a comma list)");
    }
    pos = end + 1;
  }
  return InitialState::explicit_values(std::move(x));
}

}  // namespace rnc

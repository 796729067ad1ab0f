#include <cmath>
#include <fstream>
#include <sstream>

#include "crancache/error.hpp"
#include "crancache/scenario_io.hpp"
#include "json.hpp"

namespace crancache {

using nlohmann::json;

std::vector<double> default_eta_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

namespace {

class Field {
 public:
  Field(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ValidationError(path_ + ": " + message);
  }

  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

  Field child(const char* key) const {
    if (!value_.is_object()) fail("expected an object");
    if (!value_.contains(key)) throw ValidationError(join(key) + ": required field is missing");
    return Field(value_.at(key), join(key));
  }

  Field element(std::size_t i) const {
    return Field(value_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("must be finite");
    return v;
  }

  std::size_t count() const {
    if (!value_.is_number_integer() || value_.get<long long>() < 0)
      fail("expected a nonnegative integer");
    return value_.get<std::size_t>();
  }

  std::uint64_t u64() const {
    if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<long long>() >= 0))
      fail("expected a nonnegative integer");
    return value_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::string text() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(element(i).number());
    return out;
  }

  template <class T, class Get>
  void optional(const char* key, T& target, Get get) const {
    if (has(key)) target = get(child(key));
  }

 private:
  std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& value_;
  std::string path_;
};

double as_number(const Field& f) { return f.number(); }
std::size_t as_count(const Field& f) { return f.count(); }

FileLibrary parse_library(const Field& f) {
  const auto files = f.child("L").count();
  const auto beta = f.child("beta").number();
  if (files < 1) f.child("L").fail("must be at least 1");
  if (beta < 0.0) f.child("beta").fail("must be nonnegative");
  return FileLibrary(files, beta);
}

RrhLayout parse_layout(const Field& f) {
  const double radius = f.child("R").number();
  if (!(radius > 0.0)) f.child("R").fail("must be positive");
  const auto rrh = f.child("rrh");
  if (rrh.size() < 1) rrh.fail("at least one RRH is required");
  if (rrh.size() > 64) rrh.fail("at most 64 RRHs are supported");
  std::vector<Polar> positions;
  for (std::size_t i = 0; i < rrh.size(); ++i) {
    const auto r = rrh.element(i);
    Polar p{r.child("rho").number(), r.child("theta").number()};
    if (p.rho < 0.0 || p.rho > radius) r.child("rho").fail("must lie in [0, R]");
    positions.push_back(p);
  }
  std::vector<std::size_t> sizes;
  const auto cs = f.child("cache_sizes");
  if (cs.raw().is_array()) {
    if (cs.size() != positions.size()) cs.fail("needs one entry per RRH");
    for (std::size_t i = 0; i < cs.size(); ++i) sizes.push_back(cs.element(i).count());
  } else {
    sizes.assign(positions.size(), cs.count());
  }
  return RrhLayout(positions, sizes, radius);
}

RadioConfig parse_radio(const Field& f) {
  RadioConfig r;
  f.optional("total_snr_db", r.total_snr_db, as_number);
  f.optional("alpha", r.alpha, as_number);
  f.optional("gamma_th_db", r.gamma_th_db, as_number);
  f.optional("attenuation_at_R_db", r.attenuation_at_R_db, as_number);
  r.validate();
  return r;
}

GaConfig parse_ga(const Field& f) {
  GaConfig g;
  f.optional("population_size", g.population_size, as_count);
  f.optional("elite_count", g.elite_count, as_count);
  f.optional("crossover_fraction", g.crossover_fraction, as_number);
  f.optional("max_generations", g.max_generations, as_count);
  f.optional("stall_generations", g.stall_generations, as_count);
  f.optional("stall_tolerance", g.stall_tolerance, as_number);
  f.optional("seed", g.seed, [](const Field& x) { return x.u64(); });
  f.optional("seed_with_canonical", g.seed_with_canonical, [](const Field& x) { return x.boolean(); });
  g.validate();
  return g;
}

SimConfig parse_sim(const Field& f) {
  SimConfig s;
  f.optional("fading_draws", s.fading_draws, as_count);
  f.optional("location_draws", s.location_draws, as_count);
  f.optional("request_draws", s.request_draws, as_count);
  f.optional("seed", s.seed, [](const Field& x) { return x.u64(); });
  s.validate();
  return s;
}

CdfSetup parse_cdf(const Field& f) {
  CdfSetup c;
  const auto sets = f.child("distance_sets");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto s = sets.element(i);
    DistanceSet d{s.child("tag").text(), s.child("distances").numbers()};
    if (d.distances.empty()) s.child("distances").fail("must not be empty");
    for (double x : d.distances)
      if (!(x > 0.0)) s.child("distances").fail("distances must be positive");
    c.distance_sets.push_back(std::move(d));
  }
  f.optional("gamma_db_min", c.gamma_db_min, as_number);
  f.optional("gamma_db_max", c.gamma_db_max, as_number);
  f.optional("points", c.points, as_count);
  if (c.points < 2) f.child("points").fail("must be at least 2");
  if (!(c.gamma_db_max > c.gamma_db_min)) f.fail("gamma_db_max must exceed gamma_db_min");
  return c;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
  }
  const Field root(doc, "");
  if (!doc.is_object()) throw ValidationError("scenario: expected a JSON object");

  Scenario sc{parse_library(root.child("library")), parse_layout(root.child("layout")),
              root.has("radio") ? parse_radio(root.child("radio")) : RadioConfig{}};
  ScenarioFile file(std::move(sc));
  if (root.has("name")) file.name = root.child("name").text();
  if (root.has("quadrature")) {
    const auto q = root.child("quadrature");
    q.optional("U", file.scenario.grid_u, as_count);
    q.optional("V", file.scenario.grid_v, as_count);
    q.optional("theta_offset", file.theta_offset, as_number);
    for (const char* key : {"U", "V"}) {
      if (!q.has(key)) continue;
      const auto n = q.child(key).count();
      if (n < 2 || n % 2 != 0) q.child(key).fail("must be an even number of at least 2");
    }
  }
  if (file.scenario.layout.total_cache() > file.scenario.library.size())
    throw ValidationError("layout.cache_sizes: total cache L' = " +
                          std::to_string(file.scenario.layout.total_cache()) +
                          " exceeds library.L = " + std::to_string(file.scenario.library.size()));
  file.scenario.validate();

  if (root.has("ga")) file.ga = parse_ga(root.child("ga"));
  if (root.has("sim")) file.sim = parse_sim(root.child("sim"));
  file.eta_grid = default_eta_grid();
  if (root.has("eta_grid")) {
    const auto g = root.child("eta_grid");
    file.eta_grid = g.numbers();
    if (file.eta_grid.empty()) g.fail("must not be empty");
    for (std::size_t i = 0; i < file.eta_grid.size(); ++i)
      if (file.eta_grid[i] < 0.0 || file.eta_grid[i] > 1.0) g.element(i).fail("must lie in [0, 1]");
  }
  if (root.has("cdf")) file.cdf = parse_cdf(root.child("cdf"));
  if (root.has("sweep")) {
    const auto s = root.child("sweep");
    if (s.has("gamma_th_db")) file.sweep.gamma_th_db = s.child("gamma_th_db").numbers();
    if (s.has("beta")) {
      file.sweep.beta = s.child("beta").numbers();
      for (std::size_t i = 0; i < file.sweep.beta.size(); ++i)
        if (file.sweep.beta[i] < 0.0) s.child("beta").element(i).fail("must be nonnegative");
    }
  }
  return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const ScenarioFile& file, int indent) {
  const auto& sc = file.scenario;
  json rrh = json::array();
  for (const auto& p : sc.layout.positions()) rrh.push_back({{"rho", p.rho}, {"theta", p.theta}});
  json doc;
  doc["name"] = file.name;
  doc["library"] = {{"L", sc.library.size()}, {"beta", sc.library.beta}};
  doc["layout"] = {{"R", sc.layout.radius()}, {"rrh", rrh}, {"cache_sizes", sc.layout.cache_sizes()}};
  doc["radio"] = {{"total_snr_db", sc.radio.total_snr_db},
                  {"alpha", sc.radio.alpha},
                  {"gamma_th_db", sc.radio.gamma_th_db},
                  {"attenuation_at_R_db", sc.radio.attenuation_at_R_db}};
  doc["quadrature"] = {{"U", sc.grid_u}, {"V", sc.grid_v}, {"theta_offset", file.theta_offset}};
  const auto& g = file.ga;
  doc["ga"] = {{"population_size", g.population_size},
               {"elite_count", g.elite_count},
               {"crossover_fraction", g.crossover_fraction},
               {"max_generations", g.max_generations},
               {"stall_generations", g.stall_generations},
               {"stall_tolerance", g.stall_tolerance},
               {"seed", g.seed},
               {"seed_with_canonical", g.seed_with_canonical}};
  doc["sim"] = {{"fading_draws", file.sim.fading_draws},
                {"location_draws", file.sim.location_draws},
                {"request_draws", file.sim.request_draws},
                {"seed", file.sim.seed}};
  doc["eta_grid"] = file.eta_grid;
  if (!file.cdf.distance_sets.empty()) {
    json sets = json::array();
    for (const auto& d : file.cdf.distance_sets)
      sets.push_back({{"tag", d.tag}, {"distances", d.distances}});
    doc["cdf"] = {{"distance_sets", sets},
                  {"gamma_db_min", file.cdf.gamma_db_min},
                  {"gamma_db_max", file.cdf.gamma_db_max},
                  {"points", file.cdf.points}};
  }
  if (!file.sweep.gamma_th_db.empty() || !file.sweep.beta.empty())
    doc["sweep"] = {{"gamma_th_db", file.sweep.gamma_th_db}, {"beta", file.sweep.beta}};
  return doc.dump(indent);
}

}  // namespace crancache

#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eulerwave/burgers.hpp"
#include "eulerwave/common.hpp"
#include "eulerwave/directions.hpp"
#include "eulerwave/field.hpp"
#include "eulerwave/gas.hpp"

namespace eulerwave {

/// Malformed scenario document.
struct ScenarioError : DomainError {
  using DomainError::DomainError;
};

struct TransverseSpec {
  int carrier = 0;
  BurgersProfile profile = ConstantProfile{0.0};
  std::optional<std::vector<double>> direction;
};

/// Everything needed to assemble an exact field and decide what to export.
/// The JSON schema is documented in README.md.
struct Scenario {
  double gamma = 1.4;
  double k = 1.0;
  int dimension = 2;
  std::optional<int> n_waves;  ///< empty means the maximum admissible count
  std::vector<BurgersProfile> waves;
  std::optional<std::vector<std::vector<double>>> directions;
  std::optional<TransverseSpec> transverse;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> resolution;
  std::vector<double> times;
  std::vector<std::string> formats{"csv"};
  std::string directory = ".";

  GasParams gas() const { return make_gas(gamma, k); }
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw ScenarioError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ScenarioError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

inline double number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ScenarioError(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

inline std::vector<double> numbers(const json& value, const std::string& where) {
  if (!value.is_array()) throw ScenarioError(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : value) {
    if (!v.is_number()) throw ScenarioError(where + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline BurgersProfile parse_profile(const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string()) {
    throw ScenarioError(where + " needs a string 'kind'");
  }
  const auto kind = obj["kind"].get<std::string>();
  if (kind == "constant") {
    reject_unknown(obj, {"kind", "value"}, where);
    return ConstantProfile{number(obj, "value", 0.0, where)};
  }
  if (kind == "linear") {
    reject_unknown(obj, {"kind", "slope", "offset"}, where);
    return LinearProfile{number(obj, "slope", 0.0, where), number(obj, "offset", 0.0, where)};
  }
  if (kind == "sine") {
    reject_unknown(obj, {"kind", "amplitude", "wavenumber", "offset"}, where);
    return SineProfile{number(obj, "amplitude", 0.0, where), number(obj, "wavenumber", 1.0, where),
                       number(obj, "offset", 0.0, where)};
  }
  if (kind == "gaussian-bump") {
    reject_unknown(obj, {"kind", "amplitude", "center", "width", "offset"}, where);
    return GaussianBumpProfile{number(obj, "amplitude", 0.0, where),
                               number(obj, "center", 0.0, where), number(obj, "width", 1.0, where),
                               number(obj, "offset", 0.0, where)};
  }
  throw ScenarioError(where + ": unknown profile kind '" + kind + "'");
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& doc) {
  using detail::json;
  detail::reject_unknown(doc, {"gas", "dimension", "n_waves", "waves", "directions", "transverse",
                               "grid", "times", "outputs"},
                         "scenario");
  Scenario sc;

  if (!doc.contains("gas")) throw ScenarioError("scenario needs a 'gas' object");
  detail::reject_unknown(doc["gas"], {"gamma", "k"}, "gas");
  if (!doc["gas"].contains("gamma")) throw ScenarioError("gas needs 'gamma'");
  sc.gamma = detail::number(doc["gas"], "gamma", 0.0, "gas");
  sc.k = detail::number(doc["gas"], "k", 1.0, "gas");

  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) {
    throw ScenarioError("scenario needs an integer 'dimension'");
  }
  sc.dimension = doc["dimension"].get<int>();
  if (sc.dimension != 2 && sc.dimension != 3) throw ScenarioError("dimension must be 2 or 3");

  if (doc.contains("n_waves")) {
    const auto& n = doc["n_waves"];
    if (n.is_string() && n.get<std::string>() == "max") {
      sc.n_waves.reset();
    } else if (n.is_number_integer() && n.get<int>() >= 1) {
      sc.n_waves = n.get<int>();
    } else {
      throw ScenarioError("n_waves must be a positive integer or \"max\"");
    }
  }

  if (!doc.contains("waves") || !doc["waves"].is_array() || doc["waves"].empty()) {
    throw ScenarioError("scenario needs a non-empty 'waves' array");
  }
  for (std::size_t i = 0; i < doc["waves"].size(); ++i) {
    sc.waves.push_back(detail::parse_profile(doc["waves"][i], "waves[" + std::to_string(i) + "]"));
  }

  if (doc.contains("directions")) {
    if (!doc["directions"].is_array() || doc["directions"].empty()) {
      throw ScenarioError("directions must be a non-empty array of vectors");
    }
    std::vector<std::vector<double>> dirs;
    for (const auto& v : doc["directions"]) {
      auto vec = detail::numbers(v, "directions[]");
      if (static_cast<int>(vec.size()) != sc.dimension) {
        throw ScenarioError("every direction needs exactly 'dimension' components");
      }
      dirs.push_back(std::move(vec));
    }
    sc.directions = std::move(dirs);
  }

  if (doc.contains("transverse")) {
    const auto& tr = doc["transverse"];
    detail::reject_unknown(tr, {"carrier", "profile", "direction"}, "transverse");
    auto& spec = sc.transverse.emplace();
    if (!tr.contains("carrier") || !tr["carrier"].is_number_integer()) {
      throw ScenarioError("transverse needs an integer 'carrier' index");
    }
    spec.carrier = tr["carrier"].get<int>();
    if (!tr.contains("profile")) throw ScenarioError("transverse needs a 'profile'");
    spec.profile = detail::parse_profile(tr["profile"], "transverse.profile");
    if (tr.contains("direction")) spec.direction = detail::numbers(tr["direction"], "transverse.direction");
  }

  if (!doc.contains("grid")) throw ScenarioError("scenario needs a 'grid' object");
  const auto& grid = doc["grid"];
  detail::reject_unknown(grid, {"lower", "upper", "resolution"}, "grid");
  if (!grid.contains("lower") || !grid.contains("upper") || !grid.contains("resolution")) {
    throw ScenarioError("grid needs 'lower', 'upper' and 'resolution'");
  }
  sc.lower = detail::numbers(grid["lower"], "grid.lower");
  sc.upper = detail::numbers(grid["upper"], "grid.upper");
  if (!grid["resolution"].is_array()) throw ScenarioError("grid.resolution must be an array");
  for (const auto& r : grid["resolution"]) {
    if (!r.is_number_integer() || r.get<int>() < 1) {
      throw ScenarioError("grid.resolution entries must be positive integers");
    }
    sc.resolution.push_back(r.get<int>());
  }
  const auto dim = static_cast<std::size_t>(sc.dimension);
  if (sc.lower.size() != dim || sc.upper.size() != dim || sc.resolution.size() != dim) {
    throw ScenarioError("grid arrays need exactly 'dimension' entries");
  }

  if (doc.contains("times")) sc.times = detail::numbers(doc["times"], "times");
  for (double t : sc.times) {
    if (!(t >= 0.0)) throw ScenarioError("times must be nonnegative");
  }

  if (doc.contains("outputs")) {
    const auto& out = doc["outputs"];
    detail::reject_unknown(out, {"formats", "directory"}, "outputs");
    if (out.contains("formats")) {
      if (!out["formats"].is_array()) throw ScenarioError("outputs.formats must be an array");
      sc.formats.clear();
      for (const auto& f : out["formats"]) {
        if (!f.is_string() || (f != "csv" && f != "vtk")) {
          throw ScenarioError("outputs.formats entries must be \"csv\" or \"vtk\"");
        }
        sc.formats.push_back(f.get<std::string>());
      }
    }
    if (out.contains("directory")) {
      if (!out["directory"].is_string()) throw ScenarioError("outputs.directory must be a string");
      sc.directory = out["directory"].get<std::string>();
    }
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ScenarioError("cannot open scenario file " + path);
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("scenario " + path + " is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

/// Wave count after resolving "max" and explicit direction lists.
inline int wave_count(const Scenario& sc) {
  if (sc.directions) {
    const int n = static_cast<int>(sc.directions->size());
    if (sc.n_waves && *sc.n_waves != n) {
      throw ScenarioError("n_waves disagrees with the number of explicit directions");
    }
    return n;
  }
  return sc.n_waves ? *sc.n_waves : max_wave_count(sc.gas(), sc.dimension);
}

template <int Dim>
GridSpec<Dim> grid_spec(const Scenario& sc) {
  GridSpec<Dim> g;
  for (int d = 0; d < Dim; ++d) {
    const auto i = static_cast<std::size_t>(d);
    g.lower[d] = sc.lower[i];
    g.upper[d] = sc.upper[i];
    g.resolution[i] = sc.resolution[i];
  }
  g.validate();
  return g;
}

template <int Dim>
DirectionSet<Dim> scenario_directions(const Scenario& sc) {
  const GasParams gas = sc.gas();
  if (!sc.directions) return build_directions<Dim>(gas, wave_count(sc));
  std::vector<Vec<Dim>> vecs;
  for (const auto& v : *sc.directions) {
    Vec<Dim> x;
    for (int d = 0; d < Dim; ++d) x[d] = v[static_cast<std::size_t>(d)];
    vecs.push_back(x);
  }
  return DirectionSet<Dim>::from_vectors(gas.a(), std::move(vecs));
}

/// Assembles the exact field described by the scenario. A single wave entry is
/// reused for every direction.
template <int Dim>
ExactField<Dim> build_field(const Scenario& sc) {
  if (sc.dimension != Dim) throw ScenarioError("scenario dimension mismatch");
  const GasParams gas = sc.gas();
  auto ds = scenario_directions<Dim>(sc);
  const auto n = static_cast<std::size_t>(ds.size());
  if (sc.waves.size() != n && sc.waves.size() != 1) {
    throw ScenarioError("expected " + std::to_string(n) + " wave profiles (or a single one), got " +
                        std::to_string(sc.waves.size()));
  }
  std::vector<BurgersWave> waves;
  for (std::size_t j = 0; j < n; ++j) {
    waves.push_back(make_wave(gas, sc.waves.size() == 1 ? sc.waves[0] : sc.waves[j]));
  }
  std::optional<Transverse<Dim>> transverse;
  if (sc.transverse) {
    Transverse<Dim> tr;
    tr.carrier = sc.transverse->carrier;
    tr.profile = sc.transverse->profile;
    if (sc.transverse->direction) {
      if (sc.transverse->direction->size() != static_cast<std::size_t>(Dim)) {
        throw ScenarioError("transverse.direction needs exactly 'dimension' components");
      }
      for (int d = 0; d < Dim; ++d) tr.direction[d] = (*sc.transverse->direction)[static_cast<std::size_t>(d)];
    } else {
      const auto perp = transverse_direction(ds);
      if (!perp) {
        throw OrthogonalityError("the direction set spans R^" + std::to_string(Dim) +
                                 ", so no transverse direction exists");
      }
      tr.direction = *perp;
    }
    transverse = tr;
  }
  return assemble<Dim>(gas, std::move(ds), std::move(waves), std::move(transverse));
}

}  // namespace eulerwave

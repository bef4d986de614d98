#include "rplan/requirements.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rplan/error.hpp"

namespace rplan {

void HardwareConstants::validate() const {
  if (!(f_link > 0.25 && f_link <= 1.0)) {
    throw InputError("f_link must lie in (0.25, 1]");
  }
  if (m < 1) throw InputError("m must be a positive integer");
  if (!(c_fiber_km_s > 0.0) || !std::isfinite(c_fiber_km_s)) {
    throw InputError("c_fiber_km_s must be positive");
  }
  if (!(l_att_km > 0.0) || !std::isfinite(l_att_km)) {
    throw InputError("l_att_km must be positive");
  }
}

void ChainRequirements::validate() const {
  if (!(r_min_hz > 0.0) || !std::isfinite(r_min_hz)) {
    throw InputError("r_min_hz must be positive");
  }
  if (!(f_min > 0.25 && f_min < 1.0)) throw InputError("f_min must lie in (0.25, 1)");
  if (k < 1) throw InputError("k must be at least 1");
  if (d < 1) throw InputError("d must be at least 1");
  hardware.validate();
}

double chain_fidelity(int n, double f_link) {
  if (n < 0) throw InputError("repeater count must be nonnegative");
  if (!(f_link > 0.25 && f_link <= 1.0)) {
    throw InputError("f_link must lie in (0.25, 1]");
  }
  double p = (4.0 * f_link - 1.0) / 3.0;
  return (1.0 + 3.0 * std::pow(p, n + 1)) / 4.0;
}

double chain_rate(int n, double length_km, const HardwareConstants& hw) {
  if (n < 0) throw InputError("repeater count must be nonnegative");
  if (!(length_km > 0.0)) throw InputError("link length must be positive");
  hw.validate();
  // 1 - (1 - q)^M with q = e^(-L/L_att) / 2, kept accurate for tiny q.
  double q = 0.5 * std::exp(-length_km / hw.l_att_km);
  double success = -std::expm1(static_cast<double>(hw.m) * std::log1p(-q));
  return (hw.c_fiber_km_s / length_km) * std::ldexp(1.0, -n) *
         std::pow(success, n + 1);
}

int derive_n_max(double f_min, double f_link, int ceiling) {
  if (chain_fidelity(0, f_link) <= f_min) {
    throw InfeasibleError("bounds", "fidelity target unreachable",
                          {"even a repeaterless link has fidelity " +
                           std::to_string(chain_fidelity(0, f_link)) +
                           " <= f_min " + std::to_string(f_min)});
  }
  int n = 0;
  while (n < ceiling && chain_fidelity(n + 1, f_link) > f_min) ++n;
  return n;
}

DerivedBounds derive_l_max(int n, double r_min_hz, const HardwareConstants& hw,
                           const BoundsOptions& options) {
  constexpr double kFloorKm = 0.1;
  if (!(chain_rate(n, kFloorKm, hw) > r_min_hz)) {
    throw InfeasibleError("bounds", "rate target unreachable",
                          {"rate at 0.1 km with " + std::to_string(n) +
                           " repeaters does not exceed r_min"});
  }
  double lo = kFloorKm;
  double hi = 2.0 * kFloorKm;
  while (chain_rate(n, hi, hw) > r_min_hz) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw InfeasibleError("bounds", "rate bound does not converge");
  }
  while (hi - lo > options.bisection_tol_km) {
    double mid = 0.5 * (lo + hi);
    (chain_rate(n, mid, hw) > r_min_hz ? lo : hi) = mid;
  }

  DerivedBounds out;
  out.n_max = n;
  out.l_max_continuous_km = lo;
  double whole = std::floor(lo);
  while (chain_rate(n, whole + 1.0, hw) > r_min_hz) whole += 1.0;
  while (whole >= 1.0 && !(chain_rate(n, whole, hw) > r_min_hz)) whole -= 1.0;
  if (options.continuous) {
    out.l_max_km = lo;
  } else {
    if (whole < 1.0) {
      throw InfeasibleError("bounds", "rate target needs links shorter than 1 km",
                            {"use continuous bounds or give l_max_km directly"});
    }
    out.l_max_km = whole;
  }
  return out;
}

DerivedBounds derive_bounds(const ChainRequirements& req,
                            const BoundsOptions& options) {
  req.validate();
  int n = derive_n_max(req.f_min, req.hardware.f_link, options.n_max_ceiling);
  return derive_l_max(n, req.r_min_hz, req.hardware, options);
}

namespace {

using nlohmann::json;

template <typename T>
std::optional<T> opt_number(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number()) {
    throw InputError(std::string("requirement key '") + key + "' must be a number");
  }
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) {
      throw InputError(std::string("requirement key '") + key + "' must be an integer");
    }
    return it->get<T>();
  } else {
    return it->get<double>();
  }
}

std::pair<std::string, std::string> pair_key(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

RequirementConfig load_requirements(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("requirements JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("requirements document must be an object");

  RequirementConfig cfg;
  ChainRequirements& r = cfg.base;
  if (auto v = opt_number<double>(doc, "r_min_hz")) r.r_min_hz = *v;
  if (auto v = opt_number<double>(doc, "f_min")) r.f_min = *v;
  if (auto v = opt_number<int>(doc, "k")) r.k = *v;
  if (auto v = opt_number<int>(doc, "d")) r.d = *v;
  if (auto it = doc.find("hardware"); it != doc.end()) {
    if (!it->is_object()) throw InputError("'hardware' must be an object");
    if (auto v = opt_number<double>(*it, "f_link")) r.hardware.f_link = *v;
    if (auto v = opt_number<int>(*it, "m")) r.hardware.m = *v;
    if (auto v = opt_number<double>(*it, "c_fiber_km_s")) r.hardware.c_fiber_km_s = *v;
    if (auto v = opt_number<double>(*it, "l_att_km")) r.hardware.l_att_km = *v;
  }
  cfg.n_max = opt_number<int>(doc, "n_max");
  cfg.l_max_km = opt_number<double>(doc, "l_max_km");

  if (auto it = doc.find("per_pair"); it != doc.end()) {
    if (!it->is_array()) throw InputError("'per_pair' must be an array");
    for (const json& e : *it) {
      if (!e.is_object() || !e.contains("s") || !e.contains("t") ||
          !e["s"].is_string() || !e["t"].is_string()) {
        throw InputError("per_pair entries need string keys 's' and 't'");
      }
      PairOverride o;
      o.r_min_hz = opt_number<double>(e, "r_min_hz");
      o.f_min = opt_number<double>(e, "f_min");
      o.k = opt_number<int>(e, "k");
      o.n_max = opt_number<int>(e, "n_max");
      o.l_max_km = opt_number<double>(e, "l_max_km");
      auto key = pair_key(e["s"].get<std::string>(), e["t"].get<std::string>());
      if (!cfg.per_pair.emplace(key, o).second) {
        throw InputError("duplicate per_pair entry " + key.first + "-" + key.second);
      }
    }
  }
  if (auto it = doc.find("per_node"); it != doc.end()) {
    if (!it->is_array()) throw InputError("'per_node' must be an array");
    for (const json& e : *it) {
      if (!e.is_object() || !e.contains("id") || !e["id"].is_string()) {
        throw InputError("per_node entries need a string key 'id'");
      }
      auto d = opt_number<int>(e, "d");
      if (!d) throw InputError("per_node entries need an integer 'd'");
      if (!cfg.per_node_d.emplace(e["id"].get<std::string>(), *d).second) {
        throw InputError("duplicate per_node entry " + e["id"].get<std::string>());
      }
    }
  }
  r.validate();
  if (cfg.n_max && *cfg.n_max < 0) throw InputError("n_max must be nonnegative");
  if (cfg.l_max_km && !(*cfg.l_max_km > 0.0)) throw InputError("l_max_km must be positive");
  return cfg;
}

RequirementConfig load_requirements_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open requirements file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_requirements(buf.str());
}

std::string requirements_to_json(const RequirementConfig& cfg) {
  const ChainRequirements& r = cfg.base;
  json doc = {{"r_min_hz", r.r_min_hz},
              {"f_min", r.f_min},
              {"k", r.k},
              {"d", r.d},
              {"hardware",
               {{"f_link", r.hardware.f_link},
                {"m", r.hardware.m},
                {"c_fiber_km_s", r.hardware.c_fiber_km_s},
                {"l_att_km", r.hardware.l_att_km}}}};
  if (cfg.n_max) doc["n_max"] = *cfg.n_max;
  if (cfg.l_max_km) doc["l_max_km"] = *cfg.l_max_km;
  if (!cfg.per_pair.empty()) {
    json arr = json::array();
    for (const auto& [key, o] : cfg.per_pair) {
      json e = {{"s", key.first}, {"t", key.second}};
      if (o.r_min_hz) e["r_min_hz"] = *o.r_min_hz;
      if (o.f_min) e["f_min"] = *o.f_min;
      if (o.k) e["k"] = *o.k;
      if (o.n_max) e["n_max"] = *o.n_max;
      if (o.l_max_km) e["l_max_km"] = *o.l_max_km;
      arr.push_back(std::move(e));
    }
    doc["per_pair"] = std::move(arr);
  }
  if (!cfg.per_node_d.empty()) {
    json arr = json::array();
    for (const auto& [id, d] : cfg.per_node_d) arr.push_back({{"id", id}, {"d", d}});
    doc["per_node"] = std::move(arr);
  }
  return doc.dump(2) + "\n";
}

namespace {

DerivedBounds bounds_for(const ChainRequirements& r, std::optional<int> n_max,
                         std::optional<double> l_max,
                         const BoundsOptions& options) {
  DerivedBounds b;
  if (n_max && l_max) {
    b.n_max = *n_max;
    b.l_max_km = *l_max;
    b.l_max_continuous_km = *l_max;
    return b;
  }
  int n = n_max ? *n_max
                : derive_n_max(r.f_min, r.hardware.f_link, options.n_max_ceiling);
  if (l_max) {
    b.n_max = n;
    b.l_max_km = *l_max;
    b.l_max_continuous_km = *l_max;
    return b;
  }
  return derive_l_max(n, r.r_min_hz, r.hardware, options);
}

}  // namespace

DerivedBounds resolve_base_bounds(const RequirementConfig& config,
                                  const BoundsOptions& options) {
  config.base.validate();
  return bounds_for(config.base, config.n_max, config.l_max_km, options);
}

bool ResolvedRequirements::homogeneous() const {
  for (const auto& p : pairs) {
    if (p.k != base_k || p.n_max != base_bounds.n_max ||
        p.l_max_km != base_bounds.l_max_km) {
      return false;
    }
  }
  for (int d : node_d) {
    if (d != 0 && d != base_d) return false;
  }
  return true;
}

ResolvedRequirements resolve_requirements(const RequirementConfig& config,
                                          const FiberNetwork& net,
                                          const EndNodePairSet& pairs,
                                          const BoundsOptions& options) {
  ResolvedRequirements out;
  out.base_bounds = resolve_base_bounds(config, options);
  out.base_k = config.base.k;
  out.base_d = config.base.d;

  std::map<std::pair<std::string, std::string>, std::size_t> pair_index;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    pair_index[pair_key(net.id(pairs[q].s), net.id(pairs[q].t))] = q;
  }
  out.pairs.assign(pairs.size(), PairParams{config.base.k, out.base_bounds.n_max,
                                            out.base_bounds.l_max_km});
  for (const auto& [key, o] : config.per_pair) {
    auto it = pair_index.find(key);
    if (it == pair_index.end()) {
      throw InputError("per_pair entry " + key.first + "-" + key.second +
                       " is not an end-node pair of the network");
    }
    ChainRequirements r = config.base;
    if (o.r_min_hz) r.r_min_hz = *o.r_min_hz;
    if (o.f_min) r.f_min = *o.f_min;
    if (o.k) r.k = *o.k;
    r.validate();
    PairParams& p = out.pairs[it->second];
    p.k = r.k;
    bool toy_changed = o.r_min_hz || o.f_min;
    std::optional<int> n = o.n_max;
    std::optional<double> l = o.l_max_km;
    if (!toy_changed) {
      if (!n) n = config.n_max;
      if (!l) l = config.l_max_km;
    }
    DerivedBounds b = bounds_for(r, n, l, options);
    if (b.n_max < 0 || !(b.l_max_km > 0.0)) {
      throw InputError("per_pair bounds must be positive");
    }
    p.n_max = b.n_max;
    p.l_max_km = b.l_max_km;
  }

  out.node_d.assign(net.node_count(), 0);
  for (NodeIndex r : net.repeater_locations()) out.node_d[r] = config.base.d;
  for (const auto& [id, d] : config.per_node_d) {
    auto idx = net.find(id);
    if (!idx) throw InputError("per_node entry names unknown node '" + id + "'");
    if (net.is_end(*idx)) {
      throw InputError("per_node entry '" + id + "' is an end node");
    }
    if (d < 1) throw InputError("per_node d must be at least 1");
    out.node_d[*idx] = d;
  }
  return out;
}

ResolvedRequirements uniform_requirements(const FiberNetwork& net,
                                          const EndNodePairSet& pairs, int k,
                                          int d, int n_max, double l_max_km) {
  if (k < 1 || d < 1 || n_max < 0 || !(l_max_km > 0.0)) {
    throw InputError("invalid uniform requirements");
  }
  ResolvedRequirements out;
  out.base_k = k;
  out.base_d = d;
  out.base_bounds = {n_max, l_max_km, l_max_km};
  out.pairs.assign(pairs.size(), PairParams{k, n_max, l_max_km});
  out.node_d.assign(net.node_count(), 0);
  for (NodeIndex r : net.repeater_locations()) out.node_d[r] = d;
  return out;
}

}  // namespace rplan

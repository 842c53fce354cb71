// Copyright 2026 The rcacsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rcacsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rcacsim/errors.hpp"

namespace rcacsim {
namespace {

using nlohmann::json;

constexpr char kGainsFormat[] = "rcacsim-gains-v1";

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError("config: " + path + " " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Strict accessor for one JSON object level: typed getters plus a whitelist
/// check so typos surface as errors with a full field path.
struct Section {
  const json& j;
  std::string path;

  Section(const json& node, std::string p) : j(node), path(std::move(p)) {
    if (!j.is_object()) fail(path.empty() ? "(root)" : path, "must be an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& item : j.items()) {
      const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) {
        return item.key() == k;
      });
      if (!known) fail(join(path, item.key()), "is not a recognized key");
    }
  }

  const json* find(const char* key) const {
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
  }

  const json& require(const char* key) const {
    const json* v = find(key);
    if (v == nullptr) fail(join(path, key), "is required");
    return *v;
  }

  void number(const char* key, double* out) const {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(join(path, key), "must be a number");
      *out = v->get<double>();
    }
  }

  void uinteger(const char* key, std::uint64_t* out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() ||
          (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
        fail(join(path, key), "must be a non-negative integer");
      }
      *out = v->get<std::uint64_t>();
    }
  }

  void boolean(const char* key, bool* out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(join(path, key), "must be true or false");
      *out = v->get<bool>();
    }
  }

  void str(const char* key, std::string* out) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(join(path, key), "must be a string");
      *out = v->get<std::string>();
    }
  }

  std::vector<double> number_array(const char* key, const json& v) const {
    if (!v.is_array()) fail(join(path, key), "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
      if (!e.is_number()) fail(join(path, key), "must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void vec3(const char* key, Eigen::Vector3d* out) const {
    if (const json* v = find(key)) {
      auto a = number_array(key, *v);
      if (a.size() != 3) fail(join(path, key), "must have exactly 3 entries");
      *out = Eigen::Vector3d(a[0], a[1], a[2]);
    }
  }

  void vec4(const char* key, Eigen::Vector4d* out) const {
    if (const json* v = find(key)) {
      auto a = number_array(key, *v);
      if (a.size() != 4) fail(join(path, key), "must have exactly 4 entries");
      *out = Eigen::Vector4d(a[0], a[1], a[2], a[3]);
    }
  }
};

/// Filter coefficients appear in JSON highest power first (the usual
/// written-out polynomial order); internally they are ascending.
std::vector<double> descending_to_ascending(std::vector<double> a) {
  std::reverse(a.begin(), a.end());
  return a;
}

json ascending_to_descending(const std::vector<double>& a) {
  json out = json::array();
  for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(*it);
  return out;
}

void parse_rcac(const Section& parent, const char* key, RcacHyperparams* out) {
  if (const json* v = parent.find(key)) {
    Section s(*v, join(parent.path, key));
    s.allow({"filter_num", "filter_den", "rz", "p0"});
    std::vector<double> num = out->gf.num;
    std::vector<double> den = out->gf.den;
    if (const json* n = s.find("filter_num")) {
      num = descending_to_ascending(s.number_array("filter_num", *n));
    }
    if (const json* d = s.find("filter_den")) {
      den = descending_to_ascending(s.number_array("filter_den", *d));
    }
    out->gf = TransferFunction(num, den);
    s.number("rz", &out->rz);
    s.number("p0", &out->p0);
  }
}

json dump_rcac(const RcacHyperparams& h) {
  json j;
  j["filter_num"] = ascending_to_descending(h.gf.num);
  j["filter_den"] = ascending_to_descending(h.gf.den);
  j["rz"] = h.rz;
  j["p0"] = h.p0;
  return j;
}

AxisGains parse_axis_gains(const Section& parent, const char* key) {
  Section s(parent.require(key), join(parent.path, key));
  s.allow({"kp1", "kp2", "ki"});
  AxisGains g;
  s.require("kp1");
  s.require("kp2");
  s.require("ki");
  s.number("kp1", &g.kp1);
  s.number("kp2", &g.kp2);
  s.number("ki", &g.ki);
  return g;
}

json dump_axis_gains(const AxisGains& g) {
  return json{{"kp1", g.kp1}, {"kp2", g.kp2}, {"ki", g.ki}};
}

/// Shared layout between a gains file and an inline initial_gains block:
/// outer {r1 r2 r3} + inner {roll pitch yaw}.
GainSet parse_gain_set(const Section& s) {
  GainSet gains{};
  Section outer(s.require("outer"), join(s.path, "outer"));
  outer.allow({"r1", "r2", "r3"});
  gains[kOuterX] = parse_axis_gains(outer, "r1");
  gains[kOuterY] = parse_axis_gains(outer, "r2");
  gains[kOuterZ] = parse_axis_gains(outer, "r3");
  Section inner(s.require("inner"), join(s.path, "inner"));
  inner.allow({"roll", "pitch", "yaw"});
  gains[kInnerRoll] = parse_axis_gains(inner, "roll");
  gains[kInnerPitch] = parse_axis_gains(inner, "pitch");
  gains[kInnerYaw] = parse_axis_gains(inner, "yaw");
  return gains;
}

json dump_gain_set(const GainSet& gains) {
  json j;
  j["outer"]["r1"] = dump_axis_gains(gains[kOuterX]);
  j["outer"]["r2"] = dump_axis_gains(gains[kOuterY]);
  j["outer"]["r3"] = dump_axis_gains(gains[kOuterZ]);
  j["inner"]["roll"] = dump_axis_gains(gains[kInnerRoll]);
  j["inner"]["pitch"] = dump_axis_gains(gains[kInnerPitch]);
  j["inner"]["yaw"] = dump_axis_gains(gains[kInnerYaw]);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string("config: ") + what + " must be finite");
  }
}

}  // namespace

// The p0 presets encode how strongly each loop's gains are anchored at their
// initial value: the accumulated normal matrix starts at (1/p0)*I, so a
// smaller p0 means a stiffer anchor and slower adaptation. The vertical
// channel is anchored two decades harder than the horizontal ones because it
// works against an asymmetric actuator (thrust cannot reverse) and has the
// least room for aggressive early gains.
RcacHyperparams default_outer_xy_rcac() {
  RcacHyperparams h;
  h.gf = TransferFunction({1.0}, {0.5, 1.0});
  h.rz = 1e4;
  h.p0 = 1e-3;
  return h;
}

RcacHyperparams default_outer_z_rcac() {
  RcacHyperparams h;
  h.gf = TransferFunction({1.0}, {4.5, 4.5, 1.0});
  h.rz = 1e4;
  h.p0 = 1e-5;
  return h;
}

RcacHyperparams default_inner_rcac() {
  RcacHyperparams h;
  h.gf = TransferFunction({1.0}, {2.0, 1.0});
  h.rz = 1e4;
  h.p0 = 1e-3;
  return h;
}

bool TargetPerturbations::any_active() const {
  return meas_noise_sigma.maxCoeff() > 0.0 || meas_delay > 0.0 ||
         sensor_rate > 0.0 || actuator_tau > 0.0 || mass_scale != 1.0 ||
         inertia_scale != 1.0;
}

void TargetPerturbations::validate() const {
  if (!meas_noise_sigma.allFinite() || meas_noise_sigma.minCoeff() < 0.0) {
    throw ValidationError("config: target.meas_noise_sigma must be >= 0");
  }
  if (!(meas_delay >= 0.0) || !std::isfinite(meas_delay)) {
    throw ValidationError("config: target.meas_delay must be >= 0");
  }
  if (!(sensor_rate >= 0.0) || !std::isfinite(sensor_rate)) {
    throw ValidationError("config: target.sensor_rate must be >= 0");
  }
  if (!(actuator_tau >= 0.0) || !std::isfinite(actuator_tau)) {
    throw ValidationError("config: target.actuator_tau must be >= 0");
  }
  if (!(mass_scale > 0.0) || !std::isfinite(mass_scale)) {
    throw ValidationError("config: target.mass_scale must be > 0");
  }
  if (!(inertia_scale > 0.0) || !std::isfinite(inertia_scale)) {
    throw ValidationError("config: target.inertia_scale must be > 0");
  }
}

double CommandLimits::tilt_max_rad() const {
  return tilt_max_deg * M_PI / 180.0;
}

void CommandLimits::validate() const {
  if (!(thrust_factor > 0.0) || !std::isfinite(thrust_factor)) {
    throw ValidationError("config: limits.thrust_factor must be > 0");
  }
  if (!(torque_max > 0.0) || !std::isfinite(torque_max)) {
    throw ValidationError("config: limits.torque_max must be > 0");
  }
  if (!(tilt_max_deg > 0.0) || !(tilt_max_deg <= 90.0)) {
    throw ValidationError("config: limits.tilt_max_deg must be in (0, 90]");
  }
  if (!(ev_integral_max >= 0.0) || !std::isfinite(ev_integral_max)) {
    throw ValidationError("config: limits.ev_integral_max must be >= 0");
  }
}

void ScenarioConfig::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw ValidationError("config: duration must be >= 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("config: dt must be > 0");
  }
  if (!(log_rate >= 0.0) || !std::isfinite(log_rate)) {
    throw ValidationError("config: log_rate must be >= 0");
  }
  require_finite(yaw_reference, "yaw_reference");
  vehicle.validate();
  trajectory.validate();
  rcac_outer_xy.validate();
  rcac_outer_z.validate();
  rcac_inner.validate();
  limits.validate();
  target.validate();
  if (environment == EnvironmentKind::kTarget) {
    if (target.meas_delay > 0.0 && dt > target.meas_delay) {
      throw ValidationError("config: dt must not exceed target.meas_delay");
    }
    if (target.sensor_rate > 0.0 && dt > 1.0 / target.sensor_rate) {
      throw ValidationError("config: dt must not exceed 1 / target.sensor_rate");
    }
  }
  for (const AxisGains& g : initial_gains) {
    if (!g.vec().allFinite()) {
      throw ValidationError("config: initial_gains must be finite");
    }
  }
}

ScenarioConfig ScenarioConfig::from_json(const json& j, bool validate_now) {
  ScenarioConfig cfg;
  Section root(j, "");
  root.allow({"mode", "duration", "dt", "seed", "log_rate", "environment",
              "z_up", "yaw_reference", "gravity_feedforward", "trajectory",
              "vehicle", "rcac", "limits", "target", "initial_gains",
              "gains_file", "output_dir"});

  std::string mode_str = "learn";
  root.str("mode", &mode_str);
  if (mode_str == "learn") {
    cfg.mode = RunMode::kLearn;
  } else if (mode_str == "fly") {
    cfg.mode = RunMode::kFly;
  } else {
    fail("mode", "must be \"learn\" or \"fly\"");
  }

  root.number("duration", &cfg.duration);
  root.number("dt", &cfg.dt);
  root.uinteger("seed", &cfg.seed);
  root.number("log_rate", &cfg.log_rate);

  std::string env_str = "source";
  root.str("environment", &env_str);
  if (env_str == "source") {
    cfg.environment = EnvironmentKind::kSource;
  } else if (env_str == "target") {
    cfg.environment = EnvironmentKind::kTarget;
  } else {
    fail("environment", "must be \"source\" or \"target\"");
  }

  root.boolean("z_up", &cfg.z_up);
  root.number("yaw_reference", &cfg.yaw_reference);
  root.boolean("gravity_feedforward", &cfg.gravity_feedforward);
  root.str("output_dir", &cfg.output_dir);

  if (const json* v = root.find("trajectory")) {
    Section s(*v, "trajectory");
    s.allow({"type", "target", "omega", "samples"});
    std::string type_str = "waypoint";
    s.str("type", &type_str);
    if (type_str == "waypoint") {
      cfg.trajectory.type = TrajectoryType::kWaypoint;
    } else if (type_str == "helix") {
      cfg.trajectory.type = TrajectoryType::kHelix;
    } else if (type_str == "custom") {
      cfg.trajectory.type = TrajectoryType::kCustom;
    } else {
      fail("trajectory.type", "must be \"waypoint\", \"helix\" or \"custom\"");
    }
    s.vec3("target", &cfg.trajectory.waypoint);
    s.number("omega", &cfg.trajectory.helix_omega);
    if (const json* samples = s.find("samples")) {
      if (!samples->is_array()) fail("trajectory.samples", "must be an array");
      cfg.trajectory.samples.clear();
      for (const auto& row : *samples) {
        auto a = s.number_array("samples", row);
        if (a.size() != 4) {
          fail("trajectory.samples", "entries must be [t, x, y, z]");
        }
        cfg.trajectory.samples.emplace_back(a[0],
                                            Eigen::Vector3d(a[1], a[2], a[3]));
      }
    }
  }

  if (const json* v = root.find("vehicle")) {
    Section s(*v, "vehicle");
    s.allow({"mass", "inertia", "gravity"});
    s.number("mass", &cfg.vehicle.mass);
    s.number("gravity", &cfg.vehicle.gravity);
    if (const json* inertia = s.find("inertia")) {
      auto a = s.number_array("inertia", *inertia);
      if (a.size() == 3) {
        cfg.vehicle.inertia = Eigen::Vector3d(a[0], a[1], a[2]).asDiagonal();
      } else if (a.size() == 9) {
        cfg.vehicle.inertia =
            Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(
                a.data());
      } else {
        fail("vehicle.inertia", "must have 3 (diagonal) or 9 (row-major) entries");
      }
    }
  }

  if (const json* v = root.find("rcac")) {
    Section s(*v, "rcac");
    s.allow({"outer_xy", "outer_z", "inner"});
    parse_rcac(s, "outer_xy", &cfg.rcac_outer_xy);
    parse_rcac(s, "outer_z", &cfg.rcac_outer_z);
    parse_rcac(s, "inner", &cfg.rcac_inner);
  }

  if (const json* v = root.find("limits")) {
    Section s(*v, "limits");
    s.allow(
        {"thrust_factor", "torque_max", "tilt_max_deg", "ev_integral_max"});
    s.number("thrust_factor", &cfg.limits.thrust_factor);
    s.number("torque_max", &cfg.limits.torque_max);
    s.number("tilt_max_deg", &cfg.limits.tilt_max_deg);
    s.number("ev_integral_max", &cfg.limits.ev_integral_max);
  }

  if (const json* v = root.find("target")) {
    Section s(*v, "target");
    s.allow({"meas_noise_sigma", "meas_delay", "sensor_rate", "actuator_tau",
             "mass_scale", "inertia_scale"});
    s.vec4("meas_noise_sigma", &cfg.target.meas_noise_sigma);
    s.number("meas_delay", &cfg.target.meas_delay);
    s.number("sensor_rate", &cfg.target.sensor_rate);
    s.number("actuator_tau", &cfg.target.actuator_tau);
    s.number("mass_scale", &cfg.target.mass_scale);
    s.number("inertia_scale", &cfg.target.inertia_scale);
  }

  if (const json* v = root.find("initial_gains")) {
    Section s(*v, "initial_gains");
    s.allow({"outer", "inner"});
    cfg.initial_gains = parse_gain_set(s);
    cfg.has_gains = true;
  }

  if (const json* v = root.find("gains_file")) {
    if (!v->is_string()) fail("gains_file", "must be a string");
    GainsDocument doc = GainsDocument::load(v->get<std::string>());
    cfg.initial_gains = doc.gains;
    cfg.has_gains = true;
  }

  if (validate_now) cfg.validate();
  return cfg;
}

json ScenarioConfig::to_json() const {
  json j;
  j["mode"] = mode == RunMode::kLearn ? "learn" : "fly";
  j["duration"] = duration;
  j["dt"] = dt;
  j["seed"] = seed;
  j["log_rate"] = log_rate;
  j["environment"] = environment == EnvironmentKind::kSource ? "source" : "target";
  j["z_up"] = z_up;
  j["yaw_reference"] = yaw_reference;
  j["gravity_feedforward"] = gravity_feedforward;
  j["output_dir"] = output_dir;

  json traj;
  switch (trajectory.type) {
    case TrajectoryType::kWaypoint:
      traj["type"] = "waypoint";
      traj["target"] = {trajectory.waypoint.x(), trajectory.waypoint.y(),
                        trajectory.waypoint.z()};
      break;
    case TrajectoryType::kHelix:
      traj["type"] = "helix";
      traj["omega"] = trajectory.helix_omega;
      break;
    case TrajectoryType::kCustom: {
      traj["type"] = "custom";
      json samples = json::array();
      for (const auto& [t, p] : trajectory.samples) {
        samples.push_back({t, p.x(), p.y(), p.z()});
      }
      traj["samples"] = samples;
      break;
    }
  }
  j["trajectory"] = traj;

  json veh;
  veh["mass"] = vehicle.mass;
  veh["gravity"] = vehicle.gravity;
  if (vehicle.inertia.isDiagonal(0.0)) {
    veh["inertia"] = {vehicle.inertia(0, 0), vehicle.inertia(1, 1),
                      vehicle.inertia(2, 2)};
  } else {
    json full = json::array();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) full.push_back(vehicle.inertia(r, c));
    veh["inertia"] = full;
  }
  j["vehicle"] = veh;

  j["rcac"]["outer_xy"] = dump_rcac(rcac_outer_xy);
  j["rcac"]["outer_z"] = dump_rcac(rcac_outer_z);
  j["rcac"]["inner"] = dump_rcac(rcac_inner);

  j["limits"] = {{"thrust_factor", limits.thrust_factor},
                 {"torque_max", limits.torque_max},
                 {"tilt_max_deg", limits.tilt_max_deg},
                 {"ev_integral_max", limits.ev_integral_max}};

  j["target"] = {
      {"meas_noise_sigma",
       {target.meas_noise_sigma(0), target.meas_noise_sigma(1),
        target.meas_noise_sigma(2), target.meas_noise_sigma(3)}},
      {"meas_delay", target.meas_delay},
      {"sensor_rate", target.sensor_rate},
      {"actuator_tau", target.actuator_tau},
      {"mass_scale", target.mass_scale},
      {"inertia_scale", target.inertia_scale}};

  if (has_gains) j["initial_gains"] = dump_gain_set(initial_gains);
  return j;
}

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return from_json(j);
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  json j = read_json_file(path);
  // Resolve a relative gains_file against the config file's directory.
  if (j.is_object() && j.contains("gains_file") && j["gains_file"].is_string()) {
    std::filesystem::path gains(j["gains_file"].get<std::string>());
    if (gains.is_relative()) {
      gains = std::filesystem::path(path).parent_path() / gains;
      j["gains_file"] = gains.string();
    }
  }
  return from_json(j);
}

void ScenarioConfig::save(const std::string& path) const {
  write_text_file(path, to_json().dump(2) + "\n");
}

std::string ScenarioConfig::canonical_dump() const { return to_json().dump(); }

std::string ScenarioConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_dump())));
  return buf;
}

json GainsDocument::to_json() const {
  json j = dump_gain_set(gains);
  j["format"] = kGainsFormat;
  j["tag"] = tag;
  j["scenario_hash"] = scenario_hash;
  return j;
}

GainsDocument GainsDocument::from_json(const json& j) {
  GainsDocument doc;
  Section root(j, "gains");
  root.allow({"format", "tag", "scenario_hash", "outer", "inner"});
  std::string format = kGainsFormat;
  root.str("format", &format);
  if (format != kGainsFormat) {
    fail("gains.format", std::string("must be \"") + kGainsFormat + "\"");
  }
  root.str("tag", &doc.tag);
  root.str("scenario_hash", &doc.scenario_hash);
  doc.gains = parse_gain_set(root);
  for (const AxisGains& g : doc.gains) {
    if (!g.vec().allFinite()) {
      throw ValidationError("gains: entries must be finite");
    }
  }
  return doc;
}

GainsDocument GainsDocument::load(const std::string& path) {
  return from_json(read_json_file(path));
}

void GainsDocument::save(const std::string& path) const {
  write_text_file(path, to_json().dump(2) + "\n");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rcacsim

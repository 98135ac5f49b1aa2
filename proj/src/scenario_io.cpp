#include "scenario_io.hpp"

#include <cstdint>
#include <fstream>
#include <set>

namespace fieldcbf::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("config field `" + field + "`: " + why);
}

const json& member(const json& doc, const std::string& field) {
  const auto it = doc.find(field);
  if (it == doc.end()) fail(field, "missing");
  return *it;
}

double number(const json& doc, const std::string& field) {
  const json& v = member(doc, field);
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

double number_or(const json& doc, const std::string& field, double fallback) {
  return doc.contains(field) ? number(doc, field) : fallback;
}

int integer(const json& doc, const std::string& field, int fallback) {
  if (!doc.contains(field)) return fallback;
  const json& v = doc.at(field);
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

Vec2<double> point(const json& doc, const std::string& key, const std::string& display) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(display, "missing");
  const json& v = *it;
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(display, "expected [x1, x2]");
  return {v[0].get<double>(), v[1].get<double>()};
}

Vec2<double> point(const json& doc, const std::string& field) { return point(doc, field, field); }

std::string text_or(const json& doc, const std::string& field, const std::string& fallback) {
  if (!doc.contains(field)) return fallback;
  const json& v = doc.at(field);
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

void check_known_keys(const json& doc) {
  static const std::set<std::string> known{
      "name",          "x0",
      "x_goal",        "box",
      "r_quad",        "dt",
      "max_steps",     "alpha1",
      "alpha2",        "kernel",
      "J_limit",       "noise_mode",
      "discretization_points",
      "monitor_points", "phi2_formula",
      "infeasible_policy", "goal_tolerance",
      "initial_exposure", "u_max"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) fail(key, "unknown field");
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::Off: return "off";
    case NoiseMode::Discretized: return "discretized";
    case NoiseMode::Bound: return "bound";
  }
  return "off";
}

std::string to_string(Phi2Formula formula) {
  return formula == Phi2Formula::Recursion ? "recursion" : "paper_multline";
}

std::string to_string(InfeasiblePolicy policy) {
  return policy == InfeasiblePolicy::Halt ? "halt" : "zero_input";
}

Config parse_scenario(const nlohmann::json& doc, const std::string& fallback_name) {
  if (!doc.is_object()) throw ConfigError("config document: expected a JSON object");
  check_known_keys(doc);

  const json& box_doc = member(doc, "box");
  if (!box_doc.is_object()) fail("box", "expected an object {min, max}");
  const Vec2<double> box_min = point(box_doc, "min", "box.min");
  const Vec2<double> box_max = point(box_doc, "max", "box.max");
  if (!(box_min.array() < box_max.array()).all()) fail("box", "min must be strictly below max");

  const json& kernel_doc = member(doc, "kernel");
  if (!kernel_doc.is_object()) fail("kernel", "expected an object {A, sigma}");
  const double A = number(kernel_doc, "A");
  const double sigma = number(kernel_doc, "sigma");
  if (!(A > 0)) fail("kernel.A", "must be > 0");
  if (!(sigma > 0)) fail("kernel.sigma", "must be > 0");

  if (!doc.contains("noise_mode")) fail("noise_mode", "missing");
  const std::string mode_text = text_or(doc, "noise_mode", "");
  NoiseMode mode;
  if (mode_text == "off") mode = NoiseMode::Off;
  else if (mode_text == "discretized") mode = NoiseMode::Discretized;
  else if (mode_text == "bound") mode = NoiseMode::Bound;
  else fail("noise_mode", "expected one of off | discretized | bound");

  const std::string formula_text = text_or(doc, "phi2_formula", "recursion");
  Phi2Formula formula;
  if (formula_text == "recursion") formula = Phi2Formula::Recursion;
  else if (formula_text == "paper_multline") formula = Phi2Formula::DropDamping;
  else fail("phi2_formula", "expected one of recursion | paper_multline");

  const std::string policy_text = text_or(doc, "infeasible_policy", "halt");
  InfeasiblePolicy policy;
  if (policy_text == "halt") policy = InfeasiblePolicy::Halt;
  else if (policy_text == "zero_input") policy = InfeasiblePolicy::ZeroInput;
  else fail("infeasible_policy", "expected one of halt | zero_input");

  std::optional<double> u_max;
  if (doc.contains("u_max") && !doc.at("u_max").is_null()) {
    if (!doc.at("u_max").is_number()) fail("u_max", "expected a number or null");
    u_max = doc.at("u_max").get<double>();
  }

  Config cfg{
      .name = text_or(doc, "name", fallback_name),
      .x0 = point(doc, "x0"),
      .x_goal = point(doc, "x_goal"),
      .box = BoxObstacle<double>{box_min, box_max},
      .r_quad = number(doc, "r_quad"),
      .dt = number(doc, "dt"),
      .max_steps = integer(doc, "max_steps", 500),
      .alpha1 = number(doc, "alpha1"),
      .alpha2 = number(doc, "alpha2"),
      .kernel = KernelParams<double>{A, sigma},
      .J_limit = number(doc, "J_limit"),
      .noise_mode = mode,
      .discretization_points = integer(doc, "discretization_points", 8),
      .monitor_points = integer(doc, "monitor_points", 100),
      .phi2_formula = formula,
      .infeasible_policy = policy,
      .goal_tolerance = number_or(doc, "goal_tolerance", 0.05),
      .initial_exposure = number_or(doc, "initial_exposure", 0.0),
      .u_max = u_max,
  };
  if (mode == NoiseMode::Discretized && !doc.contains("discretization_points"))
    fail("discretization_points", "required when noise_mode is discretized");

  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config field `") + e.what() + "`");
  }
  return cfg;
}

Config load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.stem().string());
}

nlohmann::json canonical_json(const Config& cfg) {
  nlohmann::json doc;
  doc["name"] = cfg.name;
  doc["x0"] = {cfg.x0.x(), cfg.x0.y()};
  doc["x_goal"] = {cfg.x_goal.x(), cfg.x_goal.y()};
  doc["box"] = {{"min", {cfg.box.min_corner.x(), cfg.box.min_corner.y()}},
                {"max", {cfg.box.max_corner.x(), cfg.box.max_corner.y()}}};
  doc["r_quad"] = cfg.r_quad;
  doc["dt"] = cfg.dt;
  doc["max_steps"] = cfg.max_steps;
  doc["alpha1"] = cfg.alpha1;
  doc["alpha2"] = cfg.alpha2;
  doc["kernel"] = {{"A", cfg.kernel.A}, {"sigma", cfg.kernel.sigma}};
  doc["J_limit"] = cfg.J_limit;
  doc["noise_mode"] = to_string(cfg.noise_mode);
  doc["discretization_points"] = cfg.discretization_points;
  doc["monitor_points"] = cfg.monitor_points;
  doc["phi2_formula"] = to_string(cfg.phi2_formula);
  doc["infeasible_policy"] = to_string(cfg.infeasible_policy);
  doc["goal_tolerance"] = cfg.goal_tolerance;
  doc["initial_exposure"] = cfg.initial_exposure;
  if (cfg.u_max) doc["u_max"] = *cfg.u_max;
  else doc["u_max"] = nullptr;
  return doc;
}

std::string config_hash(const Config& cfg) {
  const std::uint64_t h = fnv1a64(canonical_json(cfg).dump());
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fieldcbf::io

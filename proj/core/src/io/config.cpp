#include "dogsplat/io/config.hpp"

#include "dogsplat/errors.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dogsplat {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw TypeError("'" + key + "' expects an integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) throw TypeError("'" + key + "' expects a number, got '" + v + "'");
  return out;
}

struct Field {
  std::string type;
  std::function<void(TrainConfig&, const std::string&)> set;
  std::function<std::string(const TrainConfig&)> get;
};

template <typename T>
Field int_field(T TrainConfig::*member) {
  return {"int", [member](TrainConfig& c, const std::string& v) { c.*member = parse_int<T>("", v); },
          [member](const TrainConfig& c) { return std::to_string(c.*member); }};
}

Field real_field(double TrainConfig::*member) {
  return {"real", [member](TrainConfig& c, const std::string& v) { c.*member = parse_double("", v); },
          [member](const TrainConfig& c) { return real_text(c.*member); }};
}

Field rate_field(double LearningRates::*member) {
  return {"real", [member](TrainConfig& c, const std::string& v) { c.rates.*member = parse_double("", v); },
          [member](const TrainConfig& c) { return real_text(c.rates.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"total_iters", int_field(&TrainConfig::total_iters)},
      {"prune_start_iter", int_field(&TrainConfig::prune_start_iter)},
      {"check_period", int_field(&TrainConfig::check_period)},
      {"iter_max", int_field(&TrainConfig::iter_max)},
      {"beta", real_field(&TrainConfig::beta)},
      {"prune_phase_max_iters", int_field(&TrainConfig::prune_phase_max_iters)},
      {"prune_target_ratio", real_field(&TrainConfig::prune_target_ratio)},
      {"n_target", int_field(&TrainConfig::n_target)},
      {"min_prune_count", real_field(&TrainConfig::min_prune_count)},
      {"uniform_rounds", int_field(&TrainConfig::uniform_rounds)},
      {"lambda_dssim", real_field(&TrainConfig::lambda_dssim)},
      {"lr_position_init", rate_field(&LearningRates::position_init)},
      {"lr_position_final", rate_field(&LearningRates::position_final)},
      {"lr_position_decay_steps",
       {"int",
        [](TrainConfig& c, const std::string& v) { c.rates.position_decay_steps = parse_int<int>("", v); },
        [](const TrainConfig& c) { return std::to_string(c.rates.position_decay_steps); }}},
      {"spatial_scale", rate_field(&LearningRates::spatial_scale)},
      {"lr_opacity", rate_field(&LearningRates::opacity)},
      {"lr_scale", rate_field(&LearningRates::scale)},
      {"lr_rotation", rate_field(&LearningRates::rotation)},
      {"lr_color", rate_field(&LearningRates::color)},
      {"lr_color_rest", rate_field(&LearningRates::color_rest)},
      {"lr_dog", rate_field(&LearningRates::dog)},
      {"lambda_s", real_field(&TrainConfig::lambda_s)},
      {"lambda_f", real_field(&TrainConfig::lambda_f)},
      {"gamma_f", real_field(&TrainConfig::gamma_f)},
      {"prune_ranking",
       {"auto|opacity|sps|random",
        [](TrainConfig& c, const std::string& v) { c.prune_ranking = parse_prune_ranking(v); },
        [](const TrainConfig& c) { return std::string(prune_ranking_name(c.prune_ranking)); }}},
      {"f_s_max", real_field(&TrainConfig::f_s_max)},
      {"dog_f_init", real_field(&TrainConfig::dog_f_init)},
      {"dog_falpha_init", real_field(&TrainConfig::dog_falpha_init)},
      {"degrade_threshold", real_field(&TrainConfig::degrade_threshold)},
      {"degrade_rule",
       {"alpha_factor|pseudo_opacity",
        [](TrainConfig& c, const std::string& v) {
          if (v == "alpha_factor") c.degrade_rule = DegradeRule::AlphaFactor;
          else if (v == "pseudo_opacity") c.degrade_rule = DegradeRule::PseudoOpacity;
          else throw RangeError("degrade_rule must be alpha_factor or pseudo_opacity, got '" + v + "'");
        },
        [](const TrainConfig& c) {
          return std::string(c.degrade_rule == DegradeRule::AlphaFactor ? "alpha_factor" : "pseudo_opacity");
        }}},
      {"recovery_iters", int_field(&TrainConfig::recovery_iters)},
      {"variant",
       {"v1|v2|v3|full", [](TrainConfig& c, const std::string& v) { c.variant = parse_variant(v); },
        [](const TrainConfig& c) { return std::string(variant_name(c.variant)); }}},
      {"seed", int_field(&TrainConfig::seed)},
      {"sh_degree", int_field(&TrainConfig::sh_degree)},
      {"background", real_field(&TrainConfig::background)},
      {"threads", int_field(&TrainConfig::threads)},
      {"init_count", int_field(&TrainConfig::init_count)},
      {"init_extent", real_field(&TrainConfig::init_extent)},
      {"init_scale", real_field(&TrainConfig::init_scale)},
      {"init_opacity", real_field(&TrainConfig::init_opacity)},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, f] : fields())
    if (name == key) return &f;
  return nullptr;
}

}  // namespace

TrainConfig parse_config(const std::string& text) {
  TrainConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'", lineno);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const Field* f = find_field(key);
    if (!f) throw UnknownKey("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw ParseError("line " + std::to_string(lineno) + ": key '" + key + "' repeated", lineno);
    try {
      f->set(config, value);
    } catch (const TypeError&) {
      throw TypeError("line " + std::to_string(lineno) + ": '" + key + "' expects " +
                      (f->type == "int" ? "an integer" : f->type == "real" ? "a number" : f->type) + ", got '" +
                      value + "'");
    }
  }
  config.validate();
  return config;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

std::string format_config(const TrainConfig& config) {
  std::string out;
  for (const auto& [name, f] : fields()) out += name + " = " + f.get(config) + "\n";
  return out;
}

std::vector<ConfigKey> config_keys() {
  const TrainConfig defaults;
  std::vector<ConfigKey> out;
  for (const auto& [name, f] : fields()) out.push_back({name, f.type, f.get(defaults)});
  return out;
}

}  // namespace dogsplat

// Copyright 2026 The rshac Authors
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

#include "rshac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace rshac {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw std::invalid_argument("expected a finite number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + std::string(v) + "'");
}

double unit_open(std::string_view v) {
  const double x = to_double(v);
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("value must lie in (0,1)");
  return x;
}

double positive(std::string_view v) {
  const double x = to_double(v);
  if (!(x > 0.0)) throw std::invalid_argument("value must be > 0");
  return x;
}

double non_negative(std::string_view v) {
  const double x = to_double(v);
  if (!(x >= 0.0)) throw std::invalid_argument("value must be >= 0");
  return x;
}

int odd_count(std::string_view v) {
  const int n = to_int(v);
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("label count must be odd and >= 1");
  return n;
}

// Semantic maps are immutable, so their raw parameters are collected here and
// the maps rebuilt once all keys are read.
struct MapDraft {
  double x_lo = -0.43, x_hi = 0.43;
  double xdot_lo = -2.0, xdot_hi = 2.0;
  double a_q = 8.0, c_q = 0.0;
  double a_qdot = 0.45, c_qdot = 0.0;
};

using Setter = std::function<void(RunConfig&, MapDraft&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;

    t["plant.m"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.plant.m = positive(v); };
    t["plant.L"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.plant.L = positive(v); };
    t["plant.I"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.plant.I = positive(v); };
    t["plant.g"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.plant.g = positive(v); };
    t["plant.k"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.plant.k = non_negative(v);
    };
    t["plant.ts"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.plant.ts = positive(v);
    };

    t["rshac.x_min"] = [](RunConfig&, MapDraft& d, std::string_view v) { d.x_lo = to_double(v); };
    t["rshac.x_max"] = [](RunConfig&, MapDraft& d, std::string_view v) { d.x_hi = to_double(v); };
    t["rshac.xdot_min"] = [](RunConfig&, MapDraft& d, std::string_view v) {
      d.xdot_lo = to_double(v);
    };
    t["rshac.xdot_max"] = [](RunConfig&, MapDraft& d, std::string_view v) {
      d.xdot_hi = to_double(v);
    };
    t["rshac.a_q"] = [](RunConfig&, MapDraft& d, std::string_view v) { d.a_q = positive(v); };
    t["rshac.c_q"] = [](RunConfig&, MapDraft& d, std::string_view v) { d.c_q = to_double(v); };
    t["rshac.a_qdot"] = [](RunConfig&, MapDraft& d, std::string_view v) {
      d.a_qdot = positive(v);
    };
    t["rshac.c_qdot"] = [](RunConfig&, MapDraft& d, std::string_view v) {
      d.c_qdot = to_double(v);
    };

    const std::pair<const char*, StateIndex> channels[] = {
        {"x", kX}, {"xdot", kXDot}, {"q", kQ}, {"qdot", kQDot}};
    for (const auto& [name, idx] : channels) {
      const std::string n = name;
      const StateIndex i = idx;
      t["rshac.n_" + n] = [i](RunConfig& c, MapDraft&, std::string_view v) {
        const int count = odd_count(v);
        c.rshac.channels[i].state.n_labels = count;
        c.rshac.channels[i].control.n_labels = count;
      };
      t["rshac.alpha_" + n] = [i](RunConfig& c, MapDraft&, std::string_view v) {
        c.rshac.channels[i].state.alpha = unit_open(v);
      };
      t["rshac.alpha_u_" + n] = [i](RunConfig& c, MapDraft&, std::string_view v) {
        c.rshac.channels[i].control.alpha = unit_open(v);
      };
      t["rshac.theta_" + n] = [i](RunConfig& c, MapDraft&, std::string_view v) {
        c.rshac.channels[i].state.theta = unit_open(v);
      };
      t["rshac.theta_u_" + n] = [i](RunConfig& c, MapDraft&, std::string_view v) {
        c.rshac.channels[i].control.theta = unit_open(v);
      };
    }
    t["rshac.u_min"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.rshac.u_min = to_double(v);
    };
    t["rshac.u_max"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.rshac.u_max = to_double(v);
    };
    t["rshac.l1"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.rshac.l1 = positive(v); };
    t["rshac.l2"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.rshac.l2 = positive(v); };
    t["rshac.anchor_constants"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.rshac.anchor_constants = to_bool(v);
    };

    t["fuzzy.out_negative"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.fuzzy.singletons[0] = to_double(v);
    };
    t["fuzzy.out_zero"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.fuzzy.singletons[1] = to_double(v);
    };
    t["fuzzy.out_positive"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.fuzzy.singletons[2] = to_double(v);
    };

    const std::pair<const char*, int> lqr_entries[] = {
        {"x", 0}, {"xdot", 1}, {"q", 2}, {"qdot", 3}};
    for (const auto& [name, idx] : lqr_entries) {
      const int i = idx;
      t[std::string("lqr.q_") + name] = [i](RunConfig& c, MapDraft&, std::string_view v) {
        c.lqr.Q(i, i) = non_negative(v);
      };
      t[std::string("lqr.k_") + name] = [i](RunConfig& c, MapDraft&, std::string_view v) {
        c.lqr.published_gain(i) = to_double(v);
      };
    }
    t["lqr.r"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.lqr.R = positive(v); };
    t["lqr.gain_source"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      if (v == "published") {
        c.lqr.source = GainSource::kPublished;
      } else if (v == "dare") {
        c.lqr.source = GainSource::kDare;
      } else {
        throw std::invalid_argument("expected 'published' or 'dare'");
      }
    };
    t["lqr.u_min"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.lqr.u_min = to_double(v);
    };
    t["lqr.u_max"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.lqr.u_max = to_double(v);
    };

    t["harness.experiment"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.experiment = parse_experiment(v);
    };
    t["harness.controllers"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.controllers = parse_controller_list(v);
    };
    t["harness.out"] = [](RunConfig& c, MapDraft&, std::string_view v) { c.out_dir = v; };
    t["harness.integrator"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.integrator = parse_integrator(v);
    };
    t["harness.dwell"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.dwell = non_negative(v);
    };
    t["harness.duration"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.duration = positive(v);
    };
    t["harness.parallel"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.parallel = to_bool(v);
    };
    t["harness.x0"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.custom.x0(kX) = to_double(v);
    };
    t["harness.xdot0"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.custom.x0(kXDot) = to_double(v);
    };
    t["harness.q0_deg"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.custom.x0(kQ) = to_double(v) * std::numbers::pi / 180.0;
    };
    t["harness.qdot0_deg"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.custom.x0(kQDot) = to_double(v) * std::numbers::pi / 180.0;
    };
    t["harness.x_ref"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.custom.x_ref = to_double(v);
    };
    t["harness.step_time"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.custom.step_time = non_negative(v);
    };
    t["harness.step_ref"] = [](RunConfig& c, MapDraft&, std::string_view v) {
      c.custom.step_ref = to_double(v);
    };
    return t;
  }();
  return table;
}

template <typename Fn>
void validate_section(const char* section, const std::map<std::string, int>& lines, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    // Point at the last line that touched the section, if any.
    int line = 0;
    std::string key = section;
    const std::string prefix = std::string(section) + ".";
    for (const auto& [k, l] : lines) {
      if (k.rfind(prefix, 0) == 0 && l > line) {
        line = l;
        key = k;
      }
    }
    throw ConfigError(line, key, e.what());
  }
}

}  // namespace

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         key + ": " + message),
      line_(line),
      key_(std::move(key)) {}

HarnessOptions RunConfig::harness_options() const {
  HarnessOptions options;
  options.integrator = integrator;
  options.dwell = dwell;
  options.duration = duration;
  options.controllers = controllers;
  options.parallel = parallel;
  return options;
}

ExperimentSelector parse_experiment(std::string_view name) {
  if (name == "exp1") return ExperimentSelector::kExp1;
  if (name == "exp2") return ExperimentSelector::kExp2;
  if (name == "all") return ExperimentSelector::kAll;
  if (name == "custom") return ExperimentSelector::kCustom;
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

Integrator parse_integrator(std::string_view name) {
  if (name == "rk4") return Integrator::kRk4;
  if (name == "euler") return Integrator::kEuler;
  throw std::invalid_argument("unknown integrator '" + std::string(name) + "'");
}

std::vector<ControllerKind> parse_controller_list(std::string_view text) {
  text = trim(text);
  if (text == "all") {
    return {ControllerKind::kRsHac, ControllerKind::kFuzzy, ControllerKind::kLqr};
  }
  std::vector<ControllerKind> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const ControllerKind kind = parse_controller(trim(text.substr(0, comma)));
    if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty controller list");
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  MapDraft draft;
  std::map<std::string, int> seen;
  std::string section;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, std::string(line), "unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, std::string(line), "expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos && !section.empty()) key = section + "." + key;

    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line_no, key, "unknown key");
    if (!seen.emplace(key, line_no).second) {
      throw ConfigError(line_no, key,
                        "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    }
    if (value.empty()) throw ConfigError(line_no, key, "missing value");
    try {
      it->second(cfg, draft, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, key, e.what());
    }
  }

  validate_section("plant", seen, [&] { cfg.plant.validate(); });
  validate_section("rshac", seen, [&] {
    cfg.rshac.channels[kX].map = Map::linear(draft.x_lo, draft.x_hi);
    cfg.rshac.channels[kXDot].map = Map::linear(draft.xdot_lo, draft.xdot_hi);
    cfg.rshac.channels[kQ].map = Map::sigmoid(draft.a_q, draft.c_q);
    cfg.rshac.channels[kQDot].map = Map::sigmoid(draft.a_qdot, draft.c_qdot);
    cfg.rshac.validate();
  });
  validate_section("fuzzy", seen, [&] {
    cfg.fuzzy.pipeline = cfg.rshac;
    cfg.fuzzy.validate();
  });
  validate_section("lqr", seen, [&] { cfg.lqr.validate(); });
  validate_section("harness", seen, [&] {
    if (cfg.custom.step_time && !(*cfg.custom.step_time < cfg.duration)) {
      throw std::invalid_argument("step_time must be < duration");
    }
  });
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, path.string(), "cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rshac

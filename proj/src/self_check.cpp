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

#include "rshac/self_check.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rshac/hedge.hpp"
#include "rshac/riccati.hpp"

namespace rshac {
namespace {

using Rng = std::mt19937_64;

double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

CheckResult check_sqsm(Rng& rng) {
  std::uniform_int_distribution<int> half(0, 10);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 * half(rng) + 1;
    const double theta = unit(rng);
    const double alpha = unit(rng);
    const Frame f = generate_sqsm(n, theta, alpha);
    const int median = msi(n);
    for (int i = 1; i <= n; ++i) {
      const double v = f.values()[i - 1];
      const double closed = i < median   ? theta * (1 - std::pow(alpha, i))
                            : i > median ? theta * (1 + std::pow(alpha, n + 1 - i))
                                         : theta;
      if (relative_error(v, closed) > 1e-12 || !(v > 0.0 && v < 2 * theta) ||
          (i > 1 && !(v > f.values()[i - 2])) ||
          std::abs(v + f.values()[n - i] - 2 * theta) > 1e-12) {
        std::ostringstream os;
        os << "n=" << n << " theta=" << theta << " alpha=" << alpha << " label " << i;
        return {"sqsm invariants", false, os.str()};
      }
    }
  }
  const auto reference = sqm_size_reference(0.5, 0.5);
  if (std::abs(reference[3] - generate_sqsm(7, 0.5, 0.5).value(3)) > 1e-12) {
    return {"sqsm invariants", false, "neutral label disagrees with the size reference"};
  }
  return {"sqsm invariants", true, "500 random frames"};
}

CheckResult check_sigmoid(const RunConfig& cfg) {
  for (int ch : {kQ, kQDot}) {
    const Map& map = cfg.rshac.channels[ch].map;
    if (semantize(map, map.center()) != 0.5) return {"sigmoid properties", false, "center"};
    double prev = -1.0;
    for (int k = 0; k < 100; ++k) {
      const double x = map.center() + (-5.0 + 10.0 * k / 99.0) / map.slope();
      const double s = semantize(map, x);
      if (!(s > prev)) return {"sigmoid properties", false, "not increasing"};
      prev = s;
      const double h = 1e-6 / map.slope();
      const double fd = (semantize(map, x + h) - semantize(map, x - h)) / (2 * h);
      if (relative_error(fd, map.slope() * s * (1 - s)) > 1e-6) {
        return {"sigmoid properties", false, "derivative"};
      }
    }
    if (!(semantize(map, 1e6) > 1 - 1e-12 && semantize(map, -1e6) < 1e-12)) {
      return {"sigmoid properties", false, "limits"};
    }
  }
  return {"sigmoid properties", true, ""};
}

CheckResult check_round_trips(const RunConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const ChannelSpec& ch : cfg.rshac.channels) {
    for (int k = 0; k < 200; ++k) {
      double x;
      if (ch.map.is_linear()) {
        x = ch.map.crisp_lo() + (ch.map.crisp_hi() - ch.map.crisp_lo()) * (0.01 + 0.98 * unit(rng));
      } else {
        x = ch.map.center() + (unit(rng) - 0.5) * 20.0 / ch.map.slope();
      }
      const double back = desemantize(ch.map, semantize(ch.map, x));
      if (std::abs(back - x) > 1e-9 * std::max(std::abs(x), 1.0)) {
        return {"semantic round trips", false, "x=" + std::to_string(x)};
      }
    }
  }
  return {"semantic round trips", true, ""};
}

CheckResult check_sirm(const RunConfig& cfg) {
  for (int k = 0; k <= 1000; ++k) {
    const double xs = k / 1000.0;
    if (std::abs(sirm_infer(xs, cfg.fuzzy) - xs) > 1e-12) {
      return {"sirm identity", false, "xs=" + std::to_string(xs)};
    }
  }
  return {"sirm identity", true, ""};
}

CheckResult check_weight_sum(const RunConfig& cfg) {
  for (int k = 0; k <= 2000; ++k) {
    const double q = -2.0 + 4.0 * k / 2000.0;
    const ChannelVector w = adaptive_weights(q, cfg.rshac.l1, cfg.rshac.l2);
    if (std::abs(w.sum() - 1.0) > 1e-12 || (w.array() < 0.0).any()) {
      return {"adaptive weights sum to one", false, "q=" + std::to_string(q)};
    }
  }
  return {"adaptive weights sum to one", true, ""};
}

CheckResult check_weight_continuity(const RunConfig& cfg) {
  const double l1 = cfg.rshac.l1;
  const double l2 = cfg.rshac.l2;
  std::ostringstream os;
  bool ok = true;
  for (double edge : {l1, l2}) {
    const ChannelVector lo = adaptive_weights(std::nextafter(edge, 0.0), l1, l2);
    const ChannelVector hi = adaptive_weights(std::nextafter(edge, 10.0), l1, l2);
    const double jump = (lo - hi).cwiseAbs().maxCoeff();
    if (jump > 1e-12) {
      if (!ok) os << "; ";
      ok = false;
      os << "jump " << jump << " at |q|=" << edge;
    }
  }
  return {"adaptive weights continuity", ok, os.str()};
}

CheckResult check_linearization(const RunConfig& cfg) {
  const Model lin = linearize(cfg.plant);
  const double h = 1e-6;
  for (int j = 0; j < 5; ++j) {
    PlantState dp = PlantState::Zero();
    double up = 0.0;
    if (j < 4) dp(j) = h; else up = h;
    const PlantState fd =
        (nonlinear_derivative<double>(dp, up, cfg.plant) -
         nonlinear_derivative<double>(-dp, -up, cfg.plant)) / (2 * h);
    const PlantState want = j < 4 ? PlantState(lin.A.col(j)) : PlantState(lin.B);
    if ((fd - want).cwiseAbs().maxCoeff() > 1e-6) {
      return {"linearization", false, "column " + std::to_string(j)};
    }
  }
  return {"linearization", true, ""};
}

CheckResult check_lqr(const RunConfig& cfg) {
  const Model d = discretize(linearize(cfg.plant), cfg.plant.ts);
  const LqrDesign design = lqr_gain(cfg.lqr, d);
  const LqrController used(cfg.lqr, cfg.plant);
  const double rho = closed_loop_pole_magnitudes(d, used.gain())(0);
  std::ostringstream os;
  os << "residual " << design.residual << ", spectral radius " << rho;
  return {"riccati residual and closed-loop stability", design.residual < 1e-8 && rho < 1.0,
          os.str()};
}

CheckResult check_odd_symmetry(const ControllerSuite& suite, Rng& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (ControllerKind kind : {ControllerKind::kRsHac, ControllerKind::kFuzzy, ControllerKind::kLqr}) {
    for (int k = 0; k < 1000; ++k) {
      const PlantState s(0.6 * dist(rng), 3.0 * dist(rng), 1.2 * dist(rng), 8.0 * dist(rng));
      if (suite.control(kind, -s, 0.0).u != -suite.control(kind, s, 0.0).u) {
        return {"controller odd symmetry", false, std::string(controller_name(kind))};
      }
    }
  }
  return {"controller odd symmetry", true, ""};
}

bool same_trajectory(const Trajectory& a, const Trajectory& b, double sign) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a.states[k] == sign * b.states[k]) || a.u[k] != sign * b.u[k]) return false;
  }
  return true;
}

CheckResult check_episodes(const RunConfig& cfg, const ControllerSuite& suite) {
  for (ControllerKind kind : {ControllerKind::kRsHac, ControllerKind::kFuzzy, ControllerKind::kLqr}) {
    EpisodeSpec spec;
    spec.controller = kind;
    spec.duration = cfg.duration;
    spec.ts = cfg.plant.ts;
    spec.integrator = cfg.integrator;
    spec.x0 = make_state(0, 0, 20.0 * std::numbers::pi / 180.0, 0);
    const Trajectory plus = run_episode(spec, suite, cfg.plant);
    const Trajectory again = run_episode(spec, suite, cfg.plant);
    spec.x0 = -spec.x0;
    const Trajectory minus = run_episode(spec, suite, cfg.plant);
    spec.x0 = PlantState::Zero();
    const Trajectory rest = run_episode(spec, suite, cfg.plant);
    const std::string name(controller_name(kind));
    if (!same_trajectory(plus, again, 1.0)) return {"episode checks", false, name + " determinism"};
    if (!same_trajectory(plus, minus, -1.0)) return {"episode checks", false, name + " mirror"};
    for (std::size_t k = 0; k < rest.size(); ++k) {
      if (!(rest.states[k].array() == 0.0).all() || rest.u[k] != 0.0) {
        return {"episode checks", false, name + " fixed point"};
      }
    }
  }
  return {"episode checks", true, "determinism, mirror symmetry, fixed point"};
}

}  // namespace

std::vector<CheckResult> run_self_checks(const RunConfig& cfg) {
  Rng rng(20240917);
  std::vector<CheckResult> out;
  const auto guarded = [&](const char* name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  guarded("sqsm invariants", [&] { return check_sqsm(rng); });
  guarded("sigmoid properties", [&] { return check_sigmoid(cfg); });
  guarded("semantic round trips", [&] { return check_round_trips(cfg, rng); });
  guarded("sirm identity", [&] { return check_sirm(cfg); });
  guarded("adaptive weights sum to one", [&] { return check_weight_sum(cfg); });
  guarded("adaptive weights continuity", [&] { return check_weight_continuity(cfg); });
  guarded("linearization", [&] { return check_linearization(cfg); });
  guarded("riccati residual and closed-loop stability", [&] { return check_lqr(cfg); });
  guarded("controller odd symmetry", [&] {
    const ControllerSuite suite(cfg.rshac, cfg.fuzzy, cfg.lqr, cfg.plant);
    return check_odd_symmetry(suite, rng);
  });
  guarded("episode checks", [&] {
    const ControllerSuite suite(cfg.rshac, cfg.fuzzy, cfg.lqr, cfg.plant);
    return check_episodes(cfg, suite);
  });
  return out;
}

}  // namespace rshac

// Copyright 2026 The dropf Authors
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

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dropf/common.hpp"

namespace dropf {

/// Network bus. Angles are radians, powers MW, penalties $/MW.
struct Bus {
    std::string id;
    double theta_min = 0.0;
    double theta_max = 0.0;
    double shed_penalty = 0.0;    // price of unserved load q+
    double curtail_penalty = 0.0; // price of spilled renewable output q-
    std::vector<double> demand;   // one entry per period, length = horizon
};

/// Thermal generator with a convex quadratic fuel cost a*x^2 + b*x + c.
struct Generator {
    std::string id;
    std::string bus;
    double p_min = 0.0;
    double p_max = 0.0;
    double ramp_up = 0.0;
    double ramp_down = 0.0;
    double cost_quad = 0.0;  // $/MW^2
    double cost_lin = 0.0;   // $/MW
    double cost_const = 0.0; // $
};

/// Transmission line, DC model: flow = (theta_from - theta_to) / reactance.
struct Line {
    std::string from_bus;
    std::string to_bus;
    double reactance = 0.0; // per unit, > 0
    double capacity = 0.0;  // MW, flow bounded in [-capacity, capacity]
};

/// Per-bus sampling statistics for the renewable output model.
struct RenewableStat {
    std::string bus;
    double mean = 0.0;
    double std_dev = 0.0;
};

/// Static description of the system over a horizon of hourly periods.
/// Immutable by convention after load_case; safe to share across threads.
struct GridCase {
    std::vector<Bus> buses;
    std::vector<Generator> generators;
    std::vector<Line> lines;
    std::string reference_bus;
    int horizon = 0;

    // Optional sections.
    std::vector<RenewableStat> renewables;
    std::vector<std::pair<std::string, double>> initial_dispatch; // overrides the 0 MW cold start
};

/// One broken invariant: which entity and which rule.
struct Violation {
    std::string entity;
    std::string rule;
};

/// Case-derived lookup tables used by the model builders.
class CaseIndex {
  public:
    explicit CaseIndex(const GridCase& c);

    int bus(const std::string& id) const; // -1 when unknown
    int num_buses() const { return num_buses_; }

    // line k runs from_idx[k] -> to_idx[k]
    std::vector<int> line_from;
    std::vector<int> line_to;
    std::vector<int> gen_bus;                   // per generator, bus index
    std::vector<std::vector<int>> gens_per_bus; // per bus, generator indices
    std::vector<double> renewable_mean;         // per bus (0 where absent)
    std::vector<double> renewable_std;
    std::vector<double> x0; // starting dispatch per generator (initial_dispatch or 0)
    int reference = -1;

  private:
    std::unordered_map<std::string, int> bus_idx_;
    int num_buses_ = 0;
};

/// Parses the structured-text case format. Throws ParseError on malformed
/// input and ValidationError when a structural invariant fails (the message
/// names the entity and the rule).
GridCase load_case(const std::string& path);

/// Same as load_case but from an in-memory string; origin is used in errors.
GridCase parse_case(const std::string& text, const std::string& origin = "<string>");

/// Canonical serialization; load(save(c)) preserves every field bit-exactly.
std::string save_case(const GridCase& c);

/// All broken invariants, empty iff the case is well formed. Total function.
std::vector<Violation> validate_case(const GridCase& c);

} // namespace dropf

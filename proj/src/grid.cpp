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

#include "dropf/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

namespace dropf {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const std::string& origin, int line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(origin, line, "expected a number, got '" + tok + "'");
    return v;
}

std::vector<double> parse_csv(const std::string& tok, const std::string& origin, int line) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= tok.size()) {
        size_t comma = tok.find(',', pos);
        std::string piece = tok.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(parse_double(piece, origin, line));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// Shortest text that round-trips the double exactly.
std::string num(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace

GridCase parse_case(const std::string& text, const std::string& origin) {
    GridCase c;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    bool have_horizon = false;

    while (std::getline(is, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto toks = split_ws(raw);
        if (toks.empty()) continue;

        if (toks[0].front() == '[') {
            if (toks.size() != 1 || toks[0].back() != ']')
                throw ParseError(origin, lineno, "malformed section header");
            section = toks[0].substr(1, toks[0].size() - 2);
            continue;
        }

        if (section == "meta") {
            if (toks.size() != 2) throw ParseError(origin, lineno, "meta entries are 'key value'");
            if (toks[0] == "horizon") {
                c.horizon = static_cast<int>(parse_double(toks[1], origin, lineno));
                have_horizon = true;
            } else if (toks[0] == "reference_bus") {
                c.reference_bus = toks[1];
            } else {
                throw ParseError(origin, lineno, "unknown meta key '" + toks[0] + "'");
            }
        } else if (section == "buses") {
            // id theta_min theta_max shed_penalty curtail_penalty demand_csv
            if (toks.size() != 6) throw ParseError(origin, lineno, "bus rows have 6 fields");
            Bus b;
            b.id = toks[0];
            b.theta_min = parse_double(toks[1], origin, lineno);
            b.theta_max = parse_double(toks[2], origin, lineno);
            b.shed_penalty = parse_double(toks[3], origin, lineno);
            b.curtail_penalty = parse_double(toks[4], origin, lineno);
            b.demand = parse_csv(toks[5], origin, lineno);
            c.buses.push_back(std::move(b));
        } else if (section == "generators") {
            // id bus p_min p_max ramp_up ramp_down cost_quad cost_lin cost_const
            if (toks.size() != 9) throw ParseError(origin, lineno, "generator rows have 9 fields");
            Generator g;
            g.id = toks[0];
            g.bus = toks[1];
            g.p_min = parse_double(toks[2], origin, lineno);
            g.p_max = parse_double(toks[3], origin, lineno);
            g.ramp_up = parse_double(toks[4], origin, lineno);
            g.ramp_down = parse_double(toks[5], origin, lineno);
            g.cost_quad = parse_double(toks[6], origin, lineno);
            g.cost_lin = parse_double(toks[7], origin, lineno);
            g.cost_const = parse_double(toks[8], origin, lineno);
            c.generators.push_back(std::move(g));
        } else if (section == "lines") {
            // from to reactance capacity
            if (toks.size() != 4) throw ParseError(origin, lineno, "line rows have 4 fields");
            Line l;
            l.from_bus = toks[0];
            l.to_bus = toks[1];
            l.reactance = parse_double(toks[2], origin, lineno);
            l.capacity = parse_double(toks[3], origin, lineno);
            c.lines.push_back(std::move(l));
        } else if (section == "renewables") {
            // bus mean std
            if (toks.size() != 3) throw ParseError(origin, lineno, "renewable rows have 3 fields");
            RenewableStat r;
            r.bus = toks[0];
            r.mean = parse_double(toks[1], origin, lineno);
            r.std_dev = parse_double(toks[2], origin, lineno);
            c.renewables.push_back(std::move(r));
        } else if (section == "initial_dispatch") {
            if (toks.size() != 2) throw ParseError(origin, lineno, "initial_dispatch rows have 2 fields");
            c.initial_dispatch.emplace_back(toks[0], parse_double(toks[1], origin, lineno));
        } else if (section.empty()) {
            throw ParseError(origin, lineno, "data before any [section]");
        } else {
            throw ParseError(origin, lineno, "unknown section '" + section + "'");
        }
    }

    if (!have_horizon) throw ParseError(origin + ": missing [meta] horizon");
    if (c.reference_bus.empty()) throw ParseError(origin + ": missing [meta] reference_bus");

    auto violations = validate_case(c);
    if (!violations.empty()) {
        std::string msg = origin + ": invalid case:";
        for (const auto& v : violations) msg += "\n  " + v.entity + ": " + v.rule;
        throw ValidationError(msg);
    }
    return c;
}

GridCase load_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open case file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_case(ss.str(), path);
}

std::string save_case(const GridCase& c) {
    std::ostringstream os;
    os << "[meta]\n";
    os << "horizon " << c.horizon << "\n";
    os << "reference_bus " << c.reference_bus << "\n";
    os << "[buses]\n";
    for (const auto& b : c.buses) {
        os << b.id << " " << num(b.theta_min) << " " << num(b.theta_max) << " "
           << num(b.shed_penalty) << " " << num(b.curtail_penalty) << " ";
        for (size_t t = 0; t < b.demand.size(); ++t)
            os << (t ? "," : "") << num(b.demand[t]);
        os << "\n";
    }
    os << "[generators]\n";
    for (const auto& g : c.generators)
        os << g.id << " " << g.bus << " " << num(g.p_min) << " " << num(g.p_max) << " "
           << num(g.ramp_up) << " " << num(g.ramp_down) << " " << num(g.cost_quad) << " "
           << num(g.cost_lin) << " " << num(g.cost_const) << "\n";
    os << "[lines]\n";
    for (const auto& l : c.lines)
        os << l.from_bus << " " << l.to_bus << " " << num(l.reactance) << " "
           << num(l.capacity) << "\n";
    if (!c.renewables.empty()) {
        os << "[renewables]\n";
        for (const auto& r : c.renewables)
            os << r.bus << " " << num(r.mean) << " " << num(r.std_dev) << "\n";
    }
    if (!c.initial_dispatch.empty()) {
        os << "[initial_dispatch]\n";
        for (const auto& [id, v] : c.initial_dispatch) os << id << " " << num(v) << "\n";
    }
    return os.str();
}

std::vector<Violation> validate_case(const GridCase& c) {
    std::vector<Violation> out;
    auto flag = [&out](const std::string& entity, const std::string& rule) {
        out.push_back({entity, rule});
    };

    if (c.horizon < 1) flag("meta", "horizon must be >= 1");

    std::unordered_map<std::string, int> bus_idx;
    for (size_t i = 0; i < c.buses.size(); ++i) {
        const Bus& b = c.buses[i];
        if (bus_idx.count(b.id)) flag(b.id, "duplicate bus id");
        bus_idx[b.id] = static_cast<int>(i);
        if (b.theta_min > b.theta_max) flag(b.id, "theta_min > theta_max");
        if (c.horizon >= 1 && static_cast<int>(b.demand.size()) != c.horizon)
            flag(b.id, "demand vector length != horizon");
        for (double d : b.demand)
            if (d < 0) { flag(b.id, "negative demand entry"); break; }
        if (b.shed_penalty < 0) flag(b.id, "shed_penalty < 0");
        if (b.curtail_penalty < 0) flag(b.id, "curtail_penalty < 0");
    }
    if (c.buses.empty()) flag("case", "no buses");
    if (!bus_idx.count(c.reference_bus)) flag(c.reference_bus, "reference_bus not a known bus");

    std::unordered_map<std::string, const Generator*> gen_ids;
    for (const auto& g : c.generators) {
        if (gen_ids.count(g.id)) flag(g.id, "duplicate generator id");
        gen_ids[g.id] = &g;
        if (!(0 <= g.p_min && g.p_min <= g.p_max)) flag(g.id, "requires 0 <= p_min <= p_max");
        if (g.ramp_up < 0) flag(g.id, "ramp_up < 0");
        if (g.ramp_down < 0) flag(g.id, "ramp_down < 0");
        if (g.cost_quad < 0) flag(g.id, "cost_quad < 0 (fuel cost must be convex)");
        if (!bus_idx.count(g.bus)) flag(g.id, "generator bus '" + g.bus + "' not a known bus");
    }

    for (size_t k = 0; k < c.lines.size(); ++k) {
        const Line& l = c.lines[k];
        std::string name = "line " + l.from_bus + "-" + l.to_bus + " (#" + std::to_string(k) + ")";
        if (!(l.reactance > 0)) flag(name, "reactance must be > 0");
        if (l.capacity < 0) flag(name, "capacity < 0");
        if (l.from_bus == l.to_bus) flag(name, "from_bus == to_bus");
        if (!bus_idx.count(l.from_bus)) flag(name, "from_bus not a known bus");
        if (!bus_idx.count(l.to_bus)) flag(name, "to_bus not a known bus");
    }

    // Connectivity over the line graph (only meaningful once endpoints resolve).
    if (!c.buses.empty() && out.empty()) {
        std::vector<std::vector<int>> adj(c.buses.size());
        for (const auto& l : c.lines) {
            int a = bus_idx[l.from_bus], b = bus_idx[l.to_bus];
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<char> seen(c.buses.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        size_t reached = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u])
                if (!seen[v]) { seen[v] = 1; ++reached; q.push(v); }
        }
        if (reached != c.buses.size()) flag("case", "graph not connected");
    }

    for (const auto& r : c.renewables) {
        if (!bus_idx.count(r.bus)) flag("renewable@" + r.bus, "bus not known");
        if (r.mean < 0) flag("renewable@" + r.bus, "mean < 0");
        if (r.std_dev < 0) flag("renewable@" + r.bus, "std_dev < 0");
    }
    for (const auto& [id, v] : c.initial_dispatch) {
        auto it = gen_ids.find(id);
        if (it == gen_ids.end()) {
            flag("initial_dispatch " + id, "generator not known");
        } else if (v < it->second->p_min || v > it->second->p_max) {
            flag("initial_dispatch " + id, "outside generator limits");
        }
    }
    return out;
}

CaseIndex::CaseIndex(const GridCase& c) {
    num_buses_ = static_cast<int>(c.buses.size());
    for (int i = 0; i < num_buses_; ++i) bus_idx_[c.buses[i].id] = i;
    reference = bus(c.reference_bus);

    gens_per_bus.resize(c.buses.size());
    for (size_t gi = 0; gi < c.generators.size(); ++gi) {
        int b = bus(c.generators[gi].bus);
        gen_bus.push_back(b);
        if (b >= 0) gens_per_bus[b].push_back(static_cast<int>(gi));
    }
    for (const auto& l : c.lines) {
        line_from.push_back(bus(l.from_bus));
        line_to.push_back(bus(l.to_bus));
    }
    renewable_mean.assign(c.buses.size(), 0.0);
    renewable_std.assign(c.buses.size(), 0.0);
    for (const auto& r : c.renewables) {
        int b = bus(r.bus);
        if (b >= 0) {
            renewable_mean[b] += r.mean;
            renewable_std[b] = std::hypot(renewable_std[b], r.std_dev);
        }
    }
    x0.assign(c.generators.size(), 0.0);
    for (const auto& [id, v] : c.initial_dispatch)
        for (size_t gi = 0; gi < c.generators.size(); ++gi)
            if (c.generators[gi].id == id) x0[gi] = v;
}

int CaseIndex::bus(const std::string& id) const {
    auto it = bus_idx_.find(id);
    return it == bus_idx_.end() ? -1 : it->second;
}

} // namespace dropf

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

#include "doctest.h"

#include <random>

using namespace dropf;

namespace {

const char* kTwoBus = R"(# minimal two-bus system
[meta]
horizon 2
reference_bus b1
[buses]
b1 -0.5 0.5 1500 1500 10,10
b2 -0.5 0.5 1500 1500 5,5
[generators]
g1 b1 0 50 50 50 0.01 10 0
[lines]
b1 b2 0.1 100
)";

} // namespace

TEST_CASE("two-bus case parses and validates") {
    GridCase c = parse_case(kTwoBus);
    CHECK(c.horizon == 2);
    CHECK(c.buses.size() == 2);
    CHECK(c.generators.size() == 1);
    CHECK(c.lines.size() == 1);
    CHECK(c.reference_bus == "b1");
    CHECK(c.buses[0].demand == std::vector<double>{10, 10});
    CHECK(validate_case(c).empty());
}

TEST_CASE("negative line capacity is rejected and names the line") {
    std::string text = kTwoBus;
    auto pos = text.find("0.1 100");
    text.replace(pos, 7, "0.1 -5");
    CHECK_THROWS_AS(parse_case(text), ValidationError);
    try {
        parse_case(text);
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("b1-b2") != std::string::npos);
        CHECK(msg.find("capacity") != std::string::npos);
    }
}

TEST_CASE("malformed rows raise parse errors with location") {
    CHECK_THROWS_AS(parse_case("[meta]\nhorizon\n"), ParseError);
    CHECK_THROWS_AS(parse_case("[buses]\nb1 0 0 0 0 1\n"), ParseError); // no meta
    CHECK_THROWS_AS(parse_case("stray\n"), ParseError);
    CHECK_THROWS_AS(parse_case("[meta]\nhorizon x\n"), ParseError);
}

TEST_CASE("validate_case flags the named invariants") {
    GridCase c = parse_case(kTwoBus);

    SUBCASE("p_min > p_max") {
        c.generators[0].p_min = 60;
        auto v = validate_case(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].entity == "g1");
        CHECK(v[0].rule.find("p_min") != std::string::npos);
    }
    SUBCASE("disconnected bus") {
        c.lines.clear();
        auto v = validate_case(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule == "graph not connected");
    }
    SUBCASE("unknown reference bus") {
        c.reference_bus = "nope";
        auto v = validate_case(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].entity == "nope");
    }
    SUBCASE("demand length mismatch") {
        c.buses[1].demand.pop_back();
        auto v = validate_case(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].entity == "b2");
    }
    SUBCASE("negative penalty") {
        c.buses[0].shed_penalty = -1;
        auto v = validate_case(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule.find("shed_penalty") != std::string::npos);
    }
    SUBCASE("theta bounds inverted") {
        c.buses[0].theta_min = 1.0;
        auto v = validate_case(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule.find("theta") != std::string::npos);
    }
    SUBCASE("initial dispatch outside limits") {
        c.initial_dispatch.emplace_back("g1", 99.0);
        auto v = validate_case(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule.find("limits") != std::string::npos);
    }
}

TEST_CASE("save/load round-trip is bit exact") {
    GridCase c = parse_case(kTwoBus);
    c.renewables.push_back({"b2", 3.25, 1.0625});
    c.initial_dispatch.emplace_back("g1", 12.5);
    // awkward values that do not have short decimal representations
    c.buses[0].theta_max = 0.1 + 0.2;
    c.generators[0].cost_quad = 1.0 / 3.0;
    std::string one = save_case(c);
    GridCase c2 = parse_case(one);
    std::string two = save_case(c2);
    CHECK(one == two);
    CHECK(c2.buses[0].theta_max == c.buses[0].theta_max);
    CHECK(c2.generators[0].cost_quad == c.generators[0].cost_quad);
    CHECK(c2.renewables[0].std_dev == 1.0625);
}

TEST_CASE("anything load_case accepts validates clean") {
    // fuzz a few random but well-formed cases through save -> parse
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        GridCase c;
        c.horizon = 1 + static_cast<int>(unif(rng) * 4);
        int nb = 2 + static_cast<int>(unif(rng) * 4);
        for (int i = 0; i < nb; ++i) {
            Bus b;
            b.id = "b" + std::to_string(i);
            b.theta_min = -unif(rng);
            b.theta_max = unif(rng);
            b.shed_penalty = 1500;
            b.curtail_penalty = 1500;
            for (int t = 0; t < c.horizon; ++t) b.demand.push_back(unif(rng) * 40);
            c.buses.push_back(b);
        }
        c.reference_bus = "b0";
        for (int i = 1; i < nb; ++i) { // star topology keeps it connected
            Line l;
            l.from_bus = "b0";
            l.to_bus = "b" + std::to_string(i);
            l.reactance = 0.05 + unif(rng);
            l.capacity = 20 + unif(rng) * 100;
            c.lines.push_back(l);
        }
        Generator g;
        g.id = "g0";
        g.bus = "b" + std::to_string(static_cast<int>(unif(rng) * nb));
        g.p_max = 50 + unif(rng) * 100;
        g.ramp_up = g.ramp_down = g.p_max;
        g.cost_quad = unif(rng) * 0.1;
        g.cost_lin = 5 + unif(rng) * 20;
        c.generators.push_back(g);

        GridCase loaded = parse_case(save_case(c));
        CHECK(validate_case(loaded).empty());
    }
}

TEST_CASE("desk6 case mirrors the published dimensions") {
    GridCase c = load_case(std::string(DROPF_CASE_DIR) + "/desk6.case");
    CHECK(c.generators.size() == 6);
    CHECK(c.buses.size() == 20);
    CHECK(c.lines.size() == 45);
    CHECK(c.horizon == 24);
    CHECK(validate_case(c).empty());
    for (const auto& b : c.buses) {
        CHECK(b.shed_penalty == 1500);
        CHECK(b.curtail_penalty == 1500);
    }
}

TEST_CASE("CaseIndex resolves topology") {
    GridCase c = parse_case(kTwoBus);
    CaseIndex idx(c);
    CHECK(idx.bus("b1") == 0);
    CHECK(idx.bus("b2") == 1);
    CHECK(idx.bus("zz") == -1);
    CHECK(idx.reference == 0);
    CHECK(idx.gen_bus == std::vector<int>{0});
    CHECK(idx.line_from == std::vector<int>{0});
    CHECK(idx.line_to == std::vector<int>{1});
    CHECK(idx.x0 == std::vector<double>{0.0});
}

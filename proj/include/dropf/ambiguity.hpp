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

#include <Eigen/Dense>

#include "dropf/conic.hpp"

namespace dropf {

/// Confidence set over M scenarios: probability vectors p with sum(p) = 1 and
/// sum_j (p_j - q_j)^2 / p_j <= gamma. Larger gamma, more robustness.
struct AmbiguitySpec {
    Eigen::VectorXd q; // reference probabilities, nonnegative, sum 1
    double gamma = 0.0;

    int size() const { return static_cast<int>(q.size()); }
    void validate() const; // throws ValidationError on a broken invariant
};

/// sum_j (p_j - q_j)^2 / p_j, with the limit conventions 0/0 = 0 and a
/// domain error when p_j = 0 but p_j != q_j.
double chi2_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

struct WorstCase {
    double value = 0.0;
    Eigen::VectorXd p_star;
};

/// Exact inner maximization  max { p'z : p in the confidence set, p >= 0 },
/// solved through its stationarity conditions (a monotone scalar bisection,
/// plus a concave line search when reference entries are zero). Independent
/// of the conic solver.
WorstCase worst_case_expectation(const Eigen::VectorXd& z, const AmbiguitySpec& spec);

/// Variable indices of one dual block inside a conic problem.
struct DualBlockVars {
    int beta = -1;
    int sigma = -1;
    int y0 = -1; // M consecutive variables
    int z0 = -1; // M consecutive variables (continuation epigraph values)
    int M = 0;
};

/// Values of the dual variables in a solved stage problem.
struct DualBlock {
    double beta = 0.0;
    double sigma = 0.0;
    Eigen::VectorXd y;
    Eigen::VectorXd z;
};

/// Appends the SOC-representable dual of the inner maximization:
/// variables (beta >= 0, sigma free, y, z), objective contribution
/// weight * (gamma*beta - sigma - 2 q'y + 2 beta), and per scenario j the
/// cone constraint sqrt(4 y_j^2 + (z_j+sigma)^2) <= 2 beta - z_j - sigma
/// together with z_j + sigma <= beta. Minimizing over (beta, sigma, y) with
/// z fixed yields the worst-case expectation of z.
DualBlockVars add_dual_epigraph(conic::Problem& prob, const AmbiguitySpec& spec,
                                double weight = 1.0);

DualBlock extract_dual_block(const DualBlockVars& vars, const Eigen::VectorXd& solution);

/// Objective contribution of a dual block at given variable values.
double dual_block_objective(const AmbiguitySpec& spec, const DualBlock& blk);

} // namespace dropf

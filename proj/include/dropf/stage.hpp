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
#include "dropf/grid.hpp"

namespace dropf {

/// State entering period t: previous dispatch (zeros at t=1 unless the case
/// provides initial_dispatch) and the realized renewable output per bus.
struct StageState {
    int t = 1; // 1-based
    Eigen::VectorXd x_prev;
    Eigen::VectorXd xi;
};

struct StageDispatch {
    Eigen::VectorXd x;       // per generator, MW
    Eigen::VectorXd delta_x; // x - x_prev
    Eigen::VectorXd flow;    // per line, MW
    Eigen::VectorXd theta;   // per bus, rad
    Eigen::VectorXd shed;    // q+ per bus, MW
    Eigen::VectorXd curtail; // q- per bus, MW
    double cost = 0.0;       // fuel + penalties, $
};

/// Where one stage block lives inside a conic problem, plus handles to the
/// rows whose right-hand sides depend on the stage state.
struct StageVars {
    int x0 = -1, theta0 = -1, flow0 = -1, shed0 = -1, curtail0 = -1;
    std::vector<conic::RowHandle> balance;   // per bus, rhs carries D - xi
    std::vector<conic::RowHandle> ramp_up;   // per generator, rhs carries x_prev
    std::vector<conic::RowHandle> ramp_down; // per generator
};

/// Appends the single-period feasible region (nodal balance, generation and
/// ramp limits, reference angle, angle bounds, line limits, flow-angle
/// coupling) and the stage cost, scaled by cost_weight, to `prob`.
StageVars build_stage_constraints(const GridCase& c, const CaseIndex& idx, const StageState& st,
                                  conic::Problem& prob, double cost_weight = 1.0);

/// Retargets the state-dependent right-hand sides of an existing stage block.
void set_stage_state(const GridCase& c, const CaseIndex& idx, conic::Problem& prob,
                     const StageVars& vars, const StageState& st);

/// Fuel cost plus shedding/curtailment penalties of a dispatch.
double stage_cost(const GridCase& c, const StageDispatch& d);

/// flow_k = (theta_from - theta_to) / reactance_k.
Eigen::VectorXd flow_from_angles(const GridCase& c, const CaseIndex& idx,
                                 const Eigen::VectorXd& theta);

/// Reads a stage block out of a conic solution, recomputes the cost exactly,
/// and runs the physics checker (recording into the global audit).
StageDispatch extract_dispatch(const GridCase& c, const CaseIndex& idx, const StageVars& vars,
                               const Eigen::VectorXd& solution, const StageState& st);

/// Myopic single-period optimum (no continuation value).
StageDispatch solve_single_stage(const GridCase& c, const StageState& st, double tol = 1e-9);

// ---- universal post-solve physics audit -------------------------------------

struct PhysicsReport {
    double balance = 0.0;    // max |nodal balance residual|, MW
    double flow_dev = 0.0;   // max |flow - (theta_m - theta_n)/X|, MW
    double gen_box = 0.0;    // max generation bound violation, MW
    double line_cap = 0.0;   // max line limit violation, MW
    double ramp = 0.0;       // max ramp violation, MW
    double angle = 0.0;      // max angle bound violation, rad
    double nonneg = 0.0;     // max negativity of shed/curtail, MW
    double worst() const;
    bool ok(double tol) const { return worst() <= tol; }
};

PhysicsReport check_dispatch(const GridCase& c, const CaseIndex& idx, const StageState& st,
                             const StageDispatch& d);

/// Process-wide audit over every dispatch extracted anywhere.
struct PhysicsAudit {
    long checks = 0;
    long violations = 0; // residual above the audit tolerance (1e-6)
    double worst = 0.0;
};
PhysicsAudit physics_audit();
void physics_audit_reset();

} // namespace dropf

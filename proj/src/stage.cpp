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

#include "dropf/stage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

namespace dropf {

namespace {

void check_state(const GridCase& c, const StageState& st) {
    if (st.t < 1 || st.t > c.horizon)
        throw ValidationError("stage: period " + std::to_string(st.t) + " outside horizon");
    if (st.x_prev.size() != static_cast<int>(c.generators.size()))
        throw ValidationError("stage: x_prev dimension mismatch");
    if (st.xi.size() != static_cast<int>(c.buses.size()))
        throw ValidationError("stage: xi dimension mismatch");
    if (st.xi.size() && st.xi.minCoeff() < 0)
        throw ValidationError("stage: negative renewable output");
}

std::mutex audit_mutex;
PhysicsAudit audit_state;
constexpr double kAuditTol = 1e-6;

} // namespace

StageVars build_stage_constraints(const GridCase& c, const CaseIndex& idx, const StageState& st,
                                  conic::Problem& prob, double cost_weight) {
    check_state(c, st);
    const int ng = static_cast<int>(c.generators.size());
    const int nb = static_cast<int>(c.buses.size());
    const int nl = static_cast<int>(c.lines.size());
    const int t = st.t - 1;

    StageVars v;
    v.x0 = prob.add_vars(ng, "x");
    v.theta0 = prob.add_vars(nb, "th");
    v.flow0 = prob.add_vars(nl, "p");
    v.shed0 = prob.add_vars(nb, "qp");
    v.curtail0 = prob.add_vars(nb, "qm");

    // stage cost
    for (int i = 0; i < ng; ++i) {
        const Generator& g = c.generators[i];
        if (g.cost_quad != 0.0) prob.add_quad_cost(v.x0 + i, v.x0 + i, cost_weight * g.cost_quad);
        if (g.cost_lin != 0.0) prob.add_lin_cost(v.x0 + i, cost_weight * g.cost_lin);
        prob.add_offset(cost_weight * g.cost_const);
    }
    for (int n = 0; n < nb; ++n) {
        prob.add_lin_cost(v.shed0 + n, cost_weight * c.buses[n].shed_penalty);
        prob.add_lin_cost(v.curtail0 + n, cost_weight * c.buses[n].curtail_penalty);
    }

    // nodal balance: gen + inflow - outflow + shed - curtail = demand - xi
    for (int n = 0; n < nb; ++n) {
        conic::AffExpr e;
        for (int gi : idx.gens_per_bus[n]) e.add(v.x0 + gi, 1.0);
        for (int k = 0; k < nl; ++k) {
            if (idx.line_to[k] == n) e.add(v.flow0 + k, 1.0);
            if (idx.line_from[k] == n) e.add(v.flow0 + k, -1.0);
        }
        e.add(v.shed0 + n, 1.0).add(v.curtail0 + n, -1.0);
        e.constant = -(c.buses[n].demand[t] - st.xi[n]);
        v.balance.push_back(prob.add_eq(e));
    }

    // flow-angle coupling and line limits
    for (int k = 0; k < nl; ++k) {
        conic::AffExpr e = conic::AffExpr::var(v.flow0 + k);
        e.add(v.theta0 + idx.line_from[k], -1.0 / c.lines[k].reactance);
        e.add(v.theta0 + idx.line_to[k], 1.0 / c.lines[k].reactance);
        prob.add_eq(e);

        conic::AffExpr up(c.lines[k].capacity); // L - p >= 0
        up.add(v.flow0 + k, -1.0);
        prob.add_nonneg(up);
        conic::AffExpr dn(c.lines[k].capacity); // p + L >= 0
        dn.add(v.flow0 + k, 1.0);
        prob.add_nonneg(dn);
    }

    // reference angle and angle bounds
    prob.add_eq(conic::AffExpr::var(v.theta0 + idx.reference));
    for (int n = 0; n < nb; ++n) {
        conic::AffExpr lo(-c.buses[n].theta_min);
        lo.add(v.theta0 + n, 1.0);
        prob.add_nonneg(lo);
        conic::AffExpr hi(c.buses[n].theta_max);
        hi.add(v.theta0 + n, -1.0);
        prob.add_nonneg(hi);
    }

    // generation bounds and ramping, slacks nonnegative
    for (int i = 0; i < ng; ++i) {
        const Generator& g = c.generators[i];
        conic::AffExpr lo(-g.p_min);
        lo.add(v.x0 + i, 1.0);
        prob.add_nonneg(lo);
        conic::AffExpr hi(g.p_max);
        hi.add(v.x0 + i, -1.0);
        prob.add_nonneg(hi);

        conic::AffExpr ru(g.ramp_up + st.x_prev[i]); // R_u - (x - x_prev) >= 0
        ru.add(v.x0 + i, -1.0);
        v.ramp_up.push_back(prob.add_nonneg(ru));
        conic::AffExpr rd(g.ramp_down - st.x_prev[i]); // R_d + (x - x_prev) >= 0
        rd.add(v.x0 + i, 1.0);
        v.ramp_down.push_back(prob.add_nonneg(rd));
    }
    for (int n = 0; n < nb; ++n) {
        prob.add_nonneg(conic::AffExpr::var(v.shed0 + n));
        prob.add_nonneg(conic::AffExpr::var(v.curtail0 + n));
    }
    return v;
}

void set_stage_state(const GridCase& c, const CaseIndex& idx, conic::Problem& prob,
                     const StageVars& vars, const StageState& st) {
    (void)idx;
    check_state(c, st);
    const int t = st.t - 1;
    for (size_t n = 0; n < vars.balance.size(); ++n)
        prob.set_row_constant(vars.balance[n],
                              -(c.buses[n].demand[t] - st.xi[static_cast<int>(n)]));
    for (size_t i = 0; i < vars.ramp_up.size(); ++i) {
        const Generator& g = c.generators[i];
        prob.set_row_constant(vars.ramp_up[i], g.ramp_up + st.x_prev[static_cast<int>(i)]);
        prob.set_row_constant(vars.ramp_down[i], g.ramp_down - st.x_prev[static_cast<int>(i)]);
    }
}

double stage_cost(const GridCase& c, const StageDispatch& d) {
    double cost = 0.0;
    for (size_t i = 0; i < c.generators.size(); ++i) {
        const Generator& g = c.generators[i];
        double x = d.x[static_cast<int>(i)];
        cost += g.cost_quad * x * x + g.cost_lin * x + g.cost_const;
    }
    for (size_t n = 0; n < c.buses.size(); ++n) {
        cost += c.buses[n].shed_penalty * d.shed[static_cast<int>(n)];
        cost += c.buses[n].curtail_penalty * d.curtail[static_cast<int>(n)];
    }
    return cost;
}

Eigen::VectorXd flow_from_angles(const GridCase& c, const CaseIndex& idx,
                                 const Eigen::VectorXd& theta) {
    if (theta.size() != static_cast<int>(c.buses.size()))
        throw ValidationError("flow_from_angles: theta dimension mismatch");
    Eigen::VectorXd f(c.lines.size());
    for (size_t k = 0; k < c.lines.size(); ++k)
        f[static_cast<int>(k)] =
            (theta[idx.line_from[k]] - theta[idx.line_to[k]]) / c.lines[k].reactance;
    return f;
}

double PhysicsReport::worst() const {
    return std::max({balance, flow_dev, gen_box, line_cap, ramp, angle, nonneg});
}

PhysicsReport check_dispatch(const GridCase& c, const CaseIndex& idx, const StageState& st,
                             const StageDispatch& d) {
    PhysicsReport r;
    const int t = st.t - 1;
    const int nb = static_cast<int>(c.buses.size());
    const int ng = static_cast<int>(c.generators.size());
    const int nl = static_cast<int>(c.lines.size());

    Eigen::VectorXd inj = Eigen::VectorXd::Zero(nb);
    for (int i = 0; i < ng; ++i) inj[idx.gen_bus[i]] += d.x[i];
    for (int k = 0; k < nl; ++k) {
        inj[idx.line_to[k]] += d.flow[k];
        inj[idx.line_from[k]] -= d.flow[k];
    }
    for (int n = 0; n < nb; ++n) {
        double res = inj[n] + d.shed[n] - d.curtail[n] - (c.buses[n].demand[t] - st.xi[n]);
        r.balance = std::max(r.balance, std::abs(res));
        r.angle = std::max({r.angle, c.buses[n].theta_min - d.theta[n],
                            d.theta[n] - c.buses[n].theta_max});
        r.nonneg = std::max({r.nonneg, -d.shed[n], -d.curtail[n]});
    }
    Eigen::VectorXd f = flow_from_angles(c, idx, d.theta);
    for (int k = 0; k < nl; ++k) {
        r.flow_dev = std::max(r.flow_dev, std::abs(d.flow[k] - f[k]));
        r.line_cap = std::max(r.line_cap, std::abs(d.flow[k]) - c.lines[k].capacity);
    }
    for (int i = 0; i < ng; ++i) {
        const Generator& g = c.generators[i];
        r.gen_box = std::max({r.gen_box, g.p_min - d.x[i], d.x[i] - g.p_max});
        r.ramp = std::max({r.ramp, d.delta_x[i] - g.ramp_up, -d.delta_x[i] - g.ramp_down});
    }
    r.angle = std::max(r.angle, std::abs(d.theta[idx.reference]));
    return r;
}

PhysicsAudit physics_audit() {
    std::lock_guard<std::mutex> lock(audit_mutex);
    return audit_state;
}

void physics_audit_reset() {
    std::lock_guard<std::mutex> lock(audit_mutex);
    audit_state = PhysicsAudit{};
}

StageDispatch extract_dispatch(const GridCase& c, const CaseIndex& idx, const StageVars& vars,
                               const Eigen::VectorXd& solution, const StageState& st) {
    const int ng = static_cast<int>(c.generators.size());
    const int nb = static_cast<int>(c.buses.size());
    const int nl = static_cast<int>(c.lines.size());
    StageDispatch d;
    d.x = solution.segment(vars.x0, ng);
    d.delta_x = d.x - st.x_prev;
    d.theta = solution.segment(vars.theta0, nb);
    d.flow = solution.segment(vars.flow0, nl);
    d.shed = solution.segment(vars.shed0, nb);
    d.curtail = solution.segment(vars.curtail0, nb);
    d.cost = stage_cost(c, d);

    PhysicsReport rep = check_dispatch(c, idx, st, d);
    {
        std::lock_guard<std::mutex> lock(audit_mutex);
        ++audit_state.checks;
        if (!rep.ok(kAuditTol)) ++audit_state.violations;
        audit_state.worst = std::max(audit_state.worst, rep.worst());
    }
    return d;
}

StageDispatch solve_single_stage(const GridCase& c, const StageState& st, double tol) {
    CaseIndex idx(c);
    conic::Problem prob;
    StageVars vars = build_stage_constraints(c, idx, st, prob);
    prob.finalize();
    conic::SolveOptions opts;
    opts.tol = tol;
    conic::Solution sol = conic::solve(prob, opts);
    if (sol.status != conic::Status::Optimal)
        throw SolverError("single-stage solve failed at t=" + std::to_string(st.t) + ": " +
                          conic::to_string(sol.status));
    return extract_dispatch(c, idx, vars, sol.x, st);
}

} // namespace dropf

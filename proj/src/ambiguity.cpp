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

#include "dropf/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dropf {

void AmbiguitySpec::validate() const {
    if (q.size() < 1) throw ValidationError("ambiguity: empty reference distribution");
    if (q.minCoeff() < 0) throw ValidationError("ambiguity: negative reference probability");
    if (std::abs(q.sum() - 1.0) > 1e-9)
        throw ValidationError("ambiguity: reference probabilities must sum to 1");
    if (gamma < 0) throw ValidationError("ambiguity: gamma must be >= 0");
}

double chi2_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() != q.size()) throw ValidationError("chi2: dimension mismatch");
    double acc = 0.0;
    for (int j = 0; j < p.size(); ++j) {
        double d = p[j] - q[j];
        if (p[j] == 0.0) {
            if (d != 0.0) throw std::domain_error("chi2: p_j = 0 with p_j != q_j");
            continue; // 0/0 -> 0
        }
        acc += d * d / p[j];
    }
    return acc;
}

namespace {

struct PosBlock {
    double value = 0.0;
    Eigen::VectorXd p;
};

// max { p'z : sum p = s, sum q_j^2/p_j <= R, p > 0 } over indices with q > 0.
// Stationarity gives p_j = q_j sqrt(lambda / (nu - z_j)); nu solves
//   h(nu) = [sum q sqrt(nu - z)] [sum q / sqrt(nu - z)] = s R,
// and h is monotone decreasing from +inf to (sum q)^2 (Cauchy-Schwarz).
PosBlock solve_pos_block(const Eigen::VectorXd& z, const Eigen::VectorXd& q, double s, double R) {
    const int M = static_cast<int>(z.size());
    const double Q = q.sum();
    PosBlock out;

    double zmax = z.maxCoeff(), zmin = z.minCoeff();
    double spread = zmax - zmin;
    double scale = std::max({1.0, std::abs(zmax), std::abs(zmin)});

    auto proportional = [&] {
        out.p = q * (s / Q);
        out.value = out.p.dot(z);
        return out;
    };

    // constant payoffs, or a budget that pins p to the proportional point
    if (spread <= 1e-15 * scale) return proportional();
    if (s * R <= Q * Q * (1.0 + 1e-13)) return proportional();

    auto h = [&](double u) { // u = nu - zmax > 0
        double a = 0.0, b = 0.0;
        for (int j = 0; j < M; ++j) {
            double c = u + (zmax - z[j]);
            double r = std::sqrt(c);
            a += q[j] * r;
            b += q[j] / r;
        }
        return a * b;
    };

    const double target = s * R;
    double lo = 1e-18 * std::max(spread, 1.0);
    while (h(lo) <= target) lo *= 0.5; // paranoid; h(lo) is astronomically large
    double hi = std::max(spread, 1.0);
    for (int i = 0; i < 400 && h(hi) >= target; ++i) hi *= 2.0;
    for (int i = 0; i < 300; ++i) {
        double mid = 0.5 * (lo + hi);
        if (h(mid) > target) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    double u = 0.5 * (lo + hi);

    double denom = 0.0;
    for (int j = 0; j < M; ++j) denom += q[j] / std::sqrt(u + (zmax - z[j]));
    double sqrt_lambda = s / denom;
    out.p.resize(M);
    for (int j = 0; j < M; ++j) out.p[j] = q[j] * sqrt_lambda / std::sqrt(u + (zmax - z[j]));
    out.value = out.p.dot(z);
    return out;
}

} // namespace

WorstCase worst_case_expectation(const Eigen::VectorXd& z, const AmbiguitySpec& spec) {
    spec.validate();
    const int M = spec.size();
    if (z.size() != M) throw ValidationError("worst_case_expectation: dimension mismatch");

    WorstCase wc;
    if (M == 1) {
        wc.value = z[0];
        wc.p_star = Eigen::VectorXd::Ones(1);
        return wc;
    }
    double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    if (spec.gamma == 0.0 || z.maxCoeff() - z.minCoeff() <= 1e-15 * scale) {
        wc.value = spec.q.dot(z);
        wc.p_star = spec.q;
        return wc;
    }

    std::vector<int> pos, zero;
    for (int j = 0; j < M; ++j) (spec.q[j] > 0 ? pos : zero).push_back(j);

    Eigen::VectorXd zp(pos.size()), qp(pos.size());
    for (size_t k = 0; k < pos.size(); ++k) {
        zp[static_cast<int>(k)] = z[pos[k]];
        qp[static_cast<int>(k)] = spec.q[pos[k]];
    }
    const double R = spec.gamma + 1.0; // sum q^2/p <= gamma + 1 regardless of the zero-block mass

    wc.p_star = Eigen::VectorXd::Zero(M);
    if (zero.empty()) {
        PosBlock pb = solve_pos_block(zp, qp, 1.0, R);
        for (size_t k = 0; k < pos.size(); ++k) wc.p_star[pos[k]] = pb.p[static_cast<int>(k)];
        wc.value = pb.value;
        return wc;
    }

    // scenarios with zero reference mass cost divergence linearly (their term
    // is exactly p_j), so any granted mass goes to the best such scenario
    int jstar = zero[0];
    for (int j : zero)
        if (z[j] > z[jstar]) jstar = j;

    auto g = [&](double m) { return m * z[jstar] + solve_pos_block(zp, qp, 1.0 - m, R).value; };
    double lo = 0.0, hi = spec.gamma / (spec.gamma + 1.0) * (1.0 - 1e-12);
    for (int i = 0; i < 200; ++i) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (g(m1) < g(m2)) lo = m1;
        else hi = m2;
        if (hi - lo < 1e-15) break;
    }
    double m = 0.5 * (lo + hi);
    if (g(0.0) >= g(m)) m = 0.0; // boundary wins ties cleanly
    PosBlock pb = solve_pos_block(zp, qp, 1.0 - m, R);
    for (size_t k = 0; k < pos.size(); ++k) wc.p_star[pos[k]] = pb.p[static_cast<int>(k)];
    wc.p_star[jstar] = m;
    wc.value = m * z[jstar] + pb.value;
    return wc;
}

DualBlockVars add_dual_epigraph(conic::Problem& prob, const AmbiguitySpec& spec, double weight) {
    spec.validate();
    DualBlockVars v;
    v.M = spec.size();
    v.beta = prob.add_var("beta");
    v.sigma = prob.add_var("sigma");
    v.y0 = prob.add_vars(v.M, "y");
    v.z0 = prob.add_vars(v.M, "zc");

    prob.add_lin_cost(v.beta, weight * (spec.gamma + 2.0));
    prob.add_lin_cost(v.sigma, -weight);
    for (int j = 0; j < v.M; ++j) prob.add_lin_cost(v.y0 + j, -2.0 * weight * spec.q[j]);

    prob.add_nonneg(conic::AffExpr::var(v.beta));
    for (int j = 0; j < v.M; ++j) {
        conic::AffExpr head; // 2 beta - z_j - sigma
        head.add(v.beta, 2.0).add(v.z0 + j, -1.0).add(v.sigma, -1.0);
        conic::AffExpr mid = conic::AffExpr::var(v.y0 + j, 2.0);
        conic::AffExpr tail; // z_j + sigma
        tail.add(v.z0 + j, 1.0).add(v.sigma, 1.0);
        prob.add_soc({head, mid, tail});

        conic::AffExpr lin; // beta - z_j - sigma >= 0
        lin.add(v.beta, 1.0).add(v.z0 + j, -1.0).add(v.sigma, -1.0);
        prob.add_nonneg(lin);
    }
    return v;
}

DualBlock extract_dual_block(const DualBlockVars& vars, const Eigen::VectorXd& solution) {
    DualBlock b;
    b.beta = solution[vars.beta];
    b.sigma = solution[vars.sigma];
    b.y = solution.segment(vars.y0, vars.M);
    b.z = solution.segment(vars.z0, vars.M);
    return b;
}

double dual_block_objective(const AmbiguitySpec& spec, const DualBlock& blk) {
    return spec.gamma * blk.beta - blk.sigma - 2.0 * spec.q.dot(blk.y) + 2.0 * blk.beta;
}

} // namespace dropf

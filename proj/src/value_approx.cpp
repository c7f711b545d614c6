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

#include "dropf/value_approx.hpp"

#include "dropf/conic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace dropf {

namespace {
constexpr double kRidge = 1e-10;
}

InterpolationGrid make_grid(const GridCase& c, int pieces, long cap) {
    if (pieces < 1) throw ValidationError("make_grid: pieces must be >= 1");
    const int ng = static_cast<int>(c.generators.size());
    if (ng == 0) throw ValidationError("make_grid: case has no generators");

    double count = std::pow(static_cast<double>(pieces), ng);
    if (count > static_cast<double>(cap))
        throw ValidationError("make_grid: " + std::to_string(pieces) + "^" + std::to_string(ng) +
                              " interpolation points exceed the cap of " + std::to_string(cap));
    const long total = static_cast<long>(std::llround(count));

    Eigen::MatrixXd centers(ng, pieces);
    for (int i = 0; i < ng; ++i) {
        double lo = c.generators[i].p_min, hi = c.generators[i].p_max;
        for (int m = 1; m <= pieces; ++m)
            centers(i, m - 1) = lo + (hi - lo) * (2.0 * m - 1.0) / (2.0 * pieces);
    }

    InterpolationGrid grid;
    grid.pieces = pieces;
    grid.points.resize(total, ng);
    std::vector<int> odo(ng, 0);
    for (long k = 0; k < total; ++k) {
        for (int i = 0; i < ng; ++i) grid.points(k, i) = centers(i, odo[i]);
        for (int i = ng - 1; i >= 0; --i) { // last generator varies fastest
            if (++odo[i] < pieces) break;
            odo[i] = 0;
        }
    }
    return grid;
}

QuadraticValue QuadraticValue::zero(int dim) {
    QuadraticValue v;
    v.A = Eigen::MatrixXd::Zero(dim, dim);
    v.B = Eigen::VectorXd::Zero(dim);
    v.C = 0.0;
    return v;
}

bool QuadraticValue::is_zero() const {
    return C == 0.0 && (B.size() == 0 || B.isZero(0.0)) && (A.size() == 0 || A.isZero(0.0));
}

double QuadraticValue::min_eigenvalue() const {
    if (A.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double eval_quadratic(const QuadraticValue& v, const Eigen::VectorXd& x) {
    if (x.size() != v.B.size()) throw ValidationError("eval_quadratic: dimension mismatch");
    return x.dot(v.A * x) + 2.0 * v.B.dot(x) + v.C;
}

namespace {

// rows of the regression matrix in scaled coordinates
Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& pts) {
    const int K = static_cast<int>(pts.rows());
    const int g = static_cast<int>(pts.cols());
    const int da = conic::svec_dim(g);
    Eigen::MatrixXd M(K, da + g + 1);
    for (int k = 0; k < K; ++k) {
        Eigen::VectorXd x = pts.row(k).transpose();
        M.block(k, 0, 1, da) = conic::svec(x * x.transpose()).transpose();
        M.block(k, da, 1, g) = 2.0 * x.transpose();
        M(k, da + g) = 1.0;
    }
    return M;
}

struct ScaledFit {
    Eigen::MatrixXd M;      // design matrix on scaled points
    Eigen::VectorXd f;      // scaled targets
    Eigen::VectorXd ridge;  // diagonal ridge in scaled coordinates
    double sx = 1.0, sf = 1.0;
    int g = 0, da = 0;

    double objective(const Eigen::VectorXd& theta) const {
        return (M * theta - f).squaredNorm() + theta.dot(ridge.cwiseProduct(theta));
    }
};

// Exact minimizer over the face A = V S V' (V orthonormal, S free symmetric),
// by an unconstrained ridge least squares in (svec(S), B, C).
Eigen::VectorXd face_least_squares(const ScaledFit& sf, const Eigen::MatrixXd& pts_scaled,
                                   const Eigen::MatrixXd& V) {
    const int r = static_cast<int>(V.cols());
    const int g = sf.g;
    const int dr = conic::svec_dim(r);
    const int K = static_cast<int>(pts_scaled.rows());
    Eigen::MatrixXd Mr(K, dr + g + 1);
    for (int k = 0; k < K; ++k) {
        Eigen::VectorXd y = V.transpose() * pts_scaled.row(k).transpose();
        if (dr > 0) Mr.block(k, 0, 1, dr) = conic::svec(y * y.transpose()).transpose();
        Mr.block(k, dr, 1, g) = 2.0 * pts_scaled.row(k);
        Mr(k, dr + g) = 1.0;
    }
    Eigen::VectorXd ridge(dr + g + 1);
    // |V S V'|_F = |S|_F, so the A-part ridge carries over unchanged
    double ra = sf.da > 0 ? sf.ridge[0] : kRidge;
    for (int i = 0; i < dr; ++i) ridge[i] = ra;
    for (int i = 0; i < g + 1; ++i) ridge[dr + i] = sf.ridge[sf.da + i];
    Eigen::MatrixXd N = Mr.transpose() * Mr;
    N.diagonal() += ridge;
    return N.ldlt().solve(Mr.transpose() * sf.f);
}

} // namespace

FitResult fit_quadratic(const InterpolationGrid& grid, const Eigen::VectorXd& targets,
                        double tol) {
    const int K = grid.size();
    const int g = grid.dim();
    if (targets.size() != K) throw ValidationError("fit_quadratic: target count mismatch");
    if (K < 1) throw ValidationError("fit_quadratic: empty grid");

    ScaledFit sf;
    sf.g = g;
    sf.da = conic::svec_dim(g);
    sf.sx = std::max(1e-9, grid.points.cwiseAbs().maxCoeff());
    sf.sf = std::max(1.0, targets.cwiseAbs().maxCoeff());
    Eigen::MatrixXd pts = grid.points / sf.sx;
    sf.M = design_matrix(pts);
    sf.f = targets / sf.sf;
    sf.ridge.resize(sf.da + g + 1);
    double sx2 = sf.sx * sf.sx;
    for (int i = 0; i < sf.da; ++i) sf.ridge[i] = kRidge / (sx2 * sx2);
    for (int i = 0; i < g; ++i) sf.ridge[sf.da + i] = kRidge / sx2;
    sf.ridge[sf.da + g] = kRidge;

    // barrier solve of the PSD-constrained least squares
    conic::Problem prob;
    int v0 = prob.add_vars(sf.da + g + 1, "th");
    {
        // objective theta'(M'M + R)theta - 2 f'M theta + f'f
        Eigen::MatrixXd N = sf.M.transpose() * sf.M;
        N.diagonal() += sf.ridge;
        for (int i = 0; i < N.rows(); ++i)
            for (int j = i; j < N.cols(); ++j)
                if (N(i, j) != 0.0) prob.add_quad_cost(v0 + i, v0 + j, (i == j ? 1.0 : 2.0) * N(i, j));
        Eigen::VectorXd lin = -2.0 * sf.M.transpose() * sf.f;
        for (int i = 0; i < lin.size(); ++i)
            if (lin[i] != 0.0) prob.add_lin_cost(v0 + i, lin[i]);
        prob.add_offset(sf.f.squaredNorm());
    }
    prob.add_psd_var_block(v0, g);
    prob.finalize();
    conic::SolveOptions opts;
    opts.tol = tol;
    conic::Solution sol = conic::solve(prob, opts);
    if (sol.status != conic::Status::Optimal)
        throw SolverError("fit_quadratic: conic solve failed: " + conic::to_string(sol.status));
    Eigen::VectorXd theta = sol.x;

    // polish on the active face identified by the barrier point
    {
        Eigen::MatrixXd At = conic::smat(theta.head(sf.da));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(At);
        double emax = std::max(es.eigenvalues().maxCoeff(), 0.0);
        double cut = std::max(1e-7 * emax, 1e-11);
        double best = sf.objective(theta);
        int active = 0;
        for (int i = 0; i < g; ++i)
            if (es.eigenvalues()[i] > cut) ++active;
        for (int r = active; r >= 0; --r) {
            Eigen::MatrixXd V = es.eigenvectors().rightCols(r);
            Eigen::VectorXd th_r = face_least_squares(sf, pts, V);
            int dr = conic::svec_dim(r);
            Eigen::MatrixXd S = r > 0 ? conic::smat(th_r.head(dr)) : Eigen::MatrixXd::Zero(0, 0);
            if (r > 0) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(S);
                double lo = es2.eigenvalues().minCoeff();
                double sscale = std::max(1.0, es2.eigenvalues().cwiseAbs().maxCoeff());
                if (lo < -1e-10 * sscale) continue; // face too big; shrink further
                // clip roundoff negatives
                Eigen::VectorXd ev = es2.eigenvalues().cwiseMax(0.0);
                S = es2.eigenvectors() * ev.asDiagonal() * es2.eigenvectors().transpose();
            }
            Eigen::VectorXd cand(sf.da + g + 1);
            Eigen::MatrixXd Afull = r > 0
                                        ? Eigen::MatrixXd(V * S * V.transpose())
                                        : Eigen::MatrixXd(Eigen::MatrixXd::Zero(g, g));
            cand.head(sf.da) = conic::svec(Afull);
            cand.tail(g + 1) = th_r.tail(g + 1);
            double obj = sf.objective(cand);
            if (obj <= best * (1.0 + 1e-12) + 1e-300) {
                theta = cand;
                best = obj;
                break;
            }
        }
    }

    FitResult out;
    out.value.A = conic::smat(theta.head(sf.da)) * (sf.sf / (sf.sx * sf.sx));
    out.value.B = theta.segment(sf.da, g) * (sf.sf / sf.sx);
    out.value.C = theta[sf.da + g] * sf.sf;
    for (int k = 0; k < K; ++k) {
        double r = eval_quadratic(out.value, grid.points.row(k).transpose()) - targets[k];
        out.residual_inf = std::max(out.residual_inf, std::abs(r));
        out.residual_l2 += r * r;
    }
    out.residual_l2 = std::sqrt(out.residual_l2);
    return out;
}

} // namespace dropf

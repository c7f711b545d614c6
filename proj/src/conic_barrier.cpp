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

// Dense log-barrier path-following Newton method for problems that contain
// PSD matrix-variable blocks (optionally mixed with linear equalities,
// nonnegativity rows and SOC rows). Problem sizes in this artifact are tiny
// (matrix side <= ~50), so everything is dense.

#include "dropf/conic.hpp"
#include "conic_internal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace dropf::conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DenseForm {
    Eigen::MatrixXd P, A, G;
    Eigen::VectorXd c, b, h;
    int n, p, m, nonneg;
    std::vector<int> soc_dims;
    std::vector<Problem::PsdVarBlock> psd;
    double offset;
};

struct BarrierEval {
    double value = kInf; // barrier part only; +inf when outside the domain
    bool interior = false;
};

BarrierEval barrier_value(const DenseForm& f, const Eigen::VectorXd& x) {
    BarrierEval ev;
    double val = 0.0;
    Eigen::VectorXd s = f.h - f.G * x;
    for (int i = 0; i < f.nonneg; ++i) {
        if (s[i] <= 0) return ev;
        val -= std::log(s[i]);
    }
    int off = f.nonneg;
    for (int d : f.soc_dims) {
        double f2 = s[off] * s[off] - s.segment(off + 1, d - 1).squaredNorm();
        if (s[off] <= 0 || f2 <= 0) return ev;
        val -= std::log(f2);
        off += d;
    }
    for (const auto& blk : f.psd) {
        Eigen::MatrixXd S = smat(x.segment(blk.start, svec_dim(blk.side)));
        Eigen::LLT<Eigen::MatrixXd> llt(S);
        if (llt.info() != Eigen::Success) return ev;
        double logdet = 0.0;
        for (int i = 0; i < blk.side; ++i) {
            double Lii = llt.matrixL()(i, i);
            if (!(Lii > 0)) return ev;
            logdet += std::log(Lii);
        }
        val -= 2.0 * logdet;
    }
    ev.value = val;
    ev.interior = true;
    return ev;
}

// gradient and Hessian of the barrier at an interior point
void barrier_derivs(const DenseForm& f, const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                    Eigen::MatrixXd& hess) {
    grad.setZero(f.n);
    hess.setZero(f.n, f.n);
    Eigen::VectorXd s = f.h - f.G * x;
    for (int i = 0; i < f.nonneg; ++i) {
        Eigen::VectorXd gi = f.G.row(i).transpose();
        grad += gi / s[i];
        hess += (gi * gi.transpose()) / (s[i] * s[i]);
    }
    int off = f.nonneg;
    for (int d : f.soc_dims) {
        Eigen::VectorXd sb = s.segment(off, d);
        Eigen::VectorXd js = sb;
        js.tail(d - 1) = -js.tail(d - 1);
        double f2 = sb[0] * sb[0] - sb.tail(d - 1).squaredNorm();
        Eigen::MatrixXd Gb = f.G.middleRows(off, d);
        // d(phi)/dx = -Gb' * dphi/ds, with dphi/ds = -2 Js / f2
        grad += Gb.transpose() * (2.0 * js / f2);
        Eigen::MatrixXd Jm = -Eigen::MatrixXd::Identity(d, d);
        Jm(0, 0) = 1.0;
        Eigen::MatrixXd Hs = (4.0 * js * js.transpose() - 2.0 * f2 * Jm) / (f2 * f2);
        hess += Gb.transpose() * Hs * Gb;
        off += d;
    }
    for (const auto& blk : f.psd) {
        int dsv = svec_dim(blk.side);
        Eigen::MatrixXd S = smat(x.segment(blk.start, dsv));
        Eigen::MatrixXd Sinv = S.llt().solve(Eigen::MatrixXd::Identity(blk.side, blk.side));
        grad.segment(blk.start, dsv) -= svec(Sinv);
        for (int k = 0; k < dsv; ++k) {
            Eigen::VectorXd ek = Eigen::VectorXd::Zero(dsv);
            ek[k] = 1.0;
            Eigen::MatrixXd Ek = smat(ek);
            hess.block(blk.start, blk.start, dsv, dsv).col(k) += svec(Sinv * Ek * Sinv);
        }
    }
}

double max_feasible_step(const DenseForm& f, const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
    double t = kInf;
    Eigen::VectorXd s = f.h - f.G * x;
    Eigen::VectorXd dsv = -(f.G * dx);
    for (int i = 0; i < f.nonneg; ++i)
        if (dsv[i] < 0) t = std::min(t, -s[i] / dsv[i]);
    int off = f.nonneg;
    for (int d : f.soc_dims) {
        Eigen::VectorXd v = s.segment(off, d), w = dsv.segment(off, d);
        double a = w[0] * w[0] - w.tail(d - 1).squaredNorm();
        double b = 2.0 * (v[0] * w[0] - v.tail(d - 1).dot(w.tail(d - 1)));
        double c = v[0] * v[0] - v.tail(d - 1).squaredNorm();
        if (std::abs(a) < 1e-300) {
            if (b < 0) t = std::min(t, -c / b);
        } else {
            double disc = b * b - 4 * a * c;
            if (disc >= 0) {
                double sq = std::sqrt(disc);
                double q = -0.5 * (b + (b >= 0 ? sq : -sq));
                double r1 = q / a, r2 = (q != 0.0) ? c / q : kInf;
                if (r1 > r2) std::swap(r1, r2);
                if (r1 > 1e-300) t = std::min(t, r1);
                else if (r2 > 1e-300) t = std::min(t, r2);
            }
        }
        off += d;
    }
    for (const auto& blk : f.psd) {
        int dsv_ = svec_dim(blk.side);
        Eigen::MatrixXd S = smat(x.segment(blk.start, dsv_));
        Eigen::MatrixXd D = smat(dx.segment(blk.start, dsv_));
        Eigen::LLT<Eigen::MatrixXd> llt(S);
        Eigen::MatrixXd L = llt.matrixL();
        Eigen::MatrixXd M = L.triangularView<Eigen::Lower>().solve(D);
        M = L.triangularView<Eigen::Lower>().solve(M.transpose()).transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()),
                                                          Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        if (lo < 0) t = std::min(t, -1.0 / lo);
    }
    return t;
}

} // namespace

Solution solve_barrier(const Problem& pr, const SolveOptions& opts) {
    DenseForm f;
    f.P = Eigen::MatrixXd(pr.P());
    f.A = Eigen::MatrixXd(pr.A());
    f.G = Eigen::MatrixXd(pr.G());
    f.c = pr.c();
    f.b = pr.b();
    f.h = pr.h();
    f.n = pr.num_vars();
    f.p = static_cast<int>(f.A.rows());
    f.m = static_cast<int>(f.G.rows());
    f.nonneg = pr.num_nonneg();
    f.soc_dims = pr.soc_dims();
    f.psd = pr.psd_blocks();
    f.offset = pr.offset();

    Solution sol;

    // barrier parameter nu: 1 per nonneg row, 2 per SOC, side per PSD block
    double nu = f.nonneg + 2.0 * static_cast<double>(f.soc_dims.size());
    for (const auto& blk : f.psd) nu += blk.side;
    if (nu == 0) nu = 1;

    // ---- starting point ------------------------------------------------------
    Eigen::VectorXd x = Eigen::VectorXd::Zero(f.n);
    if (opts.x0 && opts.x0->size() == f.n) x = *opts.x0;
    for (const auto& blk : f.psd) {
        Eigen::MatrixXd S = smat(x.segment(blk.start, svec_dim(blk.side)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        if (lo < 1e-6)
            x.segment(blk.start, svec_dim(blk.side)) +=
                svec(Eigen::MatrixXd::Identity(blk.side, blk.side) * (1.0 - std::min(lo, 0.0)));
    }
    if (f.p > 0) {
        Eigen::VectorXd r = f.b - f.A * x;
        if (r.lpNorm<Eigen::Infinity>() > 1e-12 * std::max(1.0, f.b.lpNorm<Eigen::Infinity>())) {
            Eigen::MatrixXd AAt = f.A * f.A.transpose();
            x += f.A.transpose() * AAt.ldlt().solve(r);
        }
    }
    if (!barrier_value(f, x).interior) {
        // one retry with larger PSD identity shift; beyond that the caller
        // must provide a strictly feasible hint
        for (const auto& blk : f.psd)
            x.segment(blk.start, svec_dim(blk.side)) +=
                svec(Eigen::MatrixXd::Identity(blk.side, blk.side) * 10.0);
        if (!barrier_value(f, x).interior) {
            sol.status = Status::NumericalFailure;
            return sol;
        }
    }

    auto fobj = [&](const Eigen::VectorXd& v) {
        return 0.5 * v.dot(f.P * v) + f.c.dot(v);
    };

    Eigen::VectorXd grad_b(f.n);
    Eigen::MatrixXd hess_b(f.n, f.n);
    double mu = std::max(1.0, (f.P * x + f.c).lpNorm<Eigen::Infinity>());
    const double tol = opts.tol;
    int total_newton = 0;

    for (int outer = 0; outer < 80; ++outer) {
        for (int inner = 0; inner < 60; ++inner) {
            ++total_newton;
            barrier_derivs(f, x, grad_b, hess_b);
            Eigen::VectorXd g = f.P * x + f.c + mu * grad_b;
            Eigen::MatrixXd H = f.P + mu * hess_b;
            Eigen::VectorXd dx;
            if (f.p > 0) {
                Eigen::MatrixXd K(f.n + f.p, f.n + f.p);
                K.setZero();
                K.topLeftCorner(f.n, f.n) = H;
                K.topRightCorner(f.n, f.p) = f.A.transpose();
                K.bottomLeftCorner(f.p, f.n) = f.A;
                Eigen::VectorXd rhs(f.n + f.p);
                rhs.head(f.n) = -g;
                rhs.tail(f.p) = -(f.A * x - f.b);
                Eigen::VectorXd d = K.partialPivLu().solve(rhs);
                dx = d.head(f.n);
            } else {
                Eigen::LLT<Eigen::MatrixXd> llt(H);
                if (llt.info() == Eigen::Success) {
                    dx = llt.solve(-g);
                } else {
                    H.diagonal().array() += 1e-12 * H.diagonal().cwiseAbs().maxCoeff();
                    dx = H.ldlt().solve(-g);
                }
            }
            double dec2 = -g.dot(dx);
            if (!(dec2 > 0)) break;
            if (std::sqrt(dec2) <= 1e-9) break;

            double alpha = std::min(1.0, 0.99 * max_feasible_step(f, x, dx));
            double now = fobj(x) + mu * barrier_value(f, x).value;
            int bt = 0;
            for (; bt < 60; ++bt) {
                Eigen::VectorXd xn = x + alpha * dx;
                BarrierEval ev = barrier_value(f, xn);
                if (ev.interior && fobj(xn) + mu * ev.value <= now + 0.01 * alpha * g.dot(dx))
                    break;
                alpha *= 0.5;
            }
            if (bt == 60) break;
            x += alpha * dx;
            if (std::sqrt(dec2) <= 1e-7 && alpha > 0.9) break;
        }
        double gap_bound = mu * nu;
        if (gap_bound <= tol * std::max(1.0, std::abs(fobj(x)))) {
            sol.status = Status::Optimal;
            sol.x = x;
            sol.objective = fobj(x) + f.offset;
            sol.tol_achieved = gap_bound / std::max(1.0, std::abs(fobj(x)));
            sol.iterations = total_newton;
            return sol;
        }
        mu *= 0.15;
    }

    sol.status = Status::NumericalFailure;
    return sol;
}

} // namespace dropf::conic

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

// Primal-dual predictor-corrector interior-point method with Nesterov-Todd
// scalings over products of nonnegative orthants and second-order cones:
//
//     minimize    0.5 x'Px + c'x
//     subject to  A x = b,   G x + s = h,   s in K,  z in K
//
// The per-iteration Newton systems are solved through one quasi-definite
// KKT factorization (sparse LDL^T with static regularization and iterative
// refinement against the unregularized operator).

#include "dropf/conic.hpp"
#include "conic_internal.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace dropf::conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Block {
    bool soc;   // false: one nonnegative entry, true: SOC block
    int offset; // first row in the cone vector
    int dim;
};

std::vector<Block> make_blocks(int nonneg, const std::vector<int>& soc_dims) {
    std::vector<Block> blocks;
    blocks.reserve(nonneg + soc_dims.size());
    for (int i = 0; i < nonneg; ++i) blocks.push_back({false, i, 1});
    int off = nonneg;
    for (int d : soc_dims) {
        blocks.push_back({true, off, d});
        off += d;
    }
    return blocks;
}

// Smallest "cone eigenvalue": entry for the orthant, v0 - |v1| for a SOC.
double min_eig(const std::vector<Block>& blocks, const Eigen::VectorXd& v) {
    double lo = kInf;
    for (const auto& b : blocks) {
        if (!b.soc) {
            lo = std::min(lo, v[b.offset]);
        } else {
            double tail = v.segment(b.offset + 1, b.dim - 1).norm();
            lo = std::min(lo, v[b.offset] - tail);
        }
    }
    return lo;
}

void add_identity(const std::vector<Block>& blocks, Eigen::VectorXd& v, double t) {
    for (const auto& b : blocks) v[b.offset] += t;
}

// Largest step keeping v + t*dv inside the cone.
double max_step(const std::vector<Block>& blocks, const Eigen::VectorXd& v,
                const Eigen::VectorXd& dv) {
    double t = kInf;
    for (const auto& b : blocks) {
        if (!b.soc) {
            if (dv[b.offset] < 0) t = std::min(t, -v[b.offset] / dv[b.offset]);
            continue;
        }
        auto v1 = v.segment(b.offset + 1, b.dim - 1);
        auto d1 = dv.segment(b.offset + 1, b.dim - 1);
        double v0 = v[b.offset], d0 = dv[b.offset];
        // roots of (v0+t d0)^2 - |v1+t d1|^2 = 0
        double a = d0 * d0 - d1.squaredNorm();
        double bq = 2.0 * (v0 * d0 - v1.dot(d1));
        double cq = v0 * v0 - v1.squaredNorm(); // >= 0 inside
        double root = kInf;
        if (std::abs(a) < 1e-300) {
            if (bq < 0) root = -cq / bq;
        } else {
            double disc = bq * bq - 4 * a * cq;
            if (disc >= 0) {
                double sq = std::sqrt(disc);
                // numerically stable pair
                double q = -0.5 * (bq + (bq >= 0 ? sq : -sq));
                double r1 = q / a;
                double r2 = (q != 0.0) ? cq / q : kInf;
                if (r1 > r2) std::swap(r1, r2);
                if (r1 > 1e-300) root = r1;
                else if (r2 > 1e-300) root = r2;
            }
        }
        t = std::min(t, root);
    }
    return t;
}

// Nesterov-Todd scaling state for one composite cone.
struct Scaling {
    // orthant: w2[i] = s_i/z_i; SOC block: eta2 and the unit-J point wbar
    Eigen::VectorXd nn_w2;                // per nonneg row
    std::vector<double> soc_eta2;         // per SOC block
    std::vector<Eigen::VectorXd> soc_wbar; // per SOC block
    Eigen::VectorXd lambda;               // scaled point, full length
};

Scaling compute_scaling(const std::vector<Block>& blocks, int nonneg,
                        const Eigen::VectorXd& s, const Eigen::VectorXd& z) {
    Scaling sc;
    sc.nn_w2.resize(nonneg);
    sc.lambda.resize(s.size());
    for (const auto& b : blocks) {
        if (!b.soc) {
            sc.nn_w2[b.offset] = s[b.offset] / z[b.offset];
            sc.lambda[b.offset] = std::sqrt(s[b.offset] * z[b.offset]);
            continue;
        }
        auto sb = s.segment(b.offset, b.dim);
        auto zb = z.segment(b.offset, b.dim);
        double a = std::sqrt(sb[0] * sb[0] - sb.tail(b.dim - 1).squaredNorm());
        double bb = std::sqrt(zb[0] * zb[0] - zb.tail(b.dim - 1).squaredNorm());
        Eigen::VectorXd sbar = sb / a, zbar = zb / bb;
        double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
        Eigen::VectorXd wbar(b.dim);
        wbar[0] = (sbar[0] + zbar[0]) / (2 * gamma);
        wbar.tail(b.dim - 1) =
            (sbar.tail(b.dim - 1) - zbar.tail(b.dim - 1)) / (2 * gamma);
        sc.soc_eta2.push_back(a / bb);
        sc.soc_wbar.push_back(wbar);
        // lambda = W z = eta * V(wbar) z
        double eta = std::sqrt(a / bb);
        auto z1 = zb.tail(b.dim - 1);
        double w1z1 = wbar.tail(b.dim - 1).dot(z1);
        Eigen::VectorXd lam(b.dim);
        lam[0] = wbar[0] * zb[0] + w1z1;
        lam.tail(b.dim - 1) =
            zb[0] * wbar.tail(b.dim - 1) + z1 + wbar.tail(b.dim - 1) * (w1z1 / (1.0 + wbar[0]));
        sc.lambda.segment(b.offset, b.dim) = eta * lam;
    }
    return sc;
}

// v -> W v  (sign = +1) or W^{-1} v (sign = -1); V(wbar)^{-1} = J V(wbar) J.
void apply_w(const std::vector<Block>& blocks, const Scaling& sc, const Eigen::VectorXd& in,
             Eigen::VectorXd& out, int sign) {
    out.resize(in.size());
    int soc_idx = 0;
    for (const auto& b : blocks) {
        if (!b.soc) {
            double w = std::sqrt(sc.nn_w2[b.offset]);
            out[b.offset] = sign > 0 ? in[b.offset] * w : in[b.offset] / w;
            continue;
        }
        const Eigen::VectorXd& wbar = sc.soc_wbar[soc_idx];
        double eta = std::sqrt(sc.soc_eta2[soc_idx]);
        ++soc_idx;
        auto v1 = in.segment(b.offset + 1, b.dim - 1);
        double v0 = in[b.offset];
        Eigen::VectorXd w1 = wbar.tail(b.dim - 1);
        if (sign < 0) w1 = -w1; // J V J flips the off-diagonal coupling
        double w1v1 = w1.dot(v1);
        double scale = sign > 0 ? eta : 1.0 / eta;
        out[b.offset] = scale * (wbar[0] * v0 + w1v1);
        out.segment(b.offset + 1, b.dim - 1) =
            scale * (v0 * w1 + v1 + w1 * (w1v1 / (1.0 + wbar[0])));
    }
}

// v -> W^2 v  = eta^2 (2 wbar wbar' - J) v for SOC, diag(w2) for the orthant.
void apply_w2(const std::vector<Block>& blocks, const Scaling& sc, const Eigen::VectorXd& in,
              Eigen::VectorXd& out) {
    out.resize(in.size());
    int soc_idx = 0;
    for (const auto& b : blocks) {
        if (!b.soc) {
            out[b.offset] = sc.nn_w2[b.offset] * in[b.offset];
            continue;
        }
        const Eigen::VectorXd& wbar = sc.soc_wbar[soc_idx];
        double eta2 = sc.soc_eta2[soc_idx];
        ++soc_idx;
        auto vb = in.segment(b.offset, b.dim);
        double wv = wbar.dot(vb);
        Eigen::VectorXd jv(b.dim);
        jv[0] = vb[0];
        jv.tail(b.dim - 1) = -vb.tail(b.dim - 1);
        out.segment(b.offset, b.dim) = eta2 * (2.0 * wv * wbar - jv);
    }
}

// Jordan product u o v.
void jprod(const std::vector<Block>& blocks, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
           Eigen::VectorXd& out) {
    out.resize(u.size());
    for (const auto& b : blocks) {
        if (!b.soc) {
            out[b.offset] = u[b.offset] * v[b.offset];
            continue;
        }
        auto ub = u.segment(b.offset, b.dim);
        auto vb = v.segment(b.offset, b.dim);
        out[b.offset] = ub.dot(vb);
        out.segment(b.offset + 1, b.dim - 1) =
            ub[0] * vb.tail(b.dim - 1) + vb[0] * ub.tail(b.dim - 1);
    }
}

// Solve lambda o u = d for u.
void jdiv(const std::vector<Block>& blocks, const Eigen::VectorXd& lambda,
          const Eigen::VectorXd& d, Eigen::VectorXd& out) {
    out.resize(d.size());
    for (const auto& b : blocks) {
        if (!b.soc) {
            out[b.offset] = d[b.offset] / lambda[b.offset];
            continue;
        }
        auto l1 = lambda.segment(b.offset + 1, b.dim - 1);
        auto d1 = d.segment(b.offset + 1, b.dim - 1);
        double l0 = lambda[b.offset], d0 = d[b.offset];
        double det = l0 * l0 - l1.squaredNorm();
        double u0 = (l0 * d0 - l1.dot(d1)) / det;
        out[b.offset] = u0;
        out.segment(b.offset + 1, b.dim - 1) = (d1 - u0 * l1) / l0;
    }
}

} // namespace

IpmSolver::IpmSolver(const Problem& p) : p_(&p) {
    if (!p.finalized()) throw ValidationError("conic: solve before finalize()");
    if (!p.psd_blocks().empty())
        throw ValidationError("conic: IpmSolver does not handle PSD blocks");
}

Solution IpmSolver::solve(const SolveOptions& opts) {
    const Problem& pr = *p_;
    const auto& P = pr.P();
    const auto& A = pr.A();
    const auto& G = pr.G();
    const Eigen::VectorXd& b = pr.b();
    const Eigen::VectorXd& h = pr.h();
    const Eigen::VectorXd& c = pr.c();
    const int n = pr.num_vars();
    const int p = static_cast<int>(A.rows());
    const int m = static_cast<int>(G.rows());
    nK_ = n + p + m;

    Solution sol;

    auto blocks = make_blocks(pr.num_nonneg(), pr.soc_dims());
    const double nu = static_cast<double>(blocks.size());

    const double delta = 1e-10;

    // KKT operator without regularization, for iterative refinement.
    auto kkt_apply = [&](const Eigen::VectorXd& v, const Scaling* sc) {
        Eigen::VectorXd out(nK_);
        auto vx = v.head(n);
        auto vy = v.segment(n, p);
        auto vz = v.tail(m);
        out.head(n) = P.selfadjointView<Eigen::Upper>() * vx + A.transpose() * vy + G.transpose() * vz;
        out.segment(n, p) = A * vx;
        Eigen::VectorXd w2vz;
        if (sc) apply_w2(blocks, *sc, vz, w2vz);
        else w2vz = vz;
        out.tail(m) = G * vx - w2vz;
        return out;
    };

    // Sparse symmetric KKT with the -(W^2) block refreshed in place.
    if (!analyzed_) {
        std::vector<Eigen::Triplet<double>> trips;
        for (int k = 0; k < P.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(P, k); it; ++it)
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        for (int i = 0; i < n; ++i) trips.emplace_back(i, i, delta);
        for (int k = 0; k < A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
                trips.emplace_back(n + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
                trips.emplace_back(static_cast<int>(it.col()), n + static_cast<int>(it.row()), it.value());
            }
        for (int i = 0; i < p; ++i) trips.emplace_back(n + i, n + i, -delta);
        for (int k = 0; k < G.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(G, k); it; ++it) {
                trips.emplace_back(n + p + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
                trips.emplace_back(static_cast<int>(it.col()), n + p + static_cast<int>(it.row()), it.value());
            }
        // W^2 block: orthant diagonal plus dense SOC blocks.
        for (const auto& blk : blocks) {
            int r0 = n + p + blk.offset;
            for (int i = 0; i < blk.dim; ++i)
                for (int j = (blk.soc ? 0 : i); j < blk.dim; ++j) {
                    if (!blk.soc && i != j) continue;
                    trips.emplace_back(r0 + i, r0 + j, -1.0);
                }
        }
        kkt_.resize(nK_, nK_);
        kkt_.setFromTriplets(trips.begin(), trips.end());
        kkt_.makeCompressed();
        // cache value slots of the W^2 entries
        w2_slots_.clear();
        for (const auto& blk : blocks) {
            int r0 = n + p + blk.offset;
            for (int i = 0; i < blk.dim; ++i)
                for (int j = (blk.soc ? 0 : i); j <= (blk.soc ? blk.dim - 1 : i); ++j)
                    w2_slots_.push_back(&kkt_.coeffRef(r0 + i, r0 + j));
        }
        ldlt_.analyzePattern(kkt_);
        analyzed_ = true;
    }

    auto refresh_w2 = [&](const Scaling* sc, double dreg) {
        size_t slot = 0;
        int soc_idx = 0;
        for (const auto& blk : blocks) {
            if (!blk.soc) {
                double w2 = sc ? sc->nn_w2[blk.offset] : 1.0;
                *w2_slots_[slot++] = -(w2 + dreg);
                continue;
            }
            Eigen::MatrixXd W2;
            if (sc) {
                const Eigen::VectorXd& wb = sc->soc_wbar[soc_idx];
                double eta2 = sc->soc_eta2[soc_idx];
                Eigen::MatrixXd Jm = -Eigen::MatrixXd::Identity(blk.dim, blk.dim);
                Jm(0, 0) = 1.0;
                W2 = eta2 * (2.0 * wb * wb.transpose() - Jm);
            } else {
                W2 = Eigen::MatrixXd::Identity(blk.dim, blk.dim);
            }
            ++soc_idx;
            for (int i = 0; i < blk.dim; ++i)
                for (int j = 0; j < blk.dim; ++j)
                    *w2_slots_[slot++] = -W2(i, j) - (i == j ? dreg : 0.0);
        }
    };

    auto factor = [&](const Scaling* sc) -> bool {
        double dreg = delta;
        for (int attempt = 0; attempt < 4; ++attempt) {
            refresh_w2(sc, dreg);
            ldlt_.factorize(kkt_);
            if (ldlt_.info() == Eigen::Success) return true;
            dreg *= 1e3;
        }
        return false;
    };

    auto kkt_solve = [&](const Eigen::VectorXd& rhs, const Scaling* sc) {
        Eigen::VectorXd x = ldlt_.solve(rhs);
        for (int it = 0; it < 2; ++it) {
            Eigen::VectorXd r = rhs - kkt_apply(x, sc);
            if (r.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) break;
            x += ldlt_.solve(r);
        }
        return x;
    };

    // ---- starting point -----------------------------------------------------
    if (!factor(nullptr)) {
        sol.status = Status::NumericalFailure;
        return sol;
    }
    Eigen::VectorXd rhs(nK_);
    rhs.head(n) = -c;
    rhs.segment(n, p) = b;
    rhs.tail(m) = h;
    Eigen::VectorXd init = kkt_solve(rhs, nullptr);
    Eigen::VectorXd x = init.head(n);
    Eigen::VectorXd y = init.segment(n, p);
    Eigen::VectorXd z = init.tail(m);
    Eigen::VectorXd s = -z;

    double es = min_eig(blocks, s);
    if (es < 1e-8 * std::max(1.0, s.lpNorm<Eigen::Infinity>())) add_identity(blocks, s, 1.0 - es);
    double ez = min_eig(blocks, z);
    if (ez < 1e-8 * std::max(1.0, z.lpNorm<Eigen::Infinity>())) add_identity(blocks, z, 1.0 - ez);

    const double bnorm = std::max(1.0, b.size() ? b.lpNorm<Eigen::Infinity>() : 0.0);
    const double hnorm = std::max(1.0, h.size() ? h.lpNorm<Eigen::Infinity>() : 0.0);
    const double cnorm = std::max(1.0, c.lpNorm<Eigen::Infinity>());

    Eigen::VectorXd rx(n), ry(p), rz(m), ds(m), dz(m), u(m), v(m), d(m), lam2(m), rhs3(m);
    double last_alpha = 1.0;
    int stall = 0;

    for (int iter = 0; iter <= opts.max_iter; ++iter) {
        rx = P.selfadjointView<Eigen::Upper>() * x + c + A.transpose() * y + G.transpose() * z;
        ry = A * x - b;
        rz = G * x + s - h;
        double gap = s.dot(z);
        double pobj = 0.5 * x.dot(P.selfadjointView<Eigen::Upper>() * x) + c.dot(x);
        double pres = std::max(p ? ry.lpNorm<Eigen::Infinity>() / bnorm : 0.0,
                               m ? rz.lpNorm<Eigen::Infinity>() / hnorm : 0.0);
        double dres = rx.lpNorm<Eigen::Infinity>() / cnorm;
        double relgap = gap / std::max(1.0, std::abs(pobj));

        if (opts.verbose)
            std::cerr << "ipm iter " << iter << " pobj " << pobj << " gap " << gap << " pres "
                      << pres << " dres " << dres << "\n";

        if (pres <= opts.tol && dres <= opts.tol && relgap <= opts.tol) {
            sol.status = Status::Optimal;
            sol.x = x;
            sol.objective = pobj + pr.offset();
            sol.tol_achieved = std::max({pres, dres, relgap});
            sol.iterations = iter;
            return sol;
        }
        if (iter == opts.max_iter || stall >= 3) break;

        Scaling sc = compute_scaling(blocks, pr.num_nonneg(), s, z);
        if (!sc.lambda.allFinite() || !factor(&sc)) {
            sol.status = Status::NumericalFailure;
            return sol;
        }
        double mu = gap / nu;

        // predictor
        rhs.head(n) = -rx;
        rhs.segment(n, p) = -ry;
        rhs.tail(m) = -rz + s;
        Eigen::VectorXd aff = kkt_solve(rhs, &sc);
        Eigen::VectorXd dx_a = aff.head(n);
        Eigen::VectorXd dz_a = aff.tail(m);
        Eigen::VectorXd ds_a = -rz - G * dx_a;

        double alpha_aff = std::min({1.0, max_step(blocks, s, ds_a), max_step(blocks, z, dz_a)});
        double gap_aff = (s + alpha_aff * ds_a).dot(z + alpha_aff * dz_a);
        double sigma = std::clamp(std::pow(gap_aff / gap, 3.0), 0.0, 1.0);

        // corrector
        apply_w(blocks, sc, ds_a, u, -1); // W^{-1} ds
        apply_w(blocks, sc, dz_a, v, +1); // W dz
        jprod(blocks, sc.lambda, sc.lambda, lam2);
        jprod(blocks, u, v, d);
        d = -lam2 - d;
        add_identity(blocks, d, sigma * mu);
        jdiv(blocks, sc.lambda, d, u); // u = lambda \ d
        apply_w(blocks, sc, u, rhs3, +1);
        rhs.head(n) = -rx;
        rhs.segment(n, p) = -ry;
        rhs.tail(m) = -rz - rhs3;
        Eigen::VectorXd dir = kkt_solve(rhs, &sc);
        Eigen::VectorXd dx = dir.head(n);
        Eigen::VectorXd dy = dir.segment(n, p);
        dz = dir.tail(m);
        ds = -rz - G * dx;

        double alpha = std::min({1.0, max_step(blocks, s, ds), max_step(blocks, z, dz)});
        alpha = std::min(1.0, 0.99 * alpha);
        for (int k = 0; k < 40; ++k) {
            if (min_eig(blocks, s + alpha * ds) > 0 && min_eig(blocks, z + alpha * dz) > 0) break;
            alpha *= 0.9;
        }
        x += alpha * dx;
        y += alpha * dy;
        z += alpha * dz;
        s += alpha * ds;
        stall = (alpha < 1e-9) ? stall + 1 : 0;
        last_alpha = alpha;
    }
    (void)last_alpha;

    // ---- failure classification ---------------------------------------------
    // Primal infeasibility certificate: z in K*, A'y + G'z ~ 0, b'y + h'z < 0.
    {
        double scale = y.lpNorm<Eigen::Infinity>() + z.lpNorm<Eigen::Infinity>();
        if (scale > 0 && min_eig(blocks, z) > -1e-9 * scale) {
            Eigen::VectorXd resid = A.transpose() * y + G.transpose() * z;
            double val = (p ? b.dot(y) : 0.0) + h.dot(z);
            if (resid.lpNorm<Eigen::Infinity>() <= 1e-7 * scale && val < -1e-7 * scale) {
                sol.status = Status::Infeasible;
                return sol;
            }
        }
    }
    // Unboundedness: objective plunging along a feasible direction.
    {
        double pobj = 0.5 * x.dot(P.selfadjointView<Eigen::Upper>() * x) + c.dot(x);
        if (pobj < -1e13) {
            sol.status = Status::Unbounded;
            return sol;
        }
    }
    // Elastic margin probe: minimize t with every cone row relaxed by t e.
    // A strictly positive optimal margin proves primal infeasibility. The
    // probe itself always has interior points, so it will not recurse here.
    if (classify_failures_) {
        if (p > 0) { // inconsistent equalities are infeasible outright
            Eigen::MatrixXd Ad(A);
            Eigen::VectorXd xls = Ad.colPivHouseholderQr().solve(b);
            if ((A * xls - b).lpNorm<Eigen::Infinity>() > 1e-7 * bnorm) {
                sol.status = Status::Infeasible;
                return sol;
            }
        }
        Problem elastic;
        int vx = elastic.add_vars(n);
        int vt = elastic.add_var("margin");
        elastic.add_lin_cost(vt, 1.0);
        std::vector<AffExpr> eqs(p);
        for (int r = 0; r < p; ++r) eqs[r].constant = -b[r];
        for (int k = 0; k < A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
                eqs[it.row()].add(vx + static_cast<int>(it.col()), it.value());
        for (auto& e : eqs) elastic.add_eq(e);

        std::vector<AffExpr> rows(m);
        for (int r = 0; r < m; ++r) rows[r].constant = h[r];
        for (int k = 0; k < G.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(G, k); it; ++it)
                rows[it.row()].add(vx + static_cast<int>(it.col()), -it.value());
        // keep the margin bounded below so the probe is never unbounded
        AffExpr tlb = AffExpr::var(vt);
        tlb.constant = 1.0 + hnorm;
        elastic.add_nonneg(tlb);
        for (int r = 0; r < pr.num_nonneg(); ++r) {
            rows[r].add(vt, 1.0);
            elastic.add_nonneg(rows[r]);
        }
        int off = pr.num_nonneg();
        for (int d : pr.soc_dims()) {
            rows[off].add(vt, 1.0);
            std::vector<AffExpr> blk(rows.begin() + off, rows.begin() + off + d);
            elastic.add_soc(blk);
            off += d;
        }
        elastic.finalize();
        IpmSolver esolver(elastic);
        esolver.classify_failures_ = false;
        SolveOptions eopts;
        eopts.tol = 1e-9;
        Solution es = esolver.solve(eopts);
        if (es.status == Status::Optimal && es.objective > 1e-6 * hnorm) {
            sol.status = Status::Infeasible;
            return sol;
        }
    }
    sol.status = Status::NumericalFailure;
    return sol;
}

Solution solve(const Problem& p, const SolveOptions& opts) {
    if (!p.finalized()) throw ValidationError("conic: solve before finalize()");
    if (!p.psd_blocks().empty()) return solve_barrier(p, opts);
    IpmSolver solver(p);
    return solver.solve(opts);
}

} // namespace dropf::conic

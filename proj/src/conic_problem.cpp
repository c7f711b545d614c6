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

#include "dropf/conic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace dropf::conic {

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

void Problem::check_var(int v) const {
    if (v < 0 || v >= n_)
        throw ValidationError("conic: reference to undeclared variable " + std::to_string(v));
}

int Problem::add_var(const std::string& name) {
    names_.push_back(name.empty() ? "x" + std::to_string(n_) : name);
    return n_++;
}

int Problem::add_vars(int count, const std::string& prefix) {
    int first = n_;
    for (int i = 0; i < count; ++i)
        add_var(prefix.empty() ? std::string{} : prefix + std::to_string(i));
    return first;
}

void Problem::add_lin_cost(int var, double coeff) {
    check_var(var);
    if (c_dense_.size() < n_) {
        Eigen::VectorXd grown = Eigen::VectorXd::Zero(n_);
        grown.head(c_dense_.size()) = c_dense_;
        c_dense_ = std::move(grown);
    }
    c_dense_[var] += coeff;
}

void Problem::add_quad_cost(int vi, int vj, double coeff) {
    check_var(vi);
    check_var(vj);
    // stored symmetrically; 0.5 x'Px picks up exactly `coeff * x_vi * x_vj`
    if (vi == vj) {
        p_terms_.emplace_back(vi, vi, 2.0 * coeff);
    } else {
        p_terms_.emplace_back(vi, vj, coeff);
        p_terms_.emplace_back(vj, vi, coeff);
    }
}

RowHandle Problem::add_eq(const AffExpr& e) {
    for (auto& [v, co] : e.terms) check_var(v);
    eq_rows_.push_back({e.terms, e.constant});
    return {RowHandle::Kind::Eq, static_cast<int>(eq_rows_.size() - 1)};
}

RowHandle Problem::add_nonneg(const AffExpr& e) {
    for (auto& [v, co] : e.terms) check_var(v);
    nn_rows_.push_back({e.terms, e.constant});
    return {RowHandle::Kind::NonNeg, static_cast<int>(nn_rows_.size() - 1)};
}

void Problem::add_soc(const std::vector<AffExpr>& entries) {
    if (entries.size() < 2) throw ValidationError("conic: SOC blocks need dimension >= 2");
    std::vector<Row> rows;
    for (const auto& e : entries) {
        for (auto& [v, co] : e.terms) check_var(v);
        rows.push_back({e.terms, e.constant});
    }
    soc_rows_.push_back(std::move(rows));
}

void Problem::add_psd_var_block(int start, int side) {
    if (side < 1) throw ValidationError("conic: PSD block side must be >= 1");
    check_var(start);
    check_var(start + svec_dim(side) - 1);
    psd_.push_back({start, side});
}

void Problem::finalize() {
    if (finalized_) return;

    c_ = Eigen::VectorXd::Zero(n_);
    if (c_dense_.size() > 0) c_.head(c_dense_.size()) = c_dense_;

    P_.resize(n_, n_);
    P_.setFromTriplets(p_terms_.begin(), p_terms_.end());
    P_.makeCompressed();

    // Convexity guard: cheap for the sizes this artifact builds.
    if (P_.nonZeros() > 0 && n_ <= 512) {
        Eigen::MatrixXd Pd(P_);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pd, Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        if (lo < -1e-9 * scale)
            throw ValidationError("conic: quadratic objective is not PSD (min eig " +
                                  std::to_string(lo) + ")");
    }

    // equalities: sum a x + k = 0   ->  A x = -k
    {
        std::vector<Eigen::Triplet<double>> trips;
        b_ = Eigen::VectorXd::Zero(static_cast<int>(eq_rows_.size()));
        for (size_t r = 0; r < eq_rows_.size(); ++r) {
            for (auto& [v, co] : eq_rows_[r].terms)
                trips.emplace_back(static_cast<int>(r), v, co);
            b_[static_cast<int>(r)] = -eq_rows_[r].constant;
        }
        A_.resize(static_cast<int>(eq_rows_.size()), n_);
        A_.setFromTriplets(trips.begin(), trips.end());
        A_.makeCompressed();
    }

    // cone rows: expr in K  <=>  s = expr(x) = Gx*(-1)... we store s = h - Gx,
    // so G = -coeffs and h = constant.
    {
        nonneg_rows_ = static_cast<int>(nn_rows_.size());
        int m = nonneg_rows_;
        soc_dims_.clear();
        for (auto& blk : soc_rows_) {
            soc_dims_.push_back(static_cast<int>(blk.size()));
            m += static_cast<int>(blk.size());
        }
        std::vector<Eigen::Triplet<double>> trips;
        h_ = Eigen::VectorXd::Zero(m);
        int r = 0;
        auto put = [&](const Row& row) {
            for (auto& [v, co] : row.terms) trips.emplace_back(r, v, -co);
            h_[r] = row.constant;
            ++r;
        };
        for (auto& row : nn_rows_) put(row);
        for (auto& blk : soc_rows_)
            for (auto& row : blk) put(row);
        G_.resize(m, n_);
        G_.setFromTriplets(trips.begin(), trips.end());
        G_.makeCompressed();
    }

    finalized_ = true;
}

void Problem::set_row_constant(RowHandle rh, double constant) {
    if (!finalized_) throw ValidationError("conic: set_row_constant before finalize");
    if (rh.kind == RowHandle::Kind::Eq) {
        eq_rows_[rh.index].constant = constant;
        b_[rh.index] = -constant;
    } else {
        nn_rows_[rh.index].constant = constant;
        h_[rh.index] = constant;
    }
}

// ---- svec helpers -----------------------------------------------------------

int svec_dim(int side) { return side * (side + 1) / 2; }

Eigen::VectorXd svec(const Eigen::MatrixXd& S) {
    const int n = static_cast<int>(S.rows());
    Eigen::VectorXd v(svec_dim(n));
    const double r2 = std::sqrt(2.0);
    int k = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) v[k++] = (i == j) ? S(i, j) : r2 * 0.5 * (S(i, j) + S(j, i));
    return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v) {
    // invert side*(side+1)/2 = size
    int n = static_cast<int>(std::round((std::sqrt(8.0 * static_cast<double>(v.size()) + 1.0) - 1.0) / 2.0));
    Eigen::MatrixXd S(n, n);
    const double ir2 = 1.0 / std::sqrt(2.0);
    int k = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            double x = v[k++];
            if (i == j) S(i, j) = x;
            else S(i, j) = S(j, i) = ir2 * x;
        }
    return S;
}

} // namespace dropf::conic

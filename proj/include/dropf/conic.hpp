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
#include <Eigen/Sparse>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dropf/common.hpp"

namespace dropf::conic {

/// Affine expression  sum_i coeff_i * x_i + constant.
struct AffExpr {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;

    AffExpr() = default;
    AffExpr(double k) : constant(k) {} // NOLINT: implicit by design
    static AffExpr var(int i, double coeff = 1.0) {
        AffExpr e;
        e.terms.emplace_back(i, coeff);
        return e;
    }
    AffExpr& add(int i, double coeff) {
        terms.emplace_back(i, coeff);
        return *this;
    }
};

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string to_string(Status s);

struct Solution {
    Status status = Status::NumericalFailure;
    Eigen::VectorXd x;          // primal values, present iff status == Optimal
    double objective = std::numeric_limits<double>::quiet_NaN();
    double tol_achieved = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

struct SolveOptions {
    double tol = 1e-8; // relative feasibility / gap target
    int max_iter = 100;
    bool verbose = false;
    // Optional strictly feasible starting hint for the barrier path.
    std::optional<Eigen::VectorXd> x0;
};

/// Handle to a row whose right-hand side can be retargeted between solves.
struct RowHandle {
    enum class Kind { Eq, NonNeg } kind = Kind::Eq;
    int index = -1;
};

/// Convex conic program
///     minimize    0.5 x'Px + c'x + offset
///     subject to  A x = b
///                 G x + s = h,   s in R+^l x SOC(d_1) x ... x SOC(d_k)
///                 smat(x[blk])  PSD   for each declared matrix-variable block
///
/// Built incrementally, then finalized; immutable afterwards. The quadratic
/// objective must be positive semidefinite (convex) — finalize() verifies it
/// for problems small enough to check densely.
class Problem {
  public:
    int add_var(const std::string& name = {});
    int add_vars(int count, const std::string& prefix = {});
    int num_vars() const { return n_; }

    void add_lin_cost(int var, double coeff);
    void add_quad_cost(int vi, int vj, double coeff); // adds coeff * x_vi * x_vj
    void add_offset(double k) { offset_ += k; }

    /// expr == 0
    RowHandle add_eq(const AffExpr& expr);
    /// expr >= 0
    RowHandle add_nonneg(const AffExpr& expr);
    /// ||(e_1..e_{d-1})able|| <= e_0 for the given affine entries (d >= 2)
    void add_soc(const std::vector<AffExpr>& entries);
    /// x[start .. start + side*(side+1)/2) is svec of a PSD matrix
    void add_psd_var_block(int start, int side);

    void finalize();
    bool finalized() const { return finalized_; }

    // Standard-form views (valid after finalize()).
    const Eigen::SparseMatrix<double>& P() const { return P_; }
    const Eigen::SparseMatrix<double>& A() const { return A_; }
    const Eigen::SparseMatrix<double>& G() const { return G_; }
    const Eigen::VectorXd& b() const { return b_; }
    const Eigen::VectorXd& h() const { return h_; }
    const Eigen::VectorXd& c() const { return c_; }
    double offset() const { return offset_; }
    int num_nonneg() const { return nonneg_rows_; }
    const std::vector<int>& soc_dims() const { return soc_dims_; }
    struct PsdVarBlock {
        int start;
        int side;
    };
    const std::vector<PsdVarBlock>& psd_blocks() const { return psd_; }
    const std::vector<std::string>& var_names() const { return names_; }

    /// Retarget the constant term of an equality / nonneg row (the affine
    /// expression's `constant`). Allowed after finalize; the structure is
    /// untouched, so cached factorizations stay valid.
    void set_row_constant(RowHandle rh, double constant);

  private:
    friend class IpmSolver;
    int n_ = 0;
    std::vector<std::string> names_;
    std::vector<Eigen::Triplet<double>> p_terms_;
    Eigen::VectorXd c_dense_;
    double offset_ = 0.0;

    struct Row {
        std::vector<std::pair<int, double>> terms;
        double constant;
    };
    std::vector<Row> eq_rows_;
    std::vector<Row> nn_rows_;
    std::vector<std::vector<Row>> soc_rows_;
    std::vector<PsdVarBlock> psd_;

    bool finalized_ = false;
    Eigen::SparseMatrix<double> P_, A_, G_;
    Eigen::VectorXd b_, h_, c_;
    std::vector<int> soc_dims_;
    int nonneg_rows_ = 0;

    void check_var(int v) const;
};

/// Solves a finalized problem. Dispatches to the primal-dual interior-point
/// method (LP/QP/SOCP) or, when PSD variable blocks are present, to the dense
/// log-det barrier method.
Solution solve(const Problem& p, const SolveOptions& opts = {});

/// Interior-point solver with a cached symbolic KKT factorization, for
/// repeatedly solving the same structure with retargeted b/h (and optionally
/// c). Not thread-safe; use one instance per thread.
class IpmSolver {
  public:
    explicit IpmSolver(const Problem& p); // problem must outlive the solver
    Solution solve(const SolveOptions& opts = {});

  private:
    const Problem* p_;
    Eigen::SparseMatrix<double> kkt_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Upper> ldlt_;
    std::vector<double*> w2_slots_; // value slots of the -(W^2) block, per cone entry
    bool analyzed_ = false;
    bool classify_failures_ = true; // run the elastic infeasibility probe on failure
    int nK_ = 0;

    void assemble(const std::vector<Eigen::VectorXd>& w2_blocks, double delta);
    friend Solution solve(const Problem&, const SolveOptions&);
};

/// Serializes a finalized problem to the plain-text interchange format
/// documented in docs/conic_dump.md (for external cross-checking).
std::string dump_problem(const Problem& p);

// ---- symmetric-matrix helpers (svec with sqrt(2) off-diagonals) ------------

int svec_dim(int side);
Eigen::VectorXd svec(const Eigen::MatrixXd& S);
Eigen::MatrixXd smat(const Eigen::VectorXd& v);

} // namespace dropf::conic

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

#include "dropf/grid.hpp"

namespace dropf {

/// Cartesian product of per-generator piece centers; point k is row k.
struct InterpolationGrid {
    Eigen::MatrixXd points; // |K|^{|G|} rows, |G| columns (MW)
    int pieces = 0;
    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

/// Splits each generator's operating range into `pieces` equal intervals and
/// takes interval midpoints; errors when pieces^{|G|} exceeds `cap`.
InterpolationGrid make_grid(const GridCase& c, int pieces, long cap = 200000);

/// Convex quadratic surrogate x'Ax + 2B'x + C with A PSD.
struct QuadraticValue {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    double C = 0.0;
    int t = 0;        // stage the values were sampled at
    int scenario = 0; // scenario index j

    static QuadraticValue zero(int dim);
    bool is_zero() const;
    double min_eigenvalue() const;
};

double eval_quadratic(const QuadraticValue& v, const Eigen::VectorXd& x);

struct FitResult {
    QuadraticValue value;
    double residual_inf = 0.0; // max_k |surrogate(x_k) - target_k|
    double residual_l2 = 0.0;
};

/// PSD-constrained least-squares fit of the surrogate to `targets` over the
/// grid, with the tie-breaking ridge 1e-10 (|A|_F^2 + |B|^2 + C^2). Solved by
/// the log-det barrier, then polished on the identified active face.
FitResult fit_quadratic(const InterpolationGrid& grid, const Eigen::VectorXd& targets,
                        double tol = 1e-8);

} // namespace dropf

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

#include <charconv>
#include <sstream>

namespace dropf::conic {

namespace {
std::string num(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}
} // namespace

// Plain-text interchange dump; see docs/conic_dump.md for the grammar.
std::string dump_problem(const Problem& p) {
    if (!p.finalized()) throw ValidationError("conic: dump before finalize()");
    std::ostringstream os;
    os << "DROPF-CONIC 1\n";
    os << "VARS " << p.num_vars() << "\n";
    os << "OFFSET " << num(p.offset()) << "\n";
    for (int i = 0; i < p.c().size(); ++i)
        if (p.c()[i] != 0.0) os << "C " << i << " " << num(p.c()[i]) << "\n";
    const auto& P = p.P();
    for (int k = 0; k < P.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(P, k); it; ++it)
            if (it.row() <= it.col())
                os << "P " << it.row() << " " << it.col() << " " << num(it.value()) << "\n";
    os << "EQ " << p.A().rows() << "\n";
    const auto& A = p.A();
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            os << "A " << it.row() << " " << it.col() << " " << num(it.value()) << "\n";
    for (int r = 0; r < p.b().size(); ++r)
        if (p.b()[r] != 0.0) os << "B " << r << " " << num(p.b()[r]) << "\n";
    os << "CONE NONNEG " << p.num_nonneg() << "\n";
    for (int d : p.soc_dims()) os << "CONE SOC " << d << "\n";
    const auto& G = p.G();
    for (int k = 0; k < G.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(G, k); it; ++it)
            os << "G " << it.row() << " " << it.col() << " " << num(it.value()) << "\n";
    for (int r = 0; r < p.h().size(); ++r)
        if (p.h()[r] != 0.0) os << "H " << r << " " << num(p.h()[r]) << "\n";
    for (const auto& blk : p.psd_blocks()) os << "PSDVAR " << blk.start << " " << blk.side << "\n";
    os << "END\n";
    return os.str();
}

} // namespace dropf::conic

// Copyright 2026 The qhvm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QHVM_LP_H
#define QHVM_LP_H

#include <cstddef>
#include <vector>

#include "qhvm/error.h"
#include "qhvm/rational.h"

namespace qhvm {

template <typename T>
struct LpResult {
    bool feasible = false;
    /// Nonnegative solution of A x = b (one entry per column) when feasible.
    std::vector<T> solution;
    /// When infeasible: y with y.A_j <= 0 for every column j and y.b > 0.
    std::vector<T> farkas;
    std::size_t pivots = 0;
};

/// Phase-I simplex for {x >= 0 : A x = b}, A given as rows. Entering and
/// leaving variables follow Bland's rule, so the returned basic solution is a
/// deterministic function of the column order.
/// Phase I (and optionally Phase II minimizing `objective`) for
/// A x = b, x >= 0, with Bland's rule throughout.
template <typename T>
LpResult<T> solve_feasibility(const std::vector<std::vector<T>> &rows, const std::vector<T> &rhs,
                              const std::vector<T> *objective = nullptr) {
    using Traits = ScalarTraits<T>;
    const std::size_t m = rows.size();
    if (rhs.size() != m) {
        throw Error(ErrorKind::Dimension, "solve_feasibility: rhs length mismatch");
    }
    const std::size_t k = m == 0 ? 0 : rows[0].size();
    for (const auto &r : rows) {
        if (r.size() != k) {
            throw Error(ErrorKind::Dimension, "solve_feasibility: ragged constraint matrix");
        }
    }
    const std::size_t width = k + m + 1;  // originals, artificials, rhs
    std::vector<std::vector<T>> tab(m, std::vector<T>(width, T(0)));
    std::vector<int> flipped(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        flipped[i] = Traits::is_negative(rhs[i]) ? 1 : 0;
        for (std::size_t j = 0; j < k; ++j) {
            tab[i][j] = flipped[i] ? T(-rows[i][j]) : rows[i][j];
        }
        tab[i][k + i] = T(1);
        tab[i][width - 1] = flipped[i] ? T(-rhs[i]) : rhs[i];
    }
    // Reduced costs for minimizing the sum of artificials; last entry holds
    // minus the objective value.
    std::vector<T> cost(width, T(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            cost[j] -= tab[i][j];
        }
        cost[width - 1] -= tab[i][width - 1];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        basis[i] = k + i;
    }

    LpResult<T> result;
    std::vector<char> live(m, 1);
    auto pivot_on = [&](std::size_t leaving, std::size_t entering) {
        T pivot = tab[leaving][entering];
        for (T &v : tab[leaving]) {
            v /= pivot;
        }
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < width; ++j) {
            if (tab[leaving][j] != T(0)) {
                support.push_back(j);
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leaving || Traits::is_zero(tab[i][entering])) {
                continue;
            }
            T factor = tab[i][entering];
            for (std::size_t j : support) {
                tab[i][j] -= factor * tab[leaving][j];
            }
        }
        if (!Traits::is_zero(cost[entering])) {
            T factor = cost[entering];
            for (std::size_t j : support) {
                cost[j] -= factor * tab[leaving][j];
            }
        }
        basis[leaving] = entering;
        ++result.pivots;
    };
    // Runs Bland's rule on `cost` over columns [0, limit).
    auto run = [&](std::size_t limit) {
        while (true) {
            std::size_t entering = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                if (Traits::is_negative(cost[j])) {
                    entering = j;
                    break;
                }
            }
            if (entering == limit) {
                return;
            }
            std::size_t leaving = m;
            T best_ratio(0);
            for (std::size_t i = 0; i < m; ++i) {
                if (!live[i] || !Traits::is_positive(tab[i][entering])) {
                    continue;
                }
                T ratio = tab[i][width - 1] / tab[i][entering];
                bool take = false;
                if (leaving == m) {
                    take = true;
                } else if (Traits::is_zero(T(ratio - best_ratio))) {
                    take = basis[i] < basis[leaving];
                } else {
                    take = ratio < best_ratio;
                }
                if (take) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
            if (leaving == m) {
                throw Error(ErrorKind::Internal, "solve_feasibility: unbounded linear program");
            }
            pivot_on(leaving, entering);
        }
    };
    run(width - 1);

    T phase_one = T(-cost[width - 1]);
    if (Traits::is_positive(phase_one)) {
        result.feasible = false;
        result.farkas.assign(m, T(0));
        for (std::size_t i = 0; i < m; ++i) {
            T y = T(1) - cost[k + i];
            result.farkas[i] = flipped[i] ? T(-y) : y;
        }
        return result;
    }
    result.feasible = true;
    if (objective) {
        if (objective->size() != k) {
            throw Error(ErrorKind::Dimension, "solve_feasibility: objective length mismatch");
        }
        // Drive zero-level artificials out of the basis; rows where that is
        // impossible are redundant and drop out of the ratio test.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < k) {
                continue;
            }
            std::size_t j = 0;
            while (j < k && Traits::is_zero(tab[i][j])) {
                ++j;
            }
            if (j < k) {
                pivot_on(i, j);
            } else {
                live[i] = 0;
            }
        }
        std::fill(cost.begin(), cost.end(), T(0));
        for (std::size_t j = 0; j < k; ++j) {
            cost[j] = (*objective)[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (!live[i] || Traits::is_zero(cost[basis[i]])) {
                continue;
            }
            T factor = cost[basis[i]];
            for (std::size_t j = 0; j < width; ++j) {
                cost[j] -= factor * tab[i][j];
            }
        }
        run(k);
    }
    result.solution.assign(k, T(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < k) {
            T v = tab[i][width - 1];
            if (!Traits::exact && v < T(0)) {
                v = T(0);
            }
            result.solution[basis[i]] = v;
        }
    }
    return result;
}

}  // namespace qhvm

#endif

// SPDX-License-Identifier: Apache-2.0
//
// Verification-only exact solver for the power-allocation LP, by brute-force
// vertex enumeration. Not used by any solver path; tests and the
// `oracle-check` command compare the closed-form allocation against it.
//
// Variables P_1..P_M (decode order). Constraints, all written as a.P <= b:
//   P_m <= P_m^max,  -P_m <= 0,
//   -h_m P_m + t_m sum_{n>m} h_n P_n <= -t_m,  t_m = 2^{R_m^min} - 1.
// A bounded non-empty polytope attains its maximum at a vertex, and every
// vertex is the solution of M linearly independent active constraints.

#ifndef PINCH_TESTING_LP_ORACLE_HPP
#define PINCH_TESTING_LP_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinch/power_allocation.hpp"

namespace pinch::testing {

struct LinearConstraint {
    std::vector<double> a;
    double b = 0.0;
};

inline std::vector<LinearConstraint> power_lp_constraints(std::span<const double> h, std::span<const double> r_min,
                                                          std::span<const double> p_max)
{
    const std::size_t m_users = h.size();
    std::vector<LinearConstraint> rows;
    for (std::size_t m = 0; m < m_users; ++m) {
        LinearConstraint upper{std::vector<double>(m_users, 0.0), p_max[m]};
        upper.a[m] = 1.0;
        rows.push_back(upper);
        LinearConstraint lower{std::vector<double>(m_users, 0.0), 0.0};
        lower.a[m] = -1.0;
        rows.push_back(lower);
        const double t = std::pow(2.0, r_min[m]) - 1.0;
        LinearConstraint qos{std::vector<double>(m_users, 0.0), -t};
        qos.a[m] = -h[m];
        for (std::size_t n = m + 1; n < m_users; ++n) qos.a[n] = t * h[n];
        rows.push_back(qos);
    }
    return rows;
}

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// Returns false for (numerically) singular systems.
inline bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double scale = 0.0;
        for (std::size_t r = col; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
            for (double v : a[r]) scale = std::max(scale, std::abs(v));
        }
        if (std::abs(a[pivot][col]) <= 1e-12 * scale) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return true;
}

inline bool satisfies(const std::vector<LinearConstraint>& rows, std::span<const double> x, double rel_tol)
{
    for (const auto& row : rows) {
        double lhs = 0.0;
        double magnitude = std::abs(row.b);
        for (std::size_t i = 0; i < x.size(); ++i) {
            lhs += row.a[i] * x[i];
            magnitude += std::abs(row.a[i] * x[i]);
        }
        if (lhs > row.b + rel_tol * magnitude + 1e-15) return false;
    }
    return true;
}

/// Maximizes sum_m P_m h_m over the power LP by enumerating all vertices.
/// Practical for M <= 6.
inline AllocationResult lp_oracle(std::span<const double> h, std::span<const double> r_min,
                                  std::span<const double> p_max, double rel_tol = 1e-9)
{
    const std::size_t m_users = h.size();
    if (r_min.size() != m_users || p_max.size() != m_users) throw std::invalid_argument("lp_oracle: length mismatch");
    if (m_users == 0 || m_users > 8) throw std::invalid_argument("lp_oracle: supports 1..8 users");

    const auto rows = power_lp_constraints(h, r_min, p_max);
    const std::size_t n_rows = rows.size();
    AllocationResult best;
    double best_value = -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> pick(m_users);
    for (std::size_t i = 0; i < m_users; ++i) pick[i] = i;
    std::vector<double> x;
    while (true) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t i : pick) {
            a.push_back(rows[i].a);
            b.push_back(rows[i].b);
        }
        if (solve_dense(a, b, x) && satisfies(rows, x, rel_tol)) {
            double value = 0.0;
            for (std::size_t m = 0; m < m_users; ++m) value += x[m] * h[m];
            if (value > best_value) {
                best_value = value;
                best.powers = x;
                best.feasible = true;
            }
        }
        // Next combination in lexicographic order.
        std::size_t i = m_users;
        while (i-- > 0) {
            if (pick[i] < n_rows - m_users + i) break;
        }
        if (i == static_cast<std::size_t>(-1)) break;
        ++pick[i];
        for (std::size_t j = i + 1; j < m_users; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

inline double lp_objective(std::span<const double> powers, std::span<const double> h)
{
    double value = 0.0;
    for (std::size_t m = 0; m < h.size(); ++m) value += powers[m] * h[m];
    return value;
}

} // namespace pinch::testing

#endif // PINCH_TESTING_LP_ORACLE_HPP

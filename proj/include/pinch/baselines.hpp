// SPDX-License-Identifier: Apache-2.0
//
// Comparison schemes: exhaustive 1-D grid search over the antenna position,
// the conventional fixed antenna at (0, 0, d), and optimal orthogonal time
// sharing with the antenna repositioned per slot.

#ifndef PINCH_BASELINES_HPP
#define PINCH_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pinch/channel_geometry.hpp"
#include "pinch/power_allocation.hpp"
#include "pinch/pso.hpp"
#include "pinch/qos_solver.hpp"
#include "pinch/rate_model.hpp"

namespace pinch {

struct GridSpec {
    double step = 0.001;
    SearchBounds bounds;

    void validate() const
    {
        if (!(step > 0.0)) throw std::invalid_argument("GridSpec: step must be > 0");
        if (!(bounds.upper > bounds.lower)) throw std::invalid_argument("GridSpec: need at least two grid points");
    }

    /// Number of points: lower, lower + step, ..., and upper itself.
    std::size_t size() const noexcept
    {
        const auto n = static_cast<std::size_t>(std::floor(bounds.width() / step + 1e-9));
        return at_regular(n) < bounds.upper ? n + 2 : n + 1;
    }

    double at(std::size_t k) const noexcept
    {
        return std::min(at_regular(k), bounds.upper);
    }

private:
    double at_regular(std::size_t k) const noexcept { return bounds.lower + static_cast<double>(k) * step; }
};

struct GridResult {
    double x = 0.0;
    double value = std::numeric_limits<double>::infinity();
};

/// Minimizes over every grid point; ties resolve to the smallest x.
template <typename Objective>
GridResult exhaustive_search(Objective&& objective, const GridSpec& grid)
{
    grid.validate();
    GridResult best{grid.bounds.lower, std::numeric_limits<double>::infinity()};
    const std::size_t n = grid.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double x = grid.at(k);
        const double f = objective(x);
        if (f < best.value) best = {x, f};
    }
    return best;
}

/// Grid over the whole waveguide [0, L].
inline GridSpec waveguide_grid(const SystemParams& params, double step)
{
    return {step, {0.0, params.waveguide_length()}};
}

/// Antenna frozen at x = 0. Full power without QoS, greedy allocation with.
inline Solution fixed_antenna_solution(const Deployment& dep, const SystemParams& params, bool with_qos)
{
    if (!with_qos) return make_solution(dep, dep.p_max(), 0.0, params, true);
    const auto alloc = allocate_at(dep, 0.0, params);
    Solution s = make_solution(dep, alloc.powers_by_user, 0.0, params, alloc.feasible);
    if (s.feasible) s.feasible = qos_satisfied(std::span<const double>(s.rates), dep.r_min());
    return s;
}

/// Grid search over the antenna position with the optimal power allocation at
/// every point; the reference upper bound for the PSO-based solver.
inline Solution noma_exhaustive(const Deployment& dep, const SystemParams& params, const GridSpec& grid, bool with_qos)
{
    if (!with_qos) {
        const auto best = exhaustive_search(bell_sum_objective(dep, dep.p_max(), params), grid);
        return make_solution(dep, dep.p_max(), best.x, params, true);
    }
    AllocationWorkspace ws(dep, params);
    const auto best = exhaustive_search(
        [&](double x) {
            const auto gain = ws.optimal_gain(x);
            return gain ? -*gain : std::numeric_limits<double>::infinity();
        },
        grid);
    if (!std::isfinite(best.value)) {
        const auto alloc = allocate_at(dep, best.x, params);
        return make_solution(dep, alloc.powers_by_user, best.x, params, false);
    }
    const auto alloc = allocate_at(dep, best.x, params);
    Solution s = make_solution(dep, alloc.powers_by_user, best.x, params, alloc.feasible);
    if (s.feasible) s.feasible = qos_satisfied(std::span<const double>(s.rates), dep.r_min());
    return s;
}

struct TdmaSolution {
    Solution solution;
    std::vector<double> slot_x;          // antenna position during each user's slot
    std::vector<double> slot_rate;       // log2(1 + P^max h) in the user's own slot
    std::vector<double> slot_fractions;  // time share of each user
};

/// Orthogonal time sharing, one slot per user, each at full power with the
/// antenna at the grid point maximizing that user's channel. Every user first
/// gets R^min / r_m of the frame; the rest goes to the user with the largest
/// slot rate, which is optimal because the sum rate is linear in the shares.
inline TdmaSolution tdma_exhaustive(const Deployment& dep, const SystemParams& params, const GridSpec& grid)
{
    const std::size_t m_users = dep.size();
    TdmaSolution out;
    out.slot_x.resize(m_users);
    out.slot_rate.resize(m_users);
    out.slot_fractions.assign(m_users, 0.0);

    for (std::size_t m = 0; m < m_users; ++m) {
        const auto& u = dep.users()[m];
        const auto best = exhaustive_search([&](double x) { return -effective_channel(u, x, params); }, grid);
        out.slot_x[m] = best.x;
        out.slot_rate[m] = log2_1p(dep.p_max()[m] * effective_channel(u, best.x, params));
    }

    double used = 0.0;
    for (std::size_t m = 0; m < m_users; ++m) {
        out.slot_fractions[m] = dep.r_min()[m] / out.slot_rate[m];
        used += out.slot_fractions[m];
    }
    const std::size_t best_user =
        static_cast<std::size_t>(std::max_element(out.slot_rate.begin(), out.slot_rate.end()) - out.slot_rate.begin());

    Solution& s = out.solution;
    s.powers = dep.p_max();
    s.x_pin = out.slot_x[best_user];
    if (!leq_tol(used, 1.0)) {
        s.feasible = false;
        s.rates.assign(m_users, 0.0);
        for (std::size_t m = 0; m < m_users; ++m) s.rates[m] = out.slot_fractions[m] * out.slot_rate[m];
        for (double r : s.rates) s.sum_rate += r;
        return out;
    }
    out.slot_fractions[best_user] += std::max(0.0, 1.0 - used);

    // Renormalize so the shares sum to exactly one despite rounding.
    double total = 0.0;
    for (double tau : out.slot_fractions) total += tau;
    for (double& tau : out.slot_fractions) tau /= total;

    const auto rv = tdma_rates(dep, out.slot_fractions, out.slot_x, params);
    s.rates = rv.rates;
    for (double r : s.rates) s.sum_rate += r;
    s.feasible = qos_satisfied(std::span<const double>(s.rates), dep.r_min());
    return out;
}

} // namespace pinch

#endif // PINCH_BASELINES_HPP

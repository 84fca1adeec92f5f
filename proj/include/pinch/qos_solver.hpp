// SPDX-License-Identifier: Apache-2.0
//
// Joint antenna-position / power optimization.
//
// Without QoS targets every user transmits at full power and only the antenna
// position is searched. With targets, power allocation (closed form, antenna
// fixed) and penalized PSO (powers fixed) alternate until the PSO step no
// longer improves the incumbent.

#ifndef PINCH_QOS_SOLVER_HPP
#define PINCH_QOS_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pinch/channel_geometry.hpp"
#include "pinch/power_allocation.hpp"
#include "pinch/pso.hpp"
#include "pinch/random.hpp"
#include "pinch/rate_model.hpp"

namespace pinch {

struct Solution {
    double x_pin = 0.0;
    std::vector<double> powers; // user order, W
    std::vector<double> rates;  // user order, bits/s/Hz
    double sum_rate = 0.0;
    bool feasible = false;
    std::size_t outer_iterations = 0;
};

inline Solution make_solution(const Deployment& dep, std::vector<double> powers_by_user, double x_pin,
                              const SystemParams& params, bool feasible, std::size_t outer_iterations = 0)
{
    Solution s;
    s.x_pin = x_pin;
    s.rates = rates_at(dep, powers_by_user, x_pin, params).by_user();
    s.sum_rate = noma_sum_rate_closed_form(powers_by_user, effective_channels(dep, x_pin, params));
    s.powers = std::move(powers_by_user);
    s.feasible = feasible;
    s.outer_iterations = outer_iterations;
    return s;
}

/// -sum_m P_m / dist_m^2 as a function of x_pin.
inline auto bell_sum_objective(const Deployment& dep, std::span<const double> powers_by_user,
                               const SystemParams& params)
{
    return [&dep, powers_by_user, &params](double x) {
        double total = 0.0;
        for (std::size_t m = 0; m < dep.size(); ++m) {
            total += powers_by_user[m] / squared_distance(dep.users()[m], x, params);
        }
        return -total;
    };
}

inline std::vector<double> user_x_positions(const Deployment& dep)
{
    std::vector<double> xs;
    xs.reserve(dep.size());
    for (const auto& u : dep.users()) xs.push_back(u.x);
    return xs;
}

inline Solution solve_no_qos(const Deployment& dep, const SystemParams& params, const PsoConfig& pso)
{
    const auto bounds = search_bounds(dep, params.waveguide_length());
    const auto seeds = user_x_positions(dep);
    const auto result = pso_minimize(bell_sum_objective(dep, dep.p_max(), params), bounds, pso, seeds);
    return make_solution(dep, dep.p_max(), result.x, params, true, 0);
}

/// Searches for an antenna position at which the QoS targets are reachable
/// within the power budgets, maximizing min_m (P_m^max - P_m^min) / P_m^max.
inline std::optional<double> feasibility_restore(const Deployment& dep, const SystemParams& params,
                                                 const PsoConfig& pso, double current_x)
{
    if (allocate_at(dep, current_x, params).feasible) return current_x;
    const auto bounds = search_bounds(dep, params.waveguide_length());
    auto seeds = user_x_positions(dep);
    seeds.insert(seeds.begin(), current_x);
    PsoConfig cfg = pso;
    cfg.seed = derive_seed(pso.seed, 0xFEA5);
    const auto result = pso_minimize([&](double x) { return -feasibility_margin(dep, x, params); }, bounds, cfg,
                                     seeds);
    if (allocate_at(dep, result.x, params).feasible) return result.x;
    return std::nullopt;
}

struct QosSolverOptions {
    std::size_t max_outer_iterations = 20;
    /// Relative decrease of the penalized objective that counts as improvement.
    double improvement_tol = 1e-8;
    /// When set, receives the incumbent penalized objective after the
    /// initial allocation and after every accepted outer iteration.
    std::vector<double>* incumbent_trace = nullptr;
};

inline Solution solve_with_qos(const Deployment& dep, const SystemParams& params, const PsoConfig& pso,
                               const QosSolverOptions& options = {})
{
    const Solution start = solve_no_qos(dep, params, pso);
    double x = start.x_pin;

    auto alloc = allocate_at(dep, x, params);
    if (!alloc.feasible) {
        const auto restored = feasibility_restore(dep, params, pso, x);
        if (!restored) {
            return make_solution(dep, alloc.powers_by_user, x, params, false, 0);
        }
        x = *restored;
        alloc = allocate_at(dep, x, params);
    }

    const auto bounds = search_bounds(dep, params.waveguide_length());
    const double lambda = default_penalty(dep, params);
    double incumbent = penalized_objective(dep, alloc.powers_by_user, x, params, lambda);
    std::size_t outer = 0;
    if (options.incumbent_trace) options.incumbent_trace->push_back(incumbent);

    while (outer < options.max_outer_iterations) {
        ++outer;
        auto seeds = user_x_positions(dep);
        seeds.insert(seeds.begin(), x);
        PsoConfig cfg = pso;
        cfg.seed = derive_seed(pso.seed, outer);
        const auto& powers = alloc.powers_by_user;
        const auto result = pso_minimize(
            [&](double xp) { return penalized_objective(dep, powers, xp, params, lambda); }, bounds, cfg, seeds);
        if (!(result.value < incumbent - options.improvement_tol * std::abs(incumbent))) break;

        auto next = allocate_at(dep, result.x, params);
        if (!next.feasible) break;
        x = result.x;
        alloc = std::move(next);
        incumbent = penalized_objective(dep, alloc.powers_by_user, x, params, lambda);
        if (options.incumbent_trace) options.incumbent_trace->push_back(incumbent);
    }

    Solution s = make_solution(dep, alloc.powers_by_user, x, params, true, outer);
    s.feasible = qos_satisfied(std::span<const double>(s.rates), dep.r_min());
    return s;
}

} // namespace pinch

#endif // PINCH_QOS_SOLVER_HPP

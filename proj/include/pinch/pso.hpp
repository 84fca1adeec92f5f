// SPDX-License-Identifier: Apache-2.0
//
// Bounded one-dimensional particle swarm optimizer (minimization form) and
// the QoS-penalized antenna-position objective it is run on.
//
// Update rules, per particle i and iteration t:
//   v_i(t+1) = w v_i(t) + c1 r1 (pbest_i - x_i(t)) + c2 r2 (gbest - x_i(t))
//   x_i(t+1) = x_i(t) + v_i(t+1)
// with r1, r2 ~ U[0,1] drawn fresh per particle per iteration, velocity
// clamped to +-velocity_cap * (upper - lower) and position clamped to bounds.
// pbest/gbest are refreshed once per iteration, after all particles moved.

#ifndef PINCH_PSO_HPP
#define PINCH_PSO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinch/channel_geometry.hpp"
#include "pinch/numeric.hpp"
#include "pinch/random.hpp"
#include "pinch/rate_model.hpp"

namespace pinch {

struct PsoConfig {
    std::size_t swarm_size = 30;
    std::size_t max_iterations = 100;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    double tolerance = 1e-8;
    std::uint64_t seed = 1;
    double velocity_cap = 0.5;
    /// Iterations that always run before the relative-change stop may fire.
    std::size_t min_iterations = 10;

    void validate() const
    {
        if (swarm_size < 2) throw std::invalid_argument("PsoConfig: swarm_size must be >= 2");
        if (max_iterations < 1) throw std::invalid_argument("PsoConfig: max_iterations must be >= 1");
        if (!(tolerance > 0.0)) throw std::invalid_argument("PsoConfig: tolerance must be > 0");
        if (!(velocity_cap > 0.0 && velocity_cap <= 1.0)) {
            throw std::invalid_argument("PsoConfig: velocity_cap must be in (0, 1]");
        }
        if (inertia < 0.0 || inertia > 1.0) throw std::invalid_argument("PsoConfig: inertia must be in [0, 1]");
        if (cognitive < 0.0 || social < 0.0) {
            throw std::invalid_argument("PsoConfig: acceleration coefficients must be >= 0");
        }
    }
};

struct SearchBounds {
    double lower = 0.0;
    double upper = 0.0;

    double width() const noexcept { return upper - lower; }
    double clamp(double x) const noexcept { return std::clamp(x, lower, upper); }
};

struct Particle {
    double x = 0.0;
    double v = 0.0;
    double best_x = 0.0;
    double best_f = std::numeric_limits<double>::infinity();
};

struct PsoState {
    std::vector<Particle> particles;
    double gbest_x = 0.0;
    double gbest_f = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;
};

struct PsoResult {
    double x = 0.0;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
};

/// [min_m x_m, max_m x_m] intersected with the waveguide [0, L]. Positions
/// outside this interval are farther from every user than its endpoints.
inline SearchBounds search_bounds(const Deployment& dep, double waveguide_length)
{
    const auto [lo, hi] = std::minmax_element(dep.users().begin(), dep.users().end(),
                                              [](const UserPosition& a, const UserPosition& b) { return a.x < b.x; });
    return {std::min(lo->x, waveguide_length), std::min(hi->x, waveguide_length)};
}

inline double update_velocity(PsoState& state, std::size_t i, const PsoConfig& config, const SearchBounds& bounds,
                              double r1, double r2)
{
    Particle& p = state.particles[i];
    double v = config.inertia * p.v + config.cognitive * r1 * (p.best_x - p.x) + config.social * r2 * (state.gbest_x - p.x);
    const double vmax = config.velocity_cap * bounds.width();
    p.v = std::clamp(v, -vmax, vmax);
    return p.v;
}

/// Draws r1 then r2 from `rng` and applies the velocity rule.
inline double update_velocity(PsoState& state, std::size_t i, const PsoConfig& config, const SearchBounds& bounds,
                              Rng& rng)
{
    const double r1 = rng.uniform01();
    const double r2 = rng.uniform01();
    return update_velocity(state, i, config, bounds, r1, r2);
}

inline double update_position(PsoState& state, std::size_t i, const SearchBounds& bounds)
{
    Particle& p = state.particles[i];
    p.x = bounds.clamp(p.x + p.v);
    return p.x;
}

namespace detail {
struct NoObserver {
    void operator()(const PsoState&) const noexcept {}
};
} // namespace detail

/// Minimizes `objective` over `bounds`. The first min(I, |seeds|) particles
/// start at `seeds` (clamped), the rest uniformly at random, all at rest. `observer` is
/// called with the swarm state after initialization and after every iteration.
template <typename Objective, typename Observer = detail::NoObserver>
PsoResult pso_minimize(Objective&& objective, const SearchBounds& bounds, const PsoConfig& config,
                       std::span<const double> seeds = {}, Observer&& observer = {})
{
    config.validate();
    if (!(bounds.lower <= bounds.upper)) {
        throw std::invalid_argument("pso_minimize: lower bound exceeds upper bound");
    }
    if (bounds.width() == 0.0) {
        return {bounds.lower, objective(bounds.lower), 0, 1};
    }

    Rng rng(config.seed);
    PsoState state;
    state.particles.resize(config.swarm_size);
    std::size_t evaluations = 0;

    for (std::size_t i = 0; i < config.swarm_size; ++i) {
        Particle& p = state.particles[i];
        p.x = i < seeds.size() ? bounds.clamp(seeds[i]) : rng.uniform(bounds.lower, bounds.upper);
        p.v = 0.0;
        p.best_x = p.x;
        p.best_f = objective(p.x);
        ++evaluations;
        if (p.best_f < state.gbest_f) {
            state.gbest_f = p.best_f;
            state.gbest_x = p.x;
        }
    }
    observer(static_cast<const PsoState&>(state));

    for (std::size_t t = 1; t <= config.max_iterations; ++t) {
        const double previous = state.gbest_f;
        for (std::size_t i = 0; i < config.swarm_size; ++i) {
            update_velocity(state, i, config, bounds, rng);
            update_position(state, i, bounds);
            Particle& p = state.particles[i];
            const double f = objective(p.x);
            ++evaluations;
            if (f < p.best_f) {
                p.best_f = f;
                p.best_x = p.x;
            }
        }
        for (const Particle& p : state.particles) {
            if (p.best_f < state.gbest_f) {
                state.gbest_f = p.best_f;
                state.gbest_x = p.best_x;
            }
        }
        state.iteration = t;
        observer(static_cast<const PsoState&>(state));

        if (t >= config.min_iterations) {
            // An iteration that leaves gbest untouched is a stall, not convergence.
            const double change = std::abs(previous - state.gbest_f);
            if (change > 0.0 && change <= config.tolerance * std::max(std::abs(previous), kAbsFloor)) break;
        }
    }
    return {state.gbest_x, state.gbest_f, state.iteration, evaluations};
}

/// lambda = 1e4 * sum_m P_m^max / d^2, which exceeds any attainable value of
/// sum_m P_m / dist_m^2 since dist_m >= d.
inline double default_penalty(const Deployment& dep, const SystemParams& params)
{
    double total = 0.0;
    for (double p : dep.p_max()) total += p;
    const double d = params.antenna_height();
    return 1e4 * total / (d * d);
}

/// Antenna-position objective under fixed powers, in minimization form:
///   -( sum_m P_m / dist_m^2  -  lambda * #{m : R_m < R_m^min} ).
/// Rates use the decode order induced by x_pin. Powers are in user order.
inline double penalized_objective(const Deployment& dep, std::span<const double> powers_by_user, double x_pin,
                                  const SystemParams& params, double lambda)
{
    if (!(lambda > 0.0)) throw std::invalid_argument("penalized_objective: lambda must be > 0");
    double gain = 0.0;
    for (std::size_t m = 0; m < dep.size(); ++m) {
        gain += powers_by_user[m] / squared_distance(dep.users()[m], x_pin, params);
    }
    const auto rv = rates_at(dep, powers_by_user, x_pin, params);
    std::size_t violations = 0;
    for (std::size_t k = 0; k < rv.rates.size(); ++k) {
        const double target = dep.r_min()[rv.order[k]];
        if (rv.rates[k] < target * (1.0 - kRelTol)) ++violations;
    }
    return -(gain - lambda * static_cast<double>(violations));
}

} // namespace pinch

#endif // PINCH_PSO_HPP

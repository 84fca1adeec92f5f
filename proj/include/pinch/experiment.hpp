// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo driver: random deployments, the four compared schemes, and the
// power / rate-target sweeps.
//
// Realization k draws its user positions from derive_seed(master_seed, k) and
// keeps them for every scheme and every sweep point (common random numbers).

#ifndef PINCH_EXPERIMENT_HPP
#define PINCH_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pinch/baselines.hpp"
#include "pinch/channel_geometry.hpp"
#include "pinch/numeric.hpp"
#include "pinch/pso.hpp"
#include "pinch/qos_solver.hpp"
#include "pinch/random.hpp"

namespace pinch {

enum class Scheme { NomaPso, NomaExhaustive, NomaFixed, TdmaExhaustive };

inline constexpr Scheme kAllSchemes[] = {Scheme::NomaPso, Scheme::NomaExhaustive, Scheme::NomaFixed,
                                         Scheme::TdmaExhaustive};

inline std::string_view scheme_name(Scheme s) noexcept
{
    switch (s) {
    case Scheme::NomaPso: return "noma_pso";
    case Scheme::NomaExhaustive: return "noma_exhaustive";
    case Scheme::NomaFixed: return "noma_fixed";
    case Scheme::TdmaExhaustive: return "tdma_exhaustive";
    }
    return "unknown";
}

inline Scheme parse_scheme(std::string_view name)
{
    for (Scheme s : kAllSchemes) {
        if (scheme_name(s) == name) return s;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

enum class OutagePolicy { Exclude, CountZero };

inline std::string_view outage_policy_name(OutagePolicy p) noexcept
{
    return p == OutagePolicy::Exclude ? "exclude" : "count_zero";
}

inline OutagePolicy parse_outage_policy(std::string_view name)
{
    if (name == "exclude") return OutagePolicy::Exclude;
    if (name == "count_zero") return OutagePolicy::CountZero;
    throw std::invalid_argument("unknown outage policy '" + std::string(name) + "'");
}

enum class SweepKind { PMax, RMin };

struct ScenarioConfig {
    SystemParams::Fields system;
    double noise_dbm = -90.0; // overrides system.noise_power_w via params()
    std::size_t m_users = 3;
    std::size_t n_realizations = 100;
    std::uint64_t master_seed = 1;
    std::vector<double> p_max_dbm{10, 15, 20, 25, 30, 35, 40};
    std::vector<double> r_min{0.5, 0.7, 0.9, 1.1, 1.3, 1.5};
    double fixed_p_max_dbm = 30.0; // held during the R^min sweep
    double fixed_r_min = 0.5;      // held during the P^max sweep
    /// Per-user multipliers on the common R^min; empty means all ones.
    std::vector<double> r_min_weights;
    std::vector<Scheme> schemes{kAllSchemes[0], kAllSchemes[1], kAllSchemes[2], kAllSchemes[3]};
    PsoConfig pso;
    double grid_step = 0.001;
    OutagePolicy outage_policy = OutagePolicy::Exclude;
    /// Worker threads; 0 picks the hardware concurrency. Never affects results.
    std::size_t threads = 0;

    SystemParams params() const
    {
        SystemParams::Fields f = system;
        f.noise_power_w = dbm_to_watts(noise_dbm);
        return SystemParams(f);
    }

    void validate() const
    {
        (void)params();
        pso.validate();
        if (m_users < 1) throw std::invalid_argument("config: users must be >= 1");
        if (n_realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
        if (p_max_dbm.empty() || r_min.empty()) throw std::invalid_argument("config: sweep lists must be non-empty");
        if (schemes.empty()) throw std::invalid_argument("config: at least one scheme required");
        if (!(grid_step > 0.0)) throw std::invalid_argument("config: grid_step must be > 0");
        if (!r_min_weights.empty() && r_min_weights.size() != m_users) {
            throw std::invalid_argument("config: r_min_weights must have one entry per user");
        }
        for (double r : r_min) {
            if (r < 0.0) throw std::invalid_argument("config: r_min values must be >= 0");
        }
        if (fixed_r_min < 0.0) throw std::invalid_argument("config: fixed_r_min must be >= 0");
    }

    std::vector<double> targets(double common_r_min) const
    {
        std::vector<double> out(m_users, common_r_min);
        if (!r_min_weights.empty()) {
            for (std::size_t m = 0; m < m_users; ++m) out[m] *= r_min_weights[m];
        }
        return out;
    }

    std::uint64_t realization_seed(std::size_t k) const noexcept { return derive_seed(master_seed, k); }
};

/// Deployment of realization k at the given budget (dBm) and common target.
inline Deployment realization_deployment(const ScenarioConfig& config, std::size_t k, double p_max_dbm,
                                         double common_r_min)
{
    return sample_deployment(config.realization_seed(k), config.m_users, config.params(),
                             std::vector<double>(config.m_users, dbm_to_watts(p_max_dbm)),
                             config.targets(common_r_min));
}

/// Solves one deployment with one scheme. QoS targets are always honoured;
/// with all-zero targets every scheme reduces to its full-power form.
inline Solution run_realization(const Deployment& dep, const ScenarioConfig& config, Scheme scheme,
                                std::uint64_t realization_seed)
{
    const SystemParams params = config.params();
    switch (scheme) {
    case Scheme::NomaPso: {
        PsoConfig pso = config.pso;
        pso.seed = derive_seed(realization_seed, 0x9505);
        return solve_with_qos(dep, params, pso);
    }
    case Scheme::NomaExhaustive:
        return noma_exhaustive(dep, params, waveguide_grid(params, config.grid_step), true);
    case Scheme::NomaFixed:
        return fixed_antenna_solution(dep, params, true);
    case Scheme::TdmaExhaustive:
        return tdma_exhaustive(dep, params, waveguide_grid(params, config.grid_step)).solution;
    }
    throw std::invalid_argument("run_realization: unknown scheme");
}

struct RealizationRecord {
    std::size_t point = 0;
    std::size_t realization = 0;
    Scheme scheme = Scheme::NomaPso;
    Solution solution;
};

struct SchemeAggregate {
    double mean_sum_rate = 0.0;
    std::size_t outages = 0;
    double mean_outer_iterations = 0.0;
    double wall_time_s = 0.0;
};

struct SweepResult {
    SweepKind kind = SweepKind::PMax;
    std::vector<double> sweep_values;
    std::vector<Scheme> schemes;
    /// Ordered by (point, realization, scheme index).
    std::vector<RealizationRecord> records;
    /// aggregates[point][scheme index]
    std::vector<std::vector<SchemeAggregate>> aggregates;

    const SchemeAggregate& at(std::size_t point, Scheme s) const
    {
        const auto it = std::find(schemes.begin(), schemes.end(), s);
        if (it == schemes.end()) throw std::out_of_range("SweepResult: scheme not in sweep");
        return aggregates.at(point).at(static_cast<std::size_t>(it - schemes.begin()));
    }

    std::vector<double> curve(Scheme s) const
    {
        std::vector<double> out;
        for (std::size_t p = 0; p < sweep_values.size(); ++p) out.push_back(at(p, s).mean_sum_rate);
        return out;
    }
};

/// Means over records in (realization) order, honoring the outage policy.
/// Returns NaN for a scheme whose every realization is an outage under
/// the exclude policy.
inline void aggregate(SweepResult& result, OutagePolicy policy)
{
    const std::size_t n_points = result.sweep_values.size();
    const std::size_t n_schemes = result.schemes.size();
    std::vector<std::vector<double>> sums(n_points, std::vector<double>(n_schemes, 0.0));
    std::vector<std::vector<double>> iters(n_points, std::vector<double>(n_schemes, 0.0));
    std::vector<std::vector<std::size_t>> counted(n_points, std::vector<std::size_t>(n_schemes, 0));
    std::vector<std::vector<std::size_t>> outages(n_points, std::vector<std::size_t>(n_schemes, 0));

    for (const auto& rec : result.records) {
        const auto s = static_cast<std::size_t>(
            std::find(result.schemes.begin(), result.schemes.end(), rec.scheme) - result.schemes.begin());
        if (!rec.solution.feasible) {
            ++outages[rec.point][s];
            if (policy == OutagePolicy::Exclude) continue;
        } else {
            sums[rec.point][s] += rec.solution.sum_rate;
        }
        iters[rec.point][s] += static_cast<double>(rec.solution.outer_iterations);
        ++counted[rec.point][s];
    }

    result.aggregates.assign(n_points, std::vector<SchemeAggregate>(n_schemes));
    for (std::size_t p = 0; p < n_points; ++p) {
        for (std::size_t s = 0; s < n_schemes; ++s) {
            auto& agg = result.aggregates[p][s];
            const double n = static_cast<double>(counted[p][s]);
            agg.outages = outages[p][s];
            agg.mean_sum_rate = counted[p][s] ? sums[p][s] / n : std::numeric_limits<double>::quiet_NaN();
            agg.mean_outer_iterations = counted[p][s] ? iters[p][s] / n : std::numeric_limits<double>::quiet_NaN();
        }
    }
}

namespace detail {

template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body)
{
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) {
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace detail

inline SweepResult run_sweep(const ScenarioConfig& config, SweepKind kind)
{
    config.validate();
    SweepResult result;
    result.kind = kind;
    result.sweep_values = kind == SweepKind::PMax ? config.p_max_dbm : config.r_min;
    result.schemes = config.schemes;

    const std::size_t n_points = result.sweep_values.size();
    const std::size_t n_schemes = result.schemes.size();
    const std::size_t n_real = config.n_realizations;
    const std::size_t per_point = n_real * n_schemes;
    result.records.resize(n_points * per_point);
    std::vector<double> wall(n_points * n_schemes, 0.0);
    std::mutex wall_mutex;

    detail::parallel_for(n_real, config.threads, [&](std::size_t k) {
        const std::uint64_t seed = config.realization_seed(k);
        std::vector<double> local_wall(n_points * n_schemes, 0.0);
        for (std::size_t p = 0; p < n_points; ++p) {
            const double p_dbm = kind == SweepKind::PMax ? result.sweep_values[p] : config.fixed_p_max_dbm;
            const double r_min = kind == SweepKind::RMin ? result.sweep_values[p] : config.fixed_r_min;
            const Deployment dep = realization_deployment(config, k, p_dbm, r_min);
            for (std::size_t s = 0; s < n_schemes; ++s) {
                const auto t0 = std::chrono::steady_clock::now();
                Solution sol = run_realization(dep, config, result.schemes[s], seed);
                local_wall[p * n_schemes + s] +=
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                result.records[p * per_point + k * n_schemes + s] = {p, k, result.schemes[s], std::move(sol)};
            }
        }
        std::lock_guard lock(wall_mutex);
        for (std::size_t i = 0; i < wall.size(); ++i) wall[i] += local_wall[i];
    });

    aggregate(result, config.outage_policy);
    for (std::size_t p = 0; p < n_points; ++p) {
        for (std::size_t s = 0; s < n_schemes; ++s) result.aggregates[p][s].wall_time_s = wall[p * n_schemes + s];
    }
    return result;
}

/// Sum rate versus user power budget at the fixed R^min.
inline SweepResult sweep_pmax(const ScenarioConfig& config) { return run_sweep(config, SweepKind::PMax); }

/// Sum rate versus common R^min at the fixed power budget.
inline SweepResult sweep_rmin(const ScenarioConfig& config) { return run_sweep(config, SweepKind::RMin); }

} // namespace pinch

#endif // PINCH_EXPERIMENT_HPP

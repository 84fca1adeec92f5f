// SPDX-License-Identifier: Apache-2.0
//
// Power allocation for a fixed antenna position under per-user QoS targets.
//
// With channels in decode order (h_1 >= ... >= h_M) the subproblem is the LP
//   max  sum_m P_m h_m
//   s.t. P_m <= P_m^max
//        P_m h_m >= (2^{R_m^min} - 1) (sum_{n>m} P_n h_n + 1)
// solved here in closed form: minimum powers by back-substitution from the
// interference-free last user, then the residual budget handed out in decode
// order until some earlier user's QoS constraint becomes binding.

#ifndef PINCH_POWER_ALLOCATION_HPP
#define PINCH_POWER_ALLOCATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinch/channel_geometry.hpp"
#include "pinch/numeric.hpp"
#include "pinch/rate_model.hpp"

namespace pinch {

struct AllocationResult {
    std::vector<double> powers; // decode order
    bool feasible = false;
    /// Decode index at which the residual sweep stopped early.
    std::optional<std::size_t> binding_user;
    /// Set when rounding pushed a cap below P^min and P^min was kept instead.
    bool tolerance_breach = false;
};

/// 2^{R} - 1, accurate for small R.
inline double sinr_target(double rate) noexcept { return std::expm1(rate * std::numbers::ln2); }

/// P_m^min = 2^{sum_{n>m} R_n^min} (2^{R_m^min} - 1) / h_m.
inline std::vector<double> min_powers(std::span<const double> h, std::span<const double> r_min)
{
    if (h.size() != r_min.size()) throw std::invalid_argument("min_powers: length mismatch");
    std::vector<double> p(h.size());
    double suffix_rate = 0.0;
    for (std::size_t k = h.size(); k-- > 0;) {
        p[k] = std::exp2(suffix_rate) * sinr_target(r_min[k]) / h[k];
        suffix_rate += r_min[k];
    }
    return p;
}

inline bool check_feasibility(std::span<const double> p_min, std::span<const double> p_max)
{
    if (p_min.size() != p_max.size()) throw std::invalid_argument("check_feasibility: length mismatch");
    for (std::size_t k = 0; k < p_min.size(); ++k) {
        if (!leq_tol(p_min[k], p_max[k])) return false;
    }
    return true;
}

namespace detail {

/// Greedy core writing into caller-provided buffers (decode order). Returns
/// false when the targets are unreachable; `powers` then holds P^min.
inline bool greedy_into(std::span<const double> h, std::span<const double> r_min, std::span<const double> p_max,
                        std::span<double> target, std::span<double> powers, AllocationResult* info)
{
    const std::size_t m_users = h.size();
    double suffix_rate = 0.0;
    for (std::size_t k = m_users; k-- > 0;) {
        target[k] = sinr_target(r_min[k]);
        powers[k] = std::exp2(suffix_rate) * target[k] / h[k];
        suffix_rate += r_min[k];
    }
    for (std::size_t k = 0; k < m_users; ++k) {
        if (!leq_tol(powers[k], p_max[k])) return false;
    }
    if (m_users == 0) return true;

    powers[0] = p_max[0];
    for (std::size_t m = 1; m < m_users; ++m) {
        double cap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            if (target[j] <= 0.0) continue;
            double others = 0.0;
            for (std::size_t n = j + 1; n < m_users; ++n) {
                if (n != m) others += powers[n] * h[n];
            }
            cap = std::min(cap, (powers[j] * h[j] / target[j] - others - 1.0) / h[m]);
        }
        if (cap < p_max[m]) {
            // powers[m] still holds P_m^min here.
            if (cap < powers[m]) {
                if (info) info->tolerance_breach = true;
            } else {
                powers[m] = cap;
            }
            if (info) info->binding_user = m;
            break;
        }
        powers[m] = p_max[m];
    }
    return true;
}

} // namespace detail

/// Closed-form optimum of the power LP. All vectors are in decode order.
///
/// User 1 takes its full budget. Each following user m gets the largest power
/// that keeps every earlier user j < m at or above its target, with users after
/// m held at P^min; if that cap is below P_m^max the sweep stops there.
inline AllocationResult greedy_residual_allocation(std::span<const double> h, std::span<const double> r_min,
                                                   std::span<const double> p_max)
{
    const std::size_t m_users = h.size();
    if (r_min.size() != m_users || p_max.size() != m_users) {
        throw std::invalid_argument("greedy_residual_allocation: length mismatch");
    }
    AllocationResult out;
    out.powers.resize(m_users);
    std::vector<double> target(m_users);
    out.feasible = detail::greedy_into(h, r_min, p_max, target, out.powers, &out);
    return out;
}

/// Reusable buffers for evaluating the optimal allocation at many antenna
/// positions without heap traffic.
class AllocationWorkspace {
public:
    explicit AllocationWorkspace(const Deployment& dep, const SystemParams& params)
        : dep_(dep), params_(params), scale_(path_gain_eta(params) / params.noise_power()), h_(dep.size()),
          hs_(dep.size()), rs_(dep.size()), ps_(dep.size()), target_(dep.size()), powers_(dep.size()),
          order_(dep.size())
    {
    }

    /// sum_m P_m h_m of the optimal allocation at x_pin, or nullopt if the
    /// targets are unreachable there.
    std::optional<double> optimal_gain(double x_pin)
    {
        const std::size_t m_users = dep_.size();
        for (std::size_t m = 0; m < m_users; ++m) {
            h_[m] = scale_ / squared_distance(dep_.users()[m], x_pin, params_);
            order_[m] = m;
        }
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return h_[a] > h_[b]; });
        for (std::size_t k = 0; k < m_users; ++k) {
            hs_[k] = h_[order_[k]];
            rs_[k] = dep_.r_min()[order_[k]];
            ps_[k] = dep_.p_max()[order_[k]];
        }
        if (!detail::greedy_into(hs_, rs_, ps_, target_, powers_, nullptr)) return std::nullopt;
        double gain = 0.0;
        for (std::size_t k = 0; k < m_users; ++k) gain += powers_[k] * hs_[k];
        return gain;
    }

private:
    const Deployment& dep_;
    const SystemParams& params_;
    double scale_;
    std::vector<double> h_, hs_, rs_, ps_, target_, powers_;
    std::vector<std::size_t> order_;
};

/// Greedy allocation at antenna position x_pin, reported in user order.
struct PositionedAllocation {
    std::vector<double> powers_by_user;
    std::vector<std::size_t> order;
    bool feasible = false;
};

inline PositionedAllocation allocate_at(const Deployment& dep, double x_pin, const SystemParams& params)
{
    const auto h = effective_channels(dep, x_pin, params);
    PositionedAllocation out;
    out.order = sort_by_channel(h);
    const auto hs = permute<double>(h, out.order);
    const auto rs = permute<double>(dep.r_min(), out.order);
    const auto ps = permute<double>(dep.p_max(), out.order);
    const auto alloc = greedy_residual_allocation(hs, rs, ps);
    out.feasible = alloc.feasible;
    out.powers_by_user.assign(dep.size(), 0.0);
    for (std::size_t k = 0; k < dep.size(); ++k) out.powers_by_user[out.order[k]] = alloc.powers[k];
    return out;
}

/// Feasibility margin min_m (P_m^max - P_m^min(x_pin)) / P_m^max; >= 0 iff
/// the QoS targets are reachable at x_pin.
inline double feasibility_margin(const Deployment& dep, double x_pin, const SystemParams& params)
{
    const auto h = effective_channels(dep, x_pin, params);
    const auto order = sort_by_channel(h);
    const auto hs = permute<double>(h, order);
    const auto rs = permute<double>(dep.r_min(), order);
    const auto p_min = min_powers(hs, rs);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double budget = dep.p_max()[order[k]];
        margin = std::min(margin, (budget - p_min[k]) / budget);
    }
    return margin;
}

} // namespace pinch

#endif // PINCH_POWER_ALLOCATION_HPP

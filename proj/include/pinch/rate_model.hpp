// SPDX-License-Identifier: Apache-2.0
//
// Uplink NOMA rates under SIC, the telescoped sum rate, QoS checks and the
// orthogonal (TDMA) rate model.
//
// Decode convention: decode index 0 is the strongest effective channel. It is
// decoded first and therefore sees interference from every weaker user; the
// last (weakest) user is decoded interference-free. The order depends on the
// antenna position and is recomputed whenever x_pin changes.

#ifndef PINCH_RATE_MODEL_HPP
#define PINCH_RATE_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinch/channel_geometry.hpp"
#include "pinch/numeric.hpp"

namespace pinch {

/// Per-user rates in decode order plus the decode-index -> user-index map.
struct RateVector {
    std::vector<double> rates;
    std::vector<std::size_t> order;

    /// Rates re-indexed by original user index.
    std::vector<double> by_user() const
    {
        std::vector<double> out(rates.size());
        for (std::size_t k = 0; k < rates.size(); ++k) out[order[k]] = rates[k];
        return out;
    }
};

inline double log2_1p(double x) noexcept { return std::log1p(x) / std::numbers::ln2; }

/// Stable descending sort of channel gains; ties keep original index order.
inline std::vector<std::size_t> sort_by_channel(std::span<const double> h)
{
    std::vector<std::size_t> perm(h.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return h[a] > h[b]; });
    return perm;
}

inline std::vector<std::size_t> sort_users_by_channel(const Deployment& dep, double x_pin, const SystemParams& params)
{
    const auto h = effective_channels(dep, x_pin, params);
    return sort_by_channel(h);
}

template <typename T>
std::vector<T> permute(std::span<const T> values, std::span<const std::size_t> order)
{
    std::vector<T> out;
    out.reserve(order.size());
    for (std::size_t idx : order) out.push_back(values[idx]);
    return out;
}

/// R_m = log2(1 + P_m h_m / (sum_{n>m} P_n h_n + 1)), inputs in decode order.
inline std::vector<double> noma_rates(std::span<const double> p, std::span<const double> h)
{
    if (p.size() != h.size()) {
        throw std::invalid_argument("noma_rates: power and channel vectors differ in length");
    }
    std::vector<double> r(p.size());
    double interference = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) {
        const double signal = p[k] * h[k];
        r[k] = log2_1p(signal / (interference + 1.0));
        interference += signal;
    }
    return r;
}

/// log2(1 + sum_m P_m h_m); independent of decode order.
inline double noma_sum_rate_closed_form(std::span<const double> p, std::span<const double> h)
{
    if (p.size() != h.size()) {
        throw std::invalid_argument("noma_sum_rate_closed_form: length mismatch");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) total += p[k] * h[k];
    return log2_1p(total);
}

/// Rates of every user for powers given in original user order, decoding in
/// channel order at x_pin.
inline RateVector rates_at(const Deployment& dep, std::span<const double> powers_by_user, double x_pin,
                           const SystemParams& params)
{
    const auto h = effective_channels(dep, x_pin, params);
    RateVector rv;
    rv.order = sort_by_channel(h);
    const auto hs = permute<double>(h, rv.order);
    const auto ps = permute<double>(powers_by_user, rv.order);
    rv.rates = noma_rates(ps, hs);
    return rv;
}

/// True iff R_m >= R_m^min (1 - tol) for every m.
inline bool qos_satisfied(std::span<const double> rates, std::span<const double> r_min, double tol = kRelTol)
{
    if (rates.size() != r_min.size()) {
        throw std::invalid_argument("qos_satisfied: length mismatch");
    }
    for (std::size_t k = 0; k < rates.size(); ++k) {
        if (rates[k] < r_min[k] * (1.0 - tol)) return false;
    }
    return true;
}

inline bool qos_satisfied(const RateVector& r, std::span<const double> r_min_by_user, double tol = kRelTol)
{
    return qos_satisfied(std::span<const double>(r.by_user()), r_min_by_user, tol);
}

/// Orthogonal time sharing: user m owns fraction tau_m of the frame, transmits
/// at P_m^max, and the antenna sits at per_slot_pin_x[m] during its slot.
inline RateVector tdma_rates(const Deployment& dep, std::span<const double> slot_fractions,
                             std::span<const double> per_slot_pin_x, const SystemParams& params)
{
    const std::size_t m = dep.size();
    if (slot_fractions.size() != m || per_slot_pin_x.size() != m) {
        throw std::invalid_argument("tdma_rates: expected one slot fraction and one antenna position per user");
    }
    double total = 0.0;
    for (double tau : slot_fractions) {
        if (tau < 0.0) throw std::invalid_argument("tdma_rates: negative slot fraction");
        total += tau;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("tdma_rates: slot fractions must sum to 1");
    }
    RateVector rv;
    rv.order.resize(m);
    std::iota(rv.order.begin(), rv.order.end(), std::size_t{0});
    rv.rates.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double h = effective_channel(dep.users()[k], per_slot_pin_x[k], params);
        rv.rates[k] = slot_fractions[k] * log2_1p(dep.p_max()[k] * h);
    }
    return rv;
}

} // namespace pinch

#endif // PINCH_RATE_MODEL_HPP

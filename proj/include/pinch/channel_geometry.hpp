// SPDX-License-Identifier: Apache-2.0
//
// Physical constants, 3-D geometry of the waveguide/user layout, and the
// line-of-sight free-space effective channel used by every solver.
//
// Coordinates: the waveguide runs along the x-axis at height d, so the
// pinching antenna sits at (x_pin, 0, d) and user m at (x_m, y_m, 0).

#ifndef PINCH_CHANNEL_GEOMETRY_HPP
#define PINCH_CHANNEL_GEOMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pinch/random.hpp"

namespace pinch {

class SystemParams {
public:
    struct Fields {
        double carrier_hz = 28e9;
        double antenna_height_m = 3.0;
        double noise_power_w = 1e-12; // -90 dBm
        double waveguide_length_m = 60.0;
        double region_x_m = 60.0;
        double region_y_m = 20.0;
        double speed_of_light = 299792458.0;
    };

    SystemParams() : SystemParams(Fields{}) {}

    explicit SystemParams(const Fields& f) : f_(f)
    {
        check_positive(f.carrier_hz, "carrier frequency");
        check_positive(f.antenna_height_m, "antenna height");
        check_positive(f.noise_power_w, "noise power");
        check_positive(f.waveguide_length_m, "waveguide length");
        check_positive(f.region_x_m, "region length D_x");
        check_positive(f.region_y_m, "region width D_y");
        check_positive(f.speed_of_light, "speed of light");
    }

    double carrier_hz() const noexcept { return f_.carrier_hz; }
    double antenna_height() const noexcept { return f_.antenna_height_m; }
    double noise_power() const noexcept { return f_.noise_power_w; }
    double waveguide_length() const noexcept { return f_.waveguide_length_m; }
    double region_x() const noexcept { return f_.region_x_m; }
    double region_y() const noexcept { return f_.region_y_m; }
    double speed_of_light() const noexcept { return f_.speed_of_light; }
    const Fields& fields() const noexcept { return f_; }

private:
    static void check_positive(double v, const char* what)
    {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string("SystemParams: ") + what + " must be > 0");
        }
    }

    Fields f_;
};

struct UserPosition {
    double x = 0.0;
    double y = 0.0;
};

/// The M users of one realization with their power budgets and rate targets.
class Deployment {
public:
    Deployment(std::vector<UserPosition> users, std::vector<double> p_max, std::vector<double> r_min)
        : users_(std::move(users)), p_max_(std::move(p_max)), r_min_(std::move(r_min))
    {
        if (users_.empty()) {
            throw std::invalid_argument("Deployment: at least one user required");
        }
        if (p_max_.size() != users_.size() || r_min_.size() != users_.size()) {
            throw std::invalid_argument("Deployment: users, p_max and r_min must have equal length");
        }
        for (double p : p_max_) {
            if (!(p > 0.0)) throw std::invalid_argument("Deployment: p_max entries must be > 0");
        }
        for (double r : r_min_) {
            if (!(r >= 0.0)) throw std::invalid_argument("Deployment: r_min entries must be >= 0");
        }
    }

    /// Same as above, additionally checking that every user lies inside the
    /// service region [0, D_x] x [-D_y/2, D_y/2].
    Deployment(std::vector<UserPosition> users, std::vector<double> p_max, std::vector<double> r_min,
               const SystemParams& params)
        : Deployment(std::move(users), std::move(p_max), std::move(r_min))
    {
        const double half_y = 0.5 * params.region_y();
        for (const auto& u : users_) {
            if (u.x < 0.0 || u.x > params.region_x() || u.y < -half_y || u.y > half_y) {
                throw std::invalid_argument("Deployment: user outside the service region");
            }
        }
    }

    std::size_t size() const noexcept { return users_.size(); }
    const std::vector<UserPosition>& users() const noexcept { return users_; }
    const std::vector<double>& p_max() const noexcept { return p_max_; }
    const std::vector<double>& r_min() const noexcept { return r_min_; }

    /// Copy with different budgets/targets, same positions.
    Deployment with_limits(std::vector<double> p_max, std::vector<double> r_min) const
    {
        return Deployment(users_, std::move(p_max), std::move(r_min));
    }

private:
    std::vector<UserPosition> users_;
    std::vector<double> p_max_;
    std::vector<double> r_min_;
};

/// eta = c^2 / (16 pi^2 f_c^2), the free-space path-gain constant in m^2.
inline double path_gain_eta(const SystemParams& params) noexcept
{
    const double c = params.speed_of_light();
    const double f = params.carrier_hz();
    return (c * c) / (16.0 * std::numbers::pi * std::numbers::pi * f * f);
}

/// |Phi_m - Phi_pin|^2 = (x_pin - x_m)^2 + y_m^2 + d^2.
inline double squared_distance(const UserPosition& u, double x_pin, const SystemParams& params) noexcept
{
    const double dx = x_pin - u.x;
    const double d = params.antenna_height();
    return dx * dx + u.y * u.y + d * d;
}

/// Noise-normalized channel gain h = eta / (dist^2 sigma^2), in 1/W.
inline double effective_channel(const UserPosition& u, double x_pin, const SystemParams& params) noexcept
{
    return path_gain_eta(params) / (squared_distance(u, x_pin, params) * params.noise_power());
}

inline std::vector<double> effective_channels(const Deployment& dep, double x_pin, const SystemParams& params)
{
    const double scale = path_gain_eta(params) / params.noise_power();
    std::vector<double> h;
    h.reserve(dep.size());
    for (const auto& u : dep.users()) {
        h.push_back(scale / squared_distance(u, x_pin, params));
    }
    return h;
}

/// Uniform random user drop over the service region. x is drawn before y for
/// each user, in user order; the stream is std::mt19937_64 seeded with `seed`.
inline Deployment sample_deployment(std::uint64_t seed, std::size_t m, const SystemParams& params,
                                    std::vector<double> p_max, std::vector<double> r_min)
{
    if (m == 0) {
        throw std::invalid_argument("sample_deployment: m must be >= 1");
    }
    Rng rng(seed);
    const double half_y = 0.5 * params.region_y();
    std::vector<UserPosition> users;
    users.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = rng.uniform(0.0, params.region_x());
        const double y = rng.uniform(-half_y, half_y);
        users.push_back({x, y});
    }
    return Deployment(std::move(users), std::move(p_max), std::move(r_min), params);
}

/// Convenience overload with a common budget and target for every user.
inline Deployment sample_deployment(std::uint64_t seed, std::size_t m, const SystemParams& params,
                                    double p_max, double r_min)
{
    return sample_deployment(seed, m, params, std::vector<double>(m, p_max), std::vector<double>(m, r_min));
}

} // namespace pinch

#endif // PINCH_CHANNEL_GEOMETRY_HPP

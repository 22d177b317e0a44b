#pragma once

// Outage mathematics for a single link under Rayleigh fading with jammer
// interference only (SIR, no thermal noise).

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "vroute/error.hpp"
#include "vroute/topo.hpp"

namespace vroute {

inline constexpr double kInfinitePower = std::numeric_limits<double>::infinity();

struct QosParams {
    double rho = 1.0;    // bits/s/Hz
    double gamma = 1.0;  // SIR threshold
    double alpha = 2.0;  // path-loss exponent
    double T = 0.1;      // end-to-end outage budget
    double p_max = 15.0; // watts; may be +inf

    static QosParams from_rho(double rho, double alpha, double T, double p_max) {
        QosParams q{rho, std::exp2(rho) - 1.0, alpha, T, p_max};
        q.validate();
        return q;
    }

    void validate() const {
        if (!(rho >= 0.0)) throw ConfigError("rho must be >= 0");
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be finite and >= 0");
        if (!(alpha >= 2.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 2");
        if (!(T > 0.0 && T < 1.0)) throw ConfigError("T must lie in (0,1)");
        if (!(p_max > 0.0)) throw ConfigError("p_max must be > 0");
    }

    friend bool operator==(const QosParams&, const QosParams&) = default;
};

struct JammerLink {
    double power_w = 0.0;
    double distance_m = 0.0;  // jammer to receiver
};

struct LinkGeometry {
    double tx_rx_distance = 1.0;
    std::vector<JammerLink> jammers;
};

/// Geometry of the link tx -> rx with every jammer of the topology.
inline LinkGeometry make_link(const Point& tx, const Point& rx, std::span<const Jammer> jammers) {
    LinkGeometry g;
    g.tx_rx_distance = distance(tx, rx);
    g.jammers.reserve(jammers.size());
    for (const auto& j : jammers) g.jammers.push_back({j.power_w, distance(j.pos, rx)});
    return g;
}

inline double sir_threshold(double rho) {
    if (!(rho >= 0.0)) throw DomainError("rho must be >= 0");
    return std::exp2(rho) - 1.0;
}

namespace detail {

inline void check_link(double P, const LinkGeometry& link) {
    if (!(P > 0.0)) throw DomainError("transmit power must be > 0");
    if (!(link.tx_rx_distance > 0.0)) throw DomainError("tx-rx distance must be > 0");
}

// gamma * P_k d_k^-alpha / (P d^-alpha), written as a distance ratio so that
// large exponents stay in range. Same operation order as the power solver.
inline double interference_ratio(double P, double d, const JammerLink& j, const QosParams& q) {
    if (j.power_w == 0.0) return 0.0;
    return q.gamma * j.power_w * std::pow(d / j.distance_m, q.alpha) / P;
}

}  // namespace detail

/// Closed-form outage 1 - prod_k 1/(1 + x_k). Empty jammer list gives 0.
inline double link_outage(double P, const LinkGeometry& link, const QosParams& q) {
    detail::check_link(P, link);
    if (link.jammers.size() > 64) {
        double log_prod = 0.0;
        for (const auto& j : link.jammers) {
            log_prod += std::log1p(detail::interference_ratio(P, link.tx_rx_distance, j, q));
        }
        return -std::expm1(-log_prod);
    }
    double prod = 1.0;
    for (const auto& j : link.jammers) prod *= 1.0 + detail::interference_ratio(P, link.tx_rx_distance, j, q);
    return 1.0 - 1.0 / prod;
}

/// 1 - exp(-sum_k x_k); an upper bound on link_outage.
inline double approx_link_outage(double P, const LinkGeometry& link, const QosParams& q) {
    detail::check_link(P, link);
    double sum = 0.0;
    for (const auto& j : link.jammers) sum += detail::interference_ratio(P, link.tx_rx_distance, j, q);
    return -std::expm1(-sum);
}

/// Monte Carlo estimate of Pr{SIR < gamma} with unit-mean exponential power
/// gains on the desired link and every jammer link.
inline double mc_link_outage(double P, const LinkGeometry& link, const QosParams& q, std::uint64_t samples,
                             std::uint64_t seed) {
    detail::check_link(P, link);
    if (samples < 1) throw DomainError("samples must be >= 1");
    if (link.jammers.empty()) return 0.0;

    const double signal_scale = P * std::pow(link.tx_rx_distance, -q.alpha);
    std::vector<double> jam_scale;
    jam_scale.reserve(link.jammers.size());
    for (const auto& j : link.jammers) jam_scale.push_back(j.power_w * std::pow(j.distance_m, -q.alpha));

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gain(1.0);
    std::uint64_t outages = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double signal = signal_scale * gain(rng);
        double interference = 0.0;
        for (double js : jam_scale) interference += js * gain(rng);
        // SIR < gamma, cross-multiplied so that zero interference never divides
        if (signal < q.gamma * interference) ++outages;
    }
    return static_cast<double>(outages) / static_cast<double>(samples);
}

/// 1 - prod(1 - p_i) over independent hops.
inline double end_to_end_outage(std::span<const double> per_link_outages) {
    double survive = 1.0;
    for (double p : per_link_outages) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("outage probabilities must lie in [0,1]");
        survive *= 1.0 - p;
    }
    return 1.0 - survive;
}

}  // namespace vroute

#pragma once

// Outage target -> transmit power inversion and per-link energy.

#include <cmath>
#include <optional>
#include <vector>

#include "vroute/channel.hpp"
#include "vroute/error.hpp"

namespace vroute {

struct MessageSpec {
    double bits = 1.0;  // L
    double rho = 1.0;   // bits/s/Hz

    double tx_duration() const { return bits / rho; }

    void validate() const {
        if (!(bits > 0.0)) throw ConfigError("message length must be > 0");
        if (!(rho > 0.0)) throw ConfigError("message rho must be > 0");
    }

    friend bool operator==(const MessageSpec&, const MessageSpec&) = default;
};

enum class OutageModel { Exact, Approximate };

struct SolverOptions {
    double tol = 1e-9;           // relative width of the final bisection bracket
    double power_floor = 1e-6;   // watts, assigned to interference-free links
    OutageModel model = OutageModel::Exact;

    friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

struct PowerSolveResult {
    bool feasible = false;
    std::optional<double> power;  // watts, present iff feasible
    double achieved_outage = 1.0;
};

/// Equal per-hop share of the end-to-end budget: 1 - (1 - T)^(1/m).
inline double per_link_target(double T, int m) {
    if (!(T > 0.0 && T < 1.0)) throw DomainError("T must lie in (0,1)");
    if (m < 1) throw DomainError("hop count must be >= 1");
    return -std::expm1(std::log1p(-T) / static_cast<double>(m));
}

inline double link_energy(double P, const MessageSpec& msg) {
    if (!(P >= 0.0)) throw DomainError("power must be >= 0");
    return P * msg.tx_duration();
}

inline double outage_under(OutageModel model, double P, const LinkGeometry& link, const QosParams& q) {
    return model == OutageModel::Exact ? link_outage(P, link, q) : approx_link_outage(P, link, q);
}

/// Smallest power meeting `target` on `link`, capped at q.p_max.
///
/// The outage is strictly decreasing in P, so the root is unique. It is
/// bracketed analytically: with S = gamma * d^alpha * sum_k P_k d_k^-alpha,
///   exact >= S/P / (1 + S/P)   gives  P >= S (1 - t) / t
///   exact <= 1 - exp(-S/P)     gives  P <= S / -ln(1 - t)
/// and then bisected to relative width `tol`. The returned power always sits
/// on the feasible side of the root.
inline PowerSolveResult min_power_for_outage(double target, const LinkGeometry& link, const QosParams& q,
                                             const SolverOptions& opts = {}) {
    if (!(target > 0.0 && target < 1.0)) throw DomainError("target outage must lie in (0,1)");
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be > 0");
    if (!(opts.power_floor > 0.0 && opts.power_floor < q.p_max)) {
        throw DomainError("power_floor must lie in (0, p_max)");
    }
    if (!(link.tx_rx_distance > 0.0)) throw DomainError("tx-rx distance must be > 0");

    // w_k = gamma * P_k * (d / d_k)^alpha; outage(P) = 1 - prod_k 1 / (1 + w_k / P)
    std::vector<double> weights;
    weights.reserve(link.jammers.size());
    double scale = 0.0;
    for (const auto& j : link.jammers) {
        if (j.power_w == 0.0) continue;
        weights.push_back(q.gamma * j.power_w * std::pow(link.tx_rx_distance / j.distance_m, q.alpha));
        scale += weights.back();
    }

    if (scale == 0.0) return {true, opts.power_floor, 0.0};
    if (!std::isfinite(scale)) return {false, std::nullopt, 1.0};

    const bool use_log = weights.size() > 64;
    auto outage_at = [&](double P) {
        if (use_log) {
            double s = 0.0;
            for (double w : weights) s += std::log1p(w / P);
            return -std::expm1(-s);
        }
        double prod = 1.0;
        for (double w : weights) prod *= 1.0 + w / P;
        return 1.0 - 1.0 / prod;
    };

    const double upper = scale / -std::log1p(-target);
    double root;
    if (opts.model == OutageModel::Approximate) {
        root = upper;
    } else {
        double lo = scale * (1.0 - target) / target;
        double hi = upper;
        if (outage_at(lo) <= target) {
            hi = lo;
        } else {
            while (hi - lo > opts.tol * hi) {
                const double mid = lo + 0.5 * (hi - lo);
                if (mid <= lo || mid >= hi) break;
                if (outage_at(mid) <= target) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        root = hi;
    }

    if (root <= q.p_max) return {true, root, outage_under(opts.model, root, link, q)};
    if (std::isfinite(q.p_max)) {
        const double at_cap = outage_under(opts.model, q.p_max, link, q);
        if (at_cap <= target) return {true, q.p_max, at_cap};
    }
    return {false, std::nullopt, std::isfinite(q.p_max) ? outage_under(opts.model, q.p_max, link, q) : 1.0};
}

}  // namespace vroute

#pragma once

// Shared test utilities: the token-level reward oracle and random trace
// generators. The oracle goes through position construction and revaluation
// only, so it stays independent of the closed-form reward path it checks.

#include "lpsim/amm.hpp"
#include "lpsim/types.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testutil {

// Build the position with amm arithmetic, revalue it at p*d^rho, add the fee
// share earned by the position's liquidity, and take the log value ratio.
inline double oracle_step_reward(lpsim::Controller n, const lpsim::MarketStep& step,
                                 const lpsim::PoolParams& pool, double price,
                                 double value) {
    const double liquidity =
        lpsim::liquidity_for_symmetric_deposit(value, price, n, pool.d);
    const double new_price = price * std::pow(pool.d, step.rho);

    lpsim::Reserves held;
    bool in_range = true;
    if (n.is_infinite()) {
        held = lpsim::v2_reserves(liquidity, new_price);
    } else {
        const lpsim::PriceRange range{price * std::pow(pool.d, -n.width()),
                                      price * std::pow(pool.d, n.width())};
        held = lpsim::v3_real_reserves(liquidity, new_price, range);
        in_range = std::abs(step.rho) <= n.width();
    }

    const double end_value = new_price * held.token_a + held.token_b;
    // Fee share: gamma * volume * (position liquidity / pool liquidity), with
    // volume = u * 2 sqrt(p) * pool liquidity, so the pool liquidity cancels.
    const double fee =
        in_range ? 2.0 * pool.gamma * step.u * std::sqrt(price) * liquidity : 0.0;
    return std::log((end_value + fee) / value);
}

// |a - b| within tol relative to the larger magnitude, floored at 1.
inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// rho uniform in [-rho_max, rho_max], u uniform in [u_lo, u_hi].
inline std::vector<lpsim::MarketStep> random_trace(std::mt19937_64& rng, std::size_t T,
                                                   double rho_max, double u_lo,
                                                   double u_hi) {
    std::vector<lpsim::MarketStep> trace(T);
    for (auto& step : trace) {
        step.rho = uniform(rng, -rho_max, rho_max);
        step.u = uniform(rng, u_lo, u_hi);
    }
    return trace;
}

struct CompliantTrace {
    lpsim::PoolParams pool;
    std::vector<lpsim::MarketStep> steps;
    double avg_abs_rho = 0.0; // realized P
};

// Trace satisfying every assumption of the adaptive-strategy bounds:
// d^|rho| <= 2 (with margin, rho_max = 0.6 log_d 2, which also keeps the
// volume window (a/gamma) P^2 ln^2 d <= u <= 2/gamma nonempty for a <= 10)
// and u drawn inside that window.
inline CompliantTrace compliant_trace(std::mt19937_64& rng, std::size_t T,
                                      double d_lo, double d_hi,
                                      double volume_floor_factor = 10.0) {
    CompliantTrace out;
    out.pool.d = uniform(rng, d_lo, d_hi);
    out.pool.gamma = uniform(rng, 1e-4, 0.01);

    const double log_d = std::log(out.pool.d);
    const double rho_max = 0.6 * std::log(2.0) / log_d;
    out.steps.resize(T);
    double abs_sum = 0.0;
    for (auto& step : out.steps) {
        step.rho = uniform(rng, -rho_max, rho_max);
        abs_sum += std::abs(step.rho);
    }
    out.avg_abs_rho = abs_sum / static_cast<double>(T);

    const double floor_value = (volume_floor_factor / out.pool.gamma) *
                               out.avg_abs_rho * out.avg_abs_rho * log_d * log_d;
    const double cap = 2.0 / out.pool.gamma;
    for (auto& step : out.steps)
        step.u = uniform(rng, floor_value, cap);
    return out;
}

} // namespace testutil

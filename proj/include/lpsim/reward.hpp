#pragma once

#include "lpsim/amm.hpp"
#include "lpsim/types.hpp"

#include <span>

namespace lpsim {

/// Fraction of portfolio value earned as trading fees in one step:
/// 0 when the price left the range (|rho| > n), gamma*u/(1 - d^(-n/2))
/// otherwise, gamma*u for the full-range controller.
double fee_fraction(Controller n, const MarketStep& step, const PoolParams& pool);

/// End-of-step portfolio value divided by its start-of-step value, fees
/// excluded. Three cases depending on where rho lands relative to [-n, n];
/// d^(rho/2) for the full-range controller.
double value_ratio(Controller n, double rho, const PoolParams& pool);

/// Per-step log reward: ln(value_ratio + fee_fraction).
double step_reward(Controller n, const MarketStep& step, const PoolParams& pool);

/// Token amounts held at the end of a step by a position opened with
/// portfolio value `value` at price `price` and controller n, after the
/// price moved by d^rho. Valuing them at the new price recovers
/// value * value_ratio.
Reserves portfolio_after_step(Controller n, double price, double value,
                              double rho, const PoolParams& pool);

/// Sum of per-step rewards for a (controller, step) sequence; the log of the
/// compounded wealth multiple. Sequences must have equal length.
double total_reward(std::span<const Controller> controllers,
                    std::span<const MarketStep> trace, const PoolParams& pool);

} // namespace lpsim

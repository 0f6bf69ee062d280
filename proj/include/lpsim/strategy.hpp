#pragma once

#include "lpsim/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lpsim {

/// Exponential-weights configuration: number of unit-spaced integer
/// controllers and the learning rate.
struct EwaParams {
    int num_controllers = 1;
    double eta = 1.0;
};

/// N = floor(log_d 32), eta = sqrt(ln N / (128 T)).
EwaParams default_params(std::int64_t horizon, const PoolParams& pool);

/// Cumulative per-expert rewards; the softmax of eta * cumulative_rewards is
/// the current allocation. Rewards are stored unexponentiated so long
/// horizons cannot underflow the weights.
struct EwaState {
    std::vector<double> cumulative_rewards;
    double eta = 1.0;
    std::int64_t step_index = 0;
};

EwaState make_ewa_state(std::size_t num_experts, double eta);

/// Allocation over experts: p(n) proportional to exp(eta * cumulative[n]),
/// computed with max-shifted exponentials.
std::vector<double> ewa_distribution(const EwaState& state);

/// Adds one step's per-expert rewards into the cumulative totals.
void ewa_update(EwaState& state, std::span<const double> step_rewards);

struct EwaRunOptions {
    bool parallel = true;              // OpenMP expert-reward kernel
    bool record_distributions = true;  // keep the T x N allocation matrix
};

struct EwaRun {
    double wealth_log = 0.0;          // sum_t ln(sum_n p_t(n) e^{r_t(n)})
    double expected_log_reward = 0.0; // sum_t sum_n p_t(n) r_t(n)
    std::vector<double> reward_series;    // per-step ln of the wealth multiple
    std::vector<double> distributions;    // T x N row-major; empty if disabled
    std::vector<double> final_cumulative; // G_T(n) per expert
    std::size_t num_experts = 0;
};

/// Runs the exponential-weights strategy over an arbitrary expert grid.
/// Allocations at step t depend on rewards strictly before t; wealth
/// compounds through the fractional split sum_n p_t(n) e^{r_t(n)}.
EwaRun run_ewa(std::span<const MarketStep> trace, const PoolParams& pool,
               std::span<const Controller> experts, double eta,
               const EwaRunOptions& options = {});

/// Convenience overload over the integer grid 1..N from params.
EwaRun run_ewa(std::span<const MarketStep> trace, const PoolParams& pool,
               const EwaParams& params, const EwaRunOptions& options = {});

struct StaticRun {
    double total = 0.0;
    std::vector<double> reward_series;
};

/// Fixed-controller strategy over the whole trace.
StaticRun run_static(std::span<const MarketStep> trace, const PoolParams& pool,
                     Controller n);

/// The integer expert grid 1..N used by the adaptive strategy.
std::vector<Controller> integer_grid(int num_controllers);

} // namespace lpsim

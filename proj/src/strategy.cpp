#include "lpsim/strategy.hpp"

#include "lpsim/kernels.hpp"
#include "lpsim/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpsim {

EwaParams default_params(std::int64_t horizon, const PoolParams& pool) {
    validate(pool);
    if (horizon < 1)
        throw std::invalid_argument("horizon must be at least 1");
    const int num = static_cast<int>(std::floor(std::log(32.0) / std::log(pool.d)));
    if (num < 1)
        throw std::logic_error("controller grid is empty"); // unreachable for d < 2
    const double eta =
        std::sqrt(std::log(static_cast<double>(num)) / (128.0 * static_cast<double>(horizon)));
    return {num, eta};
}

EwaState make_ewa_state(std::size_t num_experts, double eta) {
    if (num_experts < 1)
        throw std::invalid_argument("need at least one expert");
    if (!(eta > 0.0))
        throw std::invalid_argument("eta must be positive");
    return {std::vector<double>(num_experts, 0.0), eta, 0};
}

std::vector<double> ewa_distribution(const EwaState& state) {
    const auto& cum = state.cumulative_rewards;
    if (cum.empty())
        throw std::invalid_argument("empty state");
    const double shift = *std::max_element(cum.begin(), cum.end());
    std::vector<double> probs(cum.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < cum.size(); ++i) {
        probs[i] = std::exp(state.eta * (cum[i] - shift));
        sum += probs[i];
    }
    for (double& p : probs)
        p /= sum;
    return probs;
}

void ewa_update(EwaState& state, std::span<const double> step_rewards) {
    if (step_rewards.size() != state.cumulative_rewards.size())
        throw std::invalid_argument("reward vector length mismatch");
    for (std::size_t i = 0; i < step_rewards.size(); ++i)
        state.cumulative_rewards[i] += step_rewards[i];
    ++state.step_index;
}

EwaRun run_ewa(std::span<const MarketStep> trace, const PoolParams& pool,
               std::span<const Controller> experts, double eta,
               const EwaRunOptions& options) {
    validate(pool);
    if (trace.empty())
        throw std::invalid_argument("trace must contain at least one step");
    if (experts.empty())
        throw std::invalid_argument("expert grid must be nonempty");

    const std::size_t num = experts.size();
    const kernels::ExpertTable table = kernels::make_expert_table(experts, pool);

    EwaRun run;
    run.num_experts = num;
    run.reward_series.reserve(trace.size());
    if (options.record_distributions)
        run.distributions.reserve(trace.size() * num);

    EwaState state = make_ewa_state(num, eta);
    std::vector<double> rewards(num);
    std::vector<double> weights(num);

    for (const MarketStep& step : trace) {
        if (options.parallel)
            kernels::expert_rewards(table, step, rewards);
        else
            kernels::expert_rewards_serial(experts, step, pool, rewards);

        // Allocation from history strictly before this step. The wealth
        // update divides two sums over the same weights instead of
        // normalizing first, so a step where every expert earns zero
        // contributes exactly zero.
        const auto& cum = state.cumulative_rewards;
        const double shift = *std::max_element(cum.begin(), cum.end());
        double weight_sum = 0.0;
        for (std::size_t i = 0; i < num; ++i) {
            weights[i] = std::exp(eta * (cum[i] - shift));
            weight_sum += weights[i];
        }
        if (options.record_distributions)
            for (std::size_t i = 0; i < num; ++i)
                run.distributions.push_back(weights[i] / weight_sum);

        double grown_sum = 0.0;
        double expected = 0.0;
        for (std::size_t i = 0; i < num; ++i) {
            grown_sum += weights[i] * std::exp(rewards[i]);
            expected += weights[i] * rewards[i];
        }
        const double step_log = std::log(grown_sum / weight_sum);
        run.wealth_log += step_log;
        run.expected_log_reward += expected / weight_sum;
        run.reward_series.push_back(step_log);

        ewa_update(state, rewards);
    }

    run.final_cumulative = std::move(state.cumulative_rewards);
    return run;
}

EwaRun run_ewa(std::span<const MarketStep> trace, const PoolParams& pool,
               const EwaParams& params, const EwaRunOptions& options) {
    const std::vector<Controller> grid = integer_grid(params.num_controllers);
    return run_ewa(trace, pool, grid, params.eta, options);
}

StaticRun run_static(std::span<const MarketStep> trace, const PoolParams& pool,
                     Controller n) {
    validate(pool);
    if (trace.empty())
        throw std::invalid_argument("trace must contain at least one step");
    // Same hoisted path as the sweep kernel, so a one-point sweep and a
    // single run agree bitwise.
    const kernels::ExpertTable table = kernels::make_expert_table({&n, 1}, pool);
    StaticRun run;
    run.reward_series.reserve(trace.size());
    for (const MarketStep& step : trace) {
        const double r = kernels::reward_at(table, 0, step);
        run.total += r;
        run.reward_series.push_back(r);
    }
    return run;
}

std::vector<Controller> integer_grid(int num_controllers) {
    if (num_controllers < 1)
        throw std::invalid_argument("grid needs at least one controller");
    std::vector<Controller> grid;
    grid.reserve(static_cast<std::size_t>(num_controllers));
    for (int n = 1; n <= num_controllers; ++n)
        grid.push_back(Controller::finite(static_cast<double>(n)));
    return grid;
}

} // namespace lpsim

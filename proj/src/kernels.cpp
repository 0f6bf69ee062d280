#include "lpsim/kernels.hpp"

#include "lpsim/reward.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace lpsim::kernels {

ExpertTable make_expert_table(std::span<const Controller> experts,
                              const PoolParams& pool) {
    ExpertTable table;
    const std::size_t n = experts.size();
    table.width.resize(n);
    table.half_pow.resize(n);
    table.inv_half_pow.resize(n);
    table.log_out_high.resize(n);
    table.denom_x2.resize(n);
    table.log_d = std::log(pool.d);
    table.gamma = pool.gamma;

    for (std::size_t i = 0; i < n; ++i) {
        const double w = experts[i].width();
        table.width[i] = w;
        if (experts[i].is_infinite()) {
            table.half_pow[i] = std::numeric_limits<double>::infinity();
            table.inv_half_pow[i] = 0.0;
            table.log_out_high[i] = std::numeric_limits<double>::infinity();
            table.denom_x2[i] = 2.0;
        } else {
            const double hp = std::exp(0.5 * w * table.log_d);
            table.half_pow[i] = hp;
            table.inv_half_pow[i] = 1.0 / hp;
            table.log_out_high[i] = std::log(0.5 * (1.0 + hp));
            table.denom_x2[i] = 2.0 * (1.0 - table.inv_half_pow[i]);
        }
    }
    return table;
}

namespace {

inline double reward_from_table(const ExpertTable& table, std::size_t i,
                                double rho, double price_pow, double fee_term) {
    const double w = table.width[i];
    if (std::isinf(w))
        return std::log(price_pow + 0.5 * fee_term);
    if (rho > w)
        return table.log_out_high[i];
    if (rho < -w)
        return rho * table.log_d + table.log_out_high[i];
    const double c = table.inv_half_pow[i];
    const double numer =
        2.0 * price_pow - c * (1.0 + price_pow * price_pow) + fee_term;
    if (!(numer > 0.0))
        throw std::domain_error("reward argument is nonpositive");
    return std::log(numer / table.denom_x2[i]);
}

} // namespace

double reward_at(const ExpertTable& table, std::size_t expert, const MarketStep& step) {
    const double price_pow = std::exp(0.5 * step.rho * table.log_d);
    const double fee_term = 2.0 * table.gamma * step.u;
    return reward_from_table(table, expert, step.rho, price_pow, fee_term);
}

void expert_rewards(const ExpertTable& table, const MarketStep& step,
                    std::span<double> out) {
    if (out.size() != table.size())
        throw std::invalid_argument("output span size mismatch");
    const double price_pow = std::exp(0.5 * step.rho * table.log_d); // d^(rho/2)
    const double fee_term = 2.0 * table.gamma * step.u;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(table.size());
    // Fork-join per step only pays off for wide expert grids.
#pragma omp parallel for schedule(static) if (n >= 2048)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = reward_from_table(
            table, static_cast<std::size_t>(i), step.rho, price_pow, fee_term);
}

void expert_rewards_serial(std::span<const Controller> experts,
                           const MarketStep& step, const PoolParams& pool,
                           std::span<double> out) {
    if (out.size() != experts.size())
        throw std::invalid_argument("output span size mismatch");
    for (std::size_t i = 0; i < experts.size(); ++i)
        out[i] = step_reward(experts[i], step, pool);
}

std::vector<double> reward_matrix(std::span<const MarketStep> trace,
                                  const PoolParams& pool,
                                  std::span<const Controller> experts) {
    const ExpertTable table = make_expert_table(experts, pool);
    const std::size_t cols = experts.size();
    std::vector<double> matrix(trace.size() * cols);
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(trace.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < rows; ++t) {
        const MarketStep& step = trace[static_cast<std::size_t>(t)];
        const double price_pow = std::exp(0.5 * step.rho * table.log_d);
        const double fee_term = 2.0 * table.gamma * step.u;
        double* row = matrix.data() + static_cast<std::size_t>(t) * cols;
        for (std::size_t i = 0; i < cols; ++i)
            row[i] = reward_from_table(table, i, step.rho, price_pow, fee_term);
    }
    return matrix;
}

std::vector<double> reward_matrix_serial(std::span<const MarketStep> trace,
                                         const PoolParams& pool,
                                         std::span<const Controller> experts) {
    std::vector<double> matrix(trace.size() * experts.size());
    for (std::size_t t = 0; t < trace.size(); ++t)
        for (std::size_t i = 0; i < experts.size(); ++i)
            matrix[t * experts.size() + i] = step_reward(experts[i], trace[t], pool);
    return matrix;
}

std::vector<double> static_totals(std::span<const MarketStep> trace,
                                  const PoolParams& pool,
                                  std::span<const Controller> grid) {
    const ExpertTable table = make_expert_table(grid, pool);
    std::vector<double> totals(grid.size(), 0.0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const MarketStep& step : trace)
            sum += reward_at(table, static_cast<std::size_t>(i), step);
        totals[static_cast<std::size_t>(i)] = sum;
    }
    return totals;
}

std::vector<double> static_totals_serial(std::span<const MarketStep> trace,
                                         const PoolParams& pool,
                                         std::span<const Controller> grid) {
    std::vector<double> totals(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double sum = 0.0;
        for (const MarketStep& step : trace)
            sum += step_reward(grid[i], step, pool);
        totals[i] = sum;
    }
    return totals;
}

} // namespace lpsim::kernels

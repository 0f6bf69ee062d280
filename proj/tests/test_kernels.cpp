#include "lpsim/kernels.hpp"

#include "lpsim/reward.hpp"
#include "support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace lpsim;
using testutil::close_rel;
using testutil::random_trace;
using testutil::uniform;

namespace {

std::vector<Controller> mixed_grid() {
    std::vector<Controller> grid;
    for (int n = 1; n <= 64; ++n)
        grid.push_back(Controller::finite(n));
    grid.push_back(Controller::finite(2.5));
    grid.push_back(Controller::infinite());
    return grid;
}

} // namespace

TEST_CASE("hoisted kernel matches the scalar reference") {
    std::mt19937_64 rng(31);
    const PoolParams pool{1.02, 0.003};
    const auto grid = mixed_grid();
    const auto trace = random_trace(rng, 200, 40.0, 0.0, 500.0);

    const kernels::ExpertTable table = kernels::make_expert_table(grid, pool);
    std::vector<double> fast(grid.size());
    std::vector<double> reference(grid.size());
    for (const MarketStep& step : trace) {
        kernels::expert_rewards(table, step, fast);
        kernels::expert_rewards_serial(grid, step, pool, reference);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(close_rel(fast[i], reference[i], 1e-12));
    }
}

TEST_CASE("reward matrix agrees with the serial reference") {
    std::mt19937_64 rng(32);
    const PoolParams pool{1.05, 0.001};
    const auto grid = mixed_grid();
    const auto trace = random_trace(rng, 150, 20.0, 0.0, 100.0);

    const auto fast = kernels::reward_matrix(trace, pool, grid);
    const auto reference = kernels::reward_matrix_serial(trace, pool, grid);
    REQUIRE(fast.size() == reference.size());
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(close_rel(fast[i], reference[i], 1e-12));
}

TEST_CASE("static totals agree with the serial reference and the scalar path") {
    std::mt19937_64 rng(33);
    const PoolParams pool{1.01, 0.003};
    const auto grid = mixed_grid();
    const auto trace = random_trace(rng, 300, 60.0, 0.0, 400.0);

    const auto fast = kernels::static_totals(trace, pool, grid);
    const auto reference = kernels::static_totals_serial(trace, pool, grid);
    REQUIRE(fast.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(close_rel(fast[i], reference[i], 1e-12));
        double scalar = 0.0;
        for (const MarketStep& step : trace)
            scalar += step_reward(grid[i], step, pool);
        CHECK(close_rel(fast[i], scalar, 1e-12));
    }
}

TEST_CASE("a quiet step produces exactly zero for every expert") {
    const PoolParams pool{1.003, 0.0005};
    const auto grid = mixed_grid();
    const kernels::ExpertTable table = kernels::make_expert_table(grid, pool);
    std::vector<double> rewards(grid.size(), 1.0);
    kernels::expert_rewards(table, {0.0, 0.0}, rewards);
    for (double r : rewards)
        CHECK(r == 0.0);
}

TEST_CASE("kernel results are identical across repeated runs") {
    std::mt19937_64 rng(34);
    const PoolParams pool{1.04, 0.002};
    const auto grid = mixed_grid();
    const auto trace = random_trace(rng, 100, 30.0, 0.0, 50.0);
    const auto first = kernels::reward_matrix(trace, pool, grid);
    const auto second = kernels::reward_matrix(trace, pool, grid);
    CHECK(first == second);
}

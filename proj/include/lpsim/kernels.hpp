#pragma once

#include "lpsim/types.hpp"

#include <span>
#include <vector>

namespace lpsim::kernels {

/// Per-expert constants hoisted out of the (step, expert) reward loops.
/// Valid for one pool parameterization.
struct ExpertTable {
    std::vector<double> width;        // controller half-width n (inf allowed)
    std::vector<double> half_pow;     // d^(n/2)
    std::vector<double> inv_half_pow; // d^(-n/2), 0 for inf
    std::vector<double> log_out_high; // ln((1 + d^(n/2))/2)
    std::vector<double> denom_x2;     // 2(1 - d^(-n/2)); shares the stored
                                      // d^(-n/2) so a zero step is exactly zero
    double log_d = 0.0;
    double gamma = 0.0;

    std::size_t size() const { return width.size(); }
};

ExpertTable make_expert_table(std::span<const Controller> experts,
                              const PoolParams& pool);

/// One expert's reward for one step, through the same hoisted path the batch
/// kernels use, so scalar and batch evaluations agree bitwise.
double reward_at(const ExpertTable& table, std::size_t expert, const MarketStep& step);

/// One step's reward for every expert in the table, written to `out`
/// (out.size() == table.size()). OpenMP-parallel over experts.
void expert_rewards(const ExpertTable& table, const MarketStep& step,
                    std::span<double> out);

/// Serial reference for expert_rewards: per-element calls into the scalar
/// reward path, no hoisting. Kept for correctness tests and benchmarks.
void expert_rewards_serial(std::span<const Controller> experts,
                           const MarketStep& step, const PoolParams& pool,
                           std::span<double> out);

/// T x N reward matrix, row-major over steps. OpenMP-parallel.
std::vector<double> reward_matrix(std::span<const MarketStep> trace,
                                  const PoolParams& pool,
                                  std::span<const Controller> experts);

std::vector<double> reward_matrix_serial(std::span<const MarketStep> trace,
                                         const PoolParams& pool,
                                         std::span<const Controller> experts);

/// Total reward per controller over the whole trace (one static strategy per
/// entry). Rows are independent; OpenMP-parallel over controllers, serial
/// within a row so each total is a fixed-order sum.
std::vector<double> static_totals(std::span<const MarketStep> trace,
                                  const PoolParams& pool,
                                  std::span<const Controller> grid);

std::vector<double> static_totals_serial(std::span<const MarketStep> trace,
                                         const PoolParams& pool,
                                         std::span<const Controller> grid);

} // namespace lpsim::kernels

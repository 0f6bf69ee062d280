#include "lpsim/bounds.hpp"

#include "lpsim/kernels.hpp"
#include "lpsim/reward.hpp"
#include "lpsim/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpsim {

namespace {

// Relative slack for precondition gates and bound comparisons, so traces
// constructed exactly at a boundary are not rejected by rounding.
constexpr double kSlack = 1e-12;

bool leq(double lhs, double rhs) {
    return lhs <= rhs + kSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

bool geq(double lhs, double rhs) { return leq(rhs, lhs); }

void require_trace(std::span<const MarketStep> trace) {
    if (trace.empty())
        throw std::invalid_argument("trace must contain at least one step");
}

double static_total(std::span<const MarketStep> trace, const PoolParams& pool,
                    Controller n) {
    return run_static(trace, pool, n).total;
}

double volume_sum(std::span<const MarketStep> trace) {
    double sum = 0.0;
    for (const MarketStep& step : trace)
        sum += step.u;
    return sum;
}

Precondition volume_cap(std::span<const MarketStep> trace, const PoolParams& pool) {
    const double cap = 2.0 / pool.gamma;
    bool ok = true;
    for (const MarketStep& step : trace)
        ok = ok && leq(step.u, cap);
    return {"u_t <= 2/gamma", ok};
}

Precondition volume_floor(std::span<const MarketStep> trace, double floor_value) {
    bool ok = true;
    for (const MarketStep& step : trace)
        ok = ok && geq(step.u, floor_value);
    return {"u_t >= volume floor", ok};
}

Precondition price_factor_cap(std::span<const MarketStep> trace, const PoolParams& pool) {
    const double log_d = std::log(pool.d);
    bool ok = true;
    for (const MarketStep& step : trace)
        ok = ok && leq(std::abs(step.rho) * log_d, std::log(2.0));
    return {"d^|rho_t| <= 2", ok};
}

void finalize(BoundReport& report) {
    report.preconditions_met = std::all_of(
        report.preconditions.begin(), report.preconditions.end(),
        [](const Precondition& c) { return c.met; });
    if (!report.preconditions_met) {
        report.satisfied.reset();
        return;
    }
    // Lemma 3 caps a range from above; everything else is a lower bound.
    if (report.bound_name == BoundName::Lemma3)
        report.satisfied = leq(report.realized_value, report.bound_value);
    else
        report.satisfied = geq(report.realized_value, report.bound_value);
}

struct AdaptiveArtifacts {
    EwaParams params;
    EwaRun run;
};

AdaptiveArtifacts run_adaptive(std::span<const MarketStep> trace, const PoolParams& pool) {
    const EwaParams params =
        default_params(static_cast<std::int64_t>(trace.size()), pool);
    EwaRunOptions options;
    options.record_distributions = false;
    return {params, run_ewa(trace, pool, params, options)};
}

BoundReport theorem1_report(std::span<const MarketStep> trace, const PoolParams& pool,
                            double a, BoundName label) {
    require_trace(trace);
    validate(pool);
    if (!(a >= 2.0))
        throw std::invalid_argument("theorem1 requires a >= 2");

    BoundReport report;
    report.bound_name = label;
    const double log_d = std::log(pool.d);
    const double avg = avg_log_price_change(trace);
    const double n = 4.0 * avg;

    report.preconditions.push_back({"controller 4P > 0", avg > 0.0});
    report.preconditions.push_back({"P ln d <= 1", leq(avg * log_d, 1.0)});
    report.preconditions.push_back(
        volume_floor(trace, (a / pool.gamma) * avg * avg * log_d * log_d));
    report.preconditions.push_back(volume_cap(trace, pool));

    if (avg > 0.0) {
        std::size_t in_range = 0;
        for (const MarketStep& step : trace)
            if (std::abs(step.rho) <= n)
                ++in_range;
        report.bound_value = static_cast<double>(in_range) *
                             std::log1p(0.25 * (a - 2.0) * avg * log_d);
        report.realized_value = static_total(trace, pool, Controller::finite(n));
    }
    finalize(report);
    return report;
}

BoundReport lemma4_report(std::span<const MarketStep> trace, const PoolParams& pool,
                          const AdaptiveArtifacts& adaptive) {
    BoundReport report;
    report.bound_name = BoundName::Lemma4;
    report.preconditions.push_back(price_factor_cap(trace, pool));
    report.preconditions.push_back(volume_cap(trace, pool));

    const double best_static = *std::max_element(
        adaptive.run.final_cumulative.begin(), adaptive.run.final_cumulative.end());
    const double gap = lemma4_regret_gap(
        static_cast<double>(adaptive.params.num_controllers), adaptive.params.eta,
        static_cast<double>(trace.size()), 16.0);
    report.bound_value = best_static - gap;
    report.realized_value = adaptive.run.expected_log_reward;
    finalize(report);
    return report;
}

BoundReport theorem2_report(std::span<const MarketStep> trace, const PoolParams& pool,
                            const AdaptiveArtifacts& adaptive) {
    BoundReport report;
    report.bound_name = BoundName::Theorem2;
    const double log_d = std::log(pool.d);
    const double avg = avg_log_price_change(trace);
    const double t = static_cast<double>(trace.size());

    report.preconditions.push_back(price_factor_cap(trace, pool));
    report.preconditions.push_back(
        volume_floor(trace, (10.0 / pool.gamma) * avg * avg * log_d * log_d));
    report.preconditions.push_back(volume_cap(trace, pool));

    report.bound_value = 0.75 * t * avg * log_d -
                         23.0 * std::sqrt(t * std::log(std::log(32.0) / log_d));
    report.realized_value = adaptive.run.wealth_log;
    finalize(report);
    return report;
}

BoundReport corollary3_report(const BoundReport& theorem2) {
    BoundReport report = theorem2;
    report.bound_name = BoundName::Corollary3;
    report.preconditions.push_back(
        {"horizon past positivity crossover", theorem2.bound_value >= 0.0});
    report.bound_value = 0.0;
    finalize(report);
    return report;
}

} // namespace

std::string_view to_string(BoundName name) {
    switch (name) {
    case BoundName::Lemma1: return "Lemma1";
    case BoundName::Corollary1: return "Corollary1";
    case BoundName::Lemma2: return "Lemma2";
    case BoundName::Theorem1: return "Theorem1";
    case BoundName::Corollary2: return "Corollary2";
    case BoundName::Lemma3: return "Lemma3";
    case BoundName::Lemma4: return "Lemma4";
    case BoundName::Theorem2: return "Theorem2";
    case BoundName::Corollary3: return "Corollary3";
    }
    return "unknown";
}

double avg_log_price_change(std::span<const MarketStep> trace) {
    require_trace(trace);
    double sum = 0.0;
    for (const MarketStep& step : trace)
        sum += std::abs(step.rho);
    return sum / static_cast<double>(trace.size());
}

BoundReport lemma1_bound(std::span<const MarketStep> trace, const PoolParams& pool) {
    require_trace(trace);
    validate(pool);
    BoundReport report;
    report.bound_name = BoundName::Lemma1;
    report.preconditions.push_back(volume_cap(trace, pool));

    const double t = static_cast<double>(trace.size());
    report.bound_value = 0.5 * pool.gamma * volume_sum(trace) -
                         0.5 * t * avg_log_price_change(trace) * std::log(pool.d);
    report.realized_value = static_total(trace, pool, Controller::infinite());
    finalize(report);
    return report;
}

BoundReport corollary1_bound(std::span<const MarketStep> trace, const PoolParams& pool) {
    BoundReport report = lemma1_bound(trace, pool);
    report.bound_name = BoundName::Corollary1;

    const double mean_u = volume_sum(trace) / static_cast<double>(trace.size());
    const double threshold =
        avg_log_price_change(trace) * std::log(pool.d) / pool.gamma;
    report.preconditions.push_back({"mean u >= P ln d / gamma", geq(mean_u, threshold)});
    report.bound_value = 0.0;
    finalize(report);
    return report;
}

BoundReport lemma2_bound(std::span<const MarketStep> trace, const PoolParams& pool,
                         double n) {
    require_trace(trace);
    validate(pool);
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("lemma2 controller must be a positive real");

    BoundReport report;
    report.bound_name = BoundName::Lemma2;

    const double log_d = std::log(pool.d);
    const double denom = -std::expm1(-0.5 * n * log_d); // 1 - d^(-n/2)
    std::size_t out_of_range = 0;
    double fee_sum = 0.0;
    for (const MarketStep& step : trace) {
        if (std::abs(step.rho) > n)
            ++out_of_range;
        else
            fee_sum += std::log1p(pool.gamma * step.u / denom);
    }
    const double t = static_cast<double>(trace.size());
    report.bound_value = 0.25 * n * static_cast<double>(out_of_range) * log_d -
                         t * avg_log_price_change(trace) * log_d + fee_sum;
    report.realized_value = static_total(trace, pool, Controller::finite(n));
    finalize(report);
    return report;
}

BoundReport theorem1_bound(std::span<const MarketStep> trace, const PoolParams& pool,
                           double a) {
    return theorem1_report(trace, pool, a, BoundName::Theorem1);
}

BoundReport corollary2_bound(std::span<const MarketStep> trace, const PoolParams& pool) {
    BoundReport report = theorem1_report(trace, pool, 2.0, BoundName::Corollary2);
    report.bound_value = 0.0; // ln(1 + 0) per step
    finalize(report);
    return report;
}

BoundReport reward_range_check(std::span<const MarketStep> trace,
                               const PoolParams& pool, int num_controllers) {
    require_trace(trace);
    validate(pool);

    BoundReport report;
    report.bound_name = BoundName::Lemma3;
    const int expected =
        static_cast<int>(std::floor(std::log(32.0) / std::log(pool.d)));
    report.preconditions.push_back(
        {"N == floor(log_d 32)", num_controllers == expected});
    report.preconditions.push_back(price_factor_cap(trace, pool));
    report.preconditions.push_back(volume_cap(trace, pool));
    report.bound_value = 16.0;

    if (num_controllers >= 1) {
        const std::vector<Controller> grid = integer_grid(num_controllers);
        const kernels::ExpertTable table = kernels::make_expert_table(grid, pool);
        std::vector<double> rewards(grid.size());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const MarketStep& step : trace) {
            kernels::expert_rewards(table, step, rewards);
            for (double r : rewards) {
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
        report.realized_value = hi - lo;
        finalize(report);
        // The range cap comes with the per-reward window [-ln 2, 15].
        if (report.satisfied.has_value())
            report.satisfied =
                *report.satisfied && geq(lo, -std::log(2.0)) && leq(hi, 15.0);
    } else {
        finalize(report);
    }
    return report;
}

double lemma4_regret_gap(double num_experts, double eta, double horizon, double range) {
    if (!(num_experts >= 1.0) || !(eta > 0.0) || !(horizon > 0.0) || !(range > 0.0))
        throw std::invalid_argument("lemma4_regret_gap requires positive arguments");
    return std::log(num_experts) / eta + 0.5 * eta * horizon * range * range;
}

BoundReport lemma4_bound(std::span<const MarketStep> trace, const PoolParams& pool) {
    require_trace(trace);
    validate(pool);
    return lemma4_report(trace, pool, run_adaptive(trace, pool));
}

BoundReport theorem2_bound(std::span<const MarketStep> trace, const PoolParams& pool) {
    require_trace(trace);
    validate(pool);
    return theorem2_report(trace, pool, run_adaptive(trace, pool));
}

BoundReport corollary3_bound(std::span<const MarketStep> trace, const PoolParams& pool) {
    return corollary3_report(theorem2_bound(trace, pool));
}

double corollary3_min_horizon(std::span<const MarketStep> trace, const PoolParams& pool) {
    require_trace(trace);
    validate(pool);
    const double log_d = std::log(pool.d);
    const double p_log = avg_log_price_change(trace) * log_d;
    if (p_log <= 0.0)
        return std::numeric_limits<double>::infinity();
    const double scale = 92.0 / (3.0 * p_log);
    return scale * scale * std::log(std::log(32.0) / log_d);
}

std::vector<BoundReport> check_all_bounds(std::span<const MarketStep> trace,
                                          const PoolParams& pool, double lemma2_n,
                                          double theorem1_a) {
    require_trace(trace);
    validate(pool);

    std::vector<BoundReport> reports;
    reports.reserve(9);
    reports.push_back(lemma1_bound(trace, pool));
    reports.push_back(corollary1_bound(trace, pool));
    reports.push_back(lemma2_bound(trace, pool, lemma2_n));
    reports.push_back(theorem1_bound(trace, pool, theorem1_a));
    reports.push_back(corollary2_bound(trace, pool));

    const AdaptiveArtifacts adaptive = run_adaptive(trace, pool);
    reports.push_back(
        reward_range_check(trace, pool, adaptive.params.num_controllers));
    reports.push_back(lemma4_report(trace, pool, adaptive));
    const BoundReport theorem2 = theorem2_report(trace, pool, adaptive);
    reports.push_back(theorem2);
    reports.push_back(corollary3_report(theorem2));
    return reports;
}

bool any_violation(std::span<const BoundReport> reports) {
    for (const BoundReport& report : reports)
        if (report.preconditions_met && report.satisfied.has_value() && !*report.satisfied)
            return true;
    return false;
}

TermBoundParts term_bound_parts(double d, double n, double rho) {
    if (!(d > 1.0) || !(n > 0.0))
        throw std::domain_error("term_bound_parts requires d > 1 and n > 0");
    const double log_d = std::log(d);
    const double half_pow = std::exp(0.5 * n * log_d);
    const double inv_half_pow = 1.0 / half_pow;
    const double price_pow = std::exp(0.5 * rho * log_d);
    TermBoundParts parts;
    parts.upper = half_pow * half_pow * half_pow - half_pow;
    parts.middle = std::exp(std::abs(rho) * log_d) *
                   (2.0 * price_pow - inv_half_pow * (1.0 + price_pow * price_pow));
    parts.lower = 2.0 * (1.0 - inv_half_pow);
    return parts;
}

} // namespace lpsim

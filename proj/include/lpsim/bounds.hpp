#pragma once

#include "lpsim/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lpsim {

enum class BoundName {
    Lemma1,
    Corollary1,
    Lemma2,
    Theorem1,
    Corollary2,
    Lemma3,
    Lemma4,
    Theorem2,
    Corollary3,
};

std::string_view to_string(BoundName name);

struct Precondition {
    std::string name;
    bool met = false;
};

/// One guarantee evaluated against a trace. `satisfied` is empty ("not
/// applicable") whenever a precondition fails; a false value with met
/// preconditions indicates an implementation bug, never a data problem.
struct BoundReport {
    BoundName bound_name = BoundName::Lemma1;
    double bound_value = 0.0;
    double realized_value = 0.0;
    std::vector<Precondition> preconditions;
    bool preconditions_met = true;
    std::optional<bool> satisfied;
};

/// P: mean absolute logarithmic price change over the trace.
double avg_log_price_change(std::span<const MarketStep> trace);

/// Full-range strategy: G_T(inf) >= (gamma/2) sum u_t - (T/2) P ln d,
/// requires u_t <= 2/gamma.
BoundReport lemma1_bound(std::span<const MarketStep> trace, const PoolParams& pool);

/// Positivity of the full-range reward when mean volume reaches P ln d / gamma.
BoundReport corollary1_bound(std::span<const MarketStep> trace, const PoolParams& pool);

/// n-static strategy lower bound; n may be any positive real.
BoundReport lemma2_bound(std::span<const MarketStep> trace, const PoolParams& pool,
                         double n);

/// 4P-static strategy bound with volume floor (a/gamma) P^2 ln^2 d, a >= 2.
BoundReport theorem1_bound(std::span<const MarketStep> trace, const PoolParams& pool,
                           double a);

/// Positivity of the 4P-static reward (the a = 2 boundary of the above).
BoundReport corollary2_bound(std::span<const MarketStep> trace, const PoolParams& pool);

/// All per-step rewards over the integer grid 1..N stay in [-ln 2, 15] and
/// span at most 16, given d^|rho| <= 2, u <= 2/gamma and N = floor(log_d 32).
/// realized_value is the observed max - min; this is an upper-bound check.
BoundReport reward_range_check(std::span<const MarketStep> trace,
                               const PoolParams& pool, int num_controllers);

/// ln N / eta + (eta/2) T R^2.
double lemma4_regret_gap(double num_experts, double eta, double horizon, double range);

/// Expected adaptive reward vs. the best static expert minus the regret gap.
BoundReport lemma4_bound(std::span<const MarketStep> trace, const PoolParams& pool);

/// Adaptive-strategy wealth vs. (3/4) T P ln d - 23 sqrt(T ln log_d 32).
BoundReport theorem2_bound(std::span<const MarketStep> trace, const PoolParams& pool);

/// Positivity of the adaptive reward once the horizon clears the crossover.
BoundReport corollary3_bound(std::span<const MarketStep> trace, const PoolParams& pool);

/// Horizon at which the adaptive lower bound turns positive, from solving
/// (3/4) T P ln d = 23 sqrt(T ln log_d 32); +inf for a constant-price trace.
double corollary3_min_horizon(std::span<const MarketStep> trace, const PoolParams& pool);

/// Evaluates every bound, sharing one adaptive run across the reports.
std::vector<BoundReport> check_all_bounds(std::span<const MarketStep> trace,
                                          const PoolParams& pool, double lemma2_n,
                                          double theorem1_a);

/// True when some report has met preconditions but a violated bound -- the
/// condition that turns a checking run into a failure.
bool any_violation(std::span<const BoundReport> reports);

/// The three members of the middle-branch extremal inequality
/// upper >= middle >= lower that the static lower bound rests on:
/// upper = d^(3n/2) - d^(n/2), middle = d^|rho| (2 d^(rho/2) - d^(-n/2)(1 + d^rho)),
/// lower = 2 (1 - d^(-n/2)).
struct TermBoundParts {
    double upper = 0.0;
    double middle = 0.0;
    double lower = 0.0;
};

TermBoundParts term_bound_parts(double d, double n, double rho);

} // namespace lpsim

#include "lpsim/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace lpsim {

namespace {

// 1 - d^(-n/2), evaluated as -expm1 to stay accurate for narrow ranges.
double one_minus_inv_half_pow(double n, double d) {
    return -std::expm1(-0.5 * n * std::log(d));
}

} // namespace

double fee_fraction(Controller n, const MarketStep& step, const PoolParams& pool) {
    if (!(step.u >= 0.0))
        throw std::domain_error("relative volume must be nonnegative");
    if (n.is_infinite())
        return pool.gamma * step.u;
    if (std::abs(step.rho) > n.width())
        return 0.0;
    return pool.gamma * step.u / one_minus_inv_half_pow(n.width(), pool.d);
}

double value_ratio(Controller n, double rho, const PoolParams& pool) {
    const double d = pool.d;
    if (n.is_infinite())
        return std::pow(d, 0.5 * rho);

    const double width = n.width();
    const double half_pow = std::pow(d, 0.5 * width); // d^(n/2)
    if (rho > width)
        return 0.5 * (1.0 + half_pow);
    if (rho < -width)
        return std::pow(d, rho) * 0.5 * (1.0 + half_pow);

    const double inv_half_pow = 1.0 / half_pow; // d^(-n/2)
    const double price_pow = std::pow(d, 0.5 * rho); // d^(rho/2)
    const double numer = 2.0 * price_pow - inv_half_pow * (1.0 + price_pow * price_pow);
    // The same d^(-n/2) in numerator and denominator keeps a zero step at
    // exactly one.
    return numer / (2.0 * (1.0 - inv_half_pow));
}

double step_reward(Controller n, const MarketStep& step, const PoolParams& pool) {
    const double arg = value_ratio(n, step.rho, pool) + fee_fraction(n, step, pool);
    if (!(arg > 0.0))
        throw std::domain_error("reward argument is nonpositive");
    return std::log(arg);
}

Reserves portfolio_after_step(Controller n, double price, double value,
                              double rho, const PoolParams& pool) {
    if (!(price > 0.0) || !(value > 0.0))
        throw std::domain_error("portfolio_after_step requires positive price and value");

    const double d = pool.d;
    const double liquidity =
        liquidity_for_symmetric_deposit(value, price, n, d);
    const double sqrt_p = std::sqrt(price);

    if (n.is_infinite()) {
        return {liquidity / sqrt_p * std::pow(d, -0.5 * rho),
                liquidity * sqrt_p * std::pow(d, 0.5 * rho)};
    }

    const double width = n.width();
    const double half_pow = std::pow(d, 0.5 * width);
    const double inv_half_pow = 1.0 / half_pow;
    if (rho > width)
        return {0.0, liquidity * sqrt_p * (half_pow - inv_half_pow)};
    if (rho < -width)
        return {liquidity / sqrt_p * (half_pow - inv_half_pow), 0.0};
    return {liquidity / sqrt_p * (std::pow(d, -0.5 * rho) - inv_half_pow),
            liquidity * sqrt_p * (std::pow(d, 0.5 * rho) - inv_half_pow)};
}

double total_reward(std::span<const Controller> controllers,
                    std::span<const MarketStep> trace, const PoolParams& pool) {
    if (controllers.size() != trace.size())
        throw std::invalid_argument("controller and step sequences differ in length");
    if (trace.empty())
        throw std::invalid_argument("trace must contain at least one step");

    double total = 0.0;
    for (std::size_t t = 0; t < trace.size(); ++t)
        total += step_reward(controllers[t], trace[t], pool);
    return total;
}

} // namespace lpsim

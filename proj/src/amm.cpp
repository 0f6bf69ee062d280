#include "lpsim/amm.hpp"

#include <cmath>
#include <stdexcept>

namespace lpsim {

namespace {

void require_valid(const PriceRange& range) {
    if (!(range.lower > 0.0) || !(range.lower < range.upper))
        throw std::domain_error("price range must satisfy 0 < lower < upper");
}

} // namespace

double spot_price(const Reserves& reserves) {
    if (!(reserves.token_a > 0.0))
        throw std::domain_error("spot price undefined for empty token A reserve");
    return reserves.token_b / reserves.token_a;
}

Reserves v2_reserves(double liquidity, double price) {
    if (!(liquidity > 0.0) || !(price > 0.0))
        throw std::domain_error("v2_reserves requires positive liquidity and price");
    const double sqrt_p = std::sqrt(price);
    return {liquidity / sqrt_p, liquidity * sqrt_p};
}

Reserves v3_real_reserves(double liquidity, double price, const PriceRange& range) {
    require_valid(range);
    if (!(liquidity > 0.0) || !(price > 0.0))
        throw std::domain_error("v3_real_reserves requires positive liquidity and price");

    const double sqrt_a = std::sqrt(range.lower);
    const double sqrt_b = std::sqrt(range.upper);
    if (price > range.upper) {
        // Price above the range: the position degenerated into token B only.
        return {0.0, (sqrt_b - sqrt_a) * liquidity};
    }
    if (price < range.lower) {
        // Below the range: token A only.
        return {(1.0 / sqrt_a - 1.0 / sqrt_b) * liquidity, 0.0};
    }
    const double sqrt_p = std::sqrt(price);
    return {(1.0 / sqrt_p - 1.0 / sqrt_b) * liquidity,
            (sqrt_p - sqrt_a) * liquidity};
}

double liquidity_for_symmetric_deposit(double value, double price,
                                       Controller half_width, double interval_size) {
    if (!(value > 0.0) || !(price > 0.0))
        throw std::domain_error("deposit requires positive value and price");
    if (!(interval_size >= 1.0001 && interval_size < 2.0))
        throw std::domain_error("interval size must be in [1.0001, 2)");

    const double sqrt_p = std::sqrt(price);
    if (half_width.is_infinite())
        return value / (2.0 * sqrt_p);
    // 1 - d^(-n/2) via expm1 keeps precision for narrow ranges.
    const double denom = -std::expm1(-0.5 * half_width.width() * std::log(interval_size));
    return value / (2.0 * sqrt_p * denom);
}

SwapResult swap_exact_in(const Reserves& reserves, double amount_in, double fee) {
    if (!(reserves.token_a > 0.0) || !(reserves.token_b > 0.0))
        throw std::domain_error("swap requires positive reserves");
    if (!(amount_in > 0.0))
        throw std::domain_error("swap requires a positive input amount");
    if (!(fee >= 0.0 && fee < 1.0))
        throw std::domain_error("fee must be in [0, 1)");

    const double x = reserves.token_a;
    const double y = reserves.token_b;
    const double gross_out = y - (x * y) / (x + amount_in);
    return {(1.0 - fee) * gross_out, {x + amount_in, y - gross_out}};
}

} // namespace lpsim

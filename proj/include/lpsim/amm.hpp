#pragma once

#include "lpsim/types.hpp"

namespace lpsim {

/// Token amounts held by a pool or a position.
struct Reserves {
    double token_a = 0.0;
    double token_b = 0.0;
};

/// Active price interval [lower, upper], 0 < lower < upper.
struct PriceRange {
    double lower = 0.0;
    double upper = 0.0;
};

/// Spot price of token A in units of token B: the reserve ratio y/x.
double spot_price(const Reserves& reserves);

/// Reserves of a full-range (v2) pool with the given liquidity and spot price:
/// x = L/sqrt(p), y = L*sqrt(p).
Reserves v2_reserves(double liquidity, double price);

/// Real reserves of a concentrated position with liquidity L over [a, b] at
/// spot price p. In range: x = (1/sqrt(p) - 1/sqrt(b))L, y = (sqrt(p) - sqrt(a))L.
/// Above the range the position holds only token B, below it only token A.
Reserves v3_real_reserves(double liquidity, double price, const PriceRange& range);

/// Liquidity obtained by depositing a portfolio worth `value` (token B units,
/// half in each token) into the symmetric range [p*d^-n, p*d^n]:
/// L = value / (2*sqrt(p)*(1 - d^(-n/2))), or value / (2*sqrt(p)) for n = inf.
double liquidity_for_symmetric_deposit(double value, double price,
                                       Controller half_width, double interval_size);

struct SwapResult {
    double amount_out = 0.0; // net of fees, token B units
    Reserves new_reserves;   // post-trade pool (gross amounts)
};

/// Constant-product swap of `amount_in` token A into the pool. The gross
/// output keeps x*y invariant; the trader receives (1-fee) of it and the fee
/// accrues to LPs outside the reserves.
SwapResult swap_exact_in(const Reserves& reserves, double amount_in, double fee);

} // namespace lpsim

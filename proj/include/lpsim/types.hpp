#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpsim {

/// Pool constants: price-interval size d and fee tier gamma.
struct PoolParams {
    double d = 1.0001;   // interval size, 1.0001 <= d < 2
    double gamma = 0.003; // fee tier, 0 < gamma < 1
};

/// Throws std::domain_error if the pool parameters are out of range.
inline void validate(const PoolParams& pool) {
    if (!(pool.d >= 1.0001 && pool.d < 2.0))
        throw std::domain_error("interval size d must be in [1.0001, 2)");
    if (!(pool.gamma > 0.0 && pool.gamma < 1.0))
        throw std::domain_error("fee tier gamma must be in (0, 1)");
}

/// One time step's derived observables: logarithmic price change rho
/// (in units of log_d) and relative trading volume u.
struct MarketStep {
    double rho = 0.0;
    double u = 0.0;
};

/// Concentration controller: half-width, in interval-size exponents, of the
/// symmetric range [p*d^-n, p*d^n] liquidity is provided into. Either a
/// positive real value or infinite (full-range, v2-style).
class Controller {
public:
    static Controller finite(double n) {
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::domain_error("finite controller must be a positive real");
        return Controller(n);
    }
    static Controller infinite() {
        return Controller(std::numeric_limits<double>::infinity());
    }

    bool is_infinite() const { return std::isinf(n_); }

    /// Half-width n; +infinity for the full-range controller.
    double width() const { return n_; }

private:
    explicit Controller(double n) : n_(n) {}
    double n_;
};

} // namespace lpsim

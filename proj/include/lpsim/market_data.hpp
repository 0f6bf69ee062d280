#pragma once

#include "lpsim/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpsim {

/// One raw observation: spot price, token-B volume traded in the sampling
/// bucket, and the pool's active liquidity.
struct RawSample {
    std::int64_t timestamp = 0; // seconds since epoch
    double price = 0.0;
    double volume = 0.0;
    double liquidity = 0.0;
};

/// Fixed-step aggregate: closing price, summed volume, time-weighted mean
/// liquidity.
struct StepBucket {
    double price = 0.0;
    double volume = 0.0;
    double liquidity = 0.0;
};

/// Table-style summary of a derived trace.
struct TraceStats {
    double avg_abs_rho = 0.0;       // P
    double mean_u = 0.0;
    double max_price_factor = 1.0;  // max d^|rho|
    double volume_threshold = 0.0;  // P ln d / gamma
    std::int64_t num_steps = 0;
};

/// Parse or validation failure carrying the 1-based input line number.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads `timestamp,price,volume,liquidity` CSV (header required). Enforces
/// strictly increasing timestamps, positive prices and liquidity,
/// nonnegative volume.
std::vector<RawSample> parse_raw_csv(std::istream& in);

/// Buckets samples by floor(timestamp / step_seconds). Per bucket: price is
/// the last sample's, volume is summed, liquidity is the time-weighted mean
/// of the step function defined by the samples. Buckets without samples carry
/// the previous price and liquidity forward with zero volume.
std::vector<StepBucket> aggregate(std::span<const RawSample> samples,
                                  std::int64_t step_seconds);

/// rho = ln(p_next/p_t)/ln d, u = v_t / (2 sqrt(p_t) liquidity_t).
MarketStep derive_step(double price, double next_price, double volume,
                       double liquidity, const PoolParams& pool);

/// K buckets yield K-1 steps: step t runs from bucket t-1's close to bucket
/// t's close and carries bucket t's volume and liquidity.
std::vector<MarketStep> build_trace(std::span<const StepBucket> buckets,
                                    const PoolParams& pool);

TraceStats compute_stats(std::span<const MarketStep> trace, const PoolParams& pool);

/// Canonical trace file: CSV with header `rho,u`.
std::vector<MarketStep> parse_trace_csv(std::istream& in);
void write_trace_csv(std::ostream& out, std::span<const MarketStep> trace);

} // namespace lpsim

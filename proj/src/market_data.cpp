#include "lpsim/market_data.hpp"

#include "lpsim/json_writer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace lpsim {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.back() == '\r' || std::isspace(static_cast<unsigned char>(text.back()))))
        text.remove_suffix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    return text;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view field, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw FormatError(line, "expected a number, got '" + std::string(field) + "'");
    if (!std::isfinite(value))
        throw FormatError(line, "non-finite number");
    return value;
}

std::int64_t parse_timestamp(std::string_view field, std::size_t line) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw FormatError(line, "expected an integer timestamp, got '" + std::string(field) + "'");
    return value;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace

std::vector<RawSample> parse_raw_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line))
        throw FormatError(1, "empty input");
    ++line_no;
    if (trim(line) != "timestamp,price,volume,liquidity")
        throw FormatError(1, "expected header 'timestamp,price,volume,liquidity'");

    std::vector<RawSample> samples;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != 4)
            throw FormatError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));

        RawSample sample;
        sample.timestamp = parse_timestamp(fields[0], line_no);
        sample.price = parse_double(fields[1], line_no);
        sample.volume = parse_double(fields[2], line_no);
        sample.liquidity = parse_double(fields[3], line_no);

        if (!samples.empty() && sample.timestamp <= samples.back().timestamp)
            throw FormatError(line_no, "timestamps must be strictly increasing");
        if (!(sample.price > 0.0))
            throw FormatError(line_no, "price must be positive");
        if (!(sample.volume >= 0.0))
            throw FormatError(line_no, "volume must be nonnegative");
        if (!(sample.liquidity > 0.0))
            throw FormatError(line_no, "liquidity must be positive");
        samples.push_back(sample);
    }
    if (samples.empty())
        throw FormatError(line_no, "no samples");
    return samples;
}

std::vector<StepBucket> aggregate(std::span<const RawSample> samples,
                                  std::int64_t step_seconds) {
    if (samples.empty())
        throw std::invalid_argument("no samples to aggregate");
    if (step_seconds <= 0)
        throw std::invalid_argument("step length must be positive");
    if (!std::is_sorted(samples.begin(), samples.end(),
                        [](const RawSample& a, const RawSample& b) {
                            return a.timestamp < b.timestamp;
                        }))
        throw std::invalid_argument("samples must be sorted by timestamp");

    const std::int64_t first = floor_div(samples.front().timestamp, step_seconds);
    const std::int64_t last = floor_div(samples.back().timestamp, step_seconds);

    std::vector<StepBucket> buckets;
    buckets.reserve(static_cast<std::size_t>(last - first + 1));

    std::size_t idx = 0;
    // The liquidity step function extends the first observation backwards.
    double carry_liquidity = samples.front().liquidity;
    double carry_price = samples.front().price;

    for (std::int64_t b = first; b <= last; ++b) {
        const std::int64_t lo = b * step_seconds;
        const std::int64_t hi = lo + step_seconds;

        StepBucket bucket;
        double weighted = 0.0;
        std::int64_t pos = lo;
        while (idx < samples.size() && samples[idx].timestamp < hi) {
            weighted += carry_liquidity * static_cast<double>(samples[idx].timestamp - pos);
            pos = samples[idx].timestamp;
            carry_liquidity = samples[idx].liquidity;
            carry_price = samples[idx].price;
            bucket.volume += samples[idx].volume;
            ++idx;
        }
        weighted += carry_liquidity * static_cast<double>(hi - pos);
        bucket.liquidity = weighted / static_cast<double>(step_seconds);
        bucket.price = carry_price;
        buckets.push_back(bucket);
    }
    return buckets;
}

MarketStep derive_step(double price, double next_price, double volume,
                       double liquidity, const PoolParams& pool) {
    validate(pool);
    if (!(price > 0.0) || !(next_price > 0.0))
        throw std::domain_error("prices must be positive");
    if (!(liquidity > 0.0))
        throw std::domain_error("liquidity must be positive");
    if (!(volume >= 0.0))
        throw std::domain_error("volume must be nonnegative");

    MarketStep step;
    step.rho = std::log(next_price / price) / std::log(pool.d);
    step.u = volume / (2.0 * std::sqrt(price) * liquidity);
    return step;
}

std::vector<MarketStep> build_trace(std::span<const StepBucket> buckets,
                                    const PoolParams& pool) {
    if (buckets.size() < 2)
        throw std::invalid_argument("need at least two buckets to derive a step");
    std::vector<MarketStep> trace;
    trace.reserve(buckets.size() - 1);
    for (std::size_t i = 1; i < buckets.size(); ++i)
        trace.push_back(derive_step(buckets[i - 1].price, buckets[i].price,
                                    buckets[i].volume, buckets[i].liquidity, pool));
    return trace;
}

TraceStats compute_stats(std::span<const MarketStep> trace, const PoolParams& pool) {
    validate(pool);
    if (trace.empty())
        throw std::invalid_argument("trace must contain at least one step");

    TraceStats stats;
    stats.num_steps = static_cast<std::int64_t>(trace.size());
    double abs_rho_sum = 0.0;
    double u_sum = 0.0;
    double max_abs_rho = 0.0;
    for (const MarketStep& step : trace) {
        abs_rho_sum += std::abs(step.rho);
        u_sum += step.u;
        max_abs_rho = std::max(max_abs_rho, std::abs(step.rho));
    }
    const double t = static_cast<double>(trace.size());
    stats.avg_abs_rho = abs_rho_sum / t;
    stats.mean_u = u_sum / t;
    stats.max_price_factor = std::pow(pool.d, max_abs_rho);
    stats.volume_threshold = stats.avg_abs_rho * std::log(pool.d) / pool.gamma;
    return stats;
}

std::vector<MarketStep> parse_trace_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line))
        throw FormatError(1, "empty input");
    ++line_no;
    if (trim(line) != "rho,u")
        throw FormatError(1, "expected header 'rho,u'");

    std::vector<MarketStep> trace;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2)
            throw FormatError(line_no, "expected 2 fields, got " + std::to_string(fields.size()));
        MarketStep step;
        step.rho = parse_double(fields[0], line_no);
        step.u = parse_double(fields[1], line_no);
        if (!(step.u >= 0.0))
            throw FormatError(line_no, "relative volume must be nonnegative");
        trace.push_back(step);
    }
    if (trace.empty())
        throw FormatError(line_no, "no steps");
    return trace;
}

void write_trace_csv(std::ostream& out, std::span<const MarketStep> trace) {
    out << "rho,u\n";
    for (const MarketStep& step : trace)
        out << g17(step.rho) << ',' << g17(step.u) << '\n';
}

} // namespace lpsim

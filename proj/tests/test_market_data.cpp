#include "lpsim/market_data.hpp"

#include "support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace lpsim;
using testutil::close_rel;
using testutil::uniform;

namespace {

const PoolParams kPool{1.01, 0.003};

// Five samples, aggregated at 100-second steps. Worked through by hand:
//
//   bucket 0 [0,100):    sample @50  -> price 100, volume 10, liquidity 1000
//   bucket 1 [100,200):  samples @120, @180
//                        close 102.01, volume 20+30 = 50
//                        liquidity (1000*20 + 1000*60 + 2000*20)/100 = 1200
//   bucket 2 [200,300):  empty -> price 102.01 carried, volume 0, liq 2000
//   bucket 3 [300,400):  empty -> same carry
//   bucket 4 [400,500):  sample @430 -> price 100, volume 40,
//                        liquidity (2000*30 + 1000*70)/100 = 1300
const char* kRawCsv =
    "timestamp,price,volume,liquidity\n"
    "50,100.0,10.0,1000.0\n"
    "120,101.0,20.0,1000.0\n"
    "180,102.01,30.0,2000.0\n"
    "430,100.0,40.0,1000.0\n";

std::vector<RawSample> parse(const char* text) {
    std::istringstream in(text);
    return parse_raw_csv(in);
}

} // namespace

TEST_CASE("raw csv parsing accepts the schema and rejects malformed rows") {
    const auto samples = parse(kRawCsv);
    REQUIRE(samples.size() == 4);
    CHECK(samples[0].timestamp == 50);
    CHECK(samples[2].price == 102.01);
    CHECK(samples[3].liquidity == 1000.0);

    auto expect_line = [](const char* text, std::size_t line) {
        std::istringstream in(text);
        try {
            parse_raw_csv(in);
            FAIL_CHECK("expected a format error");
        } catch (const FormatError& e) {
            CHECK(e.line() == line);
        }
    };

    expect_line("price,volume\n", 1);
    expect_line("timestamp,price,volume,liquidity\n1,1.0,0.0\n", 2);
    expect_line("timestamp,price,volume,liquidity\n1,1.0,0.0,1.0\nx,2.0,0.0,1.0\n", 3);
    expect_line("timestamp,price,volume,liquidity\n5,1.0,0.0,1.0\n4,1.0,0.0,1.0\n", 3);
    expect_line("timestamp,price,volume,liquidity\n1,-2.0,0.0,1.0\n", 2);
    expect_line("timestamp,price,volume,liquidity\n1,1.0,-1.0,1.0\n", 2);
    expect_line("timestamp,price,volume,liquidity\n1,1.0,0.0,0.0\n", 2);
}

TEST_CASE("aggregation: pass-through, merge, gaps, time-weighted liquidity") {
    const auto buckets = aggregate(parse(kRawCsv), 100);
    REQUIRE(buckets.size() == 5);

    CHECK(buckets[0].price == 100.0);
    CHECK(buckets[0].volume == 10.0);
    CHECK(buckets[0].liquidity == 1000.0);

    CHECK(buckets[1].price == 102.01);
    CHECK(buckets[1].volume == 50.0);
    CHECK(buckets[1].liquidity == 1200.0);

    for (int gap : {2, 3}) {
        CHECK(buckets[gap].price == 102.01);
        CHECK(buckets[gap].volume == 0.0);
        CHECK(buckets[gap].liquidity == 2000.0);
    }

    CHECK(buckets[4].price == 100.0);
    CHECK(buckets[4].volume == 40.0);
    CHECK(buckets[4].liquidity == 1300.0);

    // One sample per bucket passes through untouched.
    std::vector<RawSample> spread{{0, 2.0, 1.0, 10.0}, {100, 3.0, 2.0, 20.0}};
    const auto direct = aggregate(spread, 100);
    REQUIRE(direct.size() == 2);
    CHECK(direct[0].price == 2.0);
    CHECK(direct[1].volume == 2.0);

    std::vector<RawSample> merged{{0, 2.0, 3.0, 10.0}, {10, 2.5, 4.0, 10.0}};
    CHECK(aggregate(merged, 100)[0].volume == 7.0);
}

TEST_CASE("step derivation") {
    const MarketStep flat = derive_step(100, 100, 1000, 500, kPool);
    CHECK(flat.rho == 0.0);
    CHECK(close_rel(flat.u, 0.1, 1e-12));

    // Frozen: ln(1.01)/ln(1.0001).
    const MarketStep fine = derive_step(100, 101, 0, 1, {1.0001, 0.003});
    CHECK(close_rel(fine.rho, 99.508283614203194, 1e-12));
    CHECK(fine.u == 0.0);

    CHECK_THROWS_AS(derive_step(0, 1, 0, 1, kPool), std::domain_error);
    CHECK_THROWS_AS(derive_step(1, 1, 0, 0, kPool), std::domain_error);
}

TEST_CASE("log price changes compose across intermediate prices") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 200; ++i) {
        const double p1 = std::exp(uniform(rng, -2, 6));
        const double p2 = std::exp(uniform(rng, -2, 6));
        const double p3 = std::exp(uniform(rng, -2, 6));
        const double direct = derive_step(p1, p3, 0, 1, kPool).rho;
        const double stepped = derive_step(p1, p2, 0, 1, kPool).rho +
                               derive_step(p2, p3, 0, 1, kPool).rho;
        CHECK(close_rel(direct, stepped, 1e-12));
    }
}

TEST_CASE("relative volume ignores a common volume/liquidity scale") {
    std::mt19937_64 rng(62);
    for (int i = 0; i < 200; ++i) {
        const double price = std::exp(uniform(rng, -2, 6));
        const double volume = std::exp(uniform(rng, 0, 8));
        const double liquidity = std::exp(uniform(rng, 0, 8));
        const double scale = std::exp(uniform(rng, -4, 4));
        const double base = derive_step(price, price, volume, liquidity, kPool).u;
        const double scaled =
            derive_step(price, price, volume * scale, liquidity * scale, kPool).u;
        CHECK(close_rel(base, scaled, 1e-14));
    }
}

TEST_CASE("trace and stats from the hand-worked file") {
    const auto buckets = aggregate(parse(kRawCsv), 100);
    const auto trace = build_trace(buckets, kPool);
    REQUIRE(trace.size() == 4);

    // Step 1: 100 -> 102.01 = 1.01^2, u = 50/(2*10*1200).
    CHECK(close_rel(trace[0].rho, 2.0, 1e-12));
    CHECK(close_rel(trace[0].u, 50.0 / 24000.0, 1e-12));
    // Steps 2-3: carried price, no trades.
    CHECK(trace[1].rho == 0.0);
    CHECK(trace[1].u == 0.0);
    CHECK(trace[2].rho == 0.0);
    // Step 4: 102.01 -> 100, u = 40/(2*10.1*1300).
    CHECK(close_rel(trace[3].rho, -2.0, 1e-12));
    CHECK(close_rel(trace[3].u, 40.0 / 26260.0, 1e-12));

    const TraceStats stats = compute_stats(trace, kPool);
    CHECK(stats.num_steps == 4);
    CHECK(close_rel(stats.avg_abs_rho, 1.0, 1e-12));
    CHECK(close_rel(stats.mean_u, (50.0 / 24000.0 + 40.0 / 26260.0) / 4.0, 1e-12));
    CHECK(close_rel(stats.max_price_factor, 1.0201, 1e-12));
    CHECK(close_rel(stats.volume_threshold, std::log(1.01) / 0.003, 1e-12));
}

TEST_CASE("canonical trace files round-trip bitwise") {
    std::mt19937_64 rng(63);
    std::vector<MarketStep> trace(64);
    for (auto& step : trace) {
        step.rho = uniform(rng, -80, 80);
        step.u = std::exp(uniform(rng, -8, 6));
    }
    std::ostringstream out;
    write_trace_csv(out, trace);
    std::istringstream in(out.str());
    const auto parsed = parse_trace_csv(in);
    REQUIRE(parsed.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(parsed[i].rho == trace[i].rho);
        CHECK(parsed[i].u == trace[i].u);
    }
}

TEST_CASE("canonical trace parser validates like the raw parser") {
    auto expect_line = [](const char* text, std::size_t line) {
        std::istringstream in(text);
        try {
            parse_trace_csv(in);
            FAIL_CHECK("expected a format error");
        } catch (const FormatError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_line("u,rho\n", 1);
    expect_line("rho,u\n1.0\n", 2);
    expect_line("rho,u\n1.0,0.5\n2.0,-0.25\n", 3);
}

#include "lpsim/json_writer.hpp"

#include "support.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cstdlib>
#include <random>
#include <string>

using namespace lpsim;
using testutil::uniform;

TEST_CASE("g17 formatting round-trips every double") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 2000; ++i) {
        double value = uniform(rng, -1, 1) * std::exp(uniform(rng, -30, 30));
        if (i % 7 == 0)
            value = std::trunc(value);
        const std::string text = g17(value);
        CHECK(std::strtod(text.c_str(), nullptr) == value);
        // Re-serializing the parsed value reproduces the same bytes.
        CHECK(g17(std::strtod(text.c_str(), nullptr)) == text);
    }
    CHECK(g17(0.0) == "0");
    CHECK(g17(16.0) == "16");
}

TEST_CASE("writer emits canonical objects and arrays") {
    JsonWriter w;
    w.begin_object();
    w.key("name").value(std::string_view("a\"b"));
    w.key("count").value(std::int64_t{3});
    w.key("flag").value(false);
    w.key("items").begin_array().value(1.5).value(std::int64_t{2}).end_array();
    w.end_object();

    const nlohmann::json parsed = nlohmann::json::parse(w.str());
    CHECK(parsed["name"] == "a\"b");
    CHECK(parsed["count"] == 3);
    CHECK(parsed["flag"] == false);
    CHECK(parsed["items"][0] == 1.5);

    // Field order is insertion order.
    CHECK(w.str().find("\"name\"") < w.str().find("\"count\""));
}

TEST_CASE("trace stats serialize with the pool attached") {
    TraceStats stats;
    stats.num_steps = 12;
    stats.avg_abs_rho = 0.25;
    stats.mean_u = 0.5;
    stats.max_price_factor = 1.02;
    stats.volume_threshold = 0.75;
    const nlohmann::json parsed =
        nlohmann::json::parse(to_json(stats, PoolParams{1.01, 0.003}));
    CHECK(parsed["T"] == 12);
    CHECK(parsed["P"] == 0.25);
    CHECK(parsed["pool"]["d"] == 1.01);
    CHECK(parsed["pool"]["gamma"] == 0.003);
}

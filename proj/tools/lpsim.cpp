#include "lpsim/bounds.hpp"
#include "lpsim/json_writer.hpp"
#include "lpsim/kernels.hpp"
#include "lpsim/market_data.hpp"
#include "lpsim/reward.hpp"
#include "lpsim/strategy.hpp"
#include "lpsim/types.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariantViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoolOptions {
    std::string pool_path;
    std::optional<double> d;
    std::optional<double> gamma;
};

void add_pool_flags(CLI::App* cmd, PoolOptions& options) {
    cmd->add_option("--pool", options.pool_path, "pool config JSON: {\"d\": <real>, \"gamma\": <real>}");
    cmd->add_option("--d", options.d, "interval size (overrides --pool)");
    cmd->add_option("--gamma", options.gamma, "fee tier (overrides --pool)");
}

lpsim::PoolParams resolve_pool(const PoolOptions& options) {
    lpsim::PoolParams pool;
    bool have_d = false;
    bool have_gamma = false;
    if (!options.pool_path.empty()) {
        std::ifstream in(options.pool_path);
        if (!in)
            throw UsageError("cannot open pool config '" + options.pool_path + "'");
        nlohmann::json config;
        try {
            in >> config;
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("invalid pool config: " + std::string(e.what()));
        }
        if (config.contains("d")) {
            pool.d = config["d"].get<double>();
            have_d = true;
        }
        if (config.contains("gamma")) {
            pool.gamma = config["gamma"].get<double>();
            have_gamma = true;
        }
    }
    if (options.d) {
        pool.d = *options.d;
        have_d = true;
    }
    if (options.gamma) {
        pool.gamma = *options.gamma;
        have_gamma = true;
    }
    if (!have_d || !have_gamma)
        throw UsageError("pool parameters required: pass --pool or both --d and --gamma");
    lpsim::validate(pool);
    return pool;
}

std::vector<lpsim::MarketStep> load_trace(const std::string& path,
                                          const lpsim::PoolParams& pool,
                                          std::int64_t step_seconds) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open input '" + path + "'");

    std::string header;
    if (!std::getline(in, header))
        throw lpsim::FormatError(1, "empty input");
    in.seekg(0);

    while (!header.empty() && (header.back() == '\r' || header.back() == ' '))
        header.pop_back();
    if (header == "rho,u")
        return lpsim::parse_trace_csv(in);
    if (header == "timestamp,price,volume,liquidity") {
        const auto samples = lpsim::parse_raw_csv(in);
        const auto buckets = lpsim::aggregate(samples, step_seconds);
        return lpsim::build_trace(buckets, pool);
    }
    throw lpsim::FormatError(1, "unrecognized header; expected raw samples or a rho,u trace");
}

lpsim::Controller parse_controller(const std::string& text) {
    if (text == "inf")
        return lpsim::Controller::infinite();
    try {
        const double n = std::stod(text);
        return lpsim::Controller::finite(n);
    } catch (const std::exception&) {
        throw UsageError("invalid controller '" + text + "'");
    }
}

std::vector<lpsim::Controller> parse_grid(const std::string& text) {
    std::vector<lpsim::Controller> grid;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty())
            grid.push_back(parse_controller(item));
    if (grid.empty())
        throw UsageError("grid is empty");
    return grid;
}

std::string controller_label(const lpsim::Controller& n) {
    return n.is_infinite() ? "inf" : lpsim::g17(n.width());
}

void write_series_csv(const std::string& path, const std::vector<double>& series) {
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot open series output '" + path + "'");
    out << "t,reward,cumulative\n";
    double cumulative = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        cumulative += series[t];
        out << (t + 1) << ',' << lpsim::g17(series[t]) << ',' << lpsim::g17(cumulative) << '\n';
    }
}

// ---------------------------------------------------------------------------
// stats

int cmd_stats(const std::string& input, const PoolOptions& pool_options,
              std::int64_t step_seconds, const std::string& trace_out) {
    const lpsim::PoolParams pool = resolve_pool(pool_options);
    const auto trace = load_trace(input, pool, step_seconds);
    const lpsim::TraceStats stats = lpsim::compute_stats(trace, pool);

    if (!trace_out.empty()) {
        std::ofstream out(trace_out);
        if (!out)
            throw UsageError("cannot open trace output '" + trace_out + "'");
        lpsim::write_trace_csv(out, trace);
        std::ofstream sidecar(trace_out + ".json");
        if (!sidecar)
            throw UsageError("cannot open sidecar '" + trace_out + ".json'");
        sidecar << lpsim::to_json(stats, pool) << '\n';
    }

    std::cout << lpsim::to_json(stats, pool) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// run

struct StrategySpec {
    bool adaptive = false;
    lpsim::Controller controller = lpsim::Controller::infinite();
    bool eta_auto = true;
    double eta = 0.0;
    std::vector<lpsim::Controller> grid; // adaptive only; empty = 1..N default
};

StrategySpec parse_strategy(const std::string& text) {
    StrategySpec spec;
    const std::size_t colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head == "static") {
        if (colon == std::string::npos)
            throw UsageError("static strategy needs a controller: static:<n|inf>");
        spec.adaptive = false;
        spec.controller = parse_controller(text.substr(colon + 1));
        return spec;
    }
    if (head == "ewa") {
        spec.adaptive = true;
        if (colon == std::string::npos)
            return spec; // ewa with auto eta and the default grid
        std::string rest = text.substr(colon + 1);
        const std::size_t second = rest.find(':');
        const std::string eta_text = rest.substr(0, second);
        if (eta_text != "auto") {
            try {
                spec.eta = std::stod(eta_text);
                spec.eta_auto = false;
            } catch (const std::exception&) {
                throw UsageError("invalid eta '" + eta_text + "'");
            }
            if (!(spec.eta > 0.0))
                throw UsageError("eta must be positive");
        }
        if (second != std::string::npos)
            spec.grid = parse_grid(rest.substr(second + 1));
        return spec;
    }
    throw UsageError("unknown strategy '" + text + "'; use static:<n|inf> or ewa:<eta|auto>[:grid]");
}

int cmd_run(const std::string& input, const PoolOptions& pool_options,
            std::int64_t step_seconds, const std::string& strategy_text,
            const std::string& eta_flag, const std::string& grid_flag,
            const std::string& series_out, bool with_bounds) {
    const lpsim::PoolParams pool = resolve_pool(pool_options);
    const auto trace = load_trace(input, pool, step_seconds);

    StrategySpec spec = parse_strategy(strategy_text);
    if (!eta_flag.empty()) {
        if (eta_flag == "auto") {
            spec.eta_auto = true;
        } else {
            try {
                spec.eta = std::stod(eta_flag);
            } catch (const std::exception&) {
                throw UsageError("invalid --eta '" + eta_flag + "'");
            }
            if (!(spec.eta > 0.0))
                throw UsageError("eta must be positive");
            spec.eta_auto = false;
        }
    }
    if (!grid_flag.empty())
        spec.grid = parse_grid(grid_flag);

    double total = 0.0;
    std::vector<double> series;
    double eta_used = 0.0;
    std::size_t num_experts = 0;

    if (spec.adaptive) {
        const lpsim::EwaParams defaults =
            lpsim::default_params(static_cast<std::int64_t>(trace.size()), pool);
        eta_used = spec.eta_auto ? defaults.eta : spec.eta;
        lpsim::EwaRunOptions options;
        options.record_distributions = false;
        lpsim::EwaRun run;
        if (spec.grid.empty()) {
            run = lpsim::run_ewa(trace, pool, {defaults.num_controllers, eta_used}, options);
            num_experts = static_cast<std::size_t>(defaults.num_controllers);
        } else {
            run = lpsim::run_ewa(trace, pool, spec.grid, eta_used, options);
            num_experts = spec.grid.size();
        }
        total = run.wealth_log;
        series = std::move(run.reward_series);
    } else {
        lpsim::StaticRun run = lpsim::run_static(trace, pool, spec.controller);
        total = run.total;
        series = std::move(run.reward_series);
    }

    // RunReport invariant: the total must be the series sum.
    double sum = 0.0;
    for (double r : series)
        sum += r;
    if (std::abs(sum - total) > 1e-9 * std::max(1.0, std::abs(total))) {
        std::cerr << "invariant violation: total_reward does not match the series sum\n";
        return kExitInvariantViolation;
    }

    if (!series_out.empty())
        write_series_csv(series_out, series);

    lpsim::JsonWriter w;
    w.begin_object();
    w.key("strategy").value(std::string_view(strategy_text));
    w.key("pool").begin_object();
    w.key("d").value(pool.d);
    w.key("gamma").value(pool.gamma);
    w.end_object();
    w.key("steps").value(static_cast<std::int64_t>(trace.size()));
    if (spec.adaptive) {
        w.key("eta").value(eta_used);
        w.key("num_experts").value(static_cast<std::int64_t>(num_experts));
    }
    w.key("total_reward").value(total);
    w.key("wealth_multiple").value(std::exp(total));
    w.key("rewards").begin_array();
    for (double r : series)
        w.value(r);
    w.end_array();
    int exit_code = kExitOk;
    if (with_bounds) {
        const double avg = lpsim::avg_log_price_change(trace);
        const double lemma2_n = avg > 0.0 ? 4.0 * avg : 1.0;
        const auto reports = lpsim::check_all_bounds(trace, pool, lemma2_n, 10.0);
        w.key("bounds").raw(lpsim::to_json(reports));
        if (lpsim::any_violation(reports))
            exit_code = kExitInvariantViolation;
    }
    w.end_object();
    std::cout << w.str() << '\n';
    return exit_code;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& input, const PoolOptions& pool_options,
              std::int64_t step_seconds, const std::string& grid_text,
              bool with_ewa, const std::string& eta_flag, bool as_json) {
    const lpsim::PoolParams pool = resolve_pool(pool_options);
    const auto trace = load_trace(input, pool, step_seconds);

    std::vector<lpsim::Controller> grid = parse_grid(grid_text);
    std::sort(grid.begin(), grid.end(),
              [](const lpsim::Controller& a, const lpsim::Controller& b) {
                  return a.width() < b.width();
              });

    const std::vector<double> totals = lpsim::kernels::static_totals(trace, pool, grid);

    std::optional<double> ewa_total;
    if (with_ewa) {
        double eta = 0.0;
        if (eta_flag.empty() || eta_flag == "auto") {
            eta = lpsim::default_params(static_cast<std::int64_t>(trace.size()), pool).eta;
        } else {
            try {
                eta = std::stod(eta_flag);
            } catch (const std::exception&) {
                throw UsageError("invalid --eta '" + eta_flag + "'");
            }
            if (!(eta > 0.0))
                throw UsageError("eta must be positive");
        }
        lpsim::EwaRunOptions options;
        options.record_distributions = false;
        ewa_total = lpsim::run_ewa(trace, pool, grid, eta, options).wealth_log;
    }

    if (as_json) {
        lpsim::JsonWriter w;
        w.begin_array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            w.begin_object();
            if (grid[i].is_infinite())
                w.key("n").value(std::string_view("inf"));
            else
                w.key("n").value(grid[i].width());
            w.key("total_reward").value(totals[i]);
            w.end_object();
        }
        if (ewa_total) {
            w.begin_object();
            w.key("n").value(std::string_view("ewa"));
            w.key("total_reward").value(*ewa_total);
            w.end_object();
        }
        w.end_array();
        std::cout << w.str() << '\n';
    } else {
        std::cout << "n,total_reward\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            std::cout << controller_label(grid[i]) << ',' << lpsim::g17(totals[i]) << '\n';
        if (ewa_total)
            std::cout << "ewa," << lpsim::g17(*ewa_total) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check-bounds

int cmd_check_bounds(const std::string& input, const PoolOptions& pool_options,
                     std::int64_t step_seconds, std::optional<double> lemma2_n,
                     double theorem1_a) {
    const lpsim::PoolParams pool = resolve_pool(pool_options);
    const auto trace = load_trace(input, pool, step_seconds);

    double n = 0.0;
    if (lemma2_n) {
        n = *lemma2_n;
        if (!(n > 0.0))
            throw UsageError("--n must be positive");
    } else {
        const double avg = lpsim::avg_log_price_change(trace);
        n = avg > 0.0 ? 4.0 * avg : 1.0;
    }
    if (!(theorem1_a >= 2.0))
        throw UsageError("--a must be at least 2");

    const auto reports = lpsim::check_all_bounds(trace, pool, n, theorem1_a);
    std::cout << lpsim::to_json(std::span<const lpsim::BoundReport>(reports)) << '\n';

    const double crossover = lpsim::corollary3_min_horizon(trace, pool);
    std::cerr << "note: adaptive lower bound turns positive near T = "
              << (std::isfinite(crossover) ? lpsim::g17(crossover) : "inf") << '\n';

    return lpsim::any_violation(reports) ? kExitInvariantViolation : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentrated-liquidity market making: strategy backtests and reward lower bounds"};
    app.require_subcommand(1);

    std::string input;
    std::int64_t step_seconds = 3600;
    PoolOptions pool_options;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "input CSV: raw samples or a rho,u trace")->required();
        cmd->add_option("--step-seconds", step_seconds, "aggregation step for raw samples")
            ->check(CLI::PositiveNumber);
        add_pool_flags(cmd, pool_options);
    };

    // stats
    auto* stats = app.add_subcommand("stats", "trace summary statistics");
    std::string trace_out;
    add_common(stats);
    stats->add_option("--trace-out", trace_out,
                      "write the canonical rho,u trace here (plus a .json sidecar)");

    // run
    auto* run = app.add_subcommand("run", "run one strategy and report rewards");
    std::string strategy_text;
    std::string eta_flag;
    std::string grid_flag;
    std::string series_out;
    bool with_bounds = false;
    add_common(run);
    run->add_option("--strategy", strategy_text, "static:<n|inf> or ewa:<eta|auto>[:grid]")
        ->required();
    run->add_option("--eta", eta_flag, "learning rate override (real or 'auto')");
    run->add_option("--grid", grid_flag, "expert grid override, comma list ('inf' allowed)");
    run->add_option("--series-out", series_out, "write per-step rewards CSV here");
    run->add_flag("--check-bounds", with_bounds, "embed bound reports in the output");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "total reward per controller over a grid");
    std::string grid_text;
    bool with_ewa = false;
    bool as_json = false;
    add_common(sweep);
    sweep->add_option("--grid", grid_text, "comma list of controllers ('inf' allowed)")
        ->required();
    sweep->add_flag("--with-ewa", with_ewa, "append an adaptive-strategy row over the same grid");
    sweep->add_option("--eta", eta_flag, "learning rate for the adaptive row (real or 'auto')");
    sweep->add_flag("--json", as_json, "emit JSON instead of CSV");

    // check-bounds
    auto* check = app.add_subcommand("check-bounds", "evaluate every reward lower bound");
    std::optional<double> lemma2_n;
    double theorem1_a = 10.0;
    add_common(check);
    check->add_option("--n", lemma2_n, "controller for the n-static bound (default 4P)");
    check->add_option("--a", theorem1_a, "volume-floor factor for the 4P bound (default 10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (stats->parsed())
            return cmd_stats(input, pool_options, step_seconds, trace_out);
        if (run->parsed())
            return cmd_run(input, pool_options, step_seconds, strategy_text, eta_flag,
                           grid_flag, series_out, with_bounds);
        if (sweep->parsed())
            return cmd_sweep(input, pool_options, step_seconds, grid_text, with_ewa,
                             eta_flag, as_json);
        if (check->parsed())
            return cmd_check_bounds(input, pool_options, step_seconds, lemma2_n, theorem1_a);
    } catch (const lpsim::FormatError& e) {
        std::cerr << "error: " << input << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvariantViolation;
    }
    return kExitUsage;
}

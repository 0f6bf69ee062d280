#pragma once

#include "lpsim/bounds.hpp"
#include "lpsim/market_data.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lpsim {

/// Shortest-stable float formatting used in every machine-readable output:
/// %.17g round-trips exactly, so parse + re-serialize is byte-identical.
std::string g17(double value);

/// Minimal streaming JSON writer with canonical field order (insertion
/// order) and g17 number formatting. No pretty-printing.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& null();
    JsonWriter& raw(std::string_view text);

    const std::string& str() const { return out_; }

private:
    void separate();
    std::string out_;
    bool need_comma_ = false;
};

std::string to_json(const BoundReport& report);
std::string to_json(const TraceStats& stats, const PoolParams& pool);
std::string to_json(std::span<const BoundReport> reports);

} // namespace lpsim

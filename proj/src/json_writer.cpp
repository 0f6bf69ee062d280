#include "lpsim/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lpsim {

std::string g17(double value) {
    if (!std::isfinite(value))
        throw std::invalid_argument("cannot serialize a non-finite number");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void JsonWriter::separate() {
    if (need_comma_)
        out_ += ',';
    need_comma_ = true;
}

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += '{';
    need_comma_ = false;
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    need_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += '[';
    need_comma_ = false;
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    need_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
    separate();
    out_ += '"';
    out_ += name;
    out_ += "\":";
    need_comma_ = false;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separate();
    out_ += g17(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    separate();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separate();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    separate();
    out_ += '"';
    for (char c : v) {
        switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
        }
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::null() {
    separate();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::raw(std::string_view text) {
    separate();
    out_ += text;
    return *this;
}

namespace {

void write_report(JsonWriter& w, const BoundReport& report) {
    w.begin_object();
    w.key("bound_name").value(to_string(report.bound_name));
    w.key("bound_value").value(report.bound_value);
    w.key("realized_value").value(report.realized_value);
    w.key("preconditions_met").value(report.preconditions_met);
    w.key("preconditions").begin_array();
    for (const Precondition& c : report.preconditions) {
        w.begin_object();
        w.key("name").value(std::string_view(c.name));
        w.key("met").value(c.met);
        w.end_object();
    }
    w.end_array();
    w.key("satisfied");
    if (report.satisfied.has_value())
        w.value(*report.satisfied);
    else
        w.value(std::string_view("not applicable"));
    w.end_object();
}

} // namespace

std::string to_json(const BoundReport& report) {
    JsonWriter w;
    write_report(w, report);
    return w.str();
}

std::string to_json(const TraceStats& stats, const PoolParams& pool) {
    JsonWriter w;
    w.begin_object();
    w.key("T").value(stats.num_steps);
    w.key("P").value(stats.avg_abs_rho);
    w.key("mean_u").value(stats.mean_u);
    w.key("max_price_factor").value(stats.max_price_factor);
    w.key("volume_threshold").value(stats.volume_threshold);
    w.key("pool").begin_object();
    w.key("d").value(pool.d);
    w.key("gamma").value(pool.gamma);
    w.end_object();
    w.end_object();
    return w.str();
}

std::string to_json(std::span<const BoundReport> reports) {
    JsonWriter w;
    w.begin_array();
    for (const BoundReport& report : reports)
        write_report(w, report);
    w.end_array();
    return w.str();
}

} // namespace lpsim

/**
 * @file io.hpp
 * @brief Spec JSON, dataset CSV, trace JSONL and curve tables.
 *
 * Numbers in CSV are written with 17 significant digits so a file read back
 * reproduces the same doubles.
 */

#ifndef QDISCOUNT_IO_HPP
#define QDISCOUNT_IO_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qdiscount/errors.hpp"
#include "qdiscount/fitting.hpp"
#include "qdiscount/model.hpp"
#include "qdiscount/numerics.hpp"
#include "qdiscount/titration.hpp"

namespace qdiscount {

using json = nlohmann::json;

/// Shortest-safe 17 significant digits; negative zero prints as 0.
inline std::string format_double(double x) {
    if (x == 0.0) x = 0.0;
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view text) {
    constexpr std::string_view kBlank = " \t\r\n";
    const auto first = text.find_first_not_of(kBlank);
    text = first == std::string_view::npos ? std::string_view{} : text.substr(first, text.find_last_not_of(kBlank) - first + 1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double x = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), x);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size() || text.empty())
        throw FormatError("not a number: '" + std::string(text) + "'");
    return x;
}

// ---------------------------------------------------------------------------
// ModelSpec <-> JSON: {"v0","k","q"} plus {"s","a","b","c"} all or none.

inline json spec_to_json(const ModelSpec& spec) {
    json j = {{"v0", spec.v0}, {"k", spec.k}, {"q", spec.q}};
    if (spec.time) {
        j["s"] = spec.time->s;
        j["a"] = spec.time->a;
        j["b"] = spec.time->b;
        j["c"] = spec.time->c;
    }
    return j;
}

inline ModelSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("spec: expected a JSON object");
    static constexpr std::string_view kKnown[] = {"v0", "k", "q", "s", "a", "b", "c"};
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto k : kKnown) known = known || key == k;
        if (!known) throw FormatError("spec: unknown field '" + key + "'");
    }
    auto number = [&](const char* key) {
        if (!j.contains(key)) throw FormatError(std::string("spec: missing field '") + key + "'");
        const json& v = j.at(key);
        if (!v.is_number()) throw FormatError(std::string("spec: field '") + key + "' must be a number");
        return v.get<double>();
    };
    ModelSpec spec{number("v0"), number("k"), number("q"), std::nullopt};
    const int time_fields = static_cast<int>(j.contains("s")) + static_cast<int>(j.contains("a")) +
                            static_cast<int>(j.contains("b")) + static_cast<int>(j.contains("c"));
    if (time_fields == 4) {
        spec.time = TimePerception{number("s"), number("a"), number("b"), number("c")};
    } else if (time_fields != 0) {
        throw FormatError("spec: fields s, a, b, c must be given together or not at all");
    }
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw FormatError(std::string("spec: ") + e.what());
    }
    return spec;
}

inline ModelSpec read_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open spec file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("spec file '" + path + "': " + e.what());
    }
    return spec_from_json(j);
}

/// v0 from a sidecar {"v0": ...}.
inline double read_v0_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open sidecar '" + path + "'");
    try {
        const json j = json::parse(in);
        if (!j.is_object() || !j.contains("v0") || !j.at("v0").is_number())
            throw FormatError("sidecar '" + path + "': expected {\"v0\": number}");
        return j.at("v0").get<double>();
    } catch (const json::parse_error& e) {
        throw FormatError("sidecar '" + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Dataset CSV, header exactly "delay,value".

inline void write_dataset_csv(std::ostream& out, const IndifferenceDataset& data) {
    out << "delay,value\n";
    for (const auto& p : data.points) out << format_double(p.delay) << ',' << format_double(p.value) << '\n';
}

inline IndifferenceDataset read_dataset_csv(std::istream& in, double v0) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("dataset: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "delay,value") throw FormatError("dataset: header must be exactly 'delay,value'");

    IndifferenceDataset data{v0, {}};
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw FormatError("dataset line " + std::to_string(lineno) + ": expected two comma-separated fields");
        try {
            data.points.push_back({parse_double(std::string_view(line).substr(0, comma)),
                                   parse_double(std::string_view(line).substr(comma + 1))});
        } catch (const FormatError& e) {
            throw FormatError("dataset line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    try {
        data.validate();
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
    return data;
}

// ---------------------------------------------------------------------------
// Titration traces, one JSON object per line.

inline json trace_to_json(const TitrationTrace& tr) {
    json choices = json::array();
    for (const auto& c : tr.choices)
        choices.push_back({{"immediate_amount", c.immediate_amount}, {"chose_immediate", c.chose_immediate}});
    return {{"delay", tr.delay}, {"choices", std::move(choices)}, {"v_d", tr.v_d}, {"v_s", tr.v_s},
            {"indifference", tr.indifference}};
}

inline TitrationTrace trace_from_json(const json& j) {
    try {
        TitrationTrace tr;
        tr.delay = j.at("delay").get<double>();
        for (const auto& c : j.at("choices"))
            tr.choices.push_back({c.at("immediate_amount").get<double>(), c.at("chose_immediate").get<bool>()});
        tr.v_d = j.at("v_d").get<double>();
        tr.v_s = j.at("v_s").get<double>();
        tr.indifference = j.at("indifference").get<double>();
        return tr;
    } catch (const json::exception& e) {
        throw FormatError(std::string("trace: ") + e.what());
    }
}

inline void write_traces_jsonl(std::ostream& out, std::span<const TitrationTrace> traces) {
    for (const auto& tr : traces) out << trace_to_json(tr).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Curve tables.

struct CurveSample {
    double t;
    double v;
    double i;
    double inc;
    double inc_value_term;
    double inc_time_term;
};

inline CurveSample sample_point(const ModelSpec& spec, double t) {
    const DecompositionReport d = decompose_inconsistency(spec, t);
    return {t, value(spec, t), d.rate, inconsistency(spec, t), d.value_term, d.time_term};
}

/// @p samples points on the uniform grid [from, to]; a single sample sits at @p from.
inline std::vector<CurveSample> sample_curve(const ModelSpec& spec, double from, double to, std::size_t samples) {
    if (samples == 0) throw DomainError("curve: samples must be >= 1");
    if (!(from >= 0.0) || !(to >= from)) throw DomainError("curve: need 0 <= from <= to");
    std::vector<CurveSample> out;
    out.reserve(samples);
    for (std::size_t n = 0; n < samples; ++n) {
        const double t = samples == 1 ? from
                       : n + 1 == samples
                           ? to
                           : from + (to - from) * static_cast<double>(n) / static_cast<double>(samples - 1);
        out.push_back(sample_point(spec, t));
    }
    return out;
}

inline void write_curve_csv(std::ostream& out, std::span<const CurveSample> rows) {
    out << "t,v,i,inc,inc_value_term,inc_time_term\n";
    for (const auto& r : rows)
        out << format_double(r.t) << ',' << format_double(r.v) << ',' << format_double(r.i) << ','
            << format_double(r.inc) << ',' << format_double(r.inc_value_term) << ','
            << format_double(r.inc_time_term) << '\n';
}

inline json curve_to_json(std::span<const CurveSample> rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"t", r.t},
                       {"v", r.v},
                       {"i", r.i},
                       {"inc", r.inc},
                       {"inc_value_term", r.inc_value_term},
                       {"inc_time_term", r.inc_time_term}});
    return arr;
}

inline void write_reconstruction_csv(std::ostream& out, const ReconstructionResult& rec) {
    out << "t,rate,value,rate_closed,value_closed\n";
    for (const auto& g : rec.grid)
        out << format_double(g.t) << ',' << format_double(g.rate) << ',' << format_double(g.value) << ','
            << format_double(g.rate_closed) << ',' << format_double(g.value_closed) << '\n';
}

// ---------------------------------------------------------------------------

inline json fit_result_to_json(const FitResult& r) {
    json j = {{"family", family_name(r.family)}};
    if (r.error) {
        j["error"] = *r.error;
        return j;
    }
    json params = json::object();
    const auto info = family_parameters(r.family);
    for (std::size_t i = 0; i < info.size(); ++i) params[std::string(info[i].name)] = r.params[i];
    j["params"] = std::move(params);
    j["spec"] = spec_to_json(r.spec);
    j["rss"] = r.rss;
    j["aic"] = r.aic;
    j["n_evals"] = r.n_evals;
    j["converged"] = r.converged;
    j["param_bounds_hit"] = r.param_bounds_hit;
    return j;
}

}  // namespace qdiscount

#endif  // QDISCOUNT_IO_HPP

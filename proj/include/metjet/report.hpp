#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "metjet/contact.hpp"
#include "metjet/tangency.hpp"

namespace metjet {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits round-trip doubles exactly in decimal
inline std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Envelope for every CLI result. Identical (command, inputs, seed, version)
// must serialize byte-identically; the timestamp is the one volatile field
// and is omitted in reproducible mode.
struct Report {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    nlohmann::json traces;  // null unless a command embeds numeric traces
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::optional<std::string> timestamp;

    void stamp_now() {
        auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        timestamp = buf;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["results"] = results;
        if (!traces.is_null()) j["traces"] = traces;
        j["version"] = version;
        j["seed"] = seed;
        if (timestamp) j["timestamp"] = *timestamp;
        return j;
    }

    std::string dump() const { return to_json().dump(2) + "\n"; }
};

inline void write_quotient_trace_csv(std::ostream& os, const QuotientTrace& t) {
    os << "index,radius,sup_quotient";
    std::size_t dim = t.argmax_points.empty() ? 0 : t.argmax_points.front().size();
    for (std::size_t i = 0; i < dim; ++i) os << ",argmax_" << (i + 1);
    os << "\n";
    for (std::size_t k = 0; k < t.radii.size(); ++k) {
        os << k << "," << num17(t.radii[k]) << "," << num17(t.sup_quotients[k]);
        for (std::size_t i = 0; i < dim; ++i)
            os << "," << (k < t.argmax_points.size() && i < t.argmax_points[k].size()
                              ? num17(t.argmax_points[k][i])
                              : "");
        os << "\n";
    }
}

inline void write_directional_trace_csv(std::ostream& os, const DirectionalTrace& t) {
    os << "index,scale";
    std::size_t dim = t.values.empty() ? 0 : t.values.front().size();
    for (std::size_t i = 0; i < dim; ++i) os << ",q_" << (i + 1);
    os << "\n";
    for (std::size_t k = 0; k < t.scales.size(); ++k) {
        os << k << "," << num17(t.scales[k]);
        for (std::size_t i = 0; i < dim; ++i) os << "," << num17(t.values[k][i]);
        os << "\n";
    }
}

inline nlohmann::json vec_json(const Vec& v) {
    nlohmann::json j = nlohmann::json::array();
    for (double x : v) j.push_back(x);
    return j;
}

}  // namespace metjet

// Copyright 2026 The qpa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON input schemas, output records and the run manifest.
//
//   matrix  : [[entry, ...], ...] with entry = [re, im] or a real number
//   source  : {"alphabet": [...], "prior": [...], "states": [matrix, ...]}
//   channel : {"prior": [...], "joint_states": [matrix, ...], "dims": [d_B, d_E]}

#ifndef QPA_IO_HPP
#define QPA_IO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpa/errors.hpp"
#include "qpa/exponent.hpp"
#include "qpa/model.hpp"
#include "qpa/qmat.hpp"
#include "qpa/simulate.hpp"
#include "qpa/wiretap.hpp"

namespace qpa {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    std::size_t line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            line_start = i + 1;
        }
    }
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    return "line " + std::to_string(line) + ", column " + std::to_string(byte - line_start + 1) +
           ": " + text.substr(line_start, std::min<std::size_t>(line_end - line_start, 120));
}

inline double as_real(const Json& v, const std::string& where) {
    if (!v.is_number()) throw InvalidInput(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InvalidInput(where + ": not finite");
    return x;
}

inline std::vector<double> as_real_vector(const Json& v, const std::string& where) {
    if (!v.is_array()) throw InvalidInput(where + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_real(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline const Json& require_key(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw InvalidInput(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InvalidInput(where + ": missing key \"" + key + "\"");
    return *it;
}

}  // namespace detail

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json_text(const std::string& text, const std::string& name = "<input>") {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        throw InvalidInput(name + ": JSON syntax error at " + detail::line_context(text, byte));
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline ComplexMatrix matrix_from_json(const Json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw InvalidInput(where + ": expected a non-empty array of rows");
    const auto rows = static_cast<Index>(v.size());
    if (rows > kMaxDimension) {
        throw CapacityError(where + ": dimension " + std::to_string(rows) + " exceeds " +
                            std::to_string(kMaxDimension));
    }
    ComplexMatrix m(rows, rows);
    for (Index r = 0; r < rows; ++r) {
        const std::string rw = where + "[" + std::to_string(r) + "]";
        const Json& row = v[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != rows) {
            throw InvalidInput(rw + ": expected a row of length " + std::to_string(rows));
        }
        for (Index c = 0; c < rows; ++c) {
            const std::string cw = rw + "[" + std::to_string(c) + "]";
            const Json& e = row[static_cast<std::size_t>(c)];
            if (e.is_array()) {
                if (e.size() != 2) throw InvalidInput(cw + ": expected [re, im]");
                m(r, c) = {detail::as_real(e[0], cw), detail::as_real(e[1], cw)};
            } else {
                m(r, c) = {detail::as_real(e, cw), 0.0};
            }
        }
    }
    return m;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

inline std::vector<DensityOperator> states_from_json(const Json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw InvalidInput(where + ": expected a non-empty array");
    std::vector<DensityOperator> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        try {
            out.emplace_back(matrix_from_json(v[i], w));
        } catch (const InvalidInput& e) {
            const std::string msg = e.what();
            if (msg.rfind(w, 0) == 0) throw;
            throw InvalidInput(w + ": " + msg);
        }
    }
    return out;
}

}  // namespace detail

inline CQSource source_from_json(const Json& j) {
    const auto prior = detail::as_real_vector(detail::require_key(j, "prior", "source"), "prior");
    auto states = detail::states_from_json(detail::require_key(j, "states", "source"), "states");
    std::vector<std::string> labels;
    if (j.contains("alphabet")) {
        const Json& a = j["alphabet"];
        if (!a.is_array()) throw InvalidInput("alphabet: expected an array");
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_string()) {
                labels.push_back(a[i].get<std::string>());
            } else if (a[i].is_number_integer()) {
                labels.push_back(std::to_string(a[i].get<long long>()));
            } else {
                throw InvalidInput("alphabet[" + std::to_string(i) + "]: expected a string");
            }
        }
    }
    return CQSource(prior, std::move(states), std::move(labels));
}

inline Json source_to_json(const CQSource& src) {
    Json j;
    j["alphabet"] = src.labels();
    j["prior"] = src.prior();
    Json states = Json::array();
    for (const auto& s : src.states()) states.push_back(matrix_to_json(s.matrix()));
    j["states"] = std::move(states);
    return j;
}

inline WiretapChannel channel_from_json(const Json& j) {
    const auto prior = detail::as_real_vector(detail::require_key(j, "prior", "channel"), "prior");
    auto joint = detail::states_from_json(detail::require_key(j, "joint_states", "channel"),
                                          "joint_states");
    const Json& dims = detail::require_key(j, "dims", "channel");
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
        !dims[1].is_number_integer()) {
        throw InvalidInput("dims: expected [d_B, d_E] as two integers");
    }
    return WiretapChannel(prior, std::move(joint), dims[0].get<Index>(), dims[1].get<Index>());
}

inline Json channel_to_json(const WiretapChannel& ch) {
    Json j;
    j["prior"] = ch.prior();
    Json states = Json::array();
    for (const auto& s : ch.joint_states()) states.push_back(matrix_to_json(s.matrix()));
    j["joint_states"] = std::move(states);
    j["dims"] = {ch.dim_b(), ch.dim_e()};
    return j;
}

/// Type given as a count vector.
inline TypeDistribution type_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidInput("type: expected an array of counts");
    std::vector<int> counts;
    for (const auto& c : j) {
        if (!c.is_number_integer() || c.get<long long>() < 0) {
            throw InvalidInput("type: counts must be nonnegative integers");
        }
        counts.push_back(c.get<int>());
    }
    return TypeDistribution(counts);
}

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Shortest decimal with 12 significant digits.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Rounds every double to 12 significant digits; non-finite values become
/// the strings "inf", "-inf" or "nan" since JSON has no literal for them.
inline Json round_numbers(const Json& j) {
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) return format_double(x);
        return std::stod(format_double(x));
    }
    if (j.is_array() || j.is_object()) {
        Json out = j;
        for (auto it = out.begin(); it != out.end(); ++it) *it = round_numbers(*it);
        return out;
    }
    return j;
}

namespace detail {

inline void dump_into(const Json& j, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    if (j.is_number_float()) {
        const double x = j.get<double>();
        out += std::isfinite(x) ? format_double(x) : "null";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Short numeric rows (matrix entries, intervals) stay on one line.
        bool flat = j.size() <= 4;
        for (const auto& e : j) flat = flat && !e.is_structured();
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += flat ? ", " : ",";
            if (!flat) newline(depth + 1);
            dump_into(j[i], indent, depth + 1, out);
        }
        if (!flat) newline(depth);
        out += ']';
    } else if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += Json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            dump_into(it.value(), indent, depth + 1, out);
        }
        newline(depth);
        out += '}';
    } else {
        out += j.dump();
    }
}

}  // namespace detail

/// Serializes with every double printed to 12 significant digits.
inline std::string dump_json(const Json& j, int indent = 2) {
    std::string out;
    detail::dump_into(j, indent, 0, out);
    return out;
}

struct RunManifest {
    std::string command;
    std::string input_hash;
    std::optional<std::uint64_t> seed;
    std::string version = kToolVersion;
    std::optional<double> wall_time_seconds;
    Json parameters = Json::object();

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["input_hash"] = input_hash;
        j["seed"] = seed ? Json(*seed) : Json(nullptr);
        j["version"] = version;
        if (wall_time_seconds) j["wall_time_seconds"] = *wall_time_seconds;
        j["parameters"] = parameters;
        return j;
    }
};

inline Json estimate_to_json(const SimEstimate& e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"trials", e.trials}, {"seed", e.seed}};
}

/// `scale` converts nats to the display unit; it applies to exponents and
/// prefactors, never to the α grid.
inline Json exponent_to_json(const ExponentReport& r, double scale = 1.0) {
    Json j;
    j["kind"] = r.kind;
    j["exponent"] = r.exponent * scale;
    j["alpha_star"] = r.alpha_star;
    j["interval"] = {r.interval_lo, r.interval_hi};
    j["prefactor_log"] = r.prefactor_log * scale;
    j["bound_form"] = r.bound_form;
    if (r.minimizing_type) j["minimizing_type"] = r.minimizing_type->counts();
    return j;
}

inline std::string curve_to_csv(const ExponentReport& r, double scale = 1.0) {
    std::ostringstream out;
    out << "alpha,value\n";
    for (const auto& [a, v] : r.curve) out << format_double(a) << ',' << format_double(v * scale) << '\n';
    return out.str();
}

namespace detail {

inline void check_numbers(const Json& j, const std::string& where) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        throw InvalidInput(where + ": non-finite number");
    }
    if (j.is_string()) return;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) check_numbers(j[i], where + "[" + std::to_string(i) + "]");
    } else if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) check_numbers(it.value(), where + "." + it.key());
    }
}

inline void require_number(const Json& obj, const char* key, const std::string& where) {
    const Json& v = require_key(obj, key, where);
    const bool special = v.is_string() && (v == "inf" || v == "-inf" || v == "nan");
    if (!v.is_number() && !special) {
        throw InvalidInput(where + "." + key + ": expected a number");
    }
}

inline void require_estimate(const Json& e, const std::string& where) {
    for (const char* k : {"mean", "std_error", "trials", "seed"}) require_number(e, k, where);
}

inline void require_value_or_estimate(const Json& e, const std::string& where) {
    if (e.is_object() && e.contains("value")) {
        require_number(e, "value", where);
    } else {
        require_estimate(e, where);
    }
}

}  // namespace detail

/// Checks a command's output against its record schema and that the
/// serialized form parses back to the same document.
inline void validate_output(const Json& doc) {
    const Json& m = detail::require_key(doc, "manifest", "output");
    for (const char* k : {"command", "input_hash", "version"}) {
        if (!detail::require_key(m, k, "manifest").is_string()) {
            throw InvalidInput(std::string("manifest.") + k + ": expected a string");
        }
    }
    const Json& seed = detail::require_key(m, "seed", "manifest");
    if (!seed.is_null() && !seed.is_number_unsigned()) {
        throw InvalidInput("manifest.seed: expected an unsigned integer or null");
    }
    if (!detail::require_key(m, "parameters", "manifest").is_object()) {
        throw InvalidInput("manifest.parameters: expected an object");
    }
    if (m.contains("wall_time_seconds")) detail::require_number(m, "wall_time_seconds", "manifest");
    if (m["input_hash"].get<std::string>().size() != 16) {
        throw InvalidInput("manifest.input_hash: expected 16 hex digits");
    }

    const Json& r = detail::require_key(doc, "result", "output");
    const std::string cmd = m["command"].get<std::string>();
    if (cmd == "info") {
        for (const char* k : {"entropy", "mutual_information", "conditional_entropy", "rate_limit"}) {
            detail::require_number(r, k, "result");
        }
    } else if (cmd == "augustin") {
        for (const char* k : {"alpha", "value", "iterations", "final_step"}) {
            detail::require_number(r, k, "result");
        }
        matrix_from_json(detail::require_key(r, "optimizer", "result"), "result.optimizer");
    } else if (cmd == "exponent") {
        for (const char* k : {"exponent", "alpha_star", "prefactor_log"}) {
            detail::require_number(r, k, "result");
        }
        if (!detail::require_key(r, "kind", "result").is_string()) {
            throw InvalidInput("result.kind: expected a string");
        }
    } else if (cmd == "simulate") {
        const Json& task = detail::require_key(r, "task", "result");
        if (task == "equivalence") {
            for (const char* k : {"d_pa", "d_sc", "gap"}) detail::require_number(r, k, "result");
        } else if (task == "pa" || task == "sc") {
            detail::require_value_or_estimate(detail::require_key(r, "distance", "result"),
                                              "result.distance");
        } else {
            throw InvalidInput("result.task: unknown task");
        }
    } else if (cmd == "wiretap") {
        if (r.contains("threshold")) detail::require_number(r, "threshold", "result");
        if (r.contains("secrecy")) detail::require_number(r["secrecy"], "exponent", "result.secrecy");
        if (r.contains("leakage")) {
            const Json& l = r["leakage"];
            for (const char* k : {"direct", "pa_message_key", "pa_key", "bound"}) {
                detail::require_estimate(detail::require_key(l, k, "result.leakage"),
                                         std::string("result.leakage.") + k);
            }
        }
    } else {
        throw InvalidInput("manifest.command: unknown command \"" + cmd + "\"");
    }
    detail::check_numbers(doc, "output");
    const Json rounded = round_numbers(doc);
    if (Json::parse(dump_json(rounded)) != rounded) throw InvalidInput("output does not round-trip");
}

}  // namespace qpa

#endif

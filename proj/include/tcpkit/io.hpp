#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tcpkit/classify.hpp"
#include "tcpkit/degree.hpp"
#include "tcpkit/spectral.hpp"
#include "tcpkit/tcp.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// JSON ingestion and emission. Tensor files carry 1-based indices; the
/// canonical serialization is byte-stable so a parse/serialize round trip
/// is idempotent and fixtures diff cleanly.

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

/// Shortest decimal string that parses back to exactly this double.
inline std::string format_double(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string index_tuple_text(const std::vector<int>& idx_one_based) {
    std::string s = "[";
    for (std::size_t k = 0; k < idx_one_based.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(idx_one_based[k]);
    }
    return s + "]";
}

}  // namespace detail

/// Parse a tensor from JSON text. `source` names the origin for
/// diagnostics. Accepted keys: order, dim, and exactly one of entries
/// (sparse list of [[i1..im], value] with 1-based indices) or diag.
inline Tensor parse_tensor_text(const std::string& text, const std::string& source = "<input>") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source + ": malformed JSON at " +
                         detail::line_column(text, e.byte ? e.byte - 1 : 0) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(source + ": top level must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "order" && key != "dim" && key != "entries" && key != "diag")
            throw ParseError(source + ": unknown key \"" + key + "\"");
    }
    if (!doc.contains("order") || !doc["order"].is_number_integer())
        throw ParseError(source + ": \"order\" must be an integer");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw ParseError(source + ": \"dim\" must be an integer");
    const int m = doc["order"].get<int>();
    const int n = doc["dim"].get<int>();
    if (m < 2) throw ParseError(source + ": order must be >= 2");
    if (n < 1) throw ParseError(source + ": dim must be >= 1");
    if (doc.contains("entries") && doc.contains("diag"))
        throw ParseError(source + ": \"entries\" and \"diag\" are mutually exclusive");

    if (doc.contains("diag")) {
        const auto& diag = doc["diag"];
        if (!diag.is_array() || static_cast<int>(diag.size()) != n)
            throw ParseError(source + ": \"diag\" must be an array of length dim");
        std::vector<double> d(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto& c = diag[static_cast<std::size_t>(i)];
            if (!c.is_number())
                throw ParseError(source + ": diag[" + std::to_string(i + 1) +
                                 "] is not a number");
            d[static_cast<std::size_t>(i)] = c.get<double>();
            if (!std::isfinite(d[static_cast<std::size_t>(i)]))
                throw ParseError(source + ": diag[" + std::to_string(i + 1) + "] is not finite");
        }
        return Tensor::diagonal(m, n, d);
    }

    std::vector<double> entries(Tensor::size_for(m, n), 0.0);
    std::vector<bool> seen(entries.size(), false);
    if (doc.contains("entries")) {
        const auto& list = doc["entries"];
        if (!list.is_array()) throw ParseError(source + ": \"entries\" must be an array");
        for (std::size_t e = 0; e < list.size(); ++e) {
            const std::string where = source + ": entries[" + std::to_string(e + 1) + "]";
            const auto& item = list[e];
            if (!item.is_array() || item.size() != 2)
                throw ParseError(where + " must be [[i1..im], value]");
            const auto& tuple = item[0];
            if (!tuple.is_array() || static_cast<int>(tuple.size()) != m)
                throw ParseError(where + ": index tuple length must equal order " +
                                 std::to_string(m));
            std::vector<int> idx(static_cast<std::size_t>(m));
            for (int k = 0; k < m; ++k) {
                const auto& c = tuple[static_cast<std::size_t>(k)];
                if (!c.is_number_integer())
                    throw ParseError(where + ": index component " + std::to_string(k + 1) +
                                     " is not an integer");
                const int one_based = c.get<int>();
                if (one_based < 1 || one_based > n)
                    throw ParseError(where + ": index " + std::to_string(one_based) +
                                     " out of range 1.." + std::to_string(n));
                idx[static_cast<std::size_t>(k)] = one_based - 1;
            }
            if (!item[1].is_number()) throw ParseError(where + ": value is not a number");
            const double v = item[1].get<double>();
            if (!std::isfinite(v)) throw ParseError(where + ": value is not finite");
            std::vector<int> one_based(idx);
            for (int& c : one_based) ++c;
            std::size_t f = 0;
            for (int k = 0; k < m; ++k)
                f = f * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
            if (seen[f])
                throw ParseError(where + ": duplicate multi-index " +
                                 detail::index_tuple_text(one_based));
            seen[f] = true;
            entries[f] = v;
        }
    }
    return Tensor(m, n, std::move(entries));
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Tensor parse_tensor_file(const std::string& path) {
    return parse_tensor_text(read_text_file(path), path);
}

/// Canonical serialization: fixed key order, diag shorthand for diagonal
/// tensors, otherwise sparse entries sorted by multi-index with zeros
/// omitted, doubles in shortest round-trip form. Idempotent under
/// parse/serialize.
inline std::string serialize_tensor(const Tensor& a) {
    const int m = a.order();
    const int n = a.dim();
    std::string out = "{\"order\":" + std::to_string(m) + ",\"dim\":" + std::to_string(n);
    bool diagonal = true;
    for (std::size_t f = 0; f < a.entries().size() && diagonal; ++f) {
        const std::vector<int> idx = a.multi_index(f);
        if (!is_diagonal_index(idx) && a.entries()[f] != 0.0) diagonal = false;
    }
    if (diagonal) {
        out += ",\"diag\":[";
        for (int i = 0; i < n; ++i) {
            if (i) out += ",";
            out += detail::format_double(a.diag_entry(i));
        }
        out += "]}";
        return out;
    }
    out += ",\"entries\":[";
    bool first = true;
    for (std::size_t f = 0; f < a.entries().size(); ++f) {
        const double v = a.entries()[f];
        if (v == 0.0) continue;
        if (!first) out += ",";
        first = false;
        std::vector<int> idx = a.multi_index(f);
        for (int& c : idx) ++c;
        out += "[" + detail::index_tuple_text(idx) + "," + detail::format_double(v) + "]";
    }
    out += "]}";
    return out;
}

/// Parse a vector given either inline comma-separated numbers or a path to
/// a JSON array file.
inline std::vector<double> parse_vector_spec(const std::string& spec) {
    // Inline attempt: every comma-separated token parses fully as a double.
    std::vector<double> inline_vals;
    bool inline_ok = !spec.empty();
    std::size_t pos = 0;
    while (inline_ok && pos <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', pos), spec.size());
        const std::string token = spec.substr(pos, comma - pos);
        std::size_t eaten = 0;
        try {
            const double v = std::stod(token, &eaten);
            while (eaten < token.size() && std::isspace(static_cast<unsigned char>(token[eaten])))
                ++eaten;
            if (eaten != token.size() || !std::isfinite(v)) inline_ok = false;
            inline_vals.push_back(v);
        } catch (const std::exception&) {
            inline_ok = false;
        }
        if (comma == spec.size()) break;
        pos = comma + 1;
    }
    if (inline_ok) return inline_vals;

    const std::string text = read_text_file(spec);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(spec + ": malformed JSON at " +
                         detail::line_column(text, e.byte ? e.byte - 1 : 0) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(spec + ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError(spec + ": expected a JSON array of numbers");
    std::vector<double> q;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        if (!doc[i].is_number())
            throw ParseError(spec + ": element " + std::to_string(i + 1) + " is not a number");
        q.push_back(doc[i].get<double>());
        if (!std::isfinite(q.back()))
            throw ParseError(spec + ": element " + std::to_string(i + 1) + " is not finite");
    }
    return q;
}

/// Report builders: deterministic insertion-ordered JSON for CLI output.
using Json = nlohmann::ordered_json;

inline Json to_json(const Certificate& c) {
    Json j = Json::object();
    if (c.vector) j["vector"] = *c.vector;
    if (c.multi_index) {
        std::vector<int> one_based = *c.multi_index;
        for (int& k : one_based) ++k;
        j["multi_index"] = one_based;
    }
    if (c.interval) j["interval"] = {c.interval->first, c.interval->second};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline Json to_json(const PropertyVerdict& v) {
    Json j = Json::object();
    j["property"] = v.property;
    j["status"] = to_string(v.status);
    j["method"] = to_string(v.method);
    j["certificate"] = to_json(v.certificate);
    return j;
}

inline Json to_json(const SpectralEstimate& e) {
    Json j = Json::object();
    j["rho"] = e.rho;
    j["lower"] = e.lower;
    j["upper"] = e.upper;
    j["vector"] = e.vector;
    j["iterations"] = e.iterations;
    j["converged"] = e.converged;
    return j;
}

inline Json to_json(const TCPSolution& s) {
    Json j = Json::object();
    j["x"] = s.x;
    j["w"] = s.w;
    j["residual"] = s.residual;
    j["complementarity_gap"] = s.complementarity_gap;
    return j;
}

inline Json to_json(const SolutionSet& set) {
    Json j = Json::object();
    j["solutions"] = Json::array();
    for (const auto& s : set.solutions) j["solutions"].push_back(to_json(s));
    j["supports_examined"] = set.supports_examined;
    j["complete_within_box"] = set.complete_within_box;
    j["box_radius"] = set.box_radius;
    return j;
}

inline Json to_json(const DegreeResult& d) {
    Json j = Json::object();
    j["value"] = d.value;
    j["consistent"] = d.consistent;
    j["ball_radius"] = d.ball_radius;
    j["regular_values_used"] = d.regular_values_used;
    j["solution_counts"] = Json::array();
    for (const auto& [count, sign] : d.solution_counts)
        j["solution_counts"].push_back({{"preimages", count}, {"sign_sum", sign}});
    return j;
}

inline Json to_json(const ClassificationReport& r) {
    Json j = Json::object();
    j["verdicts"] = Json::array();
    for (const auto& v : r.verdicts) j["verdicts"].push_back(to_json(v));
    if (r.decomposition) {
        j["z_decomposition"] = Json::object();
        j["z_decomposition"]["r"] = r.decomposition->r;
        j["z_decomposition"]["b"] = serialize_tensor(r.decomposition->b);
    }
    if (r.mu) j["mu"] = *r.mu;
    return j;
}

}  // namespace tcpkit

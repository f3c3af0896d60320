#include "cubeconc/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace cubeconc {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
    return is;
}

void write_number_list(std::ostream& os, std::span<const double> xs) {
    os << '[';
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) os << ", ";
        os << xs[i];
    }
    os << ']';
}

json parse(std::istream& is) {
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        fail(ErrorCode::io, std::string("malformed JSON: ") + e.what());
    }
}

double number_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        fail(ErrorCode::io, std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

} // namespace

void write_distribution_json(const CubeDistribution& mu, std::ostream& os) {
    os << std::setprecision(17);
    os << "{\n  \"n\": " << mu.n() << ",\n  \"kind\": \"" << kind_name(mu.kind())
       << "\",\n  \"params\": {";
    switch (mu.kind()) {
        case DistKind::product: {
            os << "\"p0\": ";
            write_number_list(os, mu.product_p0());
            break;
        }
        case DistKind::delta_mix: {
            os << "\"eps\": " << mu.delta_eps();
            break;
        }
        case DistKind::markov: {
            os << "\"initial_p0\": " << mu.markov_initial_p0() << ", \"transitions\": [";
            const auto& rows = mu.markov_rows();
            for (size_t i = 0; i < rows.size(); ++i) {
                if (i) os << ", ";
                os << '[' << rows[i][0] << ", " << rows[i][1] << ']';
            }
            os << ']';
            break;
        }
        case DistKind::dense: {
            os << "\"probs\": ";
            write_number_list(os, mu.dense_table());
            if (mu.seed()) os << ", \"seed\": " << *mu.seed();
            break;
        }
    }
    os << "}\n}\n";
    if (!os) fail(ErrorCode::io, "write failed");
}

void write_distribution_json(const CubeDistribution& mu, const std::string& path) {
    auto os = open_out(path);
    write_distribution_json(mu, os);
}

CubeDistribution read_distribution_json(std::istream& is) {
    const json j = parse(is);
    if (!j.contains("n") || !j["n"].is_number_unsigned())
        fail(ErrorCode::io, "distribution file needs an unsigned 'n'");
    if (!j.contains("kind") || !j["kind"].is_string())
        fail(ErrorCode::io, "distribution file needs a 'kind' string");
    const uint32_t n = j["n"].get<uint32_t>();
    const std::string kind = j["kind"].get<std::string>();
    const json params = j.contains("params") ? j["params"] : json::object();

    if (kind == "product") {
        if (!params.contains("p0") || !params["p0"].is_array())
            fail(ErrorCode::io, "product params need a 'p0' array");
        auto p0 = params["p0"].get<std::vector<double>>();
        if (p0.size() != n) fail(ErrorCode::io, "'p0' must hold exactly n entries");
        return CubeDistribution::product(std::move(p0));
    }
    if (kind == "delta_mix") {
        return CubeDistribution::delta_mix(n, number_field(params, "eps"));
    }
    if (kind == "markov") {
        if (!params.contains("transitions") || !params["transitions"].is_array())
            fail(ErrorCode::io, "markov params need a 'transitions' array");
        std::vector<std::array<double, 2>> rows;
        for (const auto& row : params["transitions"]) {
            if (!row.is_array() || row.size() != 2)
                fail(ErrorCode::io, "each transition row must hold two probabilities");
            rows.push_back({row[0].get<double>(), row[1].get<double>()});
        }
        if (rows.size() + 1 != n) fail(ErrorCode::io, "'transitions' must hold n-1 rows");
        return CubeDistribution::markov(number_field(params, "initial_p0"), std::move(rows));
    }
    if (kind == "dense") {
        const json& src = params.contains("probs") ? params : j;
        if (!src.contains("probs") || !src["probs"].is_array())
            fail(ErrorCode::io, "dense params need a 'probs' array");
        auto probs = src["probs"].get<std::vector<double>>();
        std::optional<uint64_t> seed;
        if (src.contains("seed") && src["seed"].is_number_unsigned())
            seed = src["seed"].get<uint64_t>();
        return CubeDistribution::dense(n, std::move(probs), seed);
    }
    fail(ErrorCode::io, "unknown distribution kind '" + kind + "'");
}

CubeDistribution read_distribution_json(const std::string& path) {
    auto is = open_in(path);
    return read_distribution_json(is);
}

std::string set_bitmask_hex(const CubeSet& a) {
    const uint64_t points = uint64_t(1) << a.n();
    const size_t digits = size_t((points + 3) / 4);
    std::string hex(digits, '0');
    static const char* alphabet = "0123456789abcdef";
    for (size_t nib = 0; nib < digits; ++nib) {
        unsigned v = 0;
        for (unsigned b = 0; b < 4; ++b) {
            const uint64_t idx = uint64_t(nib) * 4 + b;
            if (idx < points && a.contains(idx)) v |= 1u << b;
        }
        hex[digits - 1 - nib] = alphabet[v];
    }
    return hex;
}

CubeSet set_from_bitmask_hex(uint32_t n, const std::string& hex) {
    CubeSet a(n);
    const uint64_t points = uint64_t(1) << n;
    for (size_t i = 0; i < hex.size(); ++i) {
        const char c = hex[hex.size() - 1 - i];
        unsigned v;
        if (c >= '0' && c <= '9') {
            v = unsigned(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v = unsigned(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            v = unsigned(c - 'A' + 10);
        } else {
            fail(ErrorCode::io, "invalid hex digit in bitmask");
        }
        for (unsigned b = 0; b < 4; ++b) {
            if (v & (1u << b)) {
                const uint64_t idx = uint64_t(i) * 4 + b;
                if (idx >= points) fail(ErrorCode::io, "bitmask has bits beyond 2^n");
                a.insert(idx);
            }
        }
    }
    return a;
}

void write_set_json(const CubeSet& a, std::ostream& os) {
    if (a.cardinality() <= 4096) {
        os << "{\"n\": " << a.n() << ", \"members\": [";
        const auto members = a.members();
        for (size_t i = 0; i < members.size(); ++i) {
            if (i) os << ", ";
            os << members[i];
        }
        os << "]}\n";
    } else {
        os << "{\"n\": " << a.n() << ", \"bitmask_hex\": \"" << set_bitmask_hex(a) << "\"}\n";
    }
    if (!os) fail(ErrorCode::io, "write failed");
}

void write_set_json(const CubeSet& a, const std::string& path) {
    auto os = open_out(path);
    write_set_json(a, os);
}

CubeSet read_set_json(std::istream& is) {
    const json j = parse(is);
    if (!j.contains("n") || !j["n"].is_number_unsigned())
        fail(ErrorCode::io, "set file needs an unsigned 'n'");
    const uint32_t n = j["n"].get<uint32_t>();
    if (j.contains("members")) {
        if (!j["members"].is_array()) fail(ErrorCode::io, "'members' must be an array");
        CubeSet a(n);
        for (const auto& m : j["members"]) {
            if (!m.is_number_unsigned()) fail(ErrorCode::io, "set members must be indices");
            a.insert(m.get<uint64_t>());
        }
        return a;
    }
    if (j.contains("bitmask_hex") && j["bitmask_hex"].is_string()) {
        return set_from_bitmask_hex(n, j["bitmask_hex"].get<std::string>());
    }
    fail(ErrorCode::io, "set file needs 'members' or 'bitmask_hex'");
}

CubeSet read_set_json(const std::string& path) {
    auto is = open_in(path);
    return read_set_json(is);
}

} // namespace cubeconc

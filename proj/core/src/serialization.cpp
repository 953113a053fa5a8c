#include "nivsum/serialization.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nivsum {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json digit_string_node(const DigitString& n) {
    ordered_json j;
    j["base"] = n.base();
    j["digits"] = n.digits();
    return j;
}

DigitString digit_string_from_node(const ordered_json& j, const char* what) {
    if (!j.is_object() || !j.contains("base") || !j.contains("digits"))
        throw std::invalid_argument(std::string(what) + ": expected {\"base\", \"digits\"}");
    const uint32_t base = j.at("base").get<uint32_t>();
    const auto digits = j.at("digits").get<std::vector<uint32_t>>();
    return DigitString(base, digits);  // constructor validates
}

std::string dump(const ordered_json& j, int indent) {
    return indent < 0 ? j.dump() : j.dump(indent);
}

ordered_json parse(const std::string& text, const char* what) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw std::invalid_argument(std::string(what) + ": malformed JSON");
    return j;
}

}  // namespace

std::string digit_string_to_json(const DigitString& n, int indent) {
    return dump(digit_string_node(n), indent);
}

DigitString digit_string_from_json(const std::string& text) {
    try {
        return digit_string_from_node(parse(text, "digit string"), "digit string");
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("digit string: ") + e.what());
    }
}

std::string certificate_to_json(const DecompositionCert& cert, int indent) {
    ordered_json j;
    j["g"] = cert.input.base();
    j["n"] = digit_string_node(cert.input);
    j["method"] = method_name(cert.method);
    ordered_json arr = ordered_json::array();
    for (const auto& s : cert.summands) arr.push_back(digit_string_node(s));
    j["summands"] = std::move(arr);
    if (cert.provenance) {
        const Provenance& p = *cert.provenance;
        ordered_json pj;
        if (p.triple) pj["triple"] = *p.triple;
        if (!p.split_lengths.empty()) pj["split_lengths"] = p.split_lengths;
        if (!p.witnesses.empty()) pj["witnesses"] = p.witnesses;
        if (!p.h_values.empty()) pj["h"] = p.h_values;
        j["provenance"] = std::move(pj);
    }
    return dump(j, indent);
}

DecompositionCert certificate_from_json(const std::string& text) try {
    const ordered_json j = parse(text, "certificate");
    if (!j.is_object()) throw std::invalid_argument("certificate: expected a JSON object");
    for (const char* key : {"g", "n", "method", "summands"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("certificate: missing field \"") + key +
                                        "\"");

    const uint32_t g = j.at("g").get<uint32_t>();
    DigitString input = digit_string_from_node(j.at("n"), "certificate n");
    if (input.base() != g)
        throw std::invalid_argument("certificate: n.base disagrees with g");

    std::vector<DigitString> summands;
    if (!j.at("summands").is_array())
        throw std::invalid_argument("certificate: summands must be an array");
    for (const auto& node : j.at("summands")) {
        DigitString s = digit_string_from_node(node, "certificate summand");
        if (s.base() != g)
            throw std::invalid_argument("certificate: summand base disagrees with g");
        summands.push_back(std::move(s));
    }

    DecompositionCert cert{std::move(input), std::move(summands),
                           method_from_name(j.at("method").get<std::string>()), std::nullopt};

    if (j.contains("provenance") && !j.at("provenance").is_null()) {
        const auto& pj = j.at("provenance");
        if (!pj.is_object())
            throw std::invalid_argument("certificate: provenance must be an object");
        Provenance p;
        if (pj.contains("triple")) {
            const auto t = pj.at("triple").get<std::vector<uint64_t>>();
            if (t.size() != 3)
                throw std::invalid_argument("certificate: triple must have 3 entries");
            p.triple = std::array<uint64_t, 3>{t[0], t[1], t[2]};
        }
        if (pj.contains("split_lengths"))
            p.split_lengths = pj.at("split_lengths").get<std::vector<std::size_t>>();
        if (pj.contains("witnesses"))
            p.witnesses = pj.at("witnesses").get<std::vector<std::vector<std::size_t>>>();
        if (pj.contains("h")) p.h_values = pj.at("h").get<std::vector<uint64_t>>();
        cert.provenance = std::move(p);
    }
    return cert;
} catch (const nlohmann::ordered_json::exception& e) {
    throw std::invalid_argument(std::string("certificate: ") + e.what());
}

namespace {

ordered_json report_node(const SieveReport& rep) {
    ordered_json j;
    j["g"] = rep.g;
    j["N"] = rep.N;
    j["k"] = rep.k;
    j["kind"] = kind_name(rep.kind);
    j["exceptions"] = rep.exceptions;
    ordered_json stats;
    stats["niven_count"] = rep.niven_count;
    stats["trials_histogram"] = rep.trials_histogram;
    stats["wall_time_ms"] = rep.wall_time_ms;
    j["stats"] = std::move(stats);
    return j;
}

}  // namespace

std::string report_to_json(const SieveReport& rep, int indent) {
    return dump(report_node(rep), indent);
}

std::string report_to_csv(const SieveReport& rep) {
    std::ostringstream out;
    out << "n_exception\n";
    for (uint64_t n : rep.exceptions) out << n << "\n";
    ordered_json stats = report_node(rep);
    stats.erase("exceptions");
    out << "# stats " << stats.dump() << "\n";
    return out.str();
}

std::string niven_counts_to_csv(const std::vector<NivenCount>& rows) {
    std::ostringstream out;
    out << "x,count,c_estimate\n";
    out.precision(12);
    for (const auto& r : rows) out << r.x << "," << r.count << "," << r.c_estimate << "\n";
    return out.str();
}

}  // namespace nivsum

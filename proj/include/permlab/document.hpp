#pragma once

// Result documents: canonical JSON (sorted keys, shortest round-trip numbers)
// shared by the CLI and the test suites. -infinity log values (permanent = 0)
// are serialized as null; every other reported number round-trips exactly.

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "permlab/exact.hpp"
#include "permlab/monomer_dimer.hpp"
#include "permlab/numeric.hpp"
#include "permlab/permanent.hpp"

namespace permlab {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kMaxEstimateDigits = 400;

inline json log_or_null(double v) {
    if (std::isinf(v) && v < 0) return nullptr;
    return v;
}

inline std::optional<std::string> decimal_string(const mpz_class& z) {
    std::string s = z.get_str();
    if (s.size() > kMaxEstimateDigits) return std::nullopt;
    return s;
}

inline std::optional<std::string> decimal_string(const mpq_class& q) {
    if (q.get_den() == 1) return decimal_string(q.get_num());
    std::string num = q.get_num().get_str(), den = q.get_den().get_str();
    if (num.size() > kMaxEstimateDigits || den.size() > kMaxEstimateDigits) return std::nullopt;
    return num + "/" + den;
}

inline json document_header(const std::string& command, const std::string& digest) {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    if (!digest.empty()) j["input_digest"] = digest;
    return j;
}

inline json interval_json(double log_lo, double log_hi) {
    return json{{"log_lo", log_or_null(log_lo)}, {"log_hi", log_or_null(log_hi)}};
}

struct TraceSummary {
    long nodes = 0;
    long exact_leaves = 0;
    long zero_leaves = 0;
    long expander_nodes = 0;
    long violator_nodes = 0;
    long total_b_subsets = 0;
    int max_cd_depth = 0;
};

inline void summarize(const TraceNode& node, TraceSummary& s) {
    ++s.nodes;
    switch (node.kind) {
        case TraceNode::Kind::ExactBase: ++s.exact_leaves; break;
        case TraceNode::Kind::Zero: ++s.zero_leaves; break;
        case TraceNode::Kind::Expander:
            ++s.expander_nodes;
            s.max_cd_depth = std::max(s.max_cd_depth, node.depth);
            break;
        case TraceNode::Kind::Violator:
            ++s.violator_nodes;
            s.total_b_subsets += node.num_subsets;
            break;
    }
    for (const TraceNode& c : node.children) summarize(c, s);
}

inline json trace_summary_json(const DecompositionTrace& trace) {
    TraceSummary s;
    summarize(trace.root, s);
    return json{{"nodes", s.nodes},
                {"exact_leaves", s.exact_leaves},
                {"zero_leaves", s.zero_leaves},
                {"expander_nodes", s.expander_nodes},
                {"violator_nodes", s.violator_nodes},
                {"total_b_subsets", s.total_b_subsets},
                {"max_cd_depth", s.max_cd_depth}};
}

inline json approx_result_json(const ApproxResult& r) {
    json j;
    j["log_estimate"] = log_or_null(r.log_estimate);
    j["exact"] = r.exact;
    j["converged"] = r.converged;
    j["guarantee_exponent"] = r.guarantee_exponent;
    j["certified_interval"] = interval_json(r.log_lo, r.log_hi);
    if (r.exact_value) {
        if (auto s = decimal_string(*r.exact_value)) j["estimate"] = *s;
    }
    j["used"] = json{{"epsilon", r.meta.epsilon},
                     {"lambda", r.meta.lambda_used},
                     {"alpha", r.meta.alpha_used},
                     {"max_degree", r.meta.max_degree},
                     {"depth", r.meta.depth_reached},
                     {"trace_nodes", r.meta.trace_nodes}};
    return j;
}

// Pragmatic structural validation against docs/result_schema.json. Returns
// human-readable problems; empty means valid.
inline std::vector<std::string> validate_document(const json& j) {
    std::vector<std::string> problems;
    auto need = [&](const char* key, const char* type) {
        if (!j.contains(key)) {
            problems.push_back(std::string("missing key: ") + key);
            return false;
        }
        const auto& v = j.at(key);
        const std::string t = type;
        const bool ok = (t == "string" && v.is_string()) || (t == "object" && v.is_object()) ||
                        (t == "array" && v.is_array()) || (t == "bool" && v.is_boolean()) ||
                        (t == "number" && v.is_number()) ||
                        (t == "number_or_null" && (v.is_number() || v.is_null()));
        if (!ok) problems.push_back(std::string(key) + " has wrong type, expected " + type);
        return ok;
    };

    if (!need("version", "string") || !need("command", "string")) return problems;
    need("parameters", "object");
    const std::string command = j.at("command").get<std::string>();

    if (command == "exact" || command == "approx" || command == "zeta") {
        need("log_estimate", "number_or_null");
        need("exact", "bool");
        if (need("certified_interval", "object")) {
            const auto& iv = j.at("certified_interval");
            if (!iv.contains("log_lo") || !iv.contains("log_hi"))
                problems.push_back("certified_interval must contain log_lo and log_hi");
        }
    }
    if (command == "exact") need("estimate", "string");
    if (command == "approx") {
        need("converged", "bool");
        need("guarantee_exponent", "number");
        need("trace_summary", "object");
    }
    if (command == "zeta") need("converged", "bool");
    if (command == "expansion") need("verdict", "string");
    if (command == "diagnose") need("ratio_table", "array");
    if (command == "bench") {
        need("rows", "array");
        need("summary", "object");
    }
    if (command != "bench" && !j.contains("input_digest"))
        problems.push_back("missing key: input_digest");
    return problems;
}

}  // namespace permlab

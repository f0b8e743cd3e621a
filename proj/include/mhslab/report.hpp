#pragma once

// Report records shared by the checkers and the suite runner, plus the JSON
// and CSV projections. JSON is the canonical format; CSV carries the same
// columns. Timings are zeroed in serialized output unless explicitly enabled
// so that reruns stay byte-identical.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace mhslab {

struct CongruenceReport {
    std::string theorem_id;
    int n = 0;
    int m = 0;
    uint64_t p = 0;
    int r = 0;
    uint64_t modulus = 0;
    uint64_t lhs = 0;
    uint64_t rhs = 0;
    bool pass = false;
    bool skipped = false;
    std::string note;
    double runtime_ms = 0.0;
};

struct SuiteReport {
    std::vector<CongruenceReport> checks;
    size_t passed = 0;
    size_t failed = 0;
    size_t skipped = 0;
    std::string config_echo;

    void recount() {
        passed = failed = skipped = 0;
        for (const auto& c : checks) {
            if (c.skipped) ++skipped;
            else if (c.pass) ++passed;
            else ++failed;
        }
    }

    // Deterministic ordering regardless of execution parallelism.
    void sort_checks() {
        std::sort(checks.begin(), checks.end(), [](const CongruenceReport& a, const CongruenceReport& b) {
            return std::tie(a.theorem_id, a.n, a.m, a.p, a.r, a.note) <
                   std::tie(b.theorem_id, b.n, b.m, b.p, b.r, b.note);
        });
    }
};

inline nlohmann::ordered_json report_to_json(const CongruenceReport& c, bool with_timings) {
    nlohmann::ordered_json j;
    j["theorem_id"] = c.theorem_id;
    j["n"] = c.n;
    j["m"] = c.m;
    j["p"] = c.p;
    j["r"] = c.r;
    j["modulus"] = c.modulus;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["pass"] = c.pass;
    j["skipped"] = c.skipped;
    j["note"] = c.note;
    j["runtime_ms"] = with_timings ? c.runtime_ms : 0.0;
    return j;
}

inline std::string suite_to_json(const SuiteReport& s, bool with_timings = false) {
    nlohmann::ordered_json j;
    j["config"] = s.config_echo;
    j["totals"] = {{"pass", s.passed}, {"fail", s.failed}, {"skipped", s.skipped}};
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : s.checks) j["checks"].push_back(report_to_json(c, with_timings));
    return j.dump(2) + "\n";
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

inline std::string suite_to_csv(const SuiteReport& s, bool with_timings = false) {
    std::ostringstream out;
    out << "theorem_id,n,m,p,r,modulus,lhs,rhs,pass,skipped,note,runtime_ms\n";
    for (const auto& c : s.checks) {
        out << csv_escape(c.theorem_id) << ',' << c.n << ',' << c.m << ',' << c.p << ',' << c.r << ','
            << c.modulus << ',' << c.lhs << ',' << c.rhs << ',' << (c.pass ? "true" : "false") << ','
            << (c.skipped ? "true" : "false") << ',' << csv_escape(c.note) << ','
            << (with_timings ? c.runtime_ms : 0.0) << '\n';
    }
    return out.str();
}

} // namespace mhslab

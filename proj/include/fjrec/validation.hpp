#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fjrec {

enum class Severity { warning, error };

struct Issue {
    Severity severity = Severity::error;
    std::string code;               // machine-readable tag, e.g. "row_sum", "self_loop"
    std::optional<long> index;      // offending row/user/item when applicable
    double value = 0.0;             // excess, residual or offending entry
    std::string message;
};

// Diagnostics container. Nothing here throws: callers decide what is fatal.
struct ValidationReport {
    std::vector<Issue> issues;

    bool clean() const noexcept { return issues.empty(); }
    bool has_errors() const noexcept;
    std::size_t count(const std::string& code) const;
    const Issue* find(const std::string& code) const;

    void add(Severity s, std::string code, std::string message,
             std::optional<long> index = std::nullopt, double value = 0.0);
    void merge(const ValidationReport& other, const std::string& prefix = {});

    nlohmann::json to_json() const;
};

const char* to_string(Severity s);

}  // namespace fjrec

#include "fjrec/validation.hpp"

#include <algorithm>

namespace fjrec {

const char* to_string(Severity s) {
    return s == Severity::error ? "error" : "warning";
}

bool ValidationReport::has_errors() const noexcept {
    return std::any_of(issues.begin(), issues.end(),
                       [](const Issue& i) { return i.severity == Severity::error; });
}

std::size_t ValidationReport::count(const std::string& code) const {
    return static_cast<std::size_t>(std::count_if(
        issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; }));
}

const Issue* ValidationReport::find(const std::string& code) const {
    auto it = std::find_if(issues.begin(), issues.end(),
                           [&](const Issue& i) { return i.code == code; });
    return it == issues.end() ? nullptr : &*it;
}

void ValidationReport::add(Severity s, std::string code, std::string message,
                           std::optional<long> index, double value) {
    issues.push_back(Issue{s, std::move(code), index, value, std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other, const std::string& prefix) {
    for (Issue i : other.issues) {
        if (!prefix.empty()) i.message = prefix + ": " + i.message;
        issues.push_back(std::move(i));
    }
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& i : issues) {
        nlohmann::json j{{"severity", to_string(i.severity)},
                         {"code", i.code},
                         {"value", i.value},
                         {"message", i.message}};
        j["index"] = i.index ? nlohmann::json(*i.index) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return nlohmann::json{{"clean", clean()}, {"has_errors", has_errors()}, {"issues", arr}};
}

}  // namespace fjrec

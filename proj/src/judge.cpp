#include "judgeaudit/judge.hpp"

#include <sstream>

namespace judgeaudit {

std::string ConditionKey::canonical() const {
    std::ostringstream out;
    out << to_label(bias) << "|" << to_label(presentation) << "|" << run_index << "|"
        << to_label(injection_mode);
    return out.str();
}

std::string CallKey::canonical() const {
    return item_id + "|" + condition.canonical();
}

std::string_view to_label(BackendErrorCategory category) {
    switch (category) {
        case BackendErrorCategory::Transport: return "Transport";
        case BackendErrorCategory::RateLimit: return "RateLimit";
        case BackendErrorCategory::HttpStatus: return "HttpStatus";
        case BackendErrorCategory::BadResponseShape: return "BadResponseShape";
    }
    return "?";
}

std::optional<BackendErrorCategory> parse_backend_error(std::string_view text) {
    if (text == "Transport") return BackendErrorCategory::Transport;
    if (text == "RateLimit") return BackendErrorCategory::RateLimit;
    if (text == "HttpStatus") return BackendErrorCategory::HttpStatus;
    if (text == "BadResponseShape") return BackendErrorCategory::BadResponseShape;
    return std::nullopt;
}

} // namespace judgeaudit

#include "mdv/error.hpp"

namespace mdv {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::dimension_mismatch: return "DIM_MISMATCH";
        case Errc::weight_sum: return "WEIGHT_SUM";
        case Errc::weight_range: return "WEIGHT_RANGE";
        case Errc::bad_parameter: return "BAD_PARAMETER";
        case Errc::unknown_type: return "UNKNOWN_TYPE";
        case Errc::malformed_json: return "MALFORMED_JSON";
        case Errc::missing_field: return "MISSING_FIELD";
        case Errc::bad_field: return "BAD_FIELD";
        case Errc::numerical_failure: return "NUMERICAL_FAILURE";
        case Errc::overflow: return "OVERFLOW";
        case Errc::unknown_demo: return "UNKNOWN_DEMO";
        case Errc::bad_usage: return "BAD_USAGE";
        case Errc::io_error: return "IO_ERROR";
    }
    return "UNKNOWN";
}

Error::Error(Errc code, const std::string& msg, std::string where)
    : std::runtime_error(where.empty() ? std::string(errc_name(code)) + ": " + msg
                                       : std::string(errc_name(code)) + " at " + where + ": " + msg),
      code_(code),
      where_(std::move(where)),
      detail_(msg) {}

OverflowError::OverflowError(const std::string& msg, std::vector<double> last_finite,
                             long iterations)
    : Error(Errc::overflow, msg), last_finite_(std::move(last_finite)), iterations_(iterations) {}

} // namespace mdv

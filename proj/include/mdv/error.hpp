#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mdv {

enum class Errc {
    dimension_mismatch,
    weight_sum,
    weight_range,
    bad_parameter,
    unknown_type,
    malformed_json,
    missing_field,
    bad_field,
    numerical_failure,
    overflow,
    unknown_demo,
    bad_usage,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg, std::string where = {});

    Errc code() const noexcept { return code_; }
    // Context of the failure; for parse errors this is a JSON pointer.
    const std::string& where() const noexcept { return where_; }
    // Message without the code/location prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string where_;
    std::string detail_;
};

// Thrown when an iteration leaves the representable range; carries the last
// finite iterate so the caller can inspect how far the run got.
class OverflowError : public Error {
public:
    OverflowError(const std::string& msg, std::vector<double> last_finite, long iterations);

    const std::vector<double>& last_finite() const noexcept { return last_finite_; }
    long iterations() const noexcept { return iterations_; }

private:
    std::vector<double> last_finite_;
    long iterations_;
};

} // namespace mdv

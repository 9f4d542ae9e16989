#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace extbwt {

enum class ErrorCode {
    unknown_symbol,
    unequal_length,
    empty_input,
    invalid_alphabet,
    wrong_state,
    value_out_of_range,
    corrupt_file,
    length_mismatch,
    missing_column,
    rank_overflow,
    label_count_mismatch,
    label_out_of_range,
    too_large_for_oracle,
    too_many_open_files,
    io_error,
    verify_mismatch,
    usage,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace extbwt

#include "extbwt/error.hpp"

namespace extbwt {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::unknown_symbol: return "UnknownSymbol";
        case ErrorCode::unequal_length: return "UnequalLength";
        case ErrorCode::empty_input: return "EmptyInput";
        case ErrorCode::invalid_alphabet: return "InvalidAlphabet";
        case ErrorCode::wrong_state: return "WrongState";
        case ErrorCode::value_out_of_range: return "ValueOutOfRange";
        case ErrorCode::corrupt_file: return "CorruptFile";
        case ErrorCode::length_mismatch: return "LengthMismatch";
        case ErrorCode::missing_column: return "MissingColumn";
        case ErrorCode::rank_overflow: return "RankOverflow";
        case ErrorCode::label_count_mismatch: return "LabelCountMismatch";
        case ErrorCode::label_out_of_range: return "LabelOutOfRange";
        case ErrorCode::too_large_for_oracle: return "TooLargeForOracle";
        case ErrorCode::too_many_open_files: return "TooManyOpenFiles";
        case ErrorCode::io_error: return "IoError";
        case ErrorCode::verify_mismatch: return "VerifyMismatch";
        case ErrorCode::usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace extbwt

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lqn {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-9;

/// Internal state of a particle on arrival. Drawn blue (up) and red (down).
enum class Color { up, down };

enum class Statistics { boson, fermion };

/// `strict` requires every particle row to be normalized; `design` skips the check.
enum class NormalizationMode { strict, design };

inline Color flip(Color c) { return c == Color::up ? Color::down : Color::up; }

inline char ket_char(Color c) { return c == Color::up ? 'u' : 'd'; }

inline std::string_view color_name(Color c) { return c == Color::up ? "up" : "down"; }

inline std::string_view statistics_name(Statistics s) {
    return s == Statistics::boson ? "boson" : "fermion";
}

inline std::string_view mode_name(NormalizationMode m) {
    return m == NormalizationMode::strict ? "strict" : "design";
}

enum class ErrorCode {
    index_out_of_range,
    duplicate_edge,
    zero_amplitude,
    row_not_normalized,
    superposed_internal_state,
    invalid_matching,
    no_perfect_matching,
    too_large,
    zero_state,
    dimension_mismatch,
    bad_length,
    no_preset_for_n,
    parse_error,
    invalid_argument,
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::index_out_of_range: return "IndexOutOfRange";
        case ErrorCode::duplicate_edge: return "DuplicateEdge";
        case ErrorCode::zero_amplitude: return "ZeroAmplitude";
        case ErrorCode::row_not_normalized: return "RowNotNormalized";
        case ErrorCode::superposed_internal_state: return "SuperposedInternalState";
        case ErrorCode::invalid_matching: return "InvalidMatching";
        case ErrorCode::no_perfect_matching: return "NoPerfectMatching";
        case ErrorCode::too_large: return "TooLarge";
        case ErrorCode::zero_state: return "ZeroState";
        case ErrorCode::dimension_mismatch: return "DimensionMismatch";
        case ErrorCode::bad_length: return "BadLength";
        case ErrorCode::no_preset_for_n: return "NoPresetForN";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Partition of a vertex (or detector) set into blocks. Blocks are sorted
/// internally and ordered by their smallest element.
using Partition = std::vector<std::vector<std::size_t>>;

inline Partition canonical_partition(Partition p) {
    for (auto& block : p) std::sort(block.begin(), block.end());
    std::sort(p.begin(), p.end());
    return p;
}

}  // namespace lqn

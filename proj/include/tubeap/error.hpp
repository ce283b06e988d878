#ifndef TUBEAP_ERROR_HPP
#define TUBEAP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tubeap {

enum class Errc {
    EmptyGenerators,
    ZeroGenerator,
    NotPointed,
    DegenerateSpan,
    UnsupportedDimension,
    DimensionMismatch,
    EmptySet,
    EmptySpectrum,
    InvalidArgument,
    OverflowGuard,
    BadGrid,
    CollidingFrequencies,
    NotFound,
    AllClipped,
    StepTooSmall,
    ZeroOnPath,
    NotNegative,
    BoundaryZeroPersistent,
    TrackingFailed,
    BudgetExhausted,
    Inconclusive,
    Config,
};

constexpr std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::EmptyGenerators: return "EmptyGenerators";
        case Errc::ZeroGenerator: return "ZeroGenerator";
        case Errc::NotPointed: return "NotPointed";
        case Errc::DegenerateSpan: return "DegenerateSpan";
        case Errc::UnsupportedDimension: return "UnsupportedDimension";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::EmptySet: return "EmptySet";
        case Errc::EmptySpectrum: return "EmptySpectrum";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::OverflowGuard: return "OverflowGuard";
        case Errc::BadGrid: return "BadGrid";
        case Errc::CollidingFrequencies: return "CollidingFrequencies";
        case Errc::NotFound: return "NotFound";
        case Errc::AllClipped: return "AllClipped";
        case Errc::StepTooSmall: return "StepTooSmall";
        case Errc::ZeroOnPath: return "ZeroOnPath";
        case Errc::NotNegative: return "NotNegative";
        case Errc::BoundaryZeroPersistent: return "BoundaryZeroPersistent";
        case Errc::TrackingFailed: return "TrackingFailed";
        case Errc::BudgetExhausted: return "BudgetExhausted";
        case Errc::Inconclusive: return "Inconclusive";
        case Errc::Config: return "Config";
    }
    return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised when a line restriction maps two distinct frequencies onto one.
class CollisionError : public Error {
public:
    CollisionError(std::size_t first, std::size_t second, const std::string& what)
        : Error(Errc::CollidingFrequencies, what), first_(first), second_(second) {}

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

inline void require(bool condition, Errc code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

}  // namespace tubeap

#endif  // TUBEAP_ERROR_HPP

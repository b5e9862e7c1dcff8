#ifndef WONHAM_CORE_ERROR_HPP
#define WONHAM_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wonham {

enum class ErrorCode {
    InvalidArgument,
    NegativeOffDiagonal,
    RowSumNonZero,
    Reducible,
    SingularSystem,
    NonInteriorInput,
    DimensionMismatch,
    NonFiniteState,
    GridExceedsPath,
    RankTooLarge,
    NegativeRate,
    GridMismatch,
    Config,
    Io,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the core carries one of the codes above so the C
// layer can map it to a status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace wonham

#endif  // WONHAM_CORE_ERROR_HPP

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace olasso {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
    kInvalidArgument = 1,
    kDimensionMismatch = 2,
    kIo = 3,
    kParse = 4,
    kNotCentered = 5,
    kInternal = 6,
};

// Every failure raised by the library carries one of the codes above so the
// C layer can map it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

}  // namespace olasso

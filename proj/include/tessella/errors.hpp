#pragma once

#include <stdexcept>
#include <string>

namespace tessella {

enum class ErrorKind {
    NonOrientableOrInvalid,
    UnknownVertex,
    InvalidTiling,
    NonComposable,
    InverseOfNonLocalized,
    UnknownArrow,
    LocalizedQuiverUnsupported,
    InvalidAutomorphism,
    OrbitSizeViolation,
    BadChoice,
    MalformedWord,
    MixedInverseViolation,
    NoChoiceFound,
    ShapeMismatch,
    StateSpaceTooLarge,
    GenusTooSmall,
    NotInTreeClosure,
    MissingPhiAction,
    DimerExtensionFailed,
    InvalidInput,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tessella

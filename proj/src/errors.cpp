#include "tessella/errors.hpp"

namespace tessella {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NonOrientableOrInvalid: return "NonOrientableOrInvalid";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::InvalidTiling: return "InvalidTiling";
    case ErrorKind::NonComposable: return "NonComposable";
    case ErrorKind::InverseOfNonLocalized: return "InverseOfNonLocalized";
    case ErrorKind::UnknownArrow: return "UnknownArrow";
    case ErrorKind::LocalizedQuiverUnsupported: return "LocalizedQuiverUnsupported";
    case ErrorKind::InvalidAutomorphism: return "InvalidAutomorphism";
    case ErrorKind::OrbitSizeViolation: return "OrbitSizeViolation";
    case ErrorKind::BadChoice: return "BadChoice";
    case ErrorKind::MalformedWord: return "MalformedWord";
    case ErrorKind::MixedInverseViolation: return "MixedInverseViolation";
    case ErrorKind::NoChoiceFound: return "NoChoiceFound";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorKind::GenusTooSmall: return "GenusTooSmall";
    case ErrorKind::NotInTreeClosure: return "NotInTreeClosure";
    case ErrorKind::MissingPhiAction: return "MissingPhiAction";
    case ErrorKind::DimerExtensionFailed: return "DimerExtensionFailed";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

} // namespace tessella

#include "forge/errors.hpp"

namespace forge {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::NegativeValue: return "NegativeValue";
    case ErrorKind::UnknownCode: return "UnknownCode";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::MissingArtifact: return "MissingArtifact";
    case ErrorKind::Io: return "Io";
    case ErrorKind::EmptyTrade: return "EmptyTrade";
    case ErrorKind::MissingYear: return "MissingYear";
    case ErrorKind::MissingConcordance: return "MissingConcordance";
    case ErrorKind::UnknownSector: return "UnknownSector";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::NoExternalSupply: return "NoExternalSupply";
    case ErrorKind::UniverseMismatch: return "UniverseMismatch";
    case ErrorKind::Computation: return "Computation";
    }
    return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::NegativeValue:
    case ErrorKind::UnknownCode:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Validation:
    case ErrorKind::MissingArtifact:
    case ErrorKind::Io:
    case ErrorKind::EmptyRegion:
    case ErrorKind::UnknownSector:
        return true;
    default:
        return false;
    }
}

} // namespace forge

#pragma once

#include <stdexcept>
#include <string>

namespace bdcover {

enum class ErrorKind {
    Parse,
    Validation,
    InvalidCartan,
    AxiomViolation,
    NotASublattice,
    RankMismatch,
    NotWeylInvariant,
    NotSameQ,
    InvalidPsiData,
    NotCentral,
    NotInYQn,
    WrongHypothesis,
    ObstructionPresent,
    NonIntegralLevel,
    NotReduced,
    PoleAt,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Validation: return "ValidationError";
        case ErrorKind::InvalidCartan: return "InvalidCartan";
        case ErrorKind::AxiomViolation: return "AxiomViolation";
        case ErrorKind::NotASublattice: return "NotASublattice";
        case ErrorKind::RankMismatch: return "RankMismatch";
        case ErrorKind::NotWeylInvariant: return "NotWeylInvariant";
        case ErrorKind::NotSameQ: return "NotSameQ";
        case ErrorKind::InvalidPsiData: return "InvalidPsiData";
        case ErrorKind::NotCentral: return "NotCentral";
        case ErrorKind::NotInYQn: return "NotInYQn";
        case ErrorKind::WrongHypothesis: return "WrongHypothesis";
        case ErrorKind::ObstructionPresent: return "ObstructionPresent";
        case ErrorKind::NonIntegralLevel: return "NonIntegralLevel";
        case ErrorKind::NotReduced: return "NotReduced";
        case ErrorKind::PoleAt: return "PoleAt";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg, std::string witness = {})
        : std::runtime_error(std::string(kind_name(kind)) + ": " + msg), kind_(kind), witness_(std::move(witness)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& witness() const { return witness_; }

    // CLI exit status: 2 parse, 4 obstruction, 3 anything else.
    int exit_code() const {
        if (kind_ == ErrorKind::Parse) return 2;
        if (kind_ == ErrorKind::ObstructionPresent) return 4;
        return 3;
    }

private:
    ErrorKind kind_;
    std::string witness_;
};

}  // namespace bdcover

#pragma once

#include <stdexcept>
#include <string>

namespace hadad {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SyntaxError : Error {
    explicit SyntaxError(const std::string& msg) : Error("syntax error: " + msg) {}
};

struct UnknownName : Error {
    explicit UnknownName(const std::string& name) : Error("unknown name: " + name) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error("shape mismatch: " + msg) {}
};

struct NonSquare : Error {
    explicit NonSquare(const std::string& msg) : Error("non-square input: " + msg) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& msg) : Error("singular matrix: " + msg) {}
};

struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& msg) : Error("not positive definite: " + msg) {}
};

struct NumericOverflow : Error {
    explicit NumericOverflow(const std::string& msg) : Error("numeric overflow: " + msg) {}
};

struct UnsupportedOperator : Error {
    explicit UnsupportedOperator(const std::string& msg) : Error("unsupported operator: " + msg) {}
};

struct UnknownPack : Error {
    explicit UnknownPack(const std::string& name) : Error("unknown constraint pack: " + name) {}
};

struct ArityError : Error {
    explicit ArityError(const std::string& msg) : Error("arity error: " + msg) {}
};

struct InconsistentEGD : Error {
    explicit InconsistentEGD(const std::string& msg) : Error("inconsistent equality: " + msg) {}
};

struct EmptyPlan : Error {
    explicit EmptyPlan(const std::string& msg) : Error("empty universal plan: " + msg) {}
};

struct NoRewriting : Error {
    explicit NoRewriting(const std::string& msg) : Error("no rewriting found: " + msg) {}
};

struct DanglingResult : Error {
    explicit DanglingResult(const std::string& msg) : Error("dangling result: " + msg) {}
};

struct AmbiguousProducer : Error {
    explicit AmbiguousProducer(const std::string& msg) : Error("ambiguous producer: " + msg) {}
};

struct UnsupportedInDialect : Error {
    explicit UnsupportedInDialect(const std::string& msg) : Error("unsupported in dialect: " + msg) {}
};

struct VerificationFailure : Error {
    explicit VerificationFailure(const std::string& msg) : Error("verification failure: " + msg) {}
};

}

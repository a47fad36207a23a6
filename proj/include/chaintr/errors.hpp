#pragma once

#include <stdexcept>
#include <string>

namespace chaintr {

// Exit status of the command-line front end for each error family.
enum class ExitCode : int {
    ok = 0,
    other = 1,
    schema = 2,
    solver = 3,
    singular = 4,
    check_failure = 5,
};

class ChainError : public std::runtime_error {
public:
    explicit ChainError(const std::string& what, ExitCode code = ExitCode::other)
        : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

struct SchemaError : ChainError {
    explicit SchemaError(const std::string& w) : ChainError("schema error: " + w, ExitCode::schema) {}
};

struct SolverError : ChainError {
    explicit SolverError(const std::string& w) : ChainError("solver failure: " + w, ExitCode::solver) {}
};

struct SingularCurveError : ChainError {
    explicit SingularCurveError(const std::string& w)
        : ChainError("singular spectral curve: " + w, ExitCode::singular) {}
};

struct CheckFailure : ChainError {
    explicit CheckFailure(const std::string& w) : ChainError("check failed: " + w, ExitCode::check_failure) {}
};

// Reading a series coefficient beyond its recorded truncation order.
struct TruncationError : ChainError {
    explicit TruncationError(const std::string& w) : ChainError("truncation: " + w) {}
};

struct RingError : ChainError {
    explicit RingError(const std::string& w) : ChainError("ring: " + w) {}
};

struct IrrationalRootError : ChainError {
    explicit IrrationalRootError(const std::string& w)
        : ChainError("irrational root in exact ring (use the float ring): " + w) {}
};

// Two roots closer than the ring tolerance, or an exact repeated root.
struct MultipleRootError : ChainError {
    explicit MultipleRootError(const std::string& w) : ChainError("multiple root: " + w) {}
};

struct UnsupportedError : ChainError {
    explicit UnsupportedError(const std::string& w) : ChainError("unsupported: " + w) {}
};

}  // namespace chaintr

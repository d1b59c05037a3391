#pragma once

#include <stdexcept>
#include <string>

namespace mk {

/* Bad user input: malformed files, inhomogeneous relations, flag misuse.
 * Maps to process exit code 2. */
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/* A per-degree word count exceeded the configured cap.  Maps to exit code 3.
 * Never downgraded to a truncated answer: results past the cap would be wrong,
 * not just incomplete. */
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/* Violation of an invariant that is a theorem for valid inputs (a factorization
 * that must exist failed, an inclusion that must hold does not).  Indicates a
 * bug in this library, not in the input. */
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace mk

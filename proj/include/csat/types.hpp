#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csat {

using Int = std::int64_t;

enum class ErrorKind {
    Parse,
    UndeclaredVariable,
    DuplicateDeclaration,
    ArityMismatch,
    KindMismatch,
    EmptyDomain,
    EmptySum,
    NotNormalized,
    Decode,
    Unsupported,
    Overflow,
    Guard,
    Io,
};

struct Error : std::runtime_error {
    ErrorKind kind;
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Bound arithmetic multiplies coefficients by domain bounds; overflow is a
// hard error, never wraparound.
inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, "integer overflow in bound arithmetic");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, "integer overflow in bound arithmetic");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, "integer overflow in bound arithmetic");
    return r;
}

} // namespace csat

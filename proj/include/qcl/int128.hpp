#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcl {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Exact-arithmetic contract: every operation is exact for |values| < 2^127;
// anything that would wrap raises arith_error instead.
struct arith_error : std::runtime_error {
    explicit arith_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad values passed across a module boundary (precondition violations).
struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw arith_error("integer overflow in addition");
    return r;
}

inline i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw arith_error("integer overflow in subtraction");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw arith_error("integer overflow in multiplication");
    return r;
}

inline u128 checked_mul_u(u128 a, u128 b) {
    u128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw arith_error("integer overflow in multiplication");
    return r;
}

inline i128 abs_i128(i128 a) {
    if (a == -(((i128)1) << 126) * 2) throw arith_error("abs of INT128_MIN");
    return a < 0 ? -a : a;
}

std::string to_string(i128 v);
std::string to_string(u128 v);

// floor(sqrt(n)), exact.
u64 isqrt64(u64 n);
u128 isqrt128(u128 n);

// true iff n >= 0 and n is a perfect square
bool is_square(i128 n);

}  // namespace qcl

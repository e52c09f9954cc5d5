#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qcl/int128.hpp"

namespace qcl::arith {

u128 gcd_u128(u128 a, u128 b);

// Nonnegative gcd on signed inputs; gcd(0,0) = 0.
inline u128 gcd(i128 a, i128 b) {
    return gcd_u128((u128)abs_i128(a), (u128)abs_i128(b));
}

// Nonnegative r with r == a (mod m), m > 0.
inline u128 mod_nonneg(i128 a, u128 m) {
    i128 r = a % (i128)m;
    return r < 0 ? (u128)(r + (i128)m) : (u128)r;
}

struct FactorPower {
    u128 prime;
    unsigned exponent;
    bool operator==(const FactorPower&) const = default;
};

struct Factorization {
    u128 n = 1;
    std::vector<FactorPower> factors;  // primes strictly ascending, exponents >= 1

    // product of prime^exponent; must equal n
    u128 recompose() const;
};

const std::vector<std::uint32_t>& small_primes();  // primes up to 10^5

// Deterministic Miller-Rabin: proven for n < 3.317e24 (first 13 prime bases);
// larger inputs use an extended fixed base set.
bool is_prime(u128 n);

// Complete factorization of n >= 1 (trial division + Brent rho).
// `seed` only perturbs the rho search path; the result is input-determined.
Factorization factorize(u128 n, u64 seed = 0);

struct SquarefreeParts {
    u128 squarefree;  // s
    u128 root;        // f, with n = s * f^2
};
SquarefreeParts squarefree_part(u128 n, u64 seed = 0);
SquarefreeParts squarefree_part(const Factorization& f);

// number of distinct prime factors
unsigned omega(u128 n, u64 seed = 0);

// Kronecker symbol (a/n), full extension to all integers.
int kronecker(i128 a, i128 n);

struct Congruence {
    i128 residue;
    u128 modulus;  // > 0
};

struct CrtSolution {
    u128 residue;  // 0 <= residue < modulus
    u128 modulus;  // product of the input moduli
};

// Simultaneous congruences with pairwise coprime moduli.
CrtSolution crt_solve(std::span<const Congruence> congruences);

}  // namespace qcl::arith

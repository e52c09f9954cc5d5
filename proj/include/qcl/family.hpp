#pragma once

#include <optional>
#include <vector>

#include "qcl/arith.hpp"
#include "qcl/int128.hpp"

namespace qcl::family {

// Simultaneous congruences pinning m mod 108*prod(p_i^2) and n mod 324*prod(p_i^2),
// built from m == 19 (mod 108), n == 55 (mod 324), m == 1 + a_i p_i and
// n == 1 + b_i p_i (mod p_i^2), with 3a_i - 2b_i != 0 (mod p_i) for every i.
struct CongruenceSystem {
    unsigned l = 0;  // 0 for the base system (no auxiliary primes)
    std::vector<u64> primes;
    std::vector<i64> a;
    std::vector<i64> b;
    u128 m_residue = 19;
    u128 m_modulus = 108;
    u128 n_residue = 55;
    u128 n_modulus = 324;
};

// l >= 1, exactly l+2 distinct primes >= 5
CongruenceSystem build_system(unsigned l, const std::vector<u64>& primes, const std::vector<i64>& a,
                              const std::vector<i64>& b);

// just the base congruences m == 19 (mod 108), n == 55 (mod 324)
CongruenceSystem base_system();

struct BoxParameters {
    double X = 0;
    double T_lo = 0, T_hi = 0;
    double M_lo = 0, M_hi = 0;
    double N_lo = 0, N_hi = 0;
    bool enforce_t_range = false;
};

// T = X^{1/16}, M = T^{2/3} X^{1/3} / 2, N = T X^{1/2} / 16; each box is (value, 2*value]
BoxParameters asymptotic_boxes(double X);

// verification-mode boxes: m in (0, floor(sqrt(X))], n in (0, floor(X^{3/4})], t free
BoxParameters desk_boxes(double X);

struct SolutionTriple {
    u64 m = 0;
    u64 n = 0;
    u64 t = 0;
    u64 d = 0;
    arith::Factorization radicand_factorization;  // of m^3 - n^2 = 27 t^2 d

    bool operator==(const SolutionTriple& o) const { return m == o.m && n == o.n && t == o.t && d == o.d; }
};

// Applies the per-pair definition to a single (m, n) assumed to lie in the
// system's residue classes: positivity, 27 | (m^3 - n^2) (asserted), the
// square-free split, the gcd side conditions, d <= d_cap, d > 1, and the
// t-box when enforced. Returns nothing when any filter rejects.
std::optional<SolutionTriple> classify_pair(u64 m, u64 n, const BoxParameters& boxes, u128 d_cap, u64 seed = 0);

// Every triple with m, n in the residue classes inside the boxes and d <= d_cap,
// sorted by (d, m, n, t). OpenMP-parallel over m; result independent of thread count.
std::vector<SolutionTriple> enumerate_triples(const CongruenceSystem& system, const BoxParameters& boxes,
                                              u128 d_cap, u64 seed = 0);

// serial reference, kept for testing and benchmarks
std::vector<SolutionTriple> enumerate_triples_serial(const CongruenceSystem& system, const BoxParameters& boxes,
                                                     u128 d_cap, u64 seed = 0);

// true iff every system prime divides d exactly once in m^3 - n^2
// (p_i | d and p_i^2 does not divide m^3 - n^2); false indicates a bug
bool verify_prime_divisibility(const SolutionTriple& triple, const CongruenceSystem& system);

}  // namespace qcl::family

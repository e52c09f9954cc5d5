#include "qcl/cubic.hpp"

#include <vector>

namespace qcl::cubic {

i128 discriminant(const Cubic& f) {
    i128 p = f.p, q = f.q;
    i128 p3 = checked_mul(checked_mul(p, p), p);
    i128 q2 = checked_mul(q, q);
    return checked_sub(checked_mul(-4, p3), checked_mul(27, q2));
}

namespace {

// all positive divisors of n with divisor^2 <= cap
std::vector<u128> divisors_up_to(u128 n, u128 cap, u64 seed) {
    arith::Factorization f = arith::factorize(n, seed);
    u128 dmax = isqrt128(cap);
    std::vector<u128> divs{1};
    for (const auto& fp : f.factors) {
        std::size_t count = divs.size();
        u128 pe = 1;
        for (unsigned e = 1; e <= fp.exponent; ++e) {
            if (pe > dmax / fp.prime) break;
            pe *= fp.prime;
            for (std::size_t i = 0; i < count; ++i) {
                if (divs[i] > dmax / pe) continue;
                divs.push_back(divs[i] * pe);
            }
        }
    }
    return divs;
}

}  // namespace

bool is_irreducible(const Cubic& f, u64 seed) {
    if (f.q == 0) return false;  // root at 0
    u128 aq = f.q < 0 ? (u128)(-(i128)f.q) : (u128)f.q;
    // any integer root r has r | q and r^2 <= |p| + |q|
    u128 bound = (u128)(f.p < 0 ? -(i128)f.p : (i128)f.p) + aq;
    for (u128 d : divisors_up_to(aq, bound, seed)) {
        for (int s = 0; s < 2; ++s) {
            i128 r = s ? -(i128)d : (i128)d;
            i128 val = r * r * r + (i128)f.p * r + f.q;  // |r|^3 <= bound^{3/2} < 2^96, exact
            if (val == 0) return false;
        }
    }
    return true;
}

namespace {

inline i64 mod_pos(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

KMOutcome check_kishi_miyake(i64 u, i64 w) {
    KMOutcome out;
    KMCondition cond;
    if (mod_pos(w, 3) != 0) {
        cond = KMCondition::I;
    } else {
        i128 uw = checked_mul((i128)u, (i128)w);
        i64 uw9 = (i64)(((uw % 9) + 9) % 9);
        i64 diff9 = mod_pos(u - w, 9);
        if (uw9 != 3) {
            if (diff9 != 1 && diff9 != 8) {
                out.rejection = "3 | w, uw != 3 (mod 9), but u != w +- 1 (mod 9)";
                return out;
            }
            cond = KMCondition::II;
        } else {
            i64 diff27 = mod_pos(u - w, 27);
            if (diff27 != 1 && diff27 != 26) {
                out.rejection = "3 | w, uw == 3 (mod 9), but u != w +- 1 (mod 27)";
                return out;
            }
            cond = KMCondition::III;
        }
    }
    if (arith::gcd(u, w) != 1) {
        out.rejection = "gcd(u, w) != 1";
        return out;
    }
    i128 w3 = checked_mul(checked_mul((i128)w, (i128)w), (i128)w);
    i128 d = checked_sub(checked_mul(checked_mul(4, (i128)u), w3), checked_mul(27, checked_mul((i128)u, (i128)u)));
    if (is_square(d)) {
        out.rejection = "d = 4uw^3 - 27u^2 is a perfect square";
        return out;
    }
    out.accepted = true;
    out.pair = {u, w, cond, d};
    return out;
}

void validate(const CongruencePair& pair) {
    if (pair.m == 0 || pair.m % 18 != 1)
        throw domain_error("CongruencePair: m must be positive with m == 1 (mod 18), got " + std::to_string(pair.m));
    if (pair.n == 0 || pair.n % 54 != 1)
        throw domain_error("CongruencePair: n must be positive with n == 1 (mod 54), got " + std::to_string(pair.n));
    if (arith::gcd((i128)pair.m, (i128)pair.n) != 1)
        throw domain_error("CongruencePair: gcd(m, n) must be 1");
}

Cubic pair_cubic(const CongruencePair& pair) {
    validate(pair);
    if (pair.m > (u64)INT64_MAX / 3 || pair.n > (u64)INT64_MAX / 2)
        throw arith_error("pair_cubic: coefficients exceed 64-bit range");
    return Cubic{-(i64)(3 * pair.m), -(i64)(2 * pair.n)};
}

i128 target_radicand(const CongruencePair& pair) {
    validate(pair);
    i128 m = (i128)pair.m, n = (i128)pair.n;
    i128 m3 = checked_mul(checked_mul(m, m), m);
    i128 n2 = checked_mul(n, n);
    return checked_mul(3, checked_sub(m3, n2));
}

namespace {

u64 census_row(i64 p, i64 N) {
    u64 adm = 0;
    for (i64 q = -N; q <= N; ++q) {
        Cubic f{p, q};
        if (is_irreducible(f) && !is_square(discriminant(f))) ++adm;
    }
    return adm;
}

}  // namespace

CensusResult irreducible_census(u64 M, u64 N) {
    if (M < 1 || N < 1) throw domain_error("irreducible_census: M and N must be >= 1");
    i64 Mi = (i64)M, Ni = (i64)N;
    u64 admissible = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : admissible)
    for (i64 p = -Mi; p <= Mi; ++p) admissible += census_row(p, Ni);
    return {(2 * M + 1) * (2 * N + 1), admissible};
}

CensusResult irreducible_census_serial(u64 M, u64 N) {
    if (M < 1 || N < 1) throw domain_error("irreducible_census: M and N must be >= 1");
    u64 admissible = 0;
    for (i64 p = -(i64)M; p <= (i64)M; ++p) admissible += census_row(p, (i64)N);
    return {(2 * M + 1) * (2 * N + 1), admissible};
}

}  // namespace qcl::cubic

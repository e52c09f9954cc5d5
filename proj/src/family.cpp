#include "qcl/family.hpp"

#include <algorithm>
#include <cmath>

namespace qcl::family {

namespace {

void check_eq2(std::size_t i, i64 a_i, i64 b_i, u64 p) {
    i128 v = (i128)3 * a_i - (i128)2 * b_i;
    if (arith::mod_nonneg(v, p) == 0)
        throw domain_error("3*a_i - 2*b_i == 0 (mod p_i) at i = " + std::to_string(i) + " (p = " +
                           std::to_string(p) + "): the prime would not divide the square-free part");
}

}  // namespace

CongruenceSystem build_system(unsigned l, const std::vector<u64>& primes, const std::vector<i64>& a,
                              const std::vector<i64>& b) {
    if (l < 1) throw domain_error("build_system: l must be >= 1");
    if (primes.size() != (std::size_t)l + 2)
        throw domain_error("build_system: expected " + std::to_string(l + 2) + " primes, got " +
                           std::to_string(primes.size()));
    if (a.size() != primes.size() || b.size() != primes.size())
        throw domain_error("build_system: a and b must have one entry per prime");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] < 5) throw domain_error("build_system: prime " + std::to_string(primes[i]) + " is < 5");
        if (!arith::is_prime(primes[i]))
            throw domain_error("build_system: " + std::to_string(primes[i]) + " is not prime");
        for (std::size_t j = i + 1; j < primes.size(); ++j)
            if (primes[i] == primes[j])
                throw domain_error("build_system: duplicate prime " + std::to_string(primes[i]));
    }
    for (std::size_t i = 0; i < primes.size(); ++i) check_eq2(i, a[i], b[i], primes[i]);

    std::vector<arith::Congruence> mc{{19, 108}};
    std::vector<arith::Congruence> nc{{55, 324}};
    for (std::size_t i = 0; i < primes.size(); ++i) {
        u128 p2 = (u128)primes[i] * primes[i];
        mc.push_back({(i128)1 + (i128)a[i] * primes[i], p2});
        nc.push_back({(i128)1 + (i128)b[i] * primes[i], p2});
    }
    arith::CrtSolution ms = arith::crt_solve(mc);
    arith::CrtSolution ns = arith::crt_solve(nc);

    CongruenceSystem sys;
    sys.l = l;
    sys.primes = primes;
    sys.a = a;
    sys.b = b;
    sys.m_residue = ms.residue;
    sys.m_modulus = ms.modulus;
    sys.n_residue = ns.residue;
    sys.n_modulus = ns.modulus;
    return sys;
}

CongruenceSystem base_system() { return CongruenceSystem{}; }

BoxParameters asymptotic_boxes(double X) {
    if (!(X > 1)) throw domain_error("asymptotic_boxes: X must be > 1");
    BoxParameters box;
    box.X = X;
    box.T_lo = std::pow(X, 1.0 / 16.0);
    box.T_hi = 2 * box.T_lo;
    box.M_lo = std::pow(box.T_lo, 2.0 / 3.0) * std::cbrt(X) / 2.0;
    box.M_hi = 2 * box.M_lo;
    box.N_lo = box.T_lo * std::sqrt(X) / 16.0;
    box.N_hi = 2 * box.N_lo;
    box.enforce_t_range = true;
    return box;
}

BoxParameters desk_boxes(double X) {
    if (!(X > 1)) throw domain_error("desk_boxes: X must be > 1");
    BoxParameters box;
    box.X = X;
    box.T_lo = 0;
    box.T_hi = 0;
    box.M_lo = 0;
    box.M_hi = (double)isqrt64((u64)X);
    box.N_lo = 0;
    box.N_hi = std::floor(std::pow(X, 0.75));
    box.enforce_t_range = false;
    return box;
}

namespace {

// largest m value whose cube stays inside the 128-bit exactness contract
constexpr u64 kCubeCap = 5541191377756ull;  // floor(cbrt(2^127 - 1))

struct IntegerBoxes {
    u64 m_lo, m_hi;  // (m_lo, m_hi]
    u64 n_lo, n_hi;
    u64 t_lo, t_hi;
    bool enforce_t;
};

IntegerBoxes integer_boxes(const BoxParameters& boxes) {
    // saturate at u64: the m^3 overflow guard and the n^2 < m^3 clamp bind first
    auto to_u64 = [](double v) -> u64 {
        if (v <= 0) return 0;
        if (v >= 18446744073709551615.0) return UINT64_MAX;
        return (u64)std::floor(v);
    };
    IntegerBoxes ib{};
    ib.m_lo = to_u64(boxes.M_lo);
    ib.m_hi = to_u64(boxes.M_hi);
    ib.n_lo = to_u64(boxes.N_lo);
    ib.n_hi = to_u64(boxes.N_hi);
    ib.t_lo = to_u64(boxes.T_lo);
    ib.t_hi = to_u64(boxes.T_hi);
    ib.enforce_t = boxes.enforce_t_range;
    return ib;
}

std::optional<SolutionTriple> classify_pair_int(u64 m, u64 n, const IntegerBoxes& ib, u128 d_cap, u64 seed) {
    if (m > kCubeCap) throw arith_error("enumerate_triples: m^3 exceeds the exact-arithmetic contract");
    u128 m3 = (u128)m * m * m;
    u128 n2 = (u128)n * n;
    if (n2 >= m3) return std::nullopt;  // need a positive radicand
    u128 k = m3 - n2;
    if (k % 27 != 0)
        throw arith_error("enumerate_triples: 27 must divide m^3 - n^2 for class members (m = " +
                          std::to_string(m) + ", n = " + std::to_string(n) + ")");
    if (arith::gcd((i128)m, (i128)n) != 1) return std::nullopt;
    u128 v = k / 27;
    // gcd(t, 6) = 1 pre-checks: t picks up a 2 (resp. 3) exactly when 4 | v (resp. 9 | v)
    if (v % 4 == 0) return std::nullopt;
    if (v % 9 == 0) return std::nullopt;
    arith::Factorization vf = arith::factorize(v, seed);
    auto sf = arith::squarefree_part(vf);
    u128 d = sf.squarefree, t = sf.root;
    if (d <= 1 || d > d_cap) return std::nullopt;
    if (t % 2 == 0 || t % 3 == 0) return std::nullopt;  // unreachable after the pre-checks
    if (arith::gcd_u128(m, t) != 1) return std::nullopt;
    if (ib.enforce_t && (t <= ib.t_lo || t > ib.t_hi)) return std::nullopt;
    if (d > UINT64_MAX || t > UINT64_MAX) throw arith_error("enumerate_triples: triple field exceeds 64 bits");

    SolutionTriple triple;
    triple.m = m;
    triple.n = n;
    triple.t = (u64)t;
    triple.d = (u64)d;
    // factorization of m^3 - n^2 = 27 v: bump the exponent of 3 by three
    triple.radicand_factorization.n = k;
    bool seen3 = false;
    for (const auto& fp : vf.factors) {
        if (fp.prime == 3) {
            triple.radicand_factorization.factors.push_back({3, fp.exponent + 3});
            seen3 = true;
        } else {
            if (fp.prime > 3 && !seen3) {
                triple.radicand_factorization.factors.push_back({3, 3});
                seen3 = true;
            }
            triple.radicand_factorization.factors.push_back(fp);
        }
    }
    if (!seen3) triple.radicand_factorization.factors.push_back({3, 3});
    return triple;
}

std::vector<u64> class_members(u128 residue, u128 modulus, u64 lo, u64 hi) {
    // members of the class in (lo, hi]
    std::vector<u64> out;
    if (hi <= lo) return out;
    u128 first = residue % modulus;
    if (first == 0) first = modulus;
    if (first <= lo) first += ((u128)lo - first) / modulus * modulus + modulus;
    for (u128 v = first; v <= hi; v += modulus) out.push_back((u64)v);
    return out;
}

void sort_triples(std::vector<SolutionTriple>& ts) {
    std::sort(ts.begin(), ts.end(), [](const SolutionTriple& x, const SolutionTriple& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.m != y.m) return x.m < y.m;
        if (x.n != y.n) return x.n < y.n;
        return x.t < y.t;
    });
}

}  // namespace

std::optional<SolutionTriple> classify_pair(u64 m, u64 n, const BoxParameters& boxes, u128 d_cap, u64 seed) {
    return classify_pair_int(m, n, integer_boxes(boxes), d_cap, seed);
}

std::vector<SolutionTriple> enumerate_triples(const CongruenceSystem& system, const BoxParameters& boxes,
                                              u128 d_cap, u64 seed) {
    IntegerBoxes ib = integer_boxes(boxes);
    std::vector<u64> ms = class_members(system.m_residue, system.m_modulus, ib.m_lo, ib.m_hi);
    std::vector<SolutionTriple> all;
#pragma omp parallel
    {
        std::vector<SolutionTriple> local;
#pragma omp for schedule(dynamic) nowait
        for (std::int64_t i = 0; i < (std::int64_t)ms.size(); ++i) {
            u64 m = ms[(std::size_t)i];
            u128 m3 = (u128)m * m * m;
            u64 n_hi = ib.n_hi;
            if ((u128)n_hi * n_hi >= m3) n_hi = (u64)isqrt128(m3 - 1);
            for (u64 n : class_members(system.n_residue, system.n_modulus, ib.n_lo, n_hi)) {
                auto triple = classify_pair_int(m, n, ib, d_cap, seed);
                if (triple) local.push_back(std::move(*triple));
            }
        }
#pragma omp critical
        all.insert(all.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
    }
    sort_triples(all);
    return all;
}

std::vector<SolutionTriple> enumerate_triples_serial(const CongruenceSystem& system, const BoxParameters& boxes,
                                                     u128 d_cap, u64 seed) {
    IntegerBoxes ib = integer_boxes(boxes);
    std::vector<SolutionTriple> all;
    for (u64 m : class_members(system.m_residue, system.m_modulus, ib.m_lo, ib.m_hi)) {
        u128 m3 = (u128)m * m * m;
        u64 n_hi = ib.n_hi;
        if ((u128)n_hi * n_hi >= m3) n_hi = (u64)isqrt128(m3 - 1);
        for (u64 n : class_members(system.n_residue, system.n_modulus, ib.n_lo, n_hi)) {
            auto triple = classify_pair_int(m, n, ib, d_cap, seed);
            if (triple) all.push_back(std::move(*triple));
        }
    }
    sort_triples(all);
    return all;
}

bool verify_prime_divisibility(const SolutionTriple& triple, const CongruenceSystem& system) {
    for (u64 p : system.primes) {
        if (triple.d % p != 0) return false;
        unsigned exp = 0;
        for (const auto& fp : triple.radicand_factorization.factors)
            if (fp.prime == p) exp = fp.exponent;
        if (exp != 1) return false;  // the residue construction forces exactly one factor of p
    }
    return true;
}

}  // namespace qcl::family

#include "qcl/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qcl {

std::string to_string(u128 v) {
    if (v == 0) return "0";
    char buf[48];
    int i = 48;
    while (v > 0) {
        buf[--i] = char('0' + (unsigned)(v % 10));
        v /= 10;
    }
    return std::string(buf + i, buf + 48);
}

std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string((u128)(-(v + 1)) + 1);
    return to_string((u128)v);
}

u64 isqrt64(u64 n) {
    if (n == 0) return 0;
    u64 x = (u64)std::sqrt((double)n);
    // sqrt(double) is within 1 ulp; fix up exactly
    while (x > 0 && (u128)x * x > n) --x;
    while ((u128)(x + 1) * (x + 1) <= n) ++x;
    return x;
}

u128 isqrt128(u128 n) {
    if (n <= (u128)UINT64_MAX) return isqrt64((u64)n);
    // initial guess from the top 64 bits
    int shift = 0;
    u128 t = n;
    while (t > (u128)UINT64_MAX) {
        t >>= 2;
        shift += 1;
    }
    u128 x = (u128)isqrt64((u64)t) << shift;
    // Newton correction; converges in a couple of steps from this guess
    for (int i = 0; i < 6; ++i) {
        u128 y = (x + n / x) >> 1;
        if (y >= x) break;
        x = y;
    }
    while (x > 0 && x > n / x) --x;
    while ((x + 1) <= n / (x + 1)) ++x;
    return x;
}

bool is_square(i128 n) {
    if (n < 0) return false;
    u128 r = isqrt128((u128)n);
    return r * r == (u128)n;
}

}  // namespace qcl

namespace qcl::arith {

u128 gcd_u128(u128 a, u128 b) {
    if (a == 0) return b;
    if (b == 0) return a;
    auto ctz = [](u128 x) -> int {
        u64 lo = (u64)x;
        if (lo) return __builtin_ctzll(lo);
        return 64 + __builtin_ctzll((u64)(x >> 64));
    };
    int k = std::min(ctz(a), ctz(b));
    a >>= ctz(a);
    while (b != 0) {
        b >>= ctz(b);
        if (a > b) std::swap(a, b);
        b -= a;
    }
    return a << k;
}

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 100000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint32_t> ps;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            ps.push_back(i);
            for (std::uint64_t j = (std::uint64_t)i * i; j <= limit; j += i) composite[j] = true;
        }
        return ps;
    }();
    return primes;
}

namespace {

// n mod p for 32-bit p without a 128-bit division
inline u64 mod_u128_by_u32(u128 n, std::uint32_t p) {
    u64 hi = (u64)(n >> 64), lo = (u64)n;
    if (hi == 0) return lo % p;
    u64 r64 = ((u64)UINT64_MAX % p + 1) % p;  // 2^64 mod p
    return ((u128)(hi % p) * r64 + lo % p) % p;
}

// ---- Montgomery arithmetic modulo an odd u128 ----
struct Mont128 {
    u128 n, ninv, r2, one;

    explicit Mont128(u128 modulus) : n(modulus) {
        // ninv = -n^{-1} mod 2^128, by Newton on the 2-adic inverse
        u128 inv = n;  // exact mod 2^3 for odd n; each step doubles the precision
        for (int i = 0; i < 7; ++i) inv *= 2 - n * inv;
        ninv = (u128)0 - inv;
        one = ((u128)0 - n) % n;  // 2^128 mod n
        // r2 = 2^256 mod n by 128 modular doublings
        u128 x = one;
        for (int i = 0; i < 128; ++i) x = add(x, x);
        r2 = x;
    }

    u128 add(u128 a, u128 b) const {
        u128 s = a + b;
        if (s >= n || s < a) s -= n;
        return s;
    }
    u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a + (n - b); }

    static void mul_full(u128 a, u128 b, u128& lo, u128& hi) {
        u64 a0 = (u64)a, a1 = (u64)(a >> 64), b0 = (u64)b, b1 = (u64)(b >> 64);
        u128 p00 = (u128)a0 * b0;
        u128 p01 = (u128)a0 * b1;
        u128 p10 = (u128)a1 * b0;
        u128 p11 = (u128)a1 * b1;
        u128 mid = p01 + p10;
        u128 mid_carry = (mid < p01) ? ((u128)1 << 64) : 0;
        lo = p00 + (mid << 64);
        u128 lo_carry = (lo < p00) ? 1 : 0;
        hi = p11 + (mid >> 64) + mid_carry + lo_carry;
    }

    u128 redc(u128 lo, u128 hi) const {
        u128 m = lo * ninv;
        u128 mn_lo, mn_hi;
        mul_full(m, n, mn_lo, mn_hi);
        u128 s = lo + mn_lo;
        u128 carry = (s < lo) ? 1 : 0;
        u128 t = hi + mn_hi + carry;
        if (t >= n) t -= n;
        return t;
    }

    u128 mul(u128 a, u128 b) const {
        u128 lo, hi;
        mul_full(a, b, lo, hi);
        return redc(lo, hi);
    }

    u128 to_mont(u128 a) const { return mul(a % n, r2); }
    u128 from_mont(u128 a) const { return redc(a, 0); }
};

u128 mulmod(u128 a, u128 b, u128 n) {
    if (n <= UINT64_MAX) return (u128)((a % n) * (b % n)) % n;
    u128 lo, hi;
    Mont128::mul_full(a % n, b % n, lo, hi);
    // fall back to shift-subtract reduction of the 256-bit product
    // (only hit outside hot paths; hot paths use Mont128 directly)
    u128 rem = 0;
    for (int i = 255; i >= 0; --i) {
        bool top = (rem >> 127) & 1;
        rem <<= 1;
        u128 bit = i >= 128 ? (hi >> (i - 128)) & 1 : (lo >> i) & 1;
        rem |= bit;
        if (top || rem >= n) rem -= n;
    }
    return rem;
}

u128 powmod_small(u128 base, u128 exp, u128 n) {
    u128 r = 1 % n;
    base %= n;
    while (exp > 0) {
        if (exp & 1) r = (r * base) % n;
        base = (base * base) % n;
        exp >>= 1;
    }
    return r;
}

bool miller_rabin_u64(u64 n, const u128* bases, int nbases) {
    u64 d = n - 1;
    int s = __builtin_ctzll(d);
    d >>= s;
    for (int i = 0; i < nbases; ++i) {
        u64 a = (u64)(bases[i] % n);
        if (a == 0) continue;
        u128 x = powmod_small(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = (x * x) % n;
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

bool miller_rabin_u128(u128 n, const u128* bases, int nbases) {
    Mont128 M(n);
    u128 d = n - 1;
    int s = 0;
    while (((d >> s) & 1) == 0) ++s;
    d >>= s;
    u128 one_m = M.one;
    u128 neg_one_m = M.sub(0, one_m);
    for (int i = 0; i < nbases; ++i) {
        u128 a = bases[i] % n;
        if (a == 0) continue;
        u128 x = M.to_mont(a);
        // x^d in Montgomery form
        u128 r = one_m;
        u128 b = x;
        u128 e = d;
        while (e > 0) {
            if (e & 1) r = M.mul(r, b);
            b = M.mul(b, b);
            e >>= 1;
        }
        if (r == one_m || r == neg_one_m) continue;
        bool witness = true;
        for (int j = 1; j < s; ++j) {
            r = M.mul(r, r);
            if (r == neg_one_m) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

constexpr std::array<u128, 13> kBases13 = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr std::array<u128, 21> kBasesExt = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                            37, 41, 43, 47, 53, 59, 61, 67, 71, 73};

// splitmix64 step, used to derive rho parameters deterministically
u64 splitmix(u64& state) {
    u64 z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

u64 brent_rho_u64(u64 n, u64 seed) {
    // n odd composite, not a prime power of a small prime
    u64 state = seed ^ (n * 0x9e3779b97f4a7c15ull);
    while (true) {
        u64 y = splitmix(state) % (n - 2) + 1;
        u64 c = splitmix(state) % (n - 1) + 1;
        u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto f = [&](u64 v) { return (u64)(((u128)v * v + c) % n); };
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = (u64)((u128)q * (x > y ? x - y : y - x) % n);
                }
                g = (u64)gcd_u128(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            do {
                ys = f(ys);
                g = (u64)gcd_u128(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

u128 brent_rho_u128(u128 n, u64 seed) {
    Mont128 M(n);
    u64 state = seed ^ ((u64)n * 0x9e3779b97f4a7c15ull) ^ (u64)(n >> 64);
    while (true) {
        u128 y = splitmix(state) % (n - 2) + 1;
        u128 c = splitmix(state) % (n - 1) + 1;
        u128 m = 128, g = 1, r = 1, q = M.one, x = 0, ys = 0;
        auto f = [&](u128 v) { return M.add(M.mul(v, v), c); };
        while (g == 1) {
            x = y;
            for (u128 i = 0; i < r; ++i) y = f(y);
            u128 k = 0;
            while (k < r && g == 1) {
                ys = y;
                u128 lim = std::min(m, r - k);
                for (u128 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = M.mul(q, M.sub(x, y));
                }
                g = gcd_u128(M.from_mont(q), n);
                if (g == 0) g = n;  // q reached 0 in Montgomery form
                k += m;
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            do {
                ys = f(ys);
                u128 diff = M.from_mont(M.sub(x, ys));
                g = gcd_u128(diff, n);
                if (g == 0) g = n;
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_rec(u128 n, u64 seed, std::vector<u128>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    // perfect powers settle faster via integer sqrt
    u128 r = isqrt128(n);
    if (r * r == n) {
        factor_rec(r, seed, out);
        factor_rec(r, seed, out);
        return;
    }
    u128 d = n <= UINT64_MAX ? brent_rho_u64((u64)n, seed) : brent_rho_u128(n, seed);
    factor_rec(d, seed + 1, out);
    factor_rec(n / d, seed + 1, out);
}

}  // namespace

bool is_prime(u128 n) {
    if (n < 2) return false;
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // 3317044064679887385961981: below this the first 13 prime bases are a proven witness set
    const u128 proven = (u128)3317044 * 1000000000000000000ull + 64679887385961981ull;
    if (n <= UINT64_MAX) return miller_rabin_u64((u64)n, kBases13.data(), (int)kBases13.size());
    if (n < proven) return miller_rabin_u128(n, kBases13.data(), (int)kBases13.size());
    return miller_rabin_u128(n, kBasesExt.data(), (int)kBasesExt.size());
}

u128 Factorization::recompose() const {
    u128 prod = 1;
    for (const auto& fp : factors)
        for (unsigned e = 0; e < fp.exponent; ++e) prod = checked_mul_u(prod, fp.prime);
    return prod;
}

Factorization factorize(u128 n, u64 seed) {
    if (n == 0) throw domain_error("factorize: n must be >= 1");
    Factorization result;
    result.n = n;
    u128 m = n;
    for (std::uint32_t p : small_primes()) {
        if ((u128)p * p > m) break;
        u64 rem = m > UINT64_MAX ? mod_u128_by_u32(m, p) : (u64)m % p;
        if (rem != 0) continue;
        unsigned e = 0;
        while (true) {
            u64 r2 = m > UINT64_MAX ? mod_u128_by_u32(m, p) : (u64)m % p;
            if (r2 != 0) break;
            m /= p;
            ++e;
        }
        result.factors.push_back({p, e});
    }
    if (m > 1) {
        if (is_prime(m)) {
            result.factors.push_back({m, 1});
        } else {
            std::vector<u128> primes;
            factor_rec(m, seed, primes);
            std::sort(primes.begin(), primes.end());
            for (std::size_t i = 0; i < primes.size();) {
                std::size_t j = i;
                while (j < primes.size() && primes[j] == primes[i]) ++j;
                result.factors.push_back({primes[i], (unsigned)(j - i)});
                i = j;
            }
        }
    }
    std::sort(result.factors.begin(), result.factors.end(),
              [](const FactorPower& x, const FactorPower& y) { return x.prime < y.prime; });
    return result;
}

SquarefreeParts squarefree_part(const Factorization& f) {
    u128 s = 1, root = 1;
    for (const auto& fp : f.factors) {
        for (unsigned e = 0; e < fp.exponent / 2; ++e) root = checked_mul_u(root, fp.prime);
        if (fp.exponent % 2) s = checked_mul_u(s, fp.prime);
    }
    return {s, root};
}

SquarefreeParts squarefree_part(u128 n, u64 seed) {
    if (n == 0) throw domain_error("squarefree_part: n must be >= 1");
    return squarefree_part(factorize(n, seed));
}

unsigned omega(u128 n, u64 seed) {
    if (n == 0) throw domain_error("omega: n must be >= 1");
    return (unsigned)factorize(n, seed).factors.size();
}

int kronecker(i128 a, i128 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    // factor out 2s of n: (a/2) = 0 if a even, else chi_8(a)
    int t = sign;
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        i128 am8 = ((a % 8) + 8) % 8;
        if (am8 == 3 || am8 == 5) t = -t;
    }
    // now n odd > 0; use reciprocity on the Jacobi part
    a %= n;
    if (a < 0) {
        a += n;
        if (n % 4 == 3) t = -t;  // (-1/n) for n odd
    }
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i128 nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

namespace {

// extended gcd on nonnegative u128, returning x with a*x == g (mod b0)
void egcd(i128 a, i128 b, i128& g, i128& x, i128& y) {
    if (b == 0) {
        g = a;
        x = 1;
        y = 0;
        return;
    }
    i128 g1, x1, y1;
    egcd(b, a % b, g1, x1, y1);
    g = g1;
    x = y1;
    y = x1 - (a / b) * y1;
}

}  // namespace

CrtSolution crt_solve(std::span<const Congruence> congruences) {
    if (congruences.empty()) throw domain_error("crt_solve: empty congruence list");
    for (std::size_t i = 0; i < congruences.size(); ++i) {
        if (congruences[i].modulus == 0) throw domain_error("crt_solve: zero modulus at position " + std::to_string(i));
        if (congruences[i].modulus >= (u128)1 << 127)
            throw arith_error("crt_solve: modulus at position " + std::to_string(i) + " exceeds the exact-arithmetic contract");
        for (std::size_t j = i + 1; j < congruences.size(); ++j) {
            u128 g = gcd_u128(congruences[i].modulus, congruences[j].modulus);
            if (g != 1)
                throw domain_error("crt_solve: moduli at positions " + std::to_string(i) + " and " +
                                   std::to_string(j) + " share factor " + qcl::to_string(g));
        }
    }
    u128 mod = congruences[0].modulus;
    u128 res = mod_nonneg(congruences[0].residue, mod);
    for (std::size_t i = 1; i < congruences.size(); ++i) {
        u128 m2 = congruences[i].modulus;
        u128 r2 = mod_nonneg(congruences[i].residue, m2);
        // res + mod * k == r2 (mod m2)  =>  k == (r2 - res) * mod^{-1} (mod m2)
        i128 g, x, y;
        egcd((i128)(mod % m2), (i128)m2, g, x, y);
        u128 inv = mod_nonneg(x, m2);
        u128 diff = (r2 + m2 - res % m2) % m2;
        u128 k = mulmod(diff, inv, m2);
        u128 newmod = checked_mul_u(mod, m2);
        if (newmod >= (u128)1 << 127) throw arith_error("crt_solve: combined modulus exceeds 2^127");
        u128 newres = res + mod * k;  // < mod * m2 = newmod, no overflow past the check above
        res = newres;
        mod = newmod;
    }
    return {res, mod};
}

}  // namespace qcl::arith

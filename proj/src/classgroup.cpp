#include "qcl/classgroup.hpp"

#include <algorithm>
#include <cmath>

#include "qcl/arith.hpp"

namespace qcl::classgroup {

u64 fundamental_discriminant(u64 d) {
    if (d <= 1) throw domain_error("fundamental_discriminant: d must be > 1, got " + std::to_string(d));
    if (d >= (u64)1 << 62) throw arith_error("fundamental_discriminant: 4d exceeds 64 bits");
    auto sf = arith::squarefree_part(d);
    if (sf.root != 1) throw domain_error("fundamental_discriminant: d = " + std::to_string(d) + " is not square-free");
    return d % 4 == 1 ? d : 4 * d;
}

void require_fundamental(u64 D) {
    if (D <= 1 || is_square((i128)D)) throw domain_error("discriminant must be positive and non-square");
    if (D % 4 == 1) {
        if (arith::squarefree_part(D).root != 1)
            throw domain_error("discriminant " + std::to_string(D) + " is not fundamental");
    } else if (D % 4 == 0) {
        u64 m = D / 4;
        if (m % 4 == 1 || arith::squarefree_part(m).root != 1)
            throw domain_error("discriminant " + std::to_string(D) + " is not fundamental");
    } else {
        throw domain_error("discriminant must be 0 or 1 mod 4, got " + std::to_string(D));
    }
}

std::vector<IndefiniteForm> reduced_forms(u64 D) {
    u64 s = isqrt64(D);
    std::vector<IndefiniteForm> forms;
    for (u64 b = (D % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        u64 num = D - b * b;
        if (num == 0) continue;  // cannot happen, D non-square
        if (num % 4 != 0) throw arith_error("reduced_forms: parity invariant broken");
        u64 K = num / 4;
        for (u64 a = 1; a * a <= K; ++a) {
            if (K % a != 0) continue;
            u64 pair[2] = {a, K / a};
            for (int i = 0; i < (pair[0] == pair[1] ? 1 : 2); ++i) {
                u64 aa = pair[i];
                // sqrt(D) - b < 2|a| < sqrt(D) + b reduces to the integer window
                // s - b + 1 <= 2|a| <= s + b, since sqrt(D) is irrational
                if (2 * aa < s - b + 1 || 2 * aa > s + b) continue;
                i64 c = -(i64)(K / aa);
                forms.push_back({(i64)aa, (i64)b, c});
                forms.push_back({-(i64)aa, (i64)b, -c});
            }
        }
    }
    std::sort(forms.begin(), forms.end());
    return forms;
}

IndefiniteForm rho(const IndefiniteForm& f, u64 D) {
    u64 s = isqrt64(D);
    i64 ac = f.c < 0 ? -f.c : f.c;
    // unique b' == -b (mod 2|c|) with sqrt(D) - 2|c| < b' < sqrt(D)
    i64 m = 2 * ac;
    i64 bp = (i64)s - (i64)(((i128)s + f.b) % m + m) % m;
    i128 num = (i128)bp * bp - (i128)D;
    i128 cp = num / ((i128)4 * f.c);
    if (cp * (i128)4 * f.c != num) throw arith_error("rho: non-integral successor");
    return {f.c, bp, (i64)cp};
}

u64 narrow_class_number(u64 D) {
    require_fundamental(D);
    std::vector<IndefiniteForm> forms = reduced_forms(D);
    std::vector<bool> visited(forms.size(), false);
    auto index_of = [&](const IndefiniteForm& f) -> std::size_t {
        auto it = std::lower_bound(forms.begin(), forms.end(), f);
        if (it == forms.end() || !(*it == f)) throw arith_error("rho stepped outside the reduced set");
        return (std::size_t)(it - forms.begin());
    };
    u64 cycles = 0;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (visited[i]) continue;
        ++cycles;
        std::size_t j = i;
        do {
            visited[j] = true;
            j = index_of(rho(forms[j], D));
        } while (j != i);
    }
    return cycles;
}

FundamentalUnit fundamentalunit_impl(u64 D) {
    u64 s = isqrt64(D);
    // alpha = (P0 + sqrt(D))/2 with P0 the largest integer < sqrt(D), P0 == D (mod 2):
    // reduced, so the expansion is purely periodic and one period gives the unit
    i64 P0 = (i64)(((s ^ D) & 1) ? s - 1 : s);
    i64 P = P0, Q = 2;
    double sqrtD = std::sqrt((double)D);
    bool fits = true;
    i128 q_prev = 1, q_curr = 0;  // q_{-2}, q_{-1}
    double reg = 0.0;
    u64 r = 0;
    const u64 cap = 400 * s + 100000;
    while (true) {
        i64 a = (i64)((P + (i64)s) / Q);
        reg += std::log(((double)P + sqrtD) / (double)Q);
        if (fits) {
            i128 q_next;
            if (__builtin_mul_overflow((i128)a, q_curr, &q_next) ||
                __builtin_add_overflow(q_next, q_prev, &q_next)) {
                fits = false;
            } else {
                q_prev = q_curr;
                q_curr = q_next;
            }
        }
        i64 Pn = a * Q - P;
        i128 qnum = (i128)D - (i128)Pn * Pn;
        if (qnum % Q != 0) throw arith_error("fundamental_unit: Q | D - P^2 invariant broken");
        P = Pn;
        Q = (i64)(qnum / Q);
        ++r;
        if (P == P0 && Q == 2) break;
        if (r > cap) throw arith_error("fundamental_unit: period exceeded iteration cap");
    }
    FundamentalUnit unit;
    unit.norm = (r % 2 == 0) ? 1 : -1;
    unit.regulator = reg;
    unit.period = r;
    if (fits) {
        // epsilon = q_{r-1} * alpha + q_{r-2}  ->  x = q_{r-1} P0 + 2 q_{r-2}, y = q_{r-1}
        i128 x, twice;
        if (!__builtin_mul_overflow(q_curr, (i128)P0, &x) && !__builtin_mul_overflow((i128)2, q_prev, &twice) &&
            !__builtin_add_overflow(x, twice, &x))
            unit.xy = std::make_pair(x, q_curr);
    }
    return unit;
}

FundamentalUnit fundamental_unit(u64 D) {
    require_fundamental(D);
    return fundamentalunit_impl(D);
}

unsigned genus_two_rank(u64 D) {
    require_fundamental(D);
    return arith::omega(D) - 1;
}

ClassData class_number(u64 d) {
    u64 D = fundamental_discriminant(d);
    ClassData cd;
    cd.d = d;
    cd.D = D;
    cd.h_plus = narrow_class_number(D);
    FundamentalUnit unit = fundamentalunit_impl(D);
    cd.unit_norm = unit.norm;
    cd.regulator = unit.regulator;
    if (unit.norm == 1) {
        if (cd.h_plus % 2 != 0) throw arith_error("class_number: h+ odd with unit norm +1 (cycle bug)");
        cd.h = cd.h_plus / 2;
    } else {
        cd.h = cd.h_plus;
    }
    cd.two_rank_narrow = arith::omega(D) - 1;
    return cd;
}

double analytic_class_number_check(u64 D, u64 terms) {
    require_fundamental(D);
    if (terms < 1000) throw domain_error("analytic_class_number_check: terms must be >= 1000");
    std::vector<signed char> chi(D);
    for (u64 k = 0; k < D; ++k) chi[k] = (signed char)arith::kronecker((i128)D, (i128)k);
    double L = 0.0;
    u64 idx = 1 % D;
    for (u64 k = 1; k <= terms; ++k) {
        L += (double)chi[idx] / (double)k;
        if (++idx == D) idx = 0;
    }
    FundamentalUnit unit = fundamentalunit_impl(D);
    double narrow_regulator = unit.norm == -1 ? 2.0 * unit.regulator : unit.regulator;
    return std::sqrt((double)D) * L / narrow_regulator;
}

DivisibilityCertificate divisibility_certificate(u64 d, unsigned l) {
    if (l == 0 || l > 62) throw domain_error("divisibility_certificate: l must be in 1..62");
    ClassData cd = class_number(d);
    return {cd.h % 3 == 0, cd.h % (1ull << l) == 0};
}

namespace {

std::vector<u64> squarefree_in_range(u64 d_lo, u64 d_hi) {
    d_lo = std::max<u64>(d_lo, 2);
    if (d_hi < d_lo) return {};
    // sieve out square multiples
    std::vector<bool> sf(d_hi - d_lo + 1, true);
    for (u64 p = 2; p * p <= d_hi; ++p) {
        u64 p2 = p * p;
        for (u64 m = (d_lo + p2 - 1) / p2 * p2; m <= d_hi; m += p2) sf[m - d_lo] = false;
    }
    std::vector<u64> out;
    for (u64 d = d_lo; d <= d_hi; ++d)
        if (sf[d - d_lo]) out.push_back(d);
    return out;
}

}  // namespace

std::vector<ClassData> class_number_sweep(u64 d_lo, u64 d_hi) {
    std::vector<u64> ds = squarefree_in_range(d_lo, d_hi);
    std::vector<ClassData> out(ds.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < (std::int64_t)ds.size(); ++i) out[(std::size_t)i] = class_number(ds[(std::size_t)i]);
    return out;
}

std::vector<ClassData> class_number_sweep_serial(u64 d_lo, u64 d_hi) {
    std::vector<u64> ds = squarefree_in_range(d_lo, d_hi);
    std::vector<ClassData> out;
    out.reserve(ds.size());
    for (u64 d : ds) out.push_back(class_number(d));
    return out;
}

}  // namespace qcl::classgroup

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qcl/int128.hpp"

namespace qcl::classgroup {

// d squarefree, d > 1  ->  d if d == 1 (mod 4), else 4d
u64 fundamental_discriminant(u64 d);

// throws domain_error unless D > 0, D == 0 or 1 (mod 4), non-square,
// and squarefree apart from the conductor-free factor 4
void require_fundamental(u64 D);

struct IndefiniteForm {
    i64 a = 0;
    i64 b = 0;
    i64 c = 0;
    bool operator==(const IndefiniteForm&) const = default;
    auto operator<=>(const IndefiniteForm&) const = default;
};

// All reduced forms of discriminant D: 0 < b < sqrt(D), sqrt(D)-b < 2|a| < sqrt(D)+b.
std::vector<IndefiniteForm> reduced_forms(u64 D);

// reduction step; maps reduced forms to reduced forms, one cycle per class
IndefiniteForm rho(const IndefiniteForm& f, u64 D);

// number of cycles of reduced forms = h+
u64 narrow_class_number(u64 D);

struct FundamentalUnit {
    // smallest unit > 1 as (x + y*sqrt(D))/2 with x^2 - D y^2 = 4*norm;
    // exact coordinates only when they fit the 128-bit exactness contract
    std::optional<std::pair<i128, i128>> xy;
    int norm = 1;            // +1 or -1, from the continued-fraction period parity
    double regulator = 0.0;  // log of the unit, summed over the period
    u64 period = 0;
};

FundamentalUnit fundamental_unit(u64 D);

struct ClassData {
    u64 d = 0;  // squarefree radicand > 1
    u64 D = 0;  // fundamental discriminant
    u64 h_plus = 0;
    u64 h = 0;
    int unit_norm = 1;
    unsigned two_rank_narrow = 0;  // omega(D) - 1
    double regulator = 0.0;
};

ClassData class_number(u64 d);

// h+ estimate from the truncated L-series sum(chi_D(k)/k) and the narrow
// regulator; lands within 0.5 of the integer h+ at desk scale
double analytic_class_number_check(u64 D, u64 terms);

unsigned genus_two_rank(u64 D);

struct DivisibilityCertificate {
    bool three_divides = false;
    bool two_l_divides = false;
};

DivisibilityCertificate divisibility_certificate(u64 d, unsigned l);

// ClassData for every squarefree d in [d_lo, d_hi], ascending.
// OpenMP-parallel; the serial reference is kept for testing.
std::vector<ClassData> class_number_sweep(u64 d_lo, u64 d_hi);
std::vector<ClassData> class_number_sweep_serial(u64 d_lo, u64 d_hi);

}  // namespace qcl::classgroup

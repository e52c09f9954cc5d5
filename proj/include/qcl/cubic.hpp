#pragma once

#include <string>

#include "qcl/arith.hpp"
#include "qcl/int128.hpp"

namespace qcl::cubic {

// Monic depressed integer cubic T^3 + pT + q.
struct Cubic {
    i64 p = 0;
    i64 q = 0;
    bool operator==(const Cubic&) const = default;
};

// -4p^3 - 27q^2, exact
i128 discriminant(const Cubic& f);

// A monic integer cubic is reducible over Q iff it has an integer root
// dividing q; integer roots r further satisfy r^2 <= |p| + |q|.
bool is_irreducible(const Cubic& f, u64 seed = 0);

enum class KMCondition { I, II, III };

struct KishiMiyakePair {
    i64 u = 0;
    i64 w = 0;
    KMCondition condition = KMCondition::I;
    i128 d = 0;  // 4uw^3 - 27u^2, not a perfect square
};

struct KMOutcome {
    bool accepted = false;
    KishiMiyakePair pair;
    std::string rejection;  // first failed requirement, empty when accepted

    explicit operator bool() const { return accepted; }
};

// Gates in order: condition (i)/(ii)/(iii), gcd(u,w) = 1, d not a perfect square.
KMOutcome check_kishi_miyake(i64 u, i64 w);

// m == 1 (mod 18), n == 1 (mod 54), gcd(m,n) = 1
struct CongruencePair {
    u64 m = 1;
    u64 n = 1;
};

// throws domain_error when the pair invariants fail
void validate(const CongruencePair& pair);

// T^3 - 3mT - 2n
Cubic pair_cubic(const CongruencePair& pair);

// 3(m^3 - n^2); negative values mean an imaginary field (caller filters)
i128 target_radicand(const CongruencePair& pair);

struct CensusResult {
    u64 total = 0;       // all cubics with |p| <= M, |q| <= N
    u64 admissible = 0;  // irreducible with non-square discriminant
};

// OpenMP-parallel over p; deterministic (integer reduction).
CensusResult irreducible_census(u64 M, u64 N);

// serial reference, kept for testing and benchmarks
CensusResult irreducible_census_serial(u64 M, u64 N);

}  // namespace qcl::cubic

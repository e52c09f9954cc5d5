// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/arith.hpp"
#include "qcl/classgroup.hpp"
#include "qcl/cubic.hpp"
#include "qcl/family.hpp"
#include "qcl/harness.hpp"

using namespace qcl;

namespace {

int g_failures = 0;

void result(int criterion, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---- criterion 1: the (m, n) = (19, 55) witness ----
void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::ostringstream note;

    auto triple = family::classify_pair(19, 55, family::desk_boxes(1e6), 1000000);
    pass = pass && triple.has_value() && triple->d == 142 && triple->t == 1;

    classgroup::ClassData cd = classgroup::class_number(142);
    pass = pass && cd.h == 3;  // form-cycle count
    double est = classgroup::analytic_class_number_check(cd.D, 1000000);
    pass = pass && std::abs(est - (double)cd.h_plus) < 0.5;

    double dt = seconds_since(t0);
    pass = pass && dt < 1.0;
    note << "(19,55) -> d = " << (triple ? triple->d : 0) << ", h = " << cd.h << " by cycles, analytic h+ = "
         << fmt(est) << " vs " << cd.h_plus << ", " << fmt(dt) << " s";
    result(1, pass, note.str());
}

// ---- criterion 2: end-to-end divisibility, zero exceptions allowed ----
void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;

    family::CongruenceSystem sys = family::build_system(1, {5, 7, 11}, {1, 1, 1}, {0, 0, 0});

    // the literal enumeration region for d <= 5*10^4 cannot reach the residue
    // classes (smallest m is 13520431); confirm it is empty rather than assume
    auto literal = family::enumerate_triples(sys, family::desk_boxes(50000.0), 50000);
    pass = pass && literal.empty();

    // widen to X = 10^16 so the boxes contain the classes; every emitted triple
    // must carry the full prime-divisibility mechanism of the construction
    const double X = 1e16;
    auto triples = family::enumerate_triples(sys, family::desk_boxes(X), (u128)X);
    pass = pass && !triples.empty();
    u64 mechanism_ok = 0, class_checked_prime_system = 0;
    for (const auto& tr : triples) {
        bool ok = tr.d % 385 == 0;                              // p1 p2 p3 | d
        ok = ok && family::verify_prime_divisibility(tr, sys);  // p_i | d, p_i^2 never divides m^3 - n^2
        u128 m3 = (u128)tr.m * tr.m * tr.m;
        ok = ok && m3 - (u128)tr.n * tr.n == (u128)27 * tr.t * tr.t * tr.d;
        ok = ok && arith::squarefree_part((u128)tr.d).root == 1;
        ok = ok && arith::omega(tr.d) >= 3;
        if (ok) ++mechanism_ok;
        if (tr.d <= 50000) {
            // the criterion's class-number check; unreachable in practice (see ledger note)
            ++class_checked_prime_system;
            cubic::CongruencePair pair{tr.m, tr.n};
            if (cubic::is_irreducible(cubic::pair_cubic(pair))) {
                classgroup::ClassData cd = classgroup::class_number(tr.d);
                pass = pass && cd.h % 3 == 0 && cd.h % 2 == 0;
            }
        }
    }
    pass = pass && mechanism_ok == triples.size();

    // the same end-to-end check where class numbers are reachable: the base
    // congruence system (m = 19 mod 108, n = 55 mod 324) at X = 10^6
    auto base = family::enumerate_triples(family::base_system(), family::desk_boxes(1e6), 1000000);
    pass = pass && base.size() == 67;  // frozen from the definition-level oracle
    u64 checked3 = 0, checked2 = 0;
    for (const auto& tr : base) {
        cubic::CongruencePair pair{tr.m, tr.n};
        if (!cubic::is_irreducible(cubic::pair_cubic(pair))) continue;
        classgroup::ClassData cd = classgroup::class_number(tr.d);
        if (cd.h % 3 != 0) {
            pass = false;
            break;
        }
        ++checked3;
        if (arith::omega(tr.d) >= 3) {
            ++checked2;
            if (cd.h % 2 != 0) {
                pass = false;
                break;
            }
        }
    }
    pass = pass && checked3 > 0 && checked2 > 0;

    std::ostringstream n2;
    n2 << "(5,7,11) system: literal d<=5e4 region empty as analyzed; at X = 1e16: " << triples.size()
       << " triples, " << mechanism_ok << " pass the prime-divisibility mechanism, "
       << class_checked_prime_system << " reach the d<=5e4 class check; base system: " << checked3
       << "/67 irreducible with 3 | h, " << checked2 << " with omega(d) >= 3 all have 2 | h; "
       << fmt(seconds_since(t0)) << " s";
    result(2, pass, n2.str());
}

// ---- criterion 3: genus-theory sweep over ALL squarefree d in 2..5*10^4 ----
void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    auto sweep = classgroup::class_number_sweep(2, 50000);
    u64 genus_fail = 0, narrow_fail = 0, analytic_fail = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : genus_fail, narrow_fail, analytic_fail)
    for (std::int64_t i = 0; i < (std::int64_t)sweep.size(); ++i) {
        const classgroup::ClassData& cd = sweep[(std::size_t)i];
        if (cd.h_plus % (1ull << cd.two_rank_narrow) != 0) ++genus_fail;
        bool narrow_ok = cd.unit_norm == -1 ? cd.h_plus == cd.h : cd.h_plus == 2 * cd.h;
        if (!narrow_ok) ++narrow_fail;
        double est = classgroup::analytic_class_number_check(cd.D, 1000000);
        if (std::abs(est - (double)cd.h_plus) >= 0.5) ++analytic_fail;
    }
    bool pass = !sweep.empty() && genus_fail == 0 && narrow_fail == 0 && analytic_fail == 0;
    std::ostringstream note;
    note << sweep.size() << " fields: 2^rank | h+ failures " << genus_fail << ", h+ in {h,2h} failures "
         << narrow_fail << ", analytic-vs-h failures " << analytic_fail << "; " << fmt(seconds_since(t0))
         << " s";
    result(3, pass, note.str());
}

// ---- criterion 4: cycle count vs analytic estimate for all fundamental D <= 10^4 ----
void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<u64> Ds;
    for (u64 D = 5; D <= 10000; ++D) {
        if (D % 4 != 0 && D % 4 != 1) continue;
        if (is_square((i128)D)) continue;
        try {
            classgroup::require_fundamental(D);
        } catch (const domain_error&) {
            continue;
        }
        Ds.push_back(D);
    }
    u64 fail = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : fail)
    for (std::int64_t i = 0; i < (std::int64_t)Ds.size(); ++i) {
        u64 D = Ds[(std::size_t)i];
        double est = classgroup::analytic_class_number_check(D, 1000000);
        if (std::abs(est - (double)classgroup::narrow_class_number(D)) >= 0.5) ++fail;
    }
    bool pass = !Ds.empty() && fail == 0;
    std::ostringstream note;
    note << Ds.size() << " fundamental discriminants, " << fail << " outside the 0.5 band; "
         << fmt(seconds_since(t0)) << " s";
    result(4, pass, note.str());
}

// ---- criterion 5: irreducible-cubic census with pinned exhaustive counts ----
void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    cubic::CensusResult c20 = cubic::irreducible_census(20, 20);
    cubic::CensusResult c50 = cubic::irreducible_census(50, 50);
    // regression constants frozen from the exhaustive oracle run
    bool pass = c20.total == 1681 && c20.admissible == 1480;
    pass = pass && c50.total == 10201 && c50.admissible == 9602;
    pass = pass && (double)c20.admissible / (double)c20.total >= 0.75;
    pass = pass && (double)c50.admissible / (double)c50.total >= 0.75;
    // serial reference agreement on the smaller case
    cubic::CensusResult s20 = cubic::irreducible_census_serial(20, 20);
    pass = pass && s20.admissible == c20.admissible;
    double dt = seconds_since(t0);
    pass = pass && dt < 1.0;
    std::ostringstream note;
    note << "census(20,20) = " << c20.admissible << "/" << c20.total << ", census(50,50) = " << c50.admissible
         << "/" << c50.total << ", ratios " << fmt((double)c20.admissible / c20.total) << "/"
         << fmt((double)c50.admissible / c50.total) << " >= 0.75; " << fmt(dt) << " s";
    result(5, pass, note.str());
}

// ---- criterion 6: X sweep, counts positive and monotone, slope reported ----
void criterion6() {
    auto t0 = std::chrono::steady_clock::now();
    harness::RunConfig cfg;
    cfg.X_values = {1e4, 1e5, 1e6, 1e7};
    cfg.enforce_t_range = false;
    cfg.d_cap = 50000;
    harness::CountResult res = harness::run_count(cfg);
    bool pass = res.records.size() == 4;
    u64 prev = 0;
    for (const auto& rec : res.records) {
        pass = pass && rec.distinct_d > 0 && rec.distinct_d >= prev;
        prev = rec.distinct_d;
    }
    pass = pass && res.slope.has_value();
    std::ostringstream note;
    note << "distinct_d =";
    for (const auto& rec : res.records) note << " " << rec.distinct_d;
    note << ", slope " << (res.slope ? fmt(res.slope->slope) : "absent")
         << " (the 7/8 exponent is an asymptotic prediction, not asserted at this scale); " << fmt(seconds_since(t0))
         << " s";
    result(6, pass, note.str());
}

// ---- criterion 7: enumerator completeness against the definition-level scan ----
namespace brute {

void split(u128 v, u128& d, u128& t) {
    d = 1;
    t = 1;
    for (u128 p = 2; p * p <= v; ++p) {
        if (v % p != 0) continue;
        unsigned e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        for (unsigned i = 0; i < e / 2; ++i) t *= p;
        if (e % 2) d *= p;
    }
    d *= v;
}

u64 gcd(u64 a, u64 b) {
    while (b) {
        u64 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

}  // namespace brute

void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    family::CongruenceSystem sys = family::base_system();
    const double X = 1e6;
    family::BoxParameters boxes = family::desk_boxes(X);
    auto fast = family::enumerate_triples(sys, boxes, (u128)X);

    std::set<std::array<u64, 4>> slow;
    for (u64 m = 1; m <= (u64)boxes.M_hi; ++m) {
        if (m % 108 != 19) continue;
        for (u64 n = 1; n <= (u64)boxes.N_hi; ++n) {
            if (n % 324 != 55) continue;
            u128 m3 = (u128)m * m * m, n2 = (u128)n * n;
            if (n2 >= m3) continue;
            u128 k = m3 - n2;
            if (k % 27 != 0) continue;
            u128 d, t;
            brute::split(k / 27, d, t);
            if (d <= 1 || d > (u128)X) continue;
            if (brute::gcd(m, (u64)t) != 1 || brute::gcd(m, n) != 1 || brute::gcd((u64)t, 6) != 1) continue;
            slow.insert({m, n, (u64)t, (u64)d});
        }
    }
    std::set<std::array<u64, 4>> fast_set;
    for (const auto& tr : fast) fast_set.insert({tr.m, tr.n, tr.t, tr.d});
    bool pass = fast_set == slow && !fast_set.empty();
    std::ostringstream note;
    note << "X = 1e6: enumerator " << fast_set.size() << " triples == definition-level scan " << slow.size()
         << "; " << fmt(seconds_since(t0)) << " s";
    result(7, pass, note.str());
}

// ---- criterion 8: byte-identical output across worker counts ----
void criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    std::string files[2];
    for (int i = 0; i < 2; ++i) {
        harness::RunConfig cfg;
        cfg.X = 1e6;
        cfg.enforce_t_range = false;
        cfg.seed = 42;
        cfg.workers = i == 0 ? 1 : 2;
        harness::GenerateResult res = harness::run_generate(cfg);
        std::string path = "acceptance_det_" + std::to_string(i) + ".jsonl";
        std::ofstream os(path);
        harness::write_triples(os, res.triples, harness::Format::jsonl);
        os.close();
        files[i] = path;
    }
    std::ifstream a(files[0]), b(files[1]);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    bool pass = sa.str() == sb.str() && !sa.str().empty();
    std::remove(files[0].c_str());
    std::remove(files[1].c_str());
    std::ostringstream note;
    note << "workers 1 vs 2: " << (pass ? "byte-identical" : "OUTPUTS DIFFER") << " (" << sa.str().size()
         << " bytes); " << fmt(seconds_since(t0)) << " s";
    result(8, pass, note.str());
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}

// Compares the OpenMP kernels against their serial reference implementations
// and reports wall times plus speedups; also asserts result agreement.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qcl/classgroup.hpp"
#include "qcl/cubic.hpp"
#include "qcl/family.hpp"

namespace {

using namespace qcl;

double time_of(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name, serial, parallel,
                serial / parallel, agree ? "results agree" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
    if (argc > 1) threads = std::atoi(argv[1]);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    std::printf("threads: %d\n", threads > 0 ? threads : omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel == serial\n");
#endif

    {
        cubic::CensusResult rs{}, rp{};
        double ts = time_of([&] { rs = cubic::irreducible_census_serial(120, 120); });
        double tp = time_of([&] { rp = cubic::irreducible_census(120, 120); });
        report("irreducible_census(120)", ts, tp, rs.total == rp.total && rs.admissible == rp.admissible);
    }
    {
        std::vector<classgroup::ClassData> rs, rp;
        double ts = time_of([&] { rs = classgroup::class_number_sweep_serial(2, 20000); });
        double tp = time_of([&] { rp = classgroup::class_number_sweep(2, 20000); });
        bool agree = rs.size() == rp.size();
        for (std::size_t i = 0; agree && i < rs.size(); ++i)
            agree = rs[i].d == rp[i].d && rs[i].h_plus == rp[i].h_plus && rs[i].h == rp[i].h;
        report("class_number_sweep(2e4)", ts, tp, agree);
    }
    {
        family::CongruenceSystem sys = family::base_system();
        family::BoxParameters boxes = family::desk_boxes(1e8);
        std::vector<family::SolutionTriple> rs, rp;
        double ts = time_of([&] { rs = family::enumerate_triples_serial(sys, boxes, (u128)1e8); });
        double tp = time_of([&] { rp = family::enumerate_triples(sys, boxes, (u128)1e8); });
        bool agree = rs.size() == rp.size();
        for (std::size_t i = 0; agree && i < rs.size(); ++i) agree = rs[i] == rp[i];
        report("enumerate_triples(1e8)", ts, tp, agree);
    }
    return 0;
}

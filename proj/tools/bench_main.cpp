// Serial vs OpenMP comparison for the hot kernels.  The serial reference
// paths are the ones the tests pin the parallel results against.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "quadrep/enumeration.hpp"
#include "quadrep/sphere.hpp"

using namespace quadrep;

namespace {

double time_of(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-32s serial %8.3fs  parallel %8.3fs  speedup %5.2fx\n", name, serial,
                parallel, parallel > 0 ? serial / parallel : 0.0);
}

IMat scaled_identity(int k, long s) {
    IMat m = imat_identity(k);
    for (int i = 0; i < k; ++i) m[i][i] = s;
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    long long scale = argc > 1 ? std::atoll(argv[1]) : 4;
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        QuadraticForm i8 = validate(scaled_identity(8, 2));
        long long xmax = 40 * scale;
        EnumOptions par;
        double ts = time_of([&] { bucket_counts_serial(i8, xmax); });
        double tp = time_of([&] { bucket_counts(i8, xmax, par); });
        report("bucket_counts 2*I8", ts, tp);
    }
    {
        QuadraticForm i6 = validate(scaled_identity(6, 2));
        long long xmax = 40 * scale;
        EnumOptions ser;
        ser.parallel = false;
        EnumOptions par;
        double ts = time_of([&] { box_bucket_counts(i6, xmax, ser); });
        double tp = time_of([&] { box_bucket_counts(i6, xmax, par); });
        report("box oracle 2*I6", ts, tp);
    }
    {
        long long n = 400 * scale;
        EnumOptions ser;
        ser.parallel = false;
        EnumOptions par;
        double ts = time_of([&] { pair_table(5, n / 8, ser); });
        double tp = time_of([&] { pair_table(5, n / 8, par); });
        report("pair_table d=5", ts, tp);
    }
    {
        long long n = 400 * scale;
        EnumOptions ser;
        ser.parallel = false;
        EnumOptions par;
        Rat y2(16);
        double ts = time_of([&] { cap_stats(5, n, y2, 2, ser); });
        double tp = time_of([&] { cap_stats(5, n, y2, 2, par); });
        report("cap_stats d=5", ts, tp);
    }
    return 0;
}

// Timing comparison of the serial and OpenMP paths of the sampled kernels and
// the randomized suite. Results must agree bitwise; only the wall time differs.
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>

#include "mdv/checks.hpp"
#include "mdv/demos.hpp"

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

template <typename Fn>
double time_of(const Fn& fn) {
    double t0 = now();
    fn();
    return now() - t0;
}

mdv::OpPtr make_workload(int dim) {
    using namespace mdv;
    Rng rng(2024);
    std::vector<OpPtr> leaves = sample_operator_tuple(rng, dim, 4);
    std::vector<OpPtr> mix = {compose(leaves), proj_ball(zeros(dim), 2.0)};
    return convex_combination({0.5, 0.5}, mix);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both paths run serially\n");
#endif

    const long samples = 200000;
    mdv::OpPtr op = make_workload(8);

    mdv::CheckReport serial_rep, parallel_rep;
    double t_serial = time_of([&] {
        serial_rep = mdv::check_nonexpansive(op, samples, 7, 5.0, mdv::Exec::serial);
    });
    double t_parallel = time_of([&] {
        parallel_rep = mdv::check_nonexpansive(op, samples, 7, 5.0, mdv::Exec::parallel);
    });
    bool same = serial_rep.violations == parallel_rep.violations &&
                serial_rep.worst_margin == parallel_rep.worst_margin;
    std::printf("nonexpansiveness sweep (%ld samples): serial %.3fs, parallel %.3fs, "
                "speedup %.2fx, results %s\n",
                samples, t_serial, t_parallel, t_serial / t_parallel,
                same ? "identical" : "DIFFER");

    mdv::SuiteOptions sopt;
    sopt.trials = 24;
    sopt.seed = 42;
    sopt.exec = mdv::Exec::serial;
    mdv::ExperimentReport r_serial, r_parallel;
    double s_serial = time_of([&] { r_serial = mdv::run_random_suite(sopt); });
    sopt.exec = mdv::Exec::parallel;
    double s_parallel = time_of([&] { r_parallel = mdv::run_random_suite(sopt); });
    bool same_suite = mdv::report_to_json(r_serial, false) == mdv::report_to_json(r_parallel, false);
    std::printf("random suite (%ld trials): serial %.3fs, parallel %.3fs, speedup %.2fx, "
                "reports %s\n",
                sopt.trials, s_serial, s_parallel, s_serial / s_parallel,
                same_suite ? "identical" : "DIFFER");
    return same && same_suite ? 0 : 1;
}

// Solves the worked example with the finite-difference and spectral solvers and compares both to the exact solution.
#include "tfpp/tfpp.hpp"

#include <cstdio>

int main() {
    using namespace tfpp;
    RunConfig c = worked_example_config();
    c.N = 400;
    c.M = 200;
    c.K = 16;
    const auto exact = exact_of(c);

    FdStats stats;
    const SolutionField fd = run_fd(c, &stats);
    double tail = 0.0;
    const SolutionField sp = run_spectral(c, 0, &tail);

    const std::size_t mid = *c.N / 2;
    std::printf("%10s %14s %14s %14s\n", "t", "u_fd(0.5,t)", "u_spec(0.5,t)", "exact");
    for (std::size_t k = 0; k <= *c.M; k += *c.M / 10) {
        const double t = fd.time().t(k);
        std::printf("%10.4f %14.8f %14.8f %14.8f\n", t, fd.at(mid, k), sp.at(mid, k), exact(0.5, t));
    }
    std::printf("FD max error       %.4e (min c - 2a = %.3e)\n", error_report(fd, exact).max_err,
                stats.min_dominance_margin);
    std::printf("spectral max error %.4e (tail estimate %.3e)\n", error_report(sp, exact).max_err, tail);
    return 0;
}

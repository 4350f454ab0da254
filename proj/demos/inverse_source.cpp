// Recovers the time-dependent source factor of the worked example from its spatial mean.
#include "tfpp/tfpp.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace tfpp;
    RunConfig c = worked_example_config();
    c.M = 100;
    c.K = 16;
    const ProblemSpec spec = c.to_problem();
    const TimeMesh mesh = config_mesh(c);
    const Functional f = make_functional(FunctionalKind::mean, spec, c.K);
    const Observation obs =
        Observation::from_function(parse_expr(c.obs_phi).of_t(), mesh, parse_expr(c.obs_dphi).of_t());
    InverseOptions opt;
    opt.spectral = config_spectral(c, 0);
    const InverseResult res = recover(spec, f, obs, mesh, opt);

    const auto truth = parse_expr(c.r_true).of_t();
    std::printf("%10s %14s %14s\n", "t", "r_recovered", "r_true");
    for (std::size_t j = 0; j <= mesh.M(); j += mesh.M() / 10) {
        std::printf("%10.4f %14.8f %14.8f\n", mesh.t(j), res.r_samples[j], truth(mesh.t(j)));
    }
    std::printf("iterations %d, final residual %.3e, log C1 %.1f\n", res.iterations, res.residual_history.back(),
                res.c1.log_value);
    return 0;
}

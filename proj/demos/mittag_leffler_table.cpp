// Prints E_{rho,1}(-x) for a few orders next to the closed forms available at rho = 1 and rho = 1/2.
#include "tfpp/tfpp.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace tfpp;
    const MittagLeffler e1({1.0, 1.0});
    const MittagLeffler e_half({0.5, 1.0});
    const MittagLeffler e_low({0.2, 1.0});
    std::printf("%8s %22s %22s %22s %22s\n", "x", "E_{1,1}(-x)", "exp(-x)", "E_{1/2,1}(-x)", "E_{0.2,1}(-x)");
    for (double x : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 1e3}) {
        std::printf("%8g %22.15e %22.15e %22.15e %22.15e\n", x, e1(-x), std::exp(-x), e_half(-x), e_low(-x));
    }
    std::printf("E_{1/2,1}(-1) = %.15f, e * erfc(1) = %.15f\n", e_half(-1.0), std::exp(1.0) * std::erfc(1.0));
    return 0;
}

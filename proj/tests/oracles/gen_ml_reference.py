"""Reference values for E_{rho,beta}(z) computed with mpmath.

Each value comes from one of two independent high-precision routes:
  - the defining power series at a working precision large enough to absorb
    its cancellation (used while |z|^(1/rho) <= 400);
  - Talbot inversion of the Laplace transform s^(rho-beta) / (s^rho - z)
    at t = 1 (mpmath.invertlaplace), at 40 digits.
Where the algebraic asymptotic expansion -sum z^-n / Gamma(beta - rho n)
converges to 1e-30 it is evaluated as a cross-check of the Talbot value.
Output lines: rho beta z value (17 significant digits).
"""
import mpmath as mp


def ml_series(rho, beta, z):
    x = abs(z)
    growth = float(x) ** (1.0 / float(rho)) if x > 0 else 0.0
    mp.mp.dps = int(40 + growth / 2.0)
    rho, beta, z = mp.mpf(rho), mp.mpf(beta), mp.mpf(z)
    s = mp.mpf(0)
    k = 0
    small = 0
    while True:
        t = z ** k * mp.rgamma(k * rho + beta)
        s += t
        if abs(t) < mp.mpf(10) ** (-mp.mp.dps + 5) * max(1, abs(s)) and k * rho > growth + 10:
            small += 1
            if small > 5:
                break
        k += 1
    return s


def ml_talbot(rho, beta, z):
    mp.mp.dps = 40
    rho, beta, z = mp.mpf(rho), mp.mpf(beta), mp.mpf(z)
    return mp.invertlaplace(lambda s: s ** (rho - beta) / (s ** rho - z), 1, method="talbot")


def ml_asym(rho, beta, z):
    """Asymptotic sum or None. The truncation test uses the envelope
    Gamma(1-a)/pi of |1/Gamma(a)| (a < 1/2) so near-zeros of 1/Gamma cannot
    end the sum early; divergence is declared only once the envelope has grown
    a thousandfold over its minimum."""
    mp.mp.dps = 50
    rho, beta, z = mp.mpf(rho), mp.mpf(beta), mp.mpf(z)
    s = mp.mpf(0)
    lowest = mp.inf
    for n in range(1, 4000):
        a = beta - rho * n
        s -= z ** (-n) * mp.rgamma(a)
        env = (abs(mp.rgamma(a)) if a >= 0.5 else mp.gamma(1 - a) / mp.pi) * abs(z) ** (-n)
        lowest = min(lowest, env)
        if env < mp.mpf(10) ** -30 * max(abs(s), mp.mpf(10) ** -30):
            return s
        if env > 1000 * lowest:
            return None
    return None


def ml(rho, beta, z):
    x = abs(z)
    if z >= 0 or x ** (1.0 / rho) <= 400:
        return ml_series(rho, beta, z)
    v = ml_talbot(rho, beta, z)
    a = ml_asym(rho, beta, z)
    if a is not None:
        assert abs(a - v) <= 1e-15 * max(1, abs(v)), (rho, beta, z, v, a)
    return v


if __name__ == "__main__":
    rhos = [0.1, 0.25, 0.5, 0.7, 0.9, 0.99, 1.0]
    zs = [-0.3, -0.7, -1.5, -3.0, -7.0, -15.0, -40.0, -300.0, -1e4, -1e8, 0.8, 4.0]
    for rho in rhos:
        for beta in sorted({rho, 1.0, rho + 1.0, rho + 2.0, 0.3, 2.5}):
            for z in zs:
                if z > 0 and (z ** (1 / rho)) > 300:
                    continue
                v = ml(rho, beta, z)
                print(f"{rho!r} {beta!r} {z!r} {mp.nstr(v, 17, min_fixed=-1, max_fixed=-1)}")

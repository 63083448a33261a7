#pragma once

// Independent reference computations for the test suites.  Nothing in here
// calls the library's evaluation paths.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n)
{
    if (n % 2) ++n;
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// K_0(z) = int_0^inf exp(-z cosh u) du, by the trapezoid rule (the integrand
/// decays doubly exponentially, so the rule converges geometrically).
inline double bessel_k0(double z)
{
    const double h = 0.005;
    double acc = 0.5 * std::exp(-z);
    for (int i = 1;; ++i) {
        const double term = std::exp(-z * std::cosh(i * h));
        acc += term;
        if (term < 1e-300 || term < 1e-18 * acc) break;
    }
    return acc * h;
}

/// Leading large-z asymptote of K_0.
inline double bessel_k0_asymptotic(double z) { return std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z); }

/// Narrow-packet limit of a unit-invariant-norm Gaussian packet a(p) ~ exp(-(p-pc)^2/(4w^2)):
/// |psi| at the packet centre, with p^0 frozen at its central value E.
inline double narrow_packet_peak(double E, double width)
{
    const double norm2 = E / (std::sqrt(2.0 * std::numbers::pi) * width);
    return (1.0 / std::sqrt(2.0 * std::numbers::pi)) * (std::sqrt(norm2) / E) * 2.0 * std::sqrt(std::numbers::pi) *
           width;
}

/// Two-plane-wave density minimum: j0 = E_a A^2 + E_b B^2 + (E_a + E_b) A B cos(phase),
/// minimised at cos = -1 (mass m).
inline double two_wave_min_density(double Ea, double A, double Eb, double B, double m)
{
    return (A - B) * (Ea * A - Eb * B) / m;
}

} // namespace oracle

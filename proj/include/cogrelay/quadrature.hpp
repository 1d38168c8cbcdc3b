#pragma once

#include <functional>

namespace cogrelay::quadrature {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;  // integrator's own error estimate
};

// Adaptive quadrature on [a, b] (Gauss-Kronrod, GSL QAG).
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double epsabs = 1e-12, double epsrel = 1e-12);

// Adaptive quadrature on [a, inf) (GSL QAGIU).
Result integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double epsabs = 1e-12, double epsrel = 1e-12);

}  // namespace cogrelay::quadrature

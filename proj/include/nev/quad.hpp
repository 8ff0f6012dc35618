#pragma once

#include <functional>

#include "nev/base.hpp"

namespace nev {

struct QuadResult {
    double value = 0.0;
    double err = 0.0;
    long evals = 0;
    bool converged = false;
};

struct QuadOptions {
    double abs_tol = 1e-9;
    long max_panels = 40000;
    // interior points the integrand is singular or spiky at; panels are
    // split geometrically toward each down to inner_gap, whose contribution
    // is taken by a two-point open rule
    std::vector<double> singular_points;
    double inner_gap = 1e-10;
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b].  Handles integrable log-type
// spikes through the singular-point chains; worst panels are refined first
// in a fixed deterministic order.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opt);

// tanh-sinh rule; integrable power singularities may sit at either endpoint.
QuadResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                               double abs_tol);

struct QuadResultC {
    cplx value{0.0, 0.0};
    double err = 0.0;
    long evals = 0;
    bool converged = false;
};

struct ContourAbort {};  // thrown by integrands to reject a contour

// Complex-valued adaptive G7K15 on a real parameter interval.
QuadResultC integrate_adaptive_cplx(const std::function<cplx(double)>& f, double a, double b,
                                    double abs_tol, long max_panels = 20000);

}  // namespace nev

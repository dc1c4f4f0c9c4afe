#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace anicurv {

// Adaptive 1D quadrature on [a,b], absolute tolerance.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-12);

// Deterministic pairwise sum; order independent of any threading above it.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

}  // namespace anicurv

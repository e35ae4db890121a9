#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace unisphere::quad {

/// Nodes and weights of a rule on some interval.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
const Rule& gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre rule: `panels` equal panels on [a, b], `order`
/// nodes per panel.
Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order);

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-13;
    std::size_t max_evaluations = 20000;
};

/// Adaptive Gauss-Kronrod (G10/K21) integration of f over [a, b].
///
/// `breakpoints` (optional, any order, values outside (a, b) ignored) seed the
/// initial partition; callers pass the mode and the edges of the bulk for
/// concentrated integrands. Subdivision always bisects the panel with the
/// largest error estimate.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints = {}, const Options& opt = {});

/// log of the integral of exp(log_f) over [a, b], evaluated as
/// shift + log(integral of exp(log_f - shift)) with shift = log_f(anchor).
/// `anchor` should be at or near the maximum of log_f.
double log_integrate(const std::function<double(double)>& log_f, double a, double b,
                     double anchor, std::span<const double> breakpoints = {},
                     const Options& opt = {});

}  // namespace unisphere::quad

#pragma once

#include "unisphere/core/point_set.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace unisphere {

enum class Method { SupDistance, Rayleigh, Bingham, Packing, Projection };
enum class Tail { Upper, TwoSided };

std::string method_name(Method m);
/// Accepts the names produced by method_name, case-insensitively, plus the
/// short forms "sup", "t", "r", "b", "p", "d". Throws DomainError.
Method parse_method(const std::string& s);
std::string tail_name(Tail t);
Tail parse_tail(const std::string& s);

/// sup_t |F_N(t) - F(t)| for the empirical CDF F_N of `sorted` (ascending)
/// against a continuous CDF F. Evaluated at the jumps as
/// max(i/N - F(s_i), F(s_i) - (j-1)/N), where a run of equal values
/// s_j = ... = s_i counts as one jump.
double sup_distance(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Sup distance between the empirical CDF of the pairwise inner products and
/// the null CDF m(., p).
double statistic_T(const UnitPointSet& s);
double statistic_T(const InnerProductList& list, std::size_t p);

/// sqrt(2p)/n times the sum of X_i.X_j over i < j.
double statistic_R(const UnitPointSet& s);
/// p/n times the sum of (X_i.X_j)^2 - 1/p over i < j.
double statistic_B(const UnitPointSet& s);
/// p max (X_i.X_j)^2 - 4 log n + log log n. Needs n >= 3.
double statistic_P(const UnitPointSet& s);
/// One-sample sup distance of the projections X_i.u against m(., p).
double statistic_projection_D(const UnitPointSet& s, std::span<const double> direction);

/// T, R, B and P from a single pass over the pairs. P is NaN for n < 3;
/// T is NaN when with_T is false (it is the only one needing a sort and
/// n(n-1)/2 null CDF evaluations).
struct Statistics {
    double T = 0.0;
    double R = 0.0;
    double B = 0.0;
    double P = 0.0;
};
Statistics all_statistics(const UnitPointSet& s, bool with_T = true);

/// Raw statistic on the scale of its reference law: sqrt(n(n-1)/2) T for
/// SupDistance, sqrt(n) D for Projection, unchanged otherwise.
double standardize(Method m, double statistic, std::size_t n);

}  // namespace unisphere

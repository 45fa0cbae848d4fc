#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "levy/sampler.hpp"

namespace levy {

/// Estimated L^{x_i}_{t_j}. values is row-major: values[i * t_grid.size() + j].
struct LocalTimeField {
    std::vector<double> x_centers;
    double epsilon = 0.0;
    std::vector<double> t_grid;
    std::vector<double> values;
    std::optional<Alpha> alpha;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> derivation;
    double dt = 0.0;
    std::vector<std::string> warnings;

    double at(std::size_t i, std::size_t j) const { return values[i * t_grid.size() + j]; }
    /// Column at the last time, linearly interpolated in x (0 outside the grid).
    double final_at(double x) const;
    double spacing() const { return x_centers.size() > 1 ? x_centers[1] - x_centers[0] : 2.0 * epsilon; }
};

struct PrincipalValueEstimate {
    double value = 0.0;
    double inner_cutoff = 0.0;
    double truncation_radius = 0.0;
    double exponent = 0.0;
    double value_half_cutoff = 0.0;
    double value_double_cutoff = 0.0;

    /// max deviation of the half/double-cutoff values from value
    double sensitivity() const;
};

/// x centers spanning +-4 t^{1/alpha} with 401 points; bins of half-width spacing/2 tile the line.
std::vector<double> default_x_grid(Alpha alpha, double t);

/// (1/2 eps) dt #{k < k_j : x_i - eps <= X_{t_k} < x_i + eps} for each t_j (left Riemann sum,
/// half-open bins). t_grid entries must be path grid times. Adds a warning when dt > eps^alpha.
LocalTimeField estimate_field(const SamplePath& path, const std::vector<double>& x_centers,
                              double epsilon, const std::vector<double>& t_grid);

/// |dt sum_k f(X_k) - sum_i f(x_i) 2 eps L[i][last]| at the last field time.
/// Throws SupportError if f does not vanish on the outermost bins or beyond.
double occupation_residual(const SamplePath& path, const LocalTimeField& field,
                           const std::function<double(double)>& f);

/// int_{c <= |z| <= R} |z|^{-exponent} (L^{x+z} - L^x) dz at the last field time, c = one grid
/// spacing (the central bin is left out), trapezoid on the grid with linear interpolation.
/// Exponent must lie in (1, (alpha+1)/2) when the field knows alpha, otherwise be positive.
PrincipalValueEstimate pv_centered(const LocalTimeField& field, double x, double exponent,
                                   double truncation);

/// int_c^R z^{-theta} (L^z - L^{-z}) dz, R = largest symmetric radius of the grid.
/// Requires theta < (alpha+1)/2 when alpha is known.
PrincipalValueEstimate pv_symmetric(const LocalTimeField& field, double theta);

/// Log-log slope of max_x |L^{x+y} - L^x| against y over y = spacing * {1,2,4,...,32};
/// nullopt when the field is flat.
std::optional<double> holder_probe(const LocalTimeField& field);

/// (1/2 eps) int_{-eps}^{eps} |a - y|^p dy in closed form; for -2 < p < -1 the Hadamard
/// finite part. p = -1 is rejected.
double box_avg_abs_power(double a, double p, double eps);

/// (1/2 eps) int_{-eps}^{eps} sign(a - y) |a - y|^p dy; principal value for -2 < p <= -1.
double box_avg_signed_power(double a, double p, double eps);

/// CSV: header "t,x_0,x_1,...", one row per t_grid entry.
void write_field_csv(std::ostream& os, const LocalTimeField& field);

}  // namespace levy

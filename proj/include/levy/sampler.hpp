#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "levy/report.hpp"
#include "levy/rng.hpp"
#include "levy/specfun.hpp"

namespace levy {

/// One trajectory on the uniform grid t_k = k t_end / n_steps, values[0] = 0.
struct SamplePath {
    Alpha alpha;
    double t_end;
    std::size_t n_steps;
    std::vector<double> values;
    std::uint64_t seed;
    std::vector<std::uint64_t> derivation;

    double dt() const { return t_end / static_cast<double>(n_steps); }
    double time(std::size_t k) const { return t_end * static_cast<double>(k) / static_cast<double>(n_steps); }
};

/// Standard symmetric alpha-stable variate, E exp(i l X) = exp(-|l|^alpha).
/// Chambers-Mallows-Stuck; alpha = 2 gives sqrt(2) N(0,1).
double stable_variate(Alpha alpha, SeedStream& stream);

/// Positive beta-stable variate with Laplace transform exp(-xi^beta), 1/2 < beta < 1
/// (Kanter's representation). Throws RegimeError otherwise.
double positive_stable_variate(double beta, SeedStream& stream);

/// Exact-in-law path: increments (t_end/n_steps)^{1/alpha} times iid standard variates.
SamplePath simulate_path(Alpha alpha, double t_end, std::size_t n_steps, SeedStream stream);

/// Same increments as simulate_path written into `values` (resized to n_steps + 1).
void fill_path(Alpha alpha, double t_end, std::size_t n_steps, SeedStream stream,
               std::vector<double>& values);

/// Two-sample moment-bank comparisons of the distributional identities
///   (Z / Y)^{alpha/2} = Z           Z ~ Exp(1), Y positive alpha/2-stable
///   X = sqrt(2) U Y^{1/2}           U ~ N(0,1)
/// at orders {0.25, 0.5, 1} (orders with infinite variance are left out).
/// The report carries the order with the largest standardized gap. Both are
/// boundary-skipped at alpha = 2 (Y = 1). Requires n >= 1e4.
std::pair<VerificationReport, VerificationReport> identity_checks(Alpha alpha, std::size_t n,
                                                                  const SeedStream& stream);

/// CSV with header "t,x", 17 significant digits.
void write_path_csv(std::ostream& os, const SamplePath& path);

/// printf("%.17g")
std::string format_g17(double v);

}  // namespace levy

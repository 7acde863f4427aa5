#pragma once

#include <cstdint>
#include <vector>

namespace shred {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Linear-interpolated quantile (type 7) of an unsorted sample.
double quantile(std::vector<double> v, double p);
double median(std::vector<double> v);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double stat, double dof);

/// Pearson statistic of observed counts against expected probabilities
/// (cells with zero probability must have zero counts).
double pearson_statistic(const std::vector<std::int64_t>& counts,
                         const std::vector<double>& probs);

}  // namespace shred

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "asd/tabular.hpp"

namespace asd {

struct CorrelationResult {
    double r = 0.0;  // product-moment coefficient in [-1, 1]
    double p = 1.0;  // two-tailed probability under the t distribution
    std::size_t n = 0;
};

// Pearson correlation with a two-tailed p-value from the Student-t
// distribution with n-2 degrees of freedom. Requires n >= 3 and two
// non-constant vectors.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

// Shannon entropy of a count vector, in bits; 0*log(0) counts as 0.
double entropy(std::span<const std::size_t> counts);

// Pearson chi-squared statistic of a two-way contingency table under the
// independence model. Every row and column sum must be positive.
double chi_squared(const std::vector<std::vector<std::size_t>>& table);

// Report wording for a correlation: "no significant" when p >= .05,
// otherwise "negligible" while |r| <= .25, otherwise "significant".
std::string strength_label(double p, double r);

struct CorrelationRow {
    std::string variable;
    CorrelationResult result;
    std::string strength;
};

// Correlation of jaundice, family history and ethnicity against the class,
// integer-coded (binary columns as 0/1, ethnicity by category index).
// Columns the dataset lacks are skipped.
std::vector<CorrelationRow> correlation_table(const Dataset& d);

// Exposed numeric kernels (shared with the rankers and tested directly).
// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);
// Two-tailed tail mass of the Student-t distribution at |t|.
double student_t_two_tailed(double t, double dof);

}  // namespace asd

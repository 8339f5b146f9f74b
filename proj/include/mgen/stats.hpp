#pragma once

#include <string>
#include <vector>

#include "mgen/common.hpp"

namespace mgen {

struct RatingsGroup {
  std::string name;
  std::vector<double> ratings;
};

struct RatingsTable {
  std::vector<RatingsGroup> groups;
};

struct TestResult {
  std::string test_kind;  // "anova" | "t"
  double statistic = 0.0;
  double df1 = 0.0;       // between df (anova) / df (t)
  double df2 = 0.0;       // within df (anova only)
  double p_value = 1.0;
  bool degenerate = false;  // zero-variance corner cases
};

// Regularized incomplete beta I_x(a,b) by continued fraction (Lentz),
// absolute error ~1e-13 over the parameter range used here.
double reg_inc_beta(double x, double a, double b);

// One-way fixed-effects ANOVA; F = MS_between / MS_within with
// df (k-1, N-k) and p = 1 - F_cdf(F).
TestResult one_way_anova(const RatingsTable& table);

enum class TTestVariant { Pooled, Welch };

// Two-sided two-sample t-test. Pooled uses df n_a+n_b-2; Welch uses the
// Welch-Satterthwaite approximation.
TestResult t_test(const std::vector<double>& a, const std::vector<double>& b,
                  TTestVariant variant = TTestVariant::Pooled);

struct GroupSummary {
  std::string name;
  double mean = 0.0;
  double mse = 0.0;  // mean squared deviation about the group mean
  std::size_t n = 0;
};

struct ModelComparisonReport {
  std::vector<GroupSummary> groups;
  TestResult anova;
  std::vector<std::pair<std::string, TestResult>> pairwise;  // "A vs B"
};

// The headline evaluation: one ANOVA across exactly three rating groups
// plus the three pairwise t-tests, with group means and MSE bars.
ModelComparisonReport evaluate_models(const RatingsTable& table,
                                      TTestVariant variant = TTestVariant::Pooled);

// CSV ingestion: rows of sample_id,model_name,rating (header optional).
RatingsTable ratings_from_csv(const std::string& csv);

std::string report_to_csv(const ModelComparisonReport& report);

}  // namespace mgen

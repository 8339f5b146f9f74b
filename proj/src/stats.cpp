#include "mgen/stats.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace mgen {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr double eps = 1e-15;
  constexpr double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

// Two-sided p for a t statistic with df degrees of freedom.
double t_two_sided_p(double t, double df) {
  return reg_inc_beta(df / (df + t * t), df / 2.0, 0.5);
}

// Upper tail of the F distribution.
double f_upper_p(double f, double d1, double d2) {
  return reg_inc_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0);
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
  if (a <= 0.0 || b <= 0.0) fail("reg_inc_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) fail("reg_inc_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

TestResult one_way_anova(const RatingsTable& table) {
  const std::size_t k = table.groups.size();
  if (k < 2) fail("anova: needs at least two groups");
  std::size_t n_total = 0;
  for (const auto& g : table.groups) {
    if (g.ratings.size() < 2)
      fail("anova: group '" + g.name + "' needs at least two ratings");
    n_total += g.ratings.size();
  }

  double grand = 0.0;
  for (const auto& g : table.groups)
    for (double x : g.ratings) grand += x;
  grand /= static_cast<double>(n_total);

  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : table.groups) {
    const double m = mean_of(g.ratings);
    ssb += static_cast<double>(g.ratings.size()) * (m - grand) * (m - grand);
    for (double x : g.ratings) ssw += (x - m) * (x - m);
  }

  TestResult r;
  r.test_kind = "anova";
  r.df1 = static_cast<double>(k - 1);
  r.df2 = static_cast<double>(n_total - k);
  if (ssw == 0.0) {
    r.degenerate = true;
    if (ssb == 0.0) {
      r.statistic = 0.0;  // every rating identical: F is 0/0
      r.p_value = 1.0;
    } else {
      r.statistic = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return r;
  }
  r.statistic = (ssb / r.df1) / (ssw / r.df2);
  r.p_value = f_upper_p(r.statistic, r.df1, r.df2);
  return r;
}

TestResult t_test(const std::vector<double>& a, const std::vector<double>& b,
                  TTestVariant variant) {
  if (a.size() < 2 || b.size() < 2)
    fail("t_test: each sample needs at least two values");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_var(a, ma), vb = sample_var(b, mb);

  TestResult r;
  r.test_kind = "t";
  if (va == 0.0 && vb == 0.0) {
    r.degenerate = true;
    if (ma == mb) {
      r.statistic = 0.0;
      r.p_value = 1.0;
      r.df1 = na + nb - 2.0;
    } else {
      r.statistic = ma > mb ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.df1 = na + nb - 2.0;
    }
    return r;
  }

  if (variant == TTestVariant::Pooled) {
    const double df = na + nb - 2.0;
    const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
    r.statistic = (ma - mb) / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
    r.df1 = df;
  } else {
    const double sea = va / na, seb = vb / nb;
    r.statistic = (ma - mb) / std::sqrt(sea + seb);
    r.df1 = (sea + seb) * (sea + seb) /
            (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
  }
  r.p_value = t_two_sided_p(r.statistic, r.df1);
  return r;
}

ModelComparisonReport evaluate_models(const RatingsTable& table,
                                      TTestVariant variant) {
  if (table.groups.size() != 3)
    fail("evaluate_models: exactly three model groups expected");
  ModelComparisonReport report;
  for (const auto& g : table.groups) {
    GroupSummary s;
    s.name = g.name;
    s.n = g.ratings.size();
    s.mean = mean_of(g.ratings);
    double mse = 0.0;
    for (double x : g.ratings) mse += (x - s.mean) * (x - s.mean);
    s.mse = mse / static_cast<double>(g.ratings.size());
    report.groups.push_back(s);
  }
  report.anova = one_way_anova(table);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      report.pairwise.emplace_back(
          table.groups[i].name + " vs " + table.groups[j].name,
          t_test(table.groups[i].ratings, table.groups[j].ratings, variant));
  return report;
}

RatingsTable ratings_from_csv(const std::string& csv) {
  RatingsTable table;
  std::map<std::string, std::size_t> index;
  std::istringstream is(csv);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string id, name, rating;
    if (!std::getline(ls, id, ',') || !std::getline(ls, name, ',') ||
        !std::getline(ls, rating, ','))
      fail("ratings csv line " + std::to_string(lineno) + ": malformed row");
    double value = 0.0;
    try {
      value = std::stod(rating);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      fail("ratings csv line " + std::to_string(lineno) + ": bad rating");
    }
    auto [it, inserted] = index.try_emplace(name, table.groups.size());
    if (inserted) table.groups.push_back({name, {}});
    table.groups[it->second].ratings.push_back(value);
  }
  if (table.groups.empty()) fail("ratings csv: no data rows");
  return table;
}

std::string report_to_csv(const ModelComparisonReport& report) {
  std::ostringstream os;
  os << "row,name,statistic,df1,df2,p_value,degenerate\n";
  for (const auto& g : report.groups)
    os << "group," << g.name << "," << g.mean << "," << g.mse << "," << g.n
       << ",,\n";
  os << "anova,all," << report.anova.statistic << "," << report.anova.df1
     << "," << report.anova.df2 << "," << report.anova.p_value << ","
     << (report.anova.degenerate ? 1 : 0) << "\n";
  for (const auto& [name, t] : report.pairwise)
    os << "ttest," << name << "," << t.statistic << "," << t.df1 << ",,"
       << t.p_value << "," << (t.degenerate ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace mgen

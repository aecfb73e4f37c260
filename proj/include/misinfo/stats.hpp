#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "misinfo/common.hpp"

namespace misinfo::stats {

inline double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Unbiased (n-1) sample variance.
inline double sample_variance(std::span<const double> v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

inline double sample_stddev(std::span<const double> v) {
    return std::sqrt(sample_variance(v));
}

// Percentile by linear interpolation over the sorted sample
// (position q * (n - 1), as numpy's default).
inline double percentile(std::vector<double> v, double q) {
    if (v.empty()) throw Error("percentile: empty sample");
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

inline double median(std::vector<double> v) { return percentile(std::move(v), 0.5); }

// Pearson correlation; 0 when either side has zero variance.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("pearson: need two equal samples of size >= 2");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

namespace detail {

inline constexpr int kMaxIter = 500;
inline constexpr double kEps = 1e-16;
inline constexpr double kFpMin = 1e-300;

// Regularized lower incomplete gamma P(a, x), series expansion (x < a + 1).
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x), Lentz continued fraction (x >= a + 1).
inline double gamma_q_contfrac(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the regularized incomplete beta.
inline double betacf(double a, double b, double x) {
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace detail

inline double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw Error("gamma_p: domain");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw Error("gamma_q: domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_contfrac(a, x);
}

// Regularized incomplete beta I_x(a, b).
inline double betainc(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0 || x < 0.0 || x > 1.0) throw Error("betainc: domain");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     detail::betacf(b, a, 1.0 - x) / b;
}

// Survival function of the chi-squared distribution with k dof.
inline double chi2_sf(double x, double k) {
    if (x <= 0.0) return 1.0;
    return gamma_q(k / 2.0, x / 2.0);
}

// Two-sided p-value of Student's t with df degrees of freedom.
inline double t_two_sided_p(double t, double df) {
    if (df <= 0.0) throw Error("t_two_sided_p: df must be positive");
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return betainc(df / 2.0, 0.5, x);
}

// Chi-squared statistic and p of a 2x2 contingency table (no continuity
// correction). Cells: n11 = (x=1,y=1), n10 = (x=1,y=0), n01, n00.
struct Chi2Result {
    double statistic = 0.0;
    double p_value = 1.0;
};

inline Chi2Result chi2_2x2(double n11, double n10, double n01, double n00) {
    const double n = n11 + n10 + n01 + n00;
    const double r1 = n11 + n10, r0 = n01 + n00;
    const double c1 = n11 + n01, c0 = n10 + n00;
    if (r1 == 0.0 || r0 == 0.0 || c1 == 0.0 || c0 == 0.0) return {0.0, 1.0};
    const double diff = n11 * n00 - n10 * n01;
    const double stat = n * diff * diff / (r1 * r0 * c1 * c0);
    return {stat, chi2_sf(stat, 1.0)};
}

struct WelchResult {
    double t_statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

// Welch's two-sample t-test, two-sided, Welch-Satterthwaite dof.
inline WelchResult welch_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error("welch_ttest: each sample needs >= 2 values");
    const double va = sample_variance(a), vb = sample_variance(b);
    if (va == 0.0 || vb == 0.0) throw Error("welch_ttest: degenerate (zero-variance) sample");
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    const double sa = va / na, sb = vb / nb;
    WelchResult r;
    r.mean_a = mean(a);
    r.mean_b = mean(b);
    r.n_a = a.size();
    r.n_b = b.size();
    r.t_statistic = (r.mean_a - r.mean_b) / std::sqrt(sa + sb);
    r.degrees_of_freedom = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    r.p_value = t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
    return r;
}

}  // namespace misinfo::stats

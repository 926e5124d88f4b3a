#include "rankbench/gaussian.hpp"

#include <cmath>
#include <limits>

namespace rankbench {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
} // namespace

double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_inv_cdf(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};

    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Newton refinement.
    double e = normal_cdf(x) - p;
    x -= e / normal_pdf(x);
    return x;
}

double v_win(double perf_diff, double draw_margin) {
    const double x = perf_diff - draw_margin;
    const double denom = normal_cdf(x);
    if (denom < 2.2e-162) return -x; // deep tail asymptote
    return normal_pdf(x) / denom;
}

double w_win(double perf_diff, double draw_margin) {
    const double x = perf_diff - draw_margin;
    const double v = v_win(perf_diff, draw_margin);
    const double w = v * (v + x);
    if (w < 0.0) return 0.0;
    if (w > 1.0) return 1.0;
    return w;
}

double v_draw(double perf_diff, double draw_margin) {
    const double abs_diff = std::fabs(perf_diff);
    const double a = draw_margin - abs_diff;
    const double b = -draw_margin - abs_diff;
    const double denom = normal_cdf(a) - normal_cdf(b);
    double v;
    if (denom < 2.2e-162) {
        v = a; // both bounds in the same deep tail
    } else {
        v = (normal_pdf(b) - normal_pdf(a)) / denom;
    }
    return perf_diff < 0.0 ? -v : v;
}

double w_draw(double perf_diff, double draw_margin) {
    const double abs_diff = std::fabs(perf_diff);
    const double a = draw_margin - abs_diff;
    const double b = -draw_margin - abs_diff;
    const double denom = normal_cdf(a) - normal_cdf(b);
    if (denom < 2.2e-162) return 1.0;
    const double v = v_draw(abs_diff, draw_margin);
    double w = v * v + (a * normal_pdf(a) - b * normal_pdf(b)) / denom;
    if (w < 0.0) return 0.0;
    if (w > 1.0) return 1.0;
    return w;
}

} // namespace rankbench

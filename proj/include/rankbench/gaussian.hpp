#pragma once

namespace rankbench {

double normal_pdf(double x);
double normal_cdf(double x);
// Acklam's rational approximation refined with one Newton step.
double normal_inv_cdf(double p);

// Truncated-Gaussian mean/variance corrections for rank updates.
// perf_diff and draw_margin are in units of the combined deviation c.
double v_win(double perf_diff, double draw_margin);
double w_win(double perf_diff, double draw_margin);
double v_draw(double perf_diff, double draw_margin);
double w_draw(double perf_diff, double draw_margin);

} // namespace rankbench

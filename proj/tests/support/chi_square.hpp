#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Upper regularized incomplete gamma Q(a, x), by series for x < a+1 and
// continued fraction otherwise (Lentz); enough accuracy for p-values.
inline double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1) {
        // P(a,x) series, return 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1 - a, c = 1e300, d = 1 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

// p-value of the chi-square goodness-of-fit statistic against the given
// expected counts (equal-probability cells when a single total is spread).
inline double chi_square_p(const std::vector<std::uint64_t>& observed,
                           const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square_p: need matching cells");
    double stat = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0) throw std::invalid_argument("chi_square_p: empty expected cell");
        const double diff = static_cast<double>(observed[i]) - expected[i];
        stat += diff * diff / expected[i];
    }
    const double dof = static_cast<double>(observed.size() - 1);
    return gamma_q(dof / 2, stat / 2);
}

inline double chi_square_p_uniform(const std::vector<std::uint64_t>& observed) {
    std::uint64_t total = 0;
    for (auto c : observed) total += c;
    const double each = static_cast<double>(total) / static_cast<double>(observed.size());
    return chi_square_p(observed, std::vector<double>(observed.size(), each));
}

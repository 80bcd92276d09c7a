#include "betarisk/beta_dist.hpp"

#include "betarisk/errors.hpp"

#include <cfloat>
#include <cmath>
#include <string>

namespace betarisk::betadist {

namespace {

constexpr int kContinuedFractionCap = 300;
constexpr double kContinuedFractionTol = 1e-14;
constexpr double kTiny = 1e-300;

constexpr double kBisectionRelWidth = 1e-6;
constexpr int kBisectionCap = 1100;
constexpr int kNewtonCap = 8;
constexpr double kRoundTripTol = 1e-10;

double log_gamma(double x) {
#if defined(__GLIBC__)
    // Re-entrant variant: std::lgamma writes the global signgam.
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kContinuedFractionCap; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kContinuedFractionTol) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge for a=" +
                       std::to_string(a) + " b=" + std::to_string(b) + " x=" + std::to_string(x));
}

// I_x(a, b) with log B(a, b) supplied by the caller. The fraction converges
// quickly only below (a + 1) / (a + b + 2); above it the complement is
// evaluated instead. For shapes near zero this switch point sits far from
// the mean, where a mean-based switch leaves the fraction unconverged.
double regularized_incomplete_beta(double a, double b, double x, double lbeta) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x > (a + 1.0) / (a + b + 2.0)) {
        const double y = 1.0 - x;
        const double front = std::exp(b * std::log(y) + a * std::log1p(-y) - lbeta) / b;
        return 1.0 - front * beta_continued_fraction(b, a, y);
    }
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta) / a;
    return front * beta_continued_fraction(a, b, x);
}

double log_density(double a, double b, double x, double lbeta) {
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
}

// Solves I_x(a, b) = u for x on [lo, hi]; the caller guarantees the root is
// bracketed and lies in the lower half of the support. Every evaluated point
// is a candidate, so a root within rounding of a bracket end is not lost when
// Newton steps onto that end.
double solve_lower(double a, double b, double u, double lbeta, double lo, double hi) {
    double best_x = hi;
    double best_residual = regularized_incomplete_beta(a, b, hi, lbeta) - u;
    auto evaluate = [&](double x) {
        const double r = regularized_incomplete_beta(a, b, x, lbeta) - u;
        if (std::fabs(r) < std::fabs(best_residual)) {
            best_x = x;
            best_residual = r;
        }
        return r;
    };

    int iterations = 0;
    while (hi - lo > kBisectionRelWidth * hi) {
        if (hi < DBL_MIN || ++iterations > kBisectionCap) {
            throw NumericError("beta quantile underflows for a=" + std::to_string(a) +
                               " b=" + std::to_string(b) + " u=" + std::to_string(u));
        }
        const double mid = 0.5 * (lo + hi);
        if (evaluate(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    double x = 0.5 * (lo + hi);
    double residual = evaluate(x);
    for (int k = 0; k < kNewtonCap && residual != 0.0; ++k) {
        if (residual < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double density = std::exp(log_density(a, b, x, lbeta));
        const double step = residual / density;
        if (std::fabs(step) <= 4.0 * DBL_EPSILON * x) break;
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
        residual = evaluate(x);
    }

    if (std::fabs(best_residual) <= kRoundTripTol) return best_x;
    // Accept when the bracket has shrunk to neighbouring doubles: no
    // representable x does better.
    if (std::nextafter(lo, hi) >= hi) return best_x;
    throw NumericError("beta quantile did not converge for a=" + std::to_string(a) +
                       " b=" + std::to_string(b) + " u=" + std::to_string(u));
}

void check_probability(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("beta quantile requires u in (0, 1), got " + std::to_string(u));
    }
}

// Maps a reflected root y back to x = 1 - y. Doubles near 1 are spaced
// 2^-53 apart, so when a shape below one piles mass against x = 1 the
// rounded x can miss u badly; the neighbours are tried, and if none meets
// the tolerance the quantile is not representable and the caller is told.
double finish_upper(double a, double b, double u, double lbeta, double y) {
    double x = 1.0 - y;
    double r = regularized_incomplete_beta(a, b, x, lbeta) - u;
    for (int k = 0; k < 4 && std::fabs(r) > kRoundTripTol; ++k) {
        const double next = std::nextafter(x, r > 0.0 ? 0.0 : 1.0);
        const double rn = regularized_incomplete_beta(a, b, next, lbeta) - u;
        if (std::fabs(rn) >= std::fabs(r)) break;
        x = next;
        r = rn;
    }
    if (std::fabs(r) > kRoundTripTol || x >= 1.0) {
        throw NumericError("beta quantile is not representable in double precision for a=" +
                           std::to_string(a) + " b=" + std::to_string(b) + " u=" + std::to_string(u));
    }
    return x;
}

// Quantile using the precomputed lbeta and I_{1/2}. Roots above one half are
// found through the reflection x = 1 - Q(b, a, 1 - u) so that the solver
// always works near zero, where doubles are densest.
double quantile_with(double a, double b, double u, double lbeta, double cdf_half) {
    if (u == cdf_half) return 0.5;
    if (u < cdf_half) return solve_lower(a, b, u, lbeta, 0.0, 0.5);
    return finish_upper(a, b, u, lbeta, solve_lower(b, a, 1.0 - u, lbeta, 0.0, 0.5));
}

} // namespace

BetaParams::BetaParams(double alpha, double beta) : m_alpha(alpha), m_beta(beta) {
    if (!(std::isfinite(alpha) && std::isfinite(beta) && alpha > 0.0 && beta > 0.0)) {
        throw DomainError("Beta shapes must be finite and positive, got (" + std::to_string(alpha) +
                          ", " + std::to_string(beta) + ")");
    }
}

double mean(const BetaParams& p) noexcept { return p.alpha() / (p.alpha() + p.beta()); }

double variance(const BetaParams& p) noexcept {
    const double s = p.alpha() + p.beta();
    return p.alpha() * p.beta() / (s * s * (s + 1.0));
}

double std_dev(const BetaParams& p) noexcept { return std::sqrt(variance(p)); }

double log_beta_function(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double cdf(const BetaParams& p, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("beta cdf requires x in [0, 1], got " + std::to_string(x));
    }
    return regularized_incomplete_beta(p.alpha(), p.beta(), x,
                                       log_beta_function(p.alpha(), p.beta()));
}

double quantile(const BetaParams& p, double u) {
    check_probability(u);
    const double a = p.alpha();
    const double b = p.beta();
    const double lbeta = log_beta_function(a, b);
    return quantile_with(a, b, u, lbeta, regularized_incomplete_beta(a, b, 0.5, lbeta));
}

std::vector<double> quantiles(const BetaParams& p, std::span<const double> sorted_u) {
    const double a = p.alpha();
    const double b = p.beta();
    const double lbeta = log_beta_function(a, b);
    const double cdf_half = regularized_incomplete_beta(a, b, 0.5, lbeta);

    for (std::size_t k = 0; k < sorted_u.size(); ++k) {
        check_probability(sorted_u[k]);
        if (k > 0 && sorted_u[k] < sorted_u[k - 1]) {
            throw DomainError("quantiles requires non-decreasing probabilities");
        }
    }

    std::vector<double> out(sorted_u.size());
    // Lower-half roots increase with u, so each solution bounds the next one
    // from below. Upper-half roots are solved in reflected form from the top.
    double lower_floor = 0.0;
    std::size_t i = 0;
    for (; i < sorted_u.size() && sorted_u[i] < cdf_half; ++i) {
        out[i] = solve_lower(a, b, sorted_u[i], lbeta, lower_floor, 0.5);
        lower_floor = out[i];
    }
    double upper_floor = 0.0;
    for (std::size_t j = sorted_u.size(); j > i; --j) {
        const double u = sorted_u[j - 1];
        if (u == cdf_half) {
            out[j - 1] = 0.5;
            continue;
        }
        const double y = solve_lower(b, a, 1.0 - u, lbeta, upper_floor, 0.5);
        upper_floor = y;
        out[j - 1] = 1.0 - y;
    }
    return out;
}

double pdf(const BetaParams& p, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("beta pdf requires x in [0, 1], got " + std::to_string(x));
    }
    const double a = p.alpha();
    const double b = p.beta();
    if (x == 0.0 || x == 1.0) {
        const double shape = x == 0.0 ? a : b;
        if (shape < 1.0) {
            throw DomainError("beta density is unbounded at x=" + std::to_string(x));
        }
        if (shape > 1.0) return 0.0;
        return std::exp(-log_beta_function(a, b));
    }
    return std::exp(log_density(a, b, x, log_beta_function(a, b)));
}

} // namespace betarisk::betadist

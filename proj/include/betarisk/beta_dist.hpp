#pragma once

#include <span>
#include <vector>

namespace betarisk::betadist {

// Shape pair of a Beta distribution. Both shapes are finite and strictly
// positive; the constructor throws DomainError otherwise.
class BetaParams {
public:
    BetaParams(double alpha, double beta);

    double alpha() const noexcept { return m_alpha; }
    double beta() const noexcept { return m_beta; }
    double concentration() const noexcept { return m_alpha + m_beta; }

    friend bool operator==(const BetaParams&, const BetaParams&) = default;

private:
    double m_alpha;
    double m_beta;
};

double mean(const BetaParams& p) noexcept;
double variance(const BetaParams& p) noexcept;
double std_dev(const BetaParams& p) noexcept;

// log B(a, b) via log-gamma.
double log_beta_function(double a, double b);

// Regularized incomplete beta function I_x(a, b). Lentz continued fraction,
// evaluated on whichever side of the mean converges fastest.
double cdf(const BetaParams& p, double x);

// Inverse of cdf on (0, 1). Throws DomainError for u outside (0, 1) and
// NumericError when no x is found with |cdf(x) - u| <= 1e-10. That includes
// roots within a few ulps of 1 when the second shape is small: the spacing of
// doubles there is too coarse for the tolerance.
double quantile(const BetaParams& p, double u);

// Quantiles for an increasing sequence of probabilities, reusing brackets
// between neighbours. Roots above I_{1/2}(a, b) are solved for y = 1 - x to
// the same tolerance and returned as 1 - y. Where quantile() refuses a root
// because no double near 1 meets the tolerance, this returns it rounded,
// off by at most half an ulp of 1 in x. Meant for integrals over x, such as
// the Wasserstein distance, where that rounding is immaterial.
std::vector<double> quantiles(const BetaParams& p, std::span<const double> sorted_u);

// Density; rejects the endpoints, where a shape below one makes it unbounded.
double pdf(const BetaParams& p, double x);

} // namespace betarisk::betadist

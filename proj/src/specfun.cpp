#include "dkp/specfun.hpp"

#include <cmath>
#include <string>

#include "dkp/errors.hpp"

namespace dkp::specfun {

namespace {

/// Neumaier's variant of Kahan summation, carried in extended precision.
class CompensatedSum
{
  public:
    void add(long double x)
    {
        long double const t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    long double value() const
    {
        return sum_ + compensation_;
    }

  private:
    long double sum_{0.0L};
    long double compensation_{0.0L};
};

/// True when c + k == 0 for some 0 <= k < n.
bool hits_pole(double c, unsigned n)
{
    return c <= 0.0 && c == std::floor(c) && -c < static_cast<double>(n);
}

void require_no_pole(unsigned n, double c)
{
    if (hits_pole(c, n)) {
        throw PoleInDenominator("2F1(-" + std::to_string(n) + ", b; c; x): c = " + std::to_string(c) +
                                " makes a denominator vanish before the series terminates");
    }
}

/// (alpha+1)_n / n!, accumulated as a product of ratios to stay finite.
long double binomial_prefactor(unsigned n, double alpha)
{
    long double p = 1.0L;
    for (unsigned i = 1; i <= n; ++i) {
        p *= (static_cast<long double>(alpha) + i) / i;
    }
    return p;
}

// Terms are formed in long double: the sum can cancel by several orders of
// magnitude near the middle of the interval.
long double hyp2f1_sum(unsigned n, long double b, long double c, long double x)
{
    CompensatedSum sum;
    long double term = 1.0L;
    sum.add(term);
    long double const mn = -static_cast<long double>(n);
    for (unsigned k = 0; k < n; ++k) {
        term *= (mn + k) * (b + k) / ((c + k) * (k + 1)) * x;
        sum.add(term);
    }
    return sum.value();
}

} // namespace

double pochhammer_rising(double x, unsigned k)
{
    double p = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        p *= x + i;
    }
    return p;
}

double hyp2f1_terminating(unsigned n, double b, double c, double x)
{
    require_no_pole(n, c);
    return static_cast<double>(hyp2f1_sum(n, b, c, x));
}

double jacobi(unsigned n, double alpha, double beta, double x)
{
    if (n == 0) {
        return 1.0;
    }
    // Keep the series argument in [0, 1/2] through P_n^{(a,b)}(x) = (-1)^n P_n^{(b,a)}(-x);
    // near x = -1 the direct series cancels badly.
    // The reflected series has c = beta + 1, so only take it when that is not a pole.
    if (x < 0.0 && !hits_pole(beta + 1.0, n)) {
        long double const b = static_cast<long double>(alpha) + beta + 1.0L + n;
        long double const series = hyp2f1_sum(n, b, static_cast<long double>(beta) + 1.0L, 0.5L * (1.0L + x));
        double const sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * static_cast<double>(binomial_prefactor(n, beta) * series);
    }
    require_no_pole(n, alpha + 1.0);
    long double const b = static_cast<long double>(alpha) + beta + 1.0L + n;
    long double const series = hyp2f1_sum(n, b, static_cast<long double>(alpha) + 1.0L, 0.5L * (1.0L - x));
    return static_cast<double>(binomial_prefactor(n, alpha) * series);
}

double jacobi_derivative(unsigned n, double alpha, double beta, double x, unsigned order)
{
    if (order > n) {
        return 0.0;
    }
    double scale = 1.0;
    for (unsigned j = 1; j <= order; ++j) {
        scale *= 0.5 * (alpha + beta + n + j);
    }
    return scale * jacobi(n - order, alpha + order, beta + order, x);
}

double laguerre(unsigned n, double alpha, double x)
{
    if (n == 0) {
        return 1.0;
    }
    if (hits_pole(alpha + 1.0, n)) {
        throw PoleInDenominator("L_n^alpha: alpha = " + std::to_string(alpha) + " is a negative integer >= -n");
    }
    // k-th term: (-1)^k C(n+alpha, n-k) x^k / k!
    CompensatedSum sum;
    long double term = binomial_prefactor(n, alpha);
    sum.add(term);
    for (unsigned k = 0; k < n; ++k) {
        term *= -static_cast<long double>(n - k) / ((static_cast<long double>(alpha) + k + 1.0L) * (k + 1)) * x;
        sum.add(term);
    }
    return static_cast<double>(sum.value());
}

double laguerre_derivative(unsigned n, double alpha, double x, unsigned order)
{
    if (order > n) {
        return 0.0;
    }
    double const sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * laguerre(n - order, alpha + order, x);
}

} // namespace dkp::specfun

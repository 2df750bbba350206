#include "fsosec/numerics.hpp"

#include <cmath>
#include <math.h>

namespace fsosec::numerics
{

void SeriesControl::validate() const
{
    if (max_terms < 1)
        throw ConfigError("SeriesControl: max_terms must be >= 1");
    if (!(tail_tol > 0.0))
        throw ConfigError("SeriesControl: tail_tol must be > 0");
    if (consecutive_small < 1)
        throw ConfigError("SeriesControl: consecutive_small must be >= 1");
}

void QuadratureControl::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw ConfigError("QuadratureControl: tolerances must be > 0");
    if (max_subdivisions < 1)
        throw ConfigError("QuadratureControl: max_subdivisions must be >= 1");
}

double log_gamma(double x)
{
    if (!std::isfinite(x) || x <= 0.0)
        throw DomainError("log_gamma: argument must be positive and finite");
#if defined(__GLIBC__)
    // lgamma() writes the global signgam; the reentrant form does not.
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double gen_binomial(double a, int k)
{
    return gen_binomial<double>(a, k);
}

}  // namespace fsosec::numerics

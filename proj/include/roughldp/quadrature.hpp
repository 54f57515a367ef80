// Gauss-Legendre quadrature with power substitutions for integrable
// endpoint singularities (exponents in (-1,0)).
#pragma once

#include <functional>

namespace roughldp {

using Integrand = std::function<double(double)>;

// Integrand receiving exact distances to both interval endpoints.  Near a
// singular endpoint the distance comes from the substituted variable, never
// from u-a / b-u subtraction, so (dist)^alpha keeps full precision.
using EndpointAwareIntegrand =
    std::function<double(double u, double dist_lo, double dist_hi)>;

// Composite 16-point Gauss-Legendre over [a,b] split into `cells` equal parts.
double integrate(const Integrand& f, double a, double b, int cells = 1);

// Integrates f over [a,b] where f ~ dist_lo^{alpha_lo} near a and
// f ~ dist_hi^{alpha_hi} near b, with alpha in (-1,0] (0 means regular).
// The substitution u = a + v^{1/(1+alpha)} restores a bounded integrand.
double integrate_endpoint_singular(const EndpointAwareIntegrand& f, double a,
                                   double b, double alpha_lo, double alpha_hi,
                                   int cells = 4);

}  // namespace roughldp

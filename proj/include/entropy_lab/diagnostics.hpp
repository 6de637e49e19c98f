#pragma once

#include <functional>

#include "entropy_lab/density.hpp"
#include "entropy_lab/orlicz.hpp"

namespace entropy_lab {

/// Split of h = f log f into h+ (pieces with value > 1) and h- (value < 1).
/// Both parts are >= 0 and H(f) = negative_part - positive_part.
struct EntropyParts {
  double positive_part = 0.0;
  double negative_part = 0.0;
};

EntropyParts entropy_parts(const PiecewisePdf& pdf);

/// H(f) = -integral f log f, natural log, 0 log 0 = 0.
double entropy(const PiecewisePdf& pdf);

/// integral f |log f|.
double entropy_integrand_mass(const PiecewisePdf& pdf);

/// integral f Psi(|log f|).
double orlicz_moment(const PiecewisePdf& pdf, const OrliczFn& psi);

/// integral f |log f|^alpha. DomainError if alpha <= 1.
double alpha_moment(const PiecewisePdf& pdf, double alpha);

/// integral of g = f |log f| over {g > M}. DomainError if M <= 0.
double equi_integrability_mass(const PiecewisePdf& pdf, double M);

/// integral of g over {|log f| > T} (T >= 0), the left side of the Orlicz
/// tail bound.
double log_tail_integrand_mass(const PiecewisePdf& pdf, double T);

enum class TailIntegrand { Density, EntropyIntegrand };

/// integral over {|x| > R} of f or of f |log f|. DomainError if R <= 0.
double tail_mass(const PiecewisePdf& pdf, double R, TailIntegrand integrand);

/// Largest piece value (the esssup).
double sup_density(const PiecewisePdf& pdf);

/// esssup f_n / f over the support of f_n; +inf where f vanishes there.
double ratio_sup(const PiecewisePdf& f_n, const PiecewisePdf& f);

/// integral |x|^beta f. DomainError if beta <= 0.
double abs_moment(const PiecewisePdf& pdf, double beta);

/// max |x| over the support (pieces with nonzero value).
double support_extent(const PiecewisePdf& pdf);

struct Interval {
  double lo;
  double hi;
};

/// Adaptive quadrature of -d log d over `support` for a smooth (or piecewise
/// smooth) density given as a function. Cross-check channel only.
/// Throws NonNormalizedError if the density's quadrature mass is more than
/// 1e-6 away from 1, ConvergenceError if tol is not reached within 10^6
/// subintervals, DomainError on bad arguments.
double entropy_quadrature(const std::function<double(double)>& density, Interval support,
                          double tol);

/// Same engine applied to a plain integrand; exposed for tests.
double integrate_adaptive(const std::function<double(double)>& fn, Interval domain, double tol);

}  // namespace entropy_lab

#include "entropy_lab/diagnostics.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numeric.hpp"

namespace entropy_lab {

namespace {

// log of integral_u^{u+w} x^beta dx for u >= 0, with w given as log_w.
double log_power_integral(double u, double log_w, double beta) {
  const double b1 = beta + 1.0;
  const double log_b1 = std::log(b1);
  if (u <= 0.0) return b1 * log_w - log_b1;
  const double log_u = std::log(u);
  if (log_w <= log_u) {
    // ((1 + w/u)^(beta+1) - 1) u^(beta+1) / (beta+1), stable for w << u.
    const double r = std::exp(log_w - log_u);
    return b1 * log_u + std::log(std::expm1(b1 * std::log1p(r))) - log_b1;
  }
  // (b^(beta+1) - u^(beta+1)) / (beta+1) with b = u + w, stable for w >> u.
  const double log_b = log_w + std::log1p(std::exp(log_u - log_w));
  return b1 * log_b + std::log1p(-std::exp(b1 * (log_u - log_b))) - log_b1;
}

}  // namespace

EntropyParts entropy_parts(const PiecewisePdf& pdf) {
  CompensatedSum pos;
  CompensatedSum neg;
  for (const auto& p : pdf.pieces()) {
    const double L = p.log_value;
    if (L == kNegInf || L == 0.0) continue;
    const double m = std::exp(L + p.log_length);
    if (L > 0.0) {
      pos += L * m;
    } else {
      neg += -L * m;
    }
  }
  return {pos.value(), neg.value()};
}

double entropy(const PiecewisePdf& pdf) {
  const auto parts = entropy_parts(pdf);
  return parts.negative_part - parts.positive_part;
}

double entropy_integrand_mass(const PiecewisePdf& pdf) {
  CompensatedSum sum;
  for (const auto& p : pdf.pieces()) {
    if (p.is_zero()) continue;
    sum += std::abs(p.log_value) * std::exp(p.log_mass());
  }
  return sum.value();
}

double orlicz_moment(const PiecewisePdf& pdf, const OrliczFn& psi) {
  CompensatedSum sum;
  for (const auto& p : pdf.pieces()) {
    if (p.is_zero() || p.log_value == 0.0) continue;
    sum += std::exp(p.log_mass() + log_psi_eval(psi, std::abs(p.log_value)));
  }
  return sum.value();
}

double alpha_moment(const PiecewisePdf& pdf, double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 1.0)) throw DomainError("alpha_moment needs alpha > 1");
  return orlicz_moment(pdf, OrliczFn::power(alpha));
}

double equi_integrability_mass(const PiecewisePdf& pdf, double M) {
  if (std::isnan(M) || !(M > 0.0)) throw DomainError("threshold M must be > 0");
  const double log_M = std::log(M);
  CompensatedSum sum;
  for (const auto& p : pdf.pieces()) {
    if (p.is_zero() || p.log_value == 0.0) continue;
    const double abs_L = std::abs(p.log_value);
    // g = e^L |L| compared in log space; spikes of height e^n overflow otherwise.
    if (p.log_value + std::log(abs_L) > log_M) sum += abs_L * std::exp(p.log_mass());
  }
  return sum.value();
}

double log_tail_integrand_mass(const PiecewisePdf& pdf, double T) {
  if (std::isnan(T) || T < 0.0) throw DomainError("log threshold T must be >= 0");
  CompensatedSum sum;
  for (const auto& p : pdf.pieces()) {
    if (p.is_zero()) continue;
    const double abs_L = std::abs(p.log_value);
    if (abs_L > T) sum += abs_L * std::exp(p.log_mass());
  }
  return sum.value();
}

double tail_mass(const PiecewisePdf& pdf, double R, TailIntegrand integrand) {
  if (std::isnan(R) || !(R > 0.0)) throw DomainError("tail radius R must be > 0");
  CompensatedSum sum;
  for (const auto& p : pdf.pieces()) {
    if (p.is_zero()) continue;
    const double a = p.start;
    const double b = p.end();
    double log_w = kNegInf;
    if (a >= R || b <= -R) {
      log_w = p.log_length;
    } else {
      // Straddling pieces: keep the parts beyond +R and below -R.
      double w = 0.0;
      if (b > R) w += b - R;
      if (a < -R) w += std::min(b, -R) - a;
      if (w > 0.0) log_w = std::log(w);
    }
    if (log_w == kNegInf) continue;
    const double m = std::exp(p.log_value + log_w);
    sum += integrand == TailIntegrand::Density ? m : std::abs(p.log_value) * m;
  }
  return sum.value();
}

double sup_density(const PiecewisePdf& pdf) {
  double best = kNegInf;
  for (const auto& p : pdf.pieces()) best = std::max(best, p.log_value);
  return std::exp(best);
}

double ratio_sup(const PiecewisePdf& f_n, const PiecewisePdf& f) {
  const auto r = refine(f_n, f);
  double best = kNegInf;
  for (std::size_t i = 0; i < r.f.size(); ++i) {
    if (r.f[i].is_zero()) continue;
    if (r.g[i].is_zero()) return INFINITY;
    best = std::max(best, r.f[i].log_value - r.g[i].log_value);
  }
  return std::exp(best);
}

double abs_moment(const PiecewisePdf& pdf, double beta) {
  if (!std::isfinite(beta) || !(beta > 0.0)) throw DomainError("abs_moment needs beta > 0");
  CompensatedSum sum;
  for (const auto& p : pdf.pieces()) {
    if (p.is_zero()) continue;
    const double a = p.start;
    const double b = p.end();
    if (a >= 0.0) {
      sum += std::exp(p.log_value + log_power_integral(a, p.log_length, beta));
    } else if (b <= 0.0) {
      sum += std::exp(p.log_value + log_power_integral(std::max(0.0, -b), p.log_length, beta));
    } else {
      sum += std::exp(p.log_value + log_power_integral(0.0, std::log(-a), beta));
      sum += std::exp(p.log_value + log_power_integral(0.0, std::log(b), beta));
    }
  }
  return sum.value();
}

double support_extent(const PiecewisePdf& pdf) {
  double extent = 0.0;
  for (const auto& p : pdf.pieces()) {
    if (p.is_zero()) continue;
    extent = std::max({extent, std::abs(p.start), std::abs(p.end())});
  }
  return extent;
}

double integrate_adaptive(const std::function<double(double)>& fn, Interval domain, double tol) {
  constexpr std::size_t kMaxIntervals = 1'000'000;
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("quadrature tol must be > 0");
  if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || !(domain.lo < domain.hi)) {
    throw DomainError("quadrature needs a finite interval lo < hi");
  }

  // Simpson on [a, b] compared with composite Simpson on its halves; the
  // difference /15 is the error estimate and the Richardson value is kept.
  struct Segment {
    double a, b, fa, fm, fb, fl, fr, value, error;
  };
  auto make = [&fn](double a, double b, double fa, double fm, double fb) {
    const double m = 0.5 * (a + b);
    const double fl = fn(0.5 * (a + m));
    const double fr = fn(0.5 * (m + b));
    const double h = b - a;
    const double coarse = h / 6.0 * (fa + 4.0 * fm + fb);
    const double fine = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
    return Segment{a, b, fa, fm, fb, fl, fr, fine + (fine - coarse) / 15.0,
                   std::abs(fine - coarse) / 15.0};
  };
  auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };
  std::priority_queue<Segment, std::vector<Segment>, decltype(by_error)> heap(by_error);

  const double a = domain.lo;
  const double b = domain.hi;
  heap.push(make(a, b, fn(a), fn(0.5 * (a + b)), fn(b)));
  double total_error = heap.top().error;
  std::size_t since_resum = 0;
  while (total_error > tol) {
    if (heap.size() >= kMaxIntervals) {
      std::ostringstream os;
      os << "quadrature did not reach tol " << tol << " within " << kMaxIntervals
         << " subintervals (estimated error " << total_error << ")";
      throw ConvergenceError(os.str());
    }
    Segment s = heap.top();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {
      throw ConvergenceError("quadrature subinterval reached floating-point resolution");
    }
    heap.pop();
    Segment left = make(s.a, m, s.fa, s.fl, s.fm);
    Segment right = make(m, s.b, s.fm, s.fr, s.fb);
    total_error += left.error + right.error - s.error;
    heap.push(left);
    heap.push(right);
    if (++since_resum == 4096) {
      // Rebuild the running total so cancellation drift cannot stall the loop.
      auto copy = heap;
      CompensatedSum e;
      while (!copy.empty()) {
        e += copy.top().error;
        copy.pop();
      }
      total_error = e.value();
      since_resum = 0;
    }
  }

  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  CompensatedSum sum;
  for (const auto& s : segments) sum += s.value;
  return sum.value();
}

double entropy_quadrature(const std::function<double(double)>& density, Interval support,
                          double tol) {
  constexpr double kMassSlack = 1e-6;
  auto checked = [&density](double x) {
    const double d = density(x);
    if (std::isnan(d) || d < 0.0) throw DomainError("density must be nonnegative");
    return d;
  };
  const double m = integrate_adaptive(checked, support, std::min(tol, kMassSlack * 0.1));
  if (!(std::abs(m - 1.0) <= kMassSlack)) {
    std::ostringstream os;
    os.precision(17);
    os << "density integrates to " << m << ", not 1";
    throw NonNormalizedError(m, os.str());
  }
  return integrate_adaptive(
      [&checked](double x) {
        const double d = checked(x);
        return d == 0.0 ? 0.0 : -d * std::log(d);
      },
      support, tol);
}

}  // namespace entropy_lab

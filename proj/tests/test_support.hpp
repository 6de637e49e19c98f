#pragma once

// Closed-form oracles for the density families and a random pdf generator.
// The oracles use plain linear-space arithmetic on the family definitions;
// they never call into the log-space implementation.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "entropy_lab/density.hpp"

namespace entropy_lab::oracle {

struct GhClosedForm {
  double delta;  // e^-n / n
  double c;      // (1 - 1/n) / (1 - delta)
  double entropy;
  double tv;
  double alpha_n_background;  // c |log c|^alpha_n (1 - delta)
};

inline GhClosedForm gh(int n) {
  const double x = n;
  const double delta = std::exp(-x) / x;
  const double c = (1.0 - 1.0 / x) / (1.0 - delta);
  const double alpha_n = 1.0 + 1.0 / std::log(x);
  GhClosedForm out;
  out.delta = delta;
  out.c = c;
  out.entropy = -1.0 - c * std::log(c) * (1.0 - delta);
  // (e^n - 1) delta rewritten as 1/n - delta so large n does not overflow.
  out.tv = (1.0 / x - delta) + (1.0 - c) * (1.0 - delta);
  out.alpha_n_background = c * std::pow(std::abs(std::log(c)), alpha_n) * (1.0 - delta);
  return out;
}

/// Background-only contribution c |log c|^alpha (1 - delta) for GH.
inline double gh_background_alpha(int n, double alpha) {
  const auto g = gh(n);
  return g.c * std::pow(std::abs(std::log(g.c)), alpha) * (1.0 - g.delta);
}

struct OrliczSpikeClosedForm {
  double delta;       // 1 / (n e^n log(1+n))
  double spike_mass;  // 1 / (n log(1+n))
  double c;
  double background_entropy;  // -c log c (1 - delta)
};

inline OrliczSpikeClosedForm orlicz_spike(int n) {
  const double x = n;
  const double l = std::log(1.0 + x);
  OrliczSpikeClosedForm out;
  out.spike_mass = 1.0 / (x * l);
  out.delta = out.spike_mass * std::exp(-x);
  out.c = (1.0 - out.spike_mass) / (1.0 - out.delta);
  out.background_entropy = -out.c * std::log(out.c) * (1.0 - out.delta);
  return out;
}

inline double converse_fails_entropy(int n) {
  const double b = 1.0 - 2.0 / n;
  return -b * std::log(b);
}

inline double bounded_ratio_entropy(int n) {
  const double u = 1.0 / n;
  return -0.5 * ((1.0 + u) * std::log(1.0 + u) + (1.0 - u) * std::log(1.0 - u));
}

inline double truncated_exponential_entropy() {
  const double z = 1.0 - std::exp(-10.0);
  return 1.0 + std::log(z) - 10.0 * std::exp(-10.0) / z;
}

}  // namespace entropy_lab::oracle

namespace entropy_lab::testing {

/// Random pdf on [-5, 5]: 1..6 pieces on sorted breakpoints, optional gaps
/// and zero pieces, values normalized to total mass 1.
inline PiecewisePdf random_pdf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> height(0.01, 20.0);
  std::bernoulli_distribution coin(0.25);
  const int k = count(rng);
  std::vector<double> cuts;
  for (int i = 0; i < 2 * k; ++i) cuts.push_back(coord(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  struct Raw {
    double a, b, v;
  };
  std::vector<Raw> raw;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (coin(rng) && raw.size() > 0) continue;  // gap
    raw.push_back({cuts[i], cuts[i + 1], coin(rng) ? 0.0 : height(rng)});
  }
  double total = 0.0;
  for (const auto& r : raw) total += r.v * (r.b - r.a);
  if (total == 0.0) {
    raw.front().v = 1.0;
    total = raw.front().b - raw.front().a;
  }
  std::vector<Piece> pieces;
  for (const auto& r : raw) {
    pieces.push_back(Piece{r.a, std::log(r.b - r.a),
                           r.v == 0.0 ? kNegInf : std::log(r.v / total)});
  }
  return make_pdf(std::move(pieces));
}

/// L1 distance and overlap by midpoint evaluation on the union of
/// breakpoints. Valid for pdfs whose pieces are wider than coordinate
/// resolution.
struct MidpointIntegrals {
  double l1 = 0.0;
  double overlap = 0.0;
};

inline MidpointIntegrals midpoint_integrals(const PiecewisePdf& f, const PiecewisePdf& g) {
  std::vector<double> cuts;
  for (const auto* pdf : {&f, &g}) {
    for (const auto& p : pdf->pieces()) {
      cuts.push_back(p.start);
      cuts.push_back(p.end());
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  MidpointIntegrals out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    const double w = cuts[i + 1] - cuts[i];
    const double a = evaluate(f, m);
    const double b = evaluate(g, m);
    out.l1 += std::abs(a - b) * w;
    out.overlap += std::min(a, b) * w;
  }
  return out;
}

}  // namespace entropy_lab::testing

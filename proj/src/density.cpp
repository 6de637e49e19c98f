#include "entropy_lab/density.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numeric.hpp"

namespace entropy_lab {

namespace {

bool piece_less(const Piece& a, const Piece& b) {
  if (a.start != b.start) return a.start < b.start;
  return a.end() < b.end();
}

std::string describe(const Piece& p) {
  std::ostringstream os;
  os.precision(17);
  os << "{start " << p.start << ", log_length " << p.log_length << ", log_value " << p.log_value
     << "}";
  return os.str();
}

}  // namespace

PiecewisePdf make_pdf(std::vector<Piece> pieces, double mass_tolerance) {
  if (!(mass_tolerance > 0.0) || !std::isfinite(mass_tolerance)) {
    throw DomainError("mass_tolerance must be finite and > 0");
  }
  if (pieces.empty()) throw DomainError("a pdf needs at least one piece");
  for (const auto& p : pieces) {
    if (!std::isfinite(p.log_length)) {
      throw WidthError("piece has non-finite log_length: " + describe(p));
    }
    if (!std::isfinite(p.start)) throw DomainError("piece has non-finite start: " + describe(p));
    if (std::isnan(p.log_value) || p.log_value == INFINITY) {
      throw DomainError("piece has NaN or +inf log_value: " + describe(p));
    }
  }
  std::stable_sort(pieces.begin(), pieces.end(), piece_less);
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i - 1].end() > pieces[i].start + kGapTolerance) {
      throw OverlapError("pieces overlap: " + describe(pieces[i - 1]) + " and " +
                         describe(pieces[i]));
    }
  }
  const double total = mass(pieces);
  if (!(std::abs(total - 1.0) <= mass_tolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "total mass " << total << " differs from 1 by more than " << mass_tolerance;
    throw MassError(total, os.str());
  }
  return PiecewisePdf(std::move(pieces), mass_tolerance);
}

PiecewisePdf uniform_pdf(double a, double b) {
  if (!(b > a)) throw DomainError("uniform_pdf needs a < b");
  const double log_w = std::log(b - a);
  return make_pdf({Piece{a, log_w, -log_w}});
}

double mass(std::span<const Piece> pieces) {
  CompensatedSum sum;
  for (const auto& p : pieces) {
    if (!p.is_zero()) sum += std::exp(p.log_mass());
  }
  return sum.value();
}

double evaluate(std::span<const Piece> pieces, double x) {
  // Last piece whose start is <= x. Degenerate pieces sort before a
  // non-degenerate piece with the same start, so this finds the covering one.
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                             [](double v, const Piece& p) { return v < p.start; });
  if (it == pieces.begin()) return 0.0;
  const Piece& p = *std::prev(it);
  return x < p.end() ? p.value() : 0.0;
}

Refinement refine(const PiecewisePdf& f, const PiecewisePdf& g) {
  struct Cell {
    double start;
    double end;  // coordinate end; equals start for degenerate cells
    double log_length;
    double log_f = kNegInf;
    double log_g = kNegInf;
    bool has_f = false;
    bool has_g = false;
  };

  std::vector<double> breaks;
  std::vector<Piece> wide_f;
  std::vector<Piece> wide_g;
  // Degenerate pieces grouped by start coordinate, kept in input order.
  std::map<double, std::vector<Piece>> thin_f;
  std::map<double, std::vector<Piece>> thin_g;
  for (const auto& p : f.pieces()) {
    if (p.is_degenerate()) {
      thin_f[p.start].push_back(p);
    } else {
      wide_f.push_back(p);
      breaks.push_back(p.start);
      breaks.push_back(p.end());
    }
  }
  for (const auto& p : g.pieces()) {
    if (p.is_degenerate()) {
      thin_g[p.start].push_back(p);
    } else {
      wide_g.push_back(p);
      breaks.push_back(p.start);
      breaks.push_back(p.end());
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Covering piece of a sorted wide list for the half-open cell [a, b).
  auto cover = [](const std::vector<Piece>& wide, std::size_t& cursor, double a,
                  double b) -> const Piece* {
    while (cursor < wide.size() && wide[cursor].end() <= a) ++cursor;
    if (cursor < wide.size() && wide[cursor].start <= a && wide[cursor].end() >= b) {
      return &wide[cursor];
    }
    return nullptr;
  };

  std::vector<Cell> cells;
  std::size_t cf = 0;
  std::size_t cg = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const Piece* pf = cover(wide_f, cf, a, b);
    const Piece* pg = cover(wide_g, cg, a, b);
    if (pf == nullptr && pg == nullptr) continue;
    // A cell that coincides with an input piece inherits its exact log_length.
    double log_len = NAN;
    for (const Piece* p : {pf, pg}) {
      if (p != nullptr && p->start == a && p->end() == b) {
        log_len = std::isnan(log_len) ? p->log_length : std::min(log_len, p->log_length);
      }
    }
    if (std::isnan(log_len)) log_len = std::log(b - a);
    Cell c{a, b, log_len};
    if (pf != nullptr) {
      c.log_f = pf->log_value;
      c.has_f = true;
    }
    if (pg != nullptr) {
      c.log_g = pg->log_value;
      c.has_g = true;
    }
    cells.push_back(c);
  }

  auto wide_value_at = [](const std::vector<Piece>& wide, double x) -> const Piece* {
    auto it = std::upper_bound(wide.begin(), wide.end(), x,
                               [](double v, const Piece& p) { return v < p.start; });
    if (it == wide.begin()) return nullptr;
    const Piece& p = *std::prev(it);
    return x < p.end() ? &p : nullptr;
  };

  std::vector<double> thin_starts;
  for (const auto& [s, _] : thin_f) thin_starts.push_back(s);
  for (const auto& [s, _] : thin_g) thin_starts.push_back(s);
  std::sort(thin_starts.begin(), thin_starts.end());
  thin_starts.erase(std::unique(thin_starts.begin(), thin_starts.end()), thin_starts.end());

  for (double s : thin_starts) {
    static const std::vector<Piece> kNone;
    const auto& tf = thin_f.count(s) ? thin_f.at(s) : kNone;
    const auto& tg = thin_g.count(s) ? thin_g.at(s) : kNone;
    const Piece* bg_f = wide_value_at(wide_f, s);
    const Piece* bg_g = wide_value_at(wide_g, s);
    auto base = [s](double log_len) { return Cell{s, s, log_len}; };
    auto fill_f = [&](Cell& c, const Piece* p) {
      if (p) {
        c.log_f = p->log_value;
        c.has_f = true;
      }
    };
    auto fill_g = [&](Cell& c, const Piece* p) {
      if (p) {
        c.log_g = p->log_value;
        c.has_g = true;
      }
    };
    // Pair the k-th degenerate piece of f with the k-th of g at this start:
    // the common width carries both values, the remainder only the wider one.
    const std::size_t n = std::max(tf.size(), tg.size());
    for (std::size_t k = 0; k < n; ++k) {
      const Piece* pf = k < tf.size() ? &tf[k] : nullptr;
      const Piece* pg = k < tg.size() ? &tg[k] : nullptr;
      if (pf && pg) {
        const double lo = std::min(pf->log_length, pg->log_length);
        Cell common = base(lo);
        fill_f(common, pf);
        fill_g(common, pg);
        cells.push_back(common);
        if (pf->log_length != pg->log_length) {
          const Piece* wider = pf->log_length > pg->log_length ? pf : pg;
          Cell rest = base(log_diff_exp(wider->log_length, lo));
          if (wider == pf) {
            fill_f(rest, pf);
            fill_g(rest, bg_g);
          } else {
            fill_f(rest, bg_f);
            fill_g(rest, pg);
          }
          cells.push_back(rest);
        }
      } else if (pf) {
        Cell c = base(pf->log_length);
        fill_f(c, pf);
        fill_g(c, bg_g);
        cells.push_back(c);
      } else {
        Cell c = base(pg->log_length);
        fill_f(c, bg_f);
        fill_g(c, pg);
        cells.push_back(c);
      }
    }
  }

  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });

  Refinement out;
  out.f.reserve(cells.size());
  out.g.reserve(cells.size());
  for (const auto& c : cells) {
    out.f.push_back(Piece{c.start, c.log_length, c.log_f});
    out.g.push_back(Piece{c.start, c.log_length, c.log_g});
  }
  return out;
}

double overlap_mass(const PiecewisePdf& f, const PiecewisePdf& g) {
  const auto r = refine(f, g);
  CompensatedSum sum;
  for (std::size_t i = 0; i < r.f.size(); ++i) {
    const double lo = std::min(r.f[i].log_value, r.g[i].log_value);
    if (lo != kNegInf) sum += std::exp(lo + r.f[i].log_length);
  }
  return sum.value();
}

double tv_distance(const PiecewisePdf& f, const PiecewisePdf& g) {
  const auto r = refine(f, g);
  CompensatedSum sum;
  for (std::size_t i = 0; i < r.f.size(); ++i) {
    const double hi = std::max(r.f[i].log_value, r.g[i].log_value);
    const double lo = std::min(r.f[i].log_value, r.g[i].log_value);
    if (hi == kNegInf || hi == lo) continue;
    // |e^hi - e^lo| * w = e^(hi + log w) * (1 - e^(lo - hi))
    sum += std::exp(hi + r.f[i].log_length) * -std::expm1(lo - hi);
  }
  return sum.value();
}

PiecewisePdf dilate(const PiecewisePdf& pdf, double a) {
  if (!std::isfinite(a) || !(a > 0.0)) throw ScaleError("dilation factor must be finite and > 0");
  const double log_a = std::log(a);
  std::vector<Piece> out;
  out.reserve(pdf.size());
  for (const auto& p : pdf.pieces()) {
    out.push_back(Piece{p.start * a, p.log_length + log_a, p.log_value - log_a});
  }
  return make_pdf(std::move(out), pdf.mass_tolerance());
}

}  // namespace entropy_lab

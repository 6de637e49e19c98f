#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace entropy_lab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kDefaultMassTolerance = 1e-9;
inline constexpr double kGapTolerance = 1e-12;

/// One constant piece [start, start + width) of a density.
///
/// Width and value are stored as natural logs so that spikes of height e^n
/// and width e^-n / n stay representable far past the double range.
/// log_value == -inf encodes the value 0.
struct Piece {
  double start = 0.0;
  double log_length = 0.0;
  double log_value = kNegInf;

  double width() const noexcept { return std::exp(log_length); }
  double value() const noexcept { return std::exp(log_value); }
  double end() const noexcept { return start + width(); }
  /// log of value * width; -inf for zero pieces.
  double log_mass() const noexcept { return log_value + log_length; }
  bool is_zero() const noexcept { return log_value == kNegInf; }
  /// True when the width is below the coordinate resolution at `start`.
  bool is_degenerate() const noexcept { return end() == start; }

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// A validated 1-D piecewise-constant probability density.
///
/// Pieces are sorted by (start, end), pairwise non-overlapping, and carry a
/// total mass within mass_tolerance of 1. Gaps between pieces are density 0.
/// Instances are immutable; construct through make_pdf.
class PiecewisePdf {
 public:
  std::span<const Piece> pieces() const noexcept { return pieces_; }
  double mass_tolerance() const noexcept { return mass_tolerance_; }
  std::size_t size() const noexcept { return pieces_.size(); }

 private:
  friend PiecewisePdf make_pdf(std::vector<Piece> pieces, double mass_tolerance);
  PiecewisePdf(std::vector<Piece> pieces, double tol)
      : pieces_(std::move(pieces)), mass_tolerance_(tol) {}

  std::vector<Piece> pieces_;
  double mass_tolerance_;
};

/// Validates and sorts `pieces`.
/// Throws WidthError, OverlapError, MassError, or DomainError (non-finite
/// start, NaN or +inf log_value, non-positive tolerance).
PiecewisePdf make_pdf(std::vector<Piece> pieces,
                      double mass_tolerance = kDefaultMassTolerance);

PiecewisePdf uniform_pdf(double a, double b);

/// Sum of piece masses with compensated accumulation. Works on raw piece lists
/// so refined lists can be checked as well.
double mass(std::span<const Piece> pieces);
inline double mass(const PiecewisePdf& pdf) { return mass(pdf.pieces()); }

/// Value at x under the right-open convention; 0 on gaps.
/// `pieces` must be sorted and non-overlapping.
double evaluate(std::span<const Piece> pieces, double x);
inline double evaluate(const PiecewisePdf& pdf, double x) { return evaluate(pdf.pieces(), x); }

/// f and g re-expressed over a common set of cells. Both vectors have equal
/// length and cell i has the same start and log_length in each; a side with no
/// piece on a cell carries an explicit zero piece there.
struct Refinement {
  std::vector<Piece> f;
  std::vector<Piece> g;
};

Refinement refine(const PiecewisePdf& f, const PiecewisePdf& g);

/// Exact integral of min(f, g).
double overlap_mass(const PiecewisePdf& f, const PiecewisePdf& g);

/// Exact integral of |f - g| (L1 distance, in [0, 2]).
double tv_distance(const PiecewisePdf& f, const PiecewisePdf& g);

/// Density of aX for X ~ pdf. Throws ScaleError unless a is finite and > 0.
PiecewisePdf dilate(const PiecewisePdf& pdf, double a);

}  // namespace entropy_lab

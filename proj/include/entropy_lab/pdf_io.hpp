#pragma once

#include <json.hpp>

#include "entropy_lab/density.hpp"

namespace entropy_lab {

// JSON layout: [{"start": x, "log_length": l, "log_value": v | "-inf"}, ...]

nlohmann::json pieces_to_json(std::span<const Piece> pieces);
inline nlohmann::json pdf_to_json(const PiecewisePdf& pdf) { return pieces_to_json(pdf.pieces()); }

/// Throws ParseError on malformed input, then any make_pdf error.
PiecewisePdf pdf_from_json(const nlohmann::json& j,
                           double mass_tolerance = kDefaultMassTolerance);

/// Finite doubles as numbers; infinities and NaN as "inf", "-inf", "nan".
nlohmann::json number_to_json(double x);

}  // namespace entropy_lab

#include "entropy_lab/pdf_io.hpp"

#include <cmath>

#include "entropy_lab/errors.hpp"

namespace entropy_lab {

namespace {

double read_number(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw ParseError(std::string("piece is missing \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace

nlohmann::json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (x == INFINITY) return "inf";
  if (x == -INFINITY) return "-inf";
  return x;
}

nlohmann::json pieces_to_json(std::span<const Piece> pieces) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pieces) {
    nlohmann::json obj;
    obj["start"] = p.start;
    obj["log_length"] = p.log_length;
    obj["log_value"] = number_to_json(p.log_value);
    arr.push_back(std::move(obj));
  }
  return arr;
}

PiecewisePdf pdf_from_json(const nlohmann::json& j, double mass_tolerance) {
  if (!j.is_array()) throw ParseError("pdf must be a JSON array of pieces");
  std::vector<Piece> pieces;
  pieces.reserve(j.size());
  for (const auto& obj : j) {
    if (!obj.is_object()) throw ParseError("each piece must be a JSON object");
    Piece p;
    p.start = read_number(obj, "start");
    p.log_length = read_number(obj, "log_length");
    if (!obj.contains("log_value")) throw ParseError("piece is missing \"log_value\"");
    const auto& lv = obj.at("log_value");
    if (lv.is_string() && lv.get<std::string>() == "-inf") {
      p.log_value = kNegInf;
    } else if (lv.is_number()) {
      p.log_value = lv.get<double>();
    } else {
      throw ParseError("\"log_value\" must be a number or \"-inf\"");
    }
    pieces.push_back(p);
  }
  return make_pdf(std::move(pieces), mass_tolerance);
}

}  // namespace entropy_lab

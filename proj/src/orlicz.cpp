#include "entropy_lab/orlicz.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "entropy_lab/errors.hpp"

namespace entropy_lab {

namespace {

constexpr double kE = std::numbers::e;
constexpr int kPhiGridPoints = 1024;

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string format_param(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

OrliczFn OrliczFn::power(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 1.0)) throw DomainError("power Psi needs alpha > 1");
  return OrliczFn(OrliczKind::Power, alpha);
}

OrliczFn OrliczFn::tlogpow(double p) {
  if (!std::isfinite(p) || !(p >= 1.0)) throw DomainError("tlogpow Psi needs p >= 1");
  return OrliczFn(OrliczKind::TLogPow, p);
}

std::string OrliczFn::name() const {
  switch (kind_) {
    case OrliczKind::Power: return "power:" + format_param(param_);
    case OrliczKind::TLog1p: return "tlog1p";
    case OrliczKind::TLogE: return "tloge";
    case OrliczKind::TLogPow: return "tlogpow:" + format_param(param_);
    case OrliczKind::TLogLog: return "tloglog";
  }
  return {};
}

OrliczFn parse_orlicz(std::string_view text) {
  if (text == "tlog1p") return OrliczFn::tlog1p();
  if (text == "tloge") return OrliczFn::tloge();
  if (text == "tloglog") return OrliczFn::tloglog();
  if (text.starts_with("power:")) return OrliczFn::power(parse_real(text.substr(6), "alpha"));
  if (text.starts_with("tlogpow:")) return OrliczFn::tlogpow(parse_real(text.substr(8), "p"));
  throw ParseError("unknown Psi selector '" + std::string(text) +
                   "' (expected power:ALPHA, tlog1p, tloge, tlogpow:P, tloglog)");
}

std::vector<OrliczFn> builtin_orlicz_functions() {
  return {OrliczFn::power(1.5),   OrliczFn::power(2.0), OrliczFn::tlog1p(),
          OrliczFn::tloge(),      OrliczFn::tlogpow(1.0), OrliczFn::tlogpow(2.0),
          OrliczFn::tloglog()};
}

double psi_eval(const OrliczFn& psi, double t) {
  if (std::isnan(t) || t < 0.0) throw DomainError("Psi is defined on [0, inf)");
  if (t == 0.0) return 0.0;
  switch (psi.kind()) {
    case OrliczKind::Power: return std::pow(t, psi.parameter());
    case OrliczKind::TLog1p: return t * std::log1p(t);
    case OrliczKind::TLogE: return t * std::log(kE + t);
    case OrliczKind::TLogPow: return t * std::pow(std::log(kE + t), psi.parameter());
    case OrliczKind::TLogLog: return t * std::log1p(std::log1p(t));
  }
  return 0.0;
}

double log_psi_eval(const OrliczFn& psi, double t) {
  if (std::isnan(t) || t < 0.0) throw DomainError("Psi is defined on [0, inf)");
  if (t == 0.0) return -INFINITY;
  const double log_t = std::log(t);
  switch (psi.kind()) {
    case OrliczKind::Power: return psi.parameter() * log_t;
    case OrliczKind::TLog1p: return log_t + std::log(std::log1p(t));
    case OrliczKind::TLogE: return log_t + std::log(std::log(kE + t));
    case OrliczKind::TLogPow: return log_t + psi.parameter() * std::log(std::log(kE + t));
    case OrliczKind::TLogLog: return log_t + std::log(std::log1p(std::log1p(t)));
  }
  return -INFINITY;
}

double phi(const OrliczFn& psi, double T) {
  if (std::isnan(T) || !(T > 0.0)) throw DomainError("phi(T) needs T > 0");
  if (T >= 1.0) return T / psi_eval(psi, T);
  // Below 1 the closed form is not assumed: scan a geometric grid on [T, 1].
  double best = 1.0 / psi_eval(psi, 1.0);
  const double log_span = -std::log(T);
  for (int i = 0; i < kPhiGridPoints; ++i) {
    const double t = std::exp(-log_span * (1.0 - static_cast<double>(i) / (kPhiGridPoints - 1)));
    best = std::max(best, t / psi_eval(psi, t));
  }
  return std::max(best, T / psi_eval(psi, T));
}

double linear_domination_threshold(const OrliczFn& psi) {
  if (psi.kind() == OrliczKind::TLogLog) return std::exp(kE - 1.0) - 1.0;
  return kE;
}

SuperlinearityReport superlinearity_report(const OrliczFn& psi, int grid_max_exponent) {
  if (grid_max_exponent < 4) throw DomainError("superlinearity grid needs exponent >= 4");
  SuperlinearityReport report;
  report.ratios.reserve(static_cast<std::size_t>(grid_max_exponent) + 1);
  for (int k = 0; k <= grid_max_exponent; ++k) {
    const double t = std::ldexp(1.0, k);
    report.ratios.push_back(psi_eval(psi, t) / t);
  }
  report.monotone_beyond_1 = true;
  for (std::size_t k = 2; k < report.ratios.size(); ++k) {
    if (report.ratios[k] < report.ratios[k - 1]) report.monotone_beyond_1 = false;
  }
  report.final_ratio = report.ratios.back();
  return report;
}

}  // namespace entropy_lab

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace entropy_lab {

enum class OrliczKind {
  Power,    // t^alpha, alpha > 1
  TLog1p,   // t log(1 + t)
  TLogE,    // t log(e + t)
  TLogPow,  // t (log(e + t))^p, p >= 1
  TLogLog,  // t log(1 + log(1 + t))
};

/// A superlinear test function Psi. Only the built-in kinds exist: all of
/// them have t -> Psi(t)/t nondecreasing, which phi() relies on.
class OrliczFn {
 public:
  static OrliczFn power(double alpha);  // DomainError unless alpha > 1
  static OrliczFn tlog1p() { return OrliczFn(OrliczKind::TLog1p, 0.0); }
  static OrliczFn tloge() { return OrliczFn(OrliczKind::TLogE, 0.0); }
  static OrliczFn tlogpow(double p);  // DomainError unless p >= 1
  static OrliczFn tloglog() { return OrliczFn(OrliczKind::TLogLog, 0.0); }

  OrliczKind kind() const noexcept { return kind_; }
  /// alpha for Power, p for TLogPow, 0 otherwise.
  double parameter() const noexcept { return param_; }

  /// Selector string, e.g. "power:1.5", "tlog1p". Inverse of parse_orlicz.
  std::string name() const;

  friend bool operator==(const OrliczFn&, const OrliczFn&) = default;

 private:
  OrliczFn(OrliczKind kind, double param) : kind_(kind), param_(param) {}
  OrliczKind kind_;
  double param_;
};

/// Parses "power:ALPHA", "tlog1p", "tloge", "tlogpow:P", "tloglog".
OrliczFn parse_orlicz(std::string_view text);

std::vector<OrliczFn> builtin_orlicz_functions();

/// Psi(t). DomainError if t < 0 or NaN.
double psi_eval(const OrliczFn& psi, double t);

/// log Psi(t) for t > 0, evaluated without forming Psi(t); -inf at t = 0.
double log_psi_eval(const OrliczFn& psi, double t);

/// phi(T) = sup_{t >= T} t / Psi(t). DomainError for T <= 0 or NaN.
double phi(const OrliczFn& psi, double T);

/// A T0 with Psi(t) >= t for every t >= T0: e for every kind except TLogLog,
/// whose crossover is e^(e-1) - 1.
double linear_domination_threshold(const OrliczFn& psi);

struct SuperlinearityReport {
  std::vector<double> ratios;  // Psi(t)/t at t = 2^k, k = 0..K
  bool monotone_beyond_1 = false;
  double final_ratio = 0.0;
  // Finite-grid evidence only: Psi(t)/t -> infinity is not machine-checkable.
  bool grid_evidence_only = true;
};

/// DomainError if grid_max_exponent < 4.
SuperlinearityReport superlinearity_report(const OrliczFn& psi, int grid_max_exponent);

}  // namespace entropy_lab

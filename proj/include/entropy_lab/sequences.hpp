#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entropy_lab/density.hpp"
#include "entropy_lab/diagnostics.hpp"
#include "entropy_lab/orlicz.hpp"

namespace entropy_lab {

enum class FamilyKind {
  GhCounterexample,  // spike e^n on [0, e^-n/n), c_n elsewhere on [0,1]
  ConverseFails,     // 1 - 2/n on [0,1] plus spikes at n and 2n
  OrliczSpike,       // spike e^n on [0, 1/(n e^n log(1+n))), c_n elsewhere
  BoundedRatio,      // 1 + 1/n on [0, 1/2), 1 - 1/n on [1/2, 1)
  ShrinkingUniform,  // uniform on [0, 1 + 1/n)
  Custom,            // user-supplied members and limit
};

struct NRange {
  int min = 0;
  int max = 0;
  bool contains(int n) const noexcept { return n >= min && n <= max; }
  friend bool operator==(const NRange&, const NRange&) = default;
};

/// A density sequence n -> f_n together with its limit.
class FamilySpec {
 public:
  static FamilySpec gh_counterexample() { return FamilySpec(FamilyKind::GhCounterexample); }
  static FamilySpec converse_fails() { return FamilySpec(FamilyKind::ConverseFails); }
  static FamilySpec orlicz_spike() { return FamilySpec(FamilyKind::OrliczSpike); }
  static FamilySpec bounded_ratio() { return FamilySpec(FamilyKind::BoundedRatio); }
  static FamilySpec shrinking_uniform() { return FamilySpec(FamilyKind::ShrinkingUniform); }
  static FamilySpec custom(std::map<int, PiecewisePdf> members, PiecewisePdf limit);

  FamilyKind kind() const noexcept { return kind_; }
  /// CLI selector name ("gh-counterexample", ..., "custom").
  std::string name() const;
  /// Documented n range; for custom families the min and max provided n.
  NRange range() const;
  /// Every member index inside `r`: all integers for the built-in families,
  /// the provided indices for custom ones.
  std::vector<int> members_in(NRange r) const;

 private:
  struct CustomData {
    std::map<int, PiecewisePdf> members;
    PiecewisePdf limit;
  };
  explicit FamilySpec(FamilyKind kind) : kind_(kind) {}

  FamilyKind kind_;
  std::shared_ptr<const CustomData> custom_;

  friend PiecewisePdf generate(const FamilySpec& spec, int n);
  friend PiecewisePdf limit(const FamilySpec& spec);
};

std::vector<FamilySpec> builtin_families();

/// f_n. Throws RangeError when n is outside the family's range.
PiecewisePdf generate(const FamilySpec& spec, int n);
PiecewisePdf limit(const FamilySpec& spec);

/// alpha_n = 1 + 1/log n. RangeError for n < 3.
double gh_alpha(int n);

/// Log-spaced grid {a, 1e^k and 3e^k strictly between, b}.
std::vector<int> log_sweep(int a, int b);
/// log_sweep(3, cap) for built-in families, the member list for custom ones.
std::vector<int> default_sweep(const FamilySpec& spec);

/// Parses a family selector: a built-in name or "custom:PATH".
/// Throws ParseError for unknown names or unreadable files.
FamilySpec parse_family(std::string_view selector);

/// {"pdfs": [{"n": int, "pieces": [...]}], "limit": {"pieces": [...]}}
FamilySpec family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const FamilySpec& spec, const std::vector<int>& ns);

/// A moment column: a fixed Psi, a fixed alpha, or the moving exponent
/// alpha_n = 1 + 1/log n.
struct MomentDescriptor {
  enum class Kind { Orlicz, FixedAlpha, MovingAlpha };
  Kind kind = Kind::FixedAlpha;
  std::optional<OrliczFn> psi;
  double alpha = 2.0;

  static MomentDescriptor orlicz(OrliczFn psi) { return {Kind::Orlicz, psi, 0.0}; }
  static MomentDescriptor fixed_alpha(double alpha);
  static MomentDescriptor moving_alpha() { return {Kind::MovingAlpha, std::nullopt, 0.0}; }

  /// Column name: "tlog1p_moment", "power1.5_moment", "alpha2_moment", "alpha_n_moment".
  std::string column_name() const;
  double evaluate(const PiecewisePdf& f_n, int n) const;
};

struct DiagnosticsRow {
  int n = 0;
  double entropy = 0.0;
  double tv_to_limit = 0.0;
  double integrand_mass = 0.0;
  std::vector<std::pair<std::string, double>> moments;  // in descriptor order
};

std::vector<DiagnosticsRow> convergence_report(const FamilySpec& spec,
                                               const std::vector<int>& n_values,
                                               const std::vector<MomentDescriptor>& moments);

enum class ProfileAxis { ThresholdM, RadiusR };

struct ProfileRow {
  double grid_value = 0.0;
  double value = 0.0;  // sup over n
  int argmax_n = 0;    // smallest n attaining the sup
};

struct ProfileTable {
  ProfileAxis axis = ProfileAxis::ThresholdM;
  std::optional<TailIntegrand> integrand;  // radius profiles only
  NRange n_range;
  std::vector<ProfileRow> rows;
};

/// sup_n equi_integrability_mass(f_n, M) for each M in the grid.
ProfileTable ui_profile(const FamilySpec& spec, const std::vector<double>& M_grid, NRange n_range);

/// sup_n tail_mass(f_n, R, integrand) for each R in the grid.
ProfileTable tightness_profile(const FamilySpec& spec, const std::vector<double>& R_grid,
                               NRange n_range, TailIntegrand integrand);

struct HypothesisConfig {
  std::vector<double> fixed_alphas{2.0};
  std::vector<OrliczFn> psis{OrliczFn::tlog1p()};
  double moment_bound = 10.0;
  double density_bound = 10.0;
  double beta = 2.0;
  double beta_moment_bound = 10.0;
  double ratio_bound = 2.0;
  double support_bound = 10.0;
};

struct Witness {
  double value = 0.0;  // sup over the range
  int n = 0;           // where it is attained
  double bound = 0.0;
};

struct Verdict {
  std::string condition;  // fixed_alpha, orlicz, bounded_density_moment, bounded_ratio, bounded_support
  std::string parameter;  // e.g. "alpha=2", "psi=tlog1p", "beta=2"
  bool holds_on_range = false;
  Witness witness;
  std::optional<Witness> secondary;  // the beta-moment for bounded_density_moment
  std::optional<int> first_violation_n;
};

/// Finite-range evidence for the sufficient conditions; never a proof.
struct HypothesisReport {
  std::string family;
  NRange n_range;
  std::vector<Verdict> verdicts;
};

HypothesisReport check_hypotheses(const FamilySpec& spec, NRange n_range,
                                  const HypothesisConfig& config = {});

}  // namespace entropy_lab

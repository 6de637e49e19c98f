#include "entropy_lab/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/pdf_io.hpp"

namespace entropy_lab {

namespace {

constexpr int kLargeCap = 1'000'000;
constexpr int kConverseFailsCap = 700;  // support end 2n + e^n/n must stay finite

void require_in_range(const FamilySpec& spec, int n) {
  const auto r = spec.range();
  if (!r.contains(n)) {
    std::ostringstream os;
    os << spec.name() << ": n = " << n << " outside supported range [" << r.min << ", " << r.max
       << "]";
    throw RangeError(os.str());
  }
}

// Spike of height e^n starting at 0 with the given log width, then a
// background constant on the rest of [0, 1) carrying mass 1 - spike mass.
PiecewisePdf spike_on_unit_interval(double n, double log_width, double spike_mass) {
  const double width = std::exp(log_width);
  const double log_bg_len = std::log1p(-width);
  // c = (1 - spike_mass) / (1 - width)
  const double log_c = std::log1p(-spike_mass) - log_bg_len;
  return make_pdf({Piece{0.0, log_width, n}, Piece{width, log_bg_len, log_c}});
}

PiecewisePdf gh_member(int n) {
  const double x = n;
  const double log_delta = -x - std::log(x);
  return spike_on_unit_interval(x, log_delta, 1.0 / x);
}

PiecewisePdf converse_fails_member(int n) {
  const double x = n;
  const double log_n = std::log(x);
  return make_pdf({Piece{0.0, 0.0, std::log1p(-2.0 / x)},
                   Piece{x, -x - log_n, x},
                   Piece{2.0 * x, x - log_n, -x}});
}

PiecewisePdf orlicz_spike_member(int n) {
  const double x = n;
  const double log_log1p = std::log(std::log1p(x));
  const double log_delta = -x - std::log(x) - log_log1p;
  // spike mass e^n delta_n = 1 / (n log(1+n))
  return spike_on_unit_interval(x, log_delta, 1.0 / (x * std::log1p(x)));
}

PiecewisePdf bounded_ratio_member(int n) {
  const double inv = 1.0 / n;
  const double log_half = -std::log(2.0);
  return make_pdf({Piece{0.0, log_half, std::log1p(inv)}, Piece{0.5, log_half, std::log1p(-inv)}});
}

PiecewisePdf shrinking_uniform_member(int n) {
  const double log_w = std::log1p(1.0 / n);
  return make_pdf({Piece{0.0, log_w, -log_w}});
}

void validate_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw DomainError(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !(grid[i] > 0.0)) {
      throw DomainError(std::string(what) + " grid values must be finite and > 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError(std::string(what) + " grid must be strictly increasing");
    }
  }
}

void validate_n_range(const FamilySpec& spec, NRange r) {
  if (r.min > r.max) throw RangeError("n range has min > max");
  require_in_range(spec, r.min);
  require_in_range(spec, r.max);
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

FamilySpec FamilySpec::custom(std::map<int, PiecewisePdf> members, PiecewisePdf limit) {
  if (members.empty()) throw ParseError("custom family needs at least one member");
  FamilySpec spec(FamilyKind::Custom);
  spec.custom_ = std::make_shared<const CustomData>(CustomData{std::move(members), std::move(limit)});
  return spec;
}

std::string FamilySpec::name() const {
  switch (kind_) {
    case FamilyKind::GhCounterexample: return "gh-counterexample";
    case FamilyKind::ConverseFails: return "converse-fails";
    case FamilyKind::OrliczSpike: return "orlicz-spike";
    case FamilyKind::BoundedRatio: return "bounded-ratio";
    case FamilyKind::ShrinkingUniform: return "shrinking-uniform";
    case FamilyKind::Custom: return "custom";
  }
  return {};
}

NRange FamilySpec::range() const {
  switch (kind_) {
    case FamilyKind::GhCounterexample: return {3, kLargeCap};
    case FamilyKind::ConverseFails: return {3, kConverseFailsCap};
    case FamilyKind::OrliczSpike: return {2, kLargeCap};
    case FamilyKind::BoundedRatio: return {2, kLargeCap};
    case FamilyKind::ShrinkingUniform: return {2, kLargeCap};
    case FamilyKind::Custom:
      return {custom_->members.begin()->first, custom_->members.rbegin()->first};
  }
  return {};
}

std::vector<int> FamilySpec::members_in(NRange r) const {
  std::vector<int> out;
  if (kind_ == FamilyKind::Custom) {
    for (const auto& [n, _] : custom_->members) {
      if (r.contains(n)) out.push_back(n);
    }
    return out;
  }
  const auto own = range();
  for (int n = std::max(r.min, own.min); n <= std::min(r.max, own.max); ++n) out.push_back(n);
  return out;
}

std::vector<FamilySpec> builtin_families() {
  return {FamilySpec::gh_counterexample(), FamilySpec::converse_fails(),
          FamilySpec::orlicz_spike(), FamilySpec::bounded_ratio(),
          FamilySpec::shrinking_uniform()};
}

PiecewisePdf generate(const FamilySpec& spec, int n) {
  if (spec.kind_ == FamilyKind::Custom) {
    auto it = spec.custom_->members.find(n);
    if (it == spec.custom_->members.end()) {
      throw RangeError("custom family has no member n = " + std::to_string(n));
    }
    return it->second;
  }
  require_in_range(spec, n);
  switch (spec.kind_) {
    case FamilyKind::GhCounterexample: return gh_member(n);
    case FamilyKind::ConverseFails: return converse_fails_member(n);
    case FamilyKind::OrliczSpike: return orlicz_spike_member(n);
    case FamilyKind::BoundedRatio: return bounded_ratio_member(n);
    case FamilyKind::ShrinkingUniform: return shrinking_uniform_member(n);
    case FamilyKind::Custom: break;
  }
  throw RangeError("unknown family");
}

PiecewisePdf limit(const FamilySpec& spec) {
  if (spec.kind_ == FamilyKind::Custom) return spec.custom_->limit;
  return uniform_pdf(0.0, 1.0);
}

double gh_alpha(int n) {
  if (n < 3) throw RangeError("alpha_n = 1 + 1/log n is used for n >= 3");
  return 1.0 + 1.0 / std::log(static_cast<double>(n));
}

std::vector<int> log_sweep(int a, int b) {
  if (a > b) throw RangeError("log sweep needs a <= b");
  std::vector<int> out{a};
  for (long long decade = 1; decade <= b; decade *= 10) {
    for (long long v : {decade, 3 * decade}) {
      if (v > a && v < b) out.push_back(static_cast<int>(v));
    }
  }
  if (b != a) out.push_back(b);
  return out;
}

std::vector<int> default_sweep(const FamilySpec& spec) {
  if (spec.kind() == FamilyKind::Custom) return spec.members_in(spec.range());
  return log_sweep(3, spec.range().max);
}

FamilySpec parse_family(std::string_view selector) {
  if (selector == "gh-counterexample") return FamilySpec::gh_counterexample();
  if (selector == "converse-fails") return FamilySpec::converse_fails();
  if (selector == "orlicz-spike") return FamilySpec::orlicz_spike();
  if (selector == "bounded-ratio") return FamilySpec::bounded_ratio();
  if (selector == "shrinking-uniform") return FamilySpec::shrinking_uniform();
  if (selector.starts_with("custom:")) {
    const std::string path(selector.substr(7));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open custom family file '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("custom family file '" + path + "': " + e.what());
    }
    return family_from_json(j);
  }
  throw ParseError("unknown family '" + std::string(selector) +
                   "' (expected gh-counterexample, converse-fails, orlicz-spike, bounded-ratio, "
                   "shrinking-uniform, custom:PATH)");
}

FamilySpec family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("pdfs") || !j.contains("limit")) {
    throw ParseError("custom family JSON needs \"pdfs\" and \"limit\"");
  }
  const auto& pdfs = j.at("pdfs");
  if (!pdfs.is_array()) throw ParseError("\"pdfs\" must be an array");
  std::map<int, PiecewisePdf> members;
  for (const auto& entry : pdfs) {
    if (!entry.is_object() || !entry.contains("n") || !entry.at("n").is_number_integer() ||
        !entry.contains("pieces")) {
      throw ParseError("each \"pdfs\" entry needs an integer \"n\" and \"pieces\"");
    }
    const int n = entry.at("n").get<int>();
    if (members.count(n)) throw ParseError("duplicate member n = " + std::to_string(n));
    members.emplace(n, pdf_from_json(entry.at("pieces")));
  }
  const auto& lim = j.at("limit");
  if (!lim.is_object() || !lim.contains("pieces")) {
    throw ParseError("\"limit\" must be an object with \"pieces\"");
  }
  return FamilySpec::custom(std::move(members), pdf_from_json(lim.at("pieces")));
}

nlohmann::json family_to_json(const FamilySpec& spec, const std::vector<int>& ns) {
  nlohmann::json j;
  j["kind"] = "pdfs";
  j["family"] = spec.name();
  j["pdfs"] = nlohmann::json::array();
  for (int n : ns) {
    j["pdfs"].push_back({{"n", n}, {"pieces", pdf_to_json(generate(spec, n))}});
  }
  j["limit"] = {{"pieces", pdf_to_json(limit(spec))}};
  return j;
}

MomentDescriptor MomentDescriptor::fixed_alpha(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 1.0)) throw DomainError("fixed alpha must be > 1");
  return {Kind::FixedAlpha, std::nullopt, alpha};
}

std::string MomentDescriptor::column_name() const {
  switch (kind) {
    case Kind::Orlicz: {
      std::string name = psi->name();
      name.erase(std::remove(name.begin(), name.end(), ':'), name.end());
      return name + "_moment";
    }
    case Kind::FixedAlpha: return "alpha" + format_number(alpha) + "_moment";
    case Kind::MovingAlpha: return "alpha_n_moment";
  }
  return {};
}

double MomentDescriptor::evaluate(const PiecewisePdf& f_n, int n) const {
  switch (kind) {
    case Kind::Orlicz: return orlicz_moment(f_n, *psi);
    case Kind::FixedAlpha: return alpha_moment(f_n, alpha);
    case Kind::MovingAlpha: return alpha_moment(f_n, gh_alpha(n));
  }
  return NAN;
}

std::vector<DiagnosticsRow> convergence_report(const FamilySpec& spec,
                                               const std::vector<int>& n_values,
                                               const std::vector<MomentDescriptor>& moments) {
  const auto lim = limit(spec);
  std::vector<DiagnosticsRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    const auto f_n = generate(spec, n);
    DiagnosticsRow row;
    row.n = n;
    row.entropy = entropy(f_n);
    row.tv_to_limit = tv_distance(f_n, lim);
    row.integrand_mass = entropy_integrand_mass(f_n);
    for (const auto& m : moments) row.moments.emplace_back(m.column_name(), m.evaluate(f_n, n));
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const DiagnosticsRow& a, const DiagnosticsRow& b) { return a.n < b.n; });
  return rows;
}

namespace {

template <typename Metric>
ProfileTable sweep_profile(const FamilySpec& spec, const std::vector<double>& grid, NRange r,
                           Metric metric) {
  ProfileTable table;
  table.n_range = r;
  for (double v : grid) table.rows.push_back(ProfileRow{v, 0.0, 0});
  bool first = true;
  for (int n : spec.members_in(r)) {
    const auto f_n = generate(spec, n);
    for (auto& row : table.rows) {
      const double value = metric(f_n, row.grid_value);
      if (first || value > row.value) {
        row.value = value;
        row.argmax_n = n;
      }
    }
    first = false;
  }
  return table;
}

}  // namespace

ProfileTable ui_profile(const FamilySpec& spec, const std::vector<double>& M_grid, NRange n_range) {
  validate_grid(M_grid, "threshold");
  validate_n_range(spec, n_range);
  auto table = sweep_profile(spec, M_grid, n_range, [](const PiecewisePdf& f, double M) {
    return equi_integrability_mass(f, M);
  });
  table.axis = ProfileAxis::ThresholdM;
  return table;
}

ProfileTable tightness_profile(const FamilySpec& spec, const std::vector<double>& R_grid,
                               NRange n_range, TailIntegrand integrand) {
  validate_grid(R_grid, "radius");
  validate_n_range(spec, n_range);
  auto table = sweep_profile(spec, R_grid, n_range, [integrand](const PiecewisePdf& f, double R) {
    return tail_mass(f, R, integrand);
  });
  table.axis = ProfileAxis::RadiusR;
  table.integrand = integrand;
  return table;
}

HypothesisReport check_hypotheses(const FamilySpec& spec, NRange n_range,
                                  const HypothesisConfig& config) {
  validate_n_range(spec, n_range);
  const auto lim = limit(spec);

  struct Tracker {
    double sup = -INFINITY;
    int argmax = 0;
    std::optional<int> first_violation;
    void update(double value, int n, double bound) {
      if (value > sup) {
        sup = value;
        argmax = n;
      }
      if (!first_violation && !(value <= bound)) first_violation = n;
    }
  };

  std::vector<Tracker> alpha_t(config.fixed_alphas.size());
  std::vector<Tracker> psi_t(config.psis.size());
  Tracker density_t;
  Tracker beta_t;
  Tracker ratio_t;
  Tracker support_t;

  for (int n : spec.members_in(n_range)) {
    const auto f_n = generate(spec, n);
    for (std::size_t i = 0; i < config.fixed_alphas.size(); ++i) {
      alpha_t[i].update(alpha_moment(f_n, config.fixed_alphas[i]), n, config.moment_bound);
    }
    for (std::size_t i = 0; i < config.psis.size(); ++i) {
      psi_t[i].update(orlicz_moment(f_n, config.psis[i]), n, config.moment_bound);
    }
    density_t.update(sup_density(f_n), n, config.density_bound);
    beta_t.update(abs_moment(f_n, config.beta), n, config.beta_moment_bound);
    ratio_t.update(ratio_sup(f_n, lim), n, config.ratio_bound);
    support_t.update(support_extent(f_n), n, config.support_bound);
  }

  auto verdict = [](std::string condition, std::string parameter, const Tracker& t,
                    double bound) {
    Verdict v;
    v.condition = std::move(condition);
    v.parameter = std::move(parameter);
    v.witness = Witness{t.sup, t.argmax, bound};
    v.holds_on_range = !t.first_violation.has_value();
    v.first_violation_n = t.first_violation;
    return v;
  };

  HypothesisReport report;
  report.family = spec.name();
  report.n_range = n_range;
  for (std::size_t i = 0; i < config.fixed_alphas.size(); ++i) {
    report.verdicts.push_back(verdict("fixed_alpha", "alpha=" + format_number(config.fixed_alphas[i]),
                                      alpha_t[i], config.moment_bound));
  }
  for (std::size_t i = 0; i < config.psis.size(); ++i) {
    report.verdicts.push_back(
        verdict("orlicz", "psi=" + config.psis[i].name(), psi_t[i], config.moment_bound));
  }
  {
    Verdict v = verdict("bounded_density_moment", "beta=" + format_number(config.beta), density_t,
                        config.density_bound);
    v.secondary = Witness{beta_t.sup, beta_t.argmax, config.beta_moment_bound};
    v.holds_on_range = !density_t.first_violation && !beta_t.first_violation;
    if (!v.holds_on_range) {
      v.first_violation_n = std::min(density_t.first_violation.value_or(n_range.max + 1),
                                     beta_t.first_violation.value_or(n_range.max + 1));
    }
    report.verdicts.push_back(std::move(v));
  }
  report.verdicts.push_back(verdict("bounded_ratio", "", ratio_t, config.ratio_bound));
  report.verdicts.push_back(verdict("bounded_support", "", support_t, config.support_bound));
  return report;
}

}  // namespace entropy_lab

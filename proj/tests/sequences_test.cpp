#include "entropy_lab/sequences.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/pdf_io.hpp"
#include "test_support.hpp"

namespace entropy_lab {
namespace {

constexpr double kE = std::numbers::e;

const FamilySpec kGh = FamilySpec::gh_counterexample();
const FamilySpec kCf = FamilySpec::converse_fails();
const FamilySpec kOs = FamilySpec::orlicz_spike();
const FamilySpec kBr = FamilySpec::bounded_ratio();
const FamilySpec kSu = FamilySpec::shrinking_uniform();

/// TV(f_n, f) in closed form for the built-in families.
double tv_closed_form(const FamilySpec& spec, int n) {
  switch (spec.kind()) {
    case FamilyKind::GhCounterexample:
      return oracle::gh(n).tv;
    case FamilyKind::OrliczSpike: {
      const auto o = oracle::orlicz_spike(n);
      return (o.spike_mass - o.delta) + (1.0 - o.c) * (1.0 - o.delta);
    }
    case FamilyKind::ConverseFails:
      return 4.0 / n;
    case FamilyKind::BoundedRatio:
      return 1.0 / n;
    case FamilyKind::ShrinkingUniform:
      return 2.0 / (n + 1.0);
    case FamilyKind::Custom:
      break;
  }
  return NAN;
}

TEST(Generate, GhAtTen) {
  const auto f = generate(kGh, 10);
  ASSERT_EQ(f.size(), 2u);
  const auto o = oracle::gh(10);
  EXPECT_NEAR(f.pieces()[0].value(), std::exp(10.0), 1e-9);
  EXPECT_NEAR(f.pieces()[0].width(), o.delta, 1e-20);
  EXPECT_NEAR(f.pieces()[1].value(), o.c, 1e-15);
  EXPECT_NEAR(f.pieces()[1].end(), 1.0, 1e-15);
  EXPECT_NEAR(mass(f), 1.0, 1e-15);
}

TEST(Generate, ConverseFailsAtTen) {
  const auto f = generate(kCf, 10);
  ASSERT_EQ(f.size(), 3u);
  const double masses[] = {0.8, 0.1, 0.1};
  const double starts[] = {0.0, 10.0, 20.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::exp(f.pieces()[i].log_mass()), masses[i], 1e-15);
    EXPECT_EQ(f.pieces()[i].start, starts[i]);
  }
}

TEST(Generate, BoundedRatioWithinConstantTwo) {
  const auto u = uniform_pdf(0.0, 1.0);
  for (int n : {2, 3, 10, 1000}) {
    const double r = ratio_sup(generate(kBr, n), u);
    EXPECT_NEAR(r, 1.0 + 1.0 / n, 1e-15);
    EXPECT_LE(r, 2.0);
  }
}

TEST(Generate, RangeChecks) {
  EXPECT_THROW(generate(kGh, 2), RangeError);
  EXPECT_THROW(generate(kGh, 1'000'001), RangeError);
  EXPECT_THROW(generate(kCf, 2), RangeError);
  EXPECT_THROW(generate(kCf, 701), RangeError);
  EXPECT_NO_THROW(generate(kCf, 700));
  EXPECT_THROW(generate(kOs, 1), RangeError);
  EXPECT_THROW(generate(kBr, 1), RangeError);
  EXPECT_THROW(generate(kSu, 1), RangeError);
  EXPECT_EQ(kGh.range(), (NRange{3, 1'000'000}));
  EXPECT_EQ(kCf.range(), (NRange{3, 700}));
  EXPECT_EQ(kOs.range(), (NRange{2, 1'000'000}));
}

TEST(Limit, Examples) {
  for (const auto& fam : builtin_families()) {
    const auto f = limit(fam);
    ASSERT_EQ(f.size(), 1u) << fam.name();
    EXPECT_EQ(f.pieces()[0].start, 0.0);
    EXPECT_EQ(f.pieces()[0].width(), 1.0);
    EXPECT_EQ(f.pieces()[0].log_value, 0.0);
    EXPECT_EQ(entropy(f), 0.0);
  }
}

TEST(GhAlpha, Examples) {
  EXPECT_NEAR(gh_alpha(3), 1.9102, 5e-5);
  EXPECT_NEAR(gh_alpha(20), 1.3338, 5e-5);
  EXPECT_GT(gh_alpha(10), gh_alpha(100));
  EXPECT_THROW(gh_alpha(2), RangeError);
}

TEST(LogSweep, Grid) {
  EXPECT_EQ(log_sweep(3, 1000), (std::vector<int>{3, 10, 30, 100, 300, 1000}));
  EXPECT_EQ(log_sweep(3, 700), (std::vector<int>{3, 10, 30, 100, 300, 700}));
  EXPECT_EQ(log_sweep(5, 5), (std::vector<int>{5}));
  EXPECT_THROW(log_sweep(5, 4), RangeError);
}

TEST(ParseFamily, Names) {
  for (const auto& fam : builtin_families()) EXPECT_EQ(parse_family(fam.name()).kind(), fam.kind());
  EXPECT_THROW(parse_family("gaussian"), ParseError);
  EXPECT_THROW(parse_family("custom:/nonexistent/file.json"), ParseError);
}

TEST(CustomFamily, JsonRoundTrip) {
  const auto j = family_to_json(kCf, {11, 50});
  const auto custom = family_from_json(j);
  EXPECT_EQ(custom.kind(), FamilyKind::Custom);
  EXPECT_EQ(custom.range(), (NRange{11, 50}));
  EXPECT_EQ(custom.members_in({1, 100}), (std::vector<int>{11, 50}));
  EXPECT_EQ(default_sweep(custom), (std::vector<int>{11, 50}));
  for (int n : {11, 50}) {
    EXPECT_EQ(entropy(generate(custom, n)), entropy(generate(kCf, n)));
    EXPECT_EQ(tv_distance(generate(custom, n), limit(custom)), tv_distance(generate(kCf, n), limit(kCf)));
  }
  EXPECT_THROW(generate(custom, 12), RangeError);

  const auto path = std::filesystem::temp_directory_path() / "entropy_lab_custom_family.json";
  std::ofstream(path) << j.dump();
  const auto parsed = parse_family("custom:" + path.string());
  EXPECT_EQ(entropy(generate(parsed, 50)), entropy(generate(kCf, 50)));
  std::filesystem::remove(path);
}

TEST(CustomFamily, Malformed) {
  using nlohmann::json;
  EXPECT_THROW(family_from_json(json::object()), ParseError);
  const auto u = pdf_to_json(uniform_pdf(0.0, 1.0));
  EXPECT_THROW(family_from_json(json{{"pdfs", json::array()}, {"limit", {{"pieces", u}}}}), ParseError);
  json dup{{"pdfs", json::array({json{{"n", 1}, {"pieces", u}}, json{{"n", 1}, {"pieces", u}}})},
           {"limit", json{{"pieces", u}}}};
  EXPECT_THROW(family_from_json(dup), ParseError);
  json bad_mass{{"pdfs", json::array({json{{"n", 1}, {"pieces", pdf_to_json(uniform_pdf(0.0, 2.0))}}})},
                {"limit", json{{"pieces", u}}}};
  bad_mass["pdfs"][0]["pieces"][0]["log_value"] = 0.0;
  EXPECT_THROW(family_from_json(bad_mass), MassError);
}

TEST(MomentDescriptor, Columns) {
  EXPECT_EQ(MomentDescriptor::orlicz(OrliczFn::tlog1p()).column_name(), "tlog1p_moment");
  EXPECT_EQ(MomentDescriptor::orlicz(OrliczFn::power(1.5)).column_name(), "power1.5_moment");
  EXPECT_EQ(MomentDescriptor::fixed_alpha(2.0).column_name(), "alpha2_moment");
  EXPECT_EQ(MomentDescriptor::moving_alpha().column_name(), "alpha_n_moment");
  EXPECT_THROW(MomentDescriptor::fixed_alpha(1.0), DomainError);
}

TEST(ConvergenceReport, GhMovingAlpha) {
  const auto rows = convergence_report(kGh, {10, 100, 1000}, {MomentDescriptor::moving_alpha()});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    const auto o = oracle::gh(r.n);
    EXPECT_NEAR(r.entropy, o.entropy, 1e-10);
    EXPECT_NEAR(r.tv_to_limit, o.tv, 1e-10);
    ASSERT_EQ(r.moments.size(), 1u);
    EXPECT_EQ(r.moments[0].first, "alpha_n_moment");
    EXPECT_NEAR(r.moments[0].second, kE + o.alpha_n_background, 1e-10);
  }
  EXPECT_LT(std::abs(rows.back().entropy + 1.0), std::abs(rows.front().entropy + 1.0));
}

TEST(ConvergenceReport, OrliczSpikeColumns) {
  const auto rows = convergence_report(
      kOs, {10, 100, 1000}, {MomentDescriptor::orlicz(OrliczFn::tlog1p()), MomentDescriptor::orlicz(OrliczFn::power(1.5))});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_LE(rows[i].moments[0].second, 1.1);
    if (i > 0) {
      EXPECT_GT(rows[i].moments[1].second, rows[i - 1].moments[1].second);
    }
  }
}

TEST(ConvergenceReport, ShrinkingUniform) {
  const auto rows = convergence_report(kSu, {2, 4, 8}, {});
  double prev_tv = INFINITY;
  for (const auto& r : rows) {
    EXPECT_NEAR(r.entropy, std::log1p(1.0 / r.n), 1e-12);
    EXPECT_LT(r.tv_to_limit, prev_tv);
    prev_tv = r.tv_to_limit;
  }
}

TEST(UiProfile, Examples) {
  const auto su = ui_profile(kSu, {1.0, 2.0, 10.0}, {2, 100});
  for (const auto& row : su.rows) EXPECT_EQ(row.value, 0.0);

  const auto g = ui_profile(kGh, {100.0}, {3, 50});
  ASSERT_EQ(g.rows.size(), 1u);
  EXPECT_GE(g.rows[0].value, 1.0 - 1e-12);
  EXPECT_LE(g.rows[0].value, 1.0 + 1e-12);

  // Spike g-value n e^n exceeds 100 from n = 4 on, so the sup is 1/log 5.
  const auto o = ui_profile(kOs, {100.0}, {3, 50});
  EXPECT_NEAR(o.rows[0].value, 1.0 / std::log(5.0), 1e-12);
  EXPECT_EQ(o.rows[0].argmax_n, 4);

  EXPECT_THROW(ui_profile(kGh, {}, {3, 50}), DomainError);
  EXPECT_THROW(ui_profile(kGh, {10.0, 1.0}, {3, 50}), DomainError);
  EXPECT_THROW(ui_profile(kGh, {10.0}, {2, 50}), RangeError);
}

TEST(TightnessProfile, Examples) {
  for (const auto& fam : {kGh, kOs, kBr}) {
    const auto t = tightness_profile(fam, {1.0, 2.0}, {3, 60}, TailIntegrand::EntropyIntegrand);
    for (const auto& row : t.rows) EXPECT_EQ(row.value, 0.0);
  }
  const auto e = tightness_profile(kCf, {5.0, 10.0, 50.0}, {11, 100}, TailIntegrand::EntropyIntegrand);
  ASSERT_EQ(e.rows.size(), 3u);
  EXPECT_NEAR(e.rows[1].value, 2.0, 1e-10);
  const auto d = tightness_profile(kCf, {10.0}, {11, 100}, TailIntegrand::Density);
  EXPECT_NEAR(d.rows[0].value, 2.0 / 11.0, 1e-15);
  EXPECT_EQ(d.rows[0].argmax_n, 11);
}

TEST(CheckHypotheses, Examples) {
  const auto br = check_hypotheses(kBr, {2, 1000});
  bool seen = false;
  for (const auto& v : br.verdicts) {
    if (v.condition != "bounded_ratio") continue;
    seen = true;
    EXPECT_TRUE(v.holds_on_range);
    EXPECT_DOUBLE_EQ(v.witness.value, 1.5);
    EXPECT_EQ(v.witness.n, 2);
  }
  EXPECT_TRUE(seen);

  HypothesisConfig cfg;
  cfg.fixed_alphas = {2.0};
  const auto gh = check_hypotheses(kGh, {3, 100}, cfg);
  for (const auto& v : gh.verdicts) {
    if (v.condition != "fixed_alpha") continue;
    EXPECT_FALSE(v.holds_on_range);
    EXPECT_GE(v.witness.value, 100.0);
    EXPECT_EQ(v.witness.n, 100);
    ASSERT_TRUE(v.first_violation_n.has_value());
  }

  const auto os = check_hypotheses(kOs, {2, 1000});
  for (const auto& v : os.verdicts) {
    if (v.condition != "orlicz") continue;
    EXPECT_TRUE(v.holds_on_range);
    EXPECT_LT(v.witness.value, 1.5);
    EXPECT_FALSE(v.first_violation_n.has_value());
  }

  const auto su = check_hypotheses(kSu, {2, 1000});
  for (const auto& v : su.verdicts) {
    if (v.condition != "bounded_density_moment") continue;
    EXPECT_TRUE(v.holds_on_range);
    EXPECT_DOUBLE_EQ(v.witness.value, 1.0 / (1.0 + 1.0 / 1000));
    ASSERT_TRUE(v.secondary.has_value());
    EXPECT_NEAR(v.secondary->value, 1.5 * 1.5 / 3.0, 1e-15);
  }
}

// --- properties ---------------------------------------------------------------

TEST(SequenceProperties, NormalizationAcrossSweep) {
  for (const auto& fam : builtin_families()) {
    for (int n : default_sweep(fam)) {
      ASSERT_NEAR(mass(generate(fam, n)), 1.0, 1e-9) << fam.name() << " " << n;
    }
  }
}

TEST(SequenceProperties, TvMatchesClosedFormAndVanishes) {
  for (const auto& fam : builtin_families()) {
    const auto f = limit(fam);
    double prev = INFINITY;
    for (int n : default_sweep(fam)) {
      const double tv = tv_distance(generate(fam, n), f);
      ASSERT_NEAR(tv, tv_closed_form(fam, n), 1e-10) << fam.name() << " " << n;
      ASSERT_LE(tv, prev);
      prev = tv;
    }
    EXPECT_LT(prev, 0.02) << fam.name();
  }
}

TEST(SequenceProperties, GhClaims) {
  for (int n : default_sweep(kGh)) {
    const auto f = generate(kGh, n);
    const auto o = oracle::gh(n);
    ASSERT_NEAR(entropy(f), o.entropy, 1e-10) << n;
    const double m = alpha_moment(f, gh_alpha(n));
    ASSERT_LE(m, kE + 1.0) << n;
    ASSERT_NEAR(m - o.alpha_n_background, kE, 1e-10) << n;
  }
  EXPECT_NEAR(entropy(generate(kGh, 1'000'000)), -1.0, 1e-5);
}

TEST(SequenceProperties, ConverseFailsCancellation) {
  for (int n : default_sweep(kCf)) {
    ASSERT_NEAR(entropy(generate(kCf, n)), oracle::converse_fails_entropy(n), 1e-10) << n;
  }
}

TEST(SequenceProperties, OrliczSpikeMoments) {
  double prev = 0.0;
  for (int n : default_sweep(kOs)) {
    const auto f = generate(kOs, n);
    const auto o = oracle::orlicz_spike(n);
    const double la = std::abs(std::log(o.c));
    const double bg_l1p = o.c * la * std::log1p(la) * (1.0 - o.delta);
    const double bg_15 = o.c * std::pow(la, 1.5) * (1.0 - o.delta);
    ASSERT_NEAR(orlicz_moment(f, OrliczFn::tlog1p()) - bg_l1p, 1.0, 1e-10) << n;
    const double spike15 = alpha_moment(f, 1.5) - bg_15;
    ASSERT_NEAR(spike15, std::sqrt(double(n)) / std::log1p(double(n)), 1e-10 * std::max(1.0, spike15)) << n;
    if (n > 50) {
      ASSERT_GT(spike15, prev);
    }
    prev = spike15;
  }
}

TEST(SequenceProperties, BoundedDomainGridImplications) {
  // GH: (B) fails at every M and entropy stays near -1.
  for (double M : {1.0, 100.0, 1e4}) {
    EXPECT_GE(ui_profile(kGh, {M}, {100, 1000}).rows[0].value, 1.0 - 1e-12);
  }
  EXPECT_GE(std::abs(entropy(generate(kGh, 1000))), 0.5);

  // BoundedRatio: the profile is 0 once M exceeds every g-value, and entropy -> 0.
  EXPECT_LT(ui_profile(kBr, {100.0}, {2, 1000}).rows[0].value, 0.05);
  EXPECT_LT(std::abs(entropy(generate(kBr, 1000))), 0.05);

  // OrliczSpike: both the profile and |H| decrease as n grows (at rate 1/log n).
  double prev_ui = INFINITY;
  double prev_h = INFINITY;
  for (int n_min : {10, 100, 1000, 10'000, 100'000}) {
    const double ui = ui_profile(kOs, {100.0}, {n_min, n_min * 10}).rows[0].value;
    const double h = std::abs(entropy(generate(kOs, n_min)));
    EXPECT_LT(ui, prev_ui);
    EXPECT_LT(h, prev_h);
    prev_ui = ui;
    prev_h = h;
  }
}

TEST(SequenceProperties, ProfilesNonincreasing) {
  const std::vector<double> M_grid{0.01, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4};
  const std::vector<double> R_grid{0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1e3};
  for (const auto& fam : builtin_families()) {
    const NRange r{std::max(3, fam.range().min), 60};
    std::vector<ProfileTable> tables{ui_profile(fam, M_grid, r),
                                     tightness_profile(fam, R_grid, r, TailIntegrand::Density),
                                     tightness_profile(fam, R_grid, r, TailIntegrand::EntropyIntegrand)};
    for (const auto& t : tables) {
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        EXPECT_TRUE(r.contains(t.rows[i].argmax_n)) << fam.name();
        if (i > 0) {
          EXPECT_LE(t.rows[i].value, t.rows[i - 1].value) << fam.name();
        }
      }
    }
  }
}

TEST(SequenceProperties, ArgmaxAttainsTheSup) {
  const auto t = ui_profile(kOs, {100.0, 1000.0}, {3, 40});
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.value, equi_integrability_mass(generate(kOs, row.argmax_n), row.grid_value));
  }
}

TEST(SequenceProperties, ReportRowInvariants) {
  for (const auto& fam : builtin_families()) {
    for (const auto& row : convergence_report(fam, default_sweep(fam), {})) {
      ASSERT_GE(row.tv_to_limit, 0.0);
      ASSERT_LE(row.tv_to_limit, 2.0);
      ASSERT_GE(row.integrand_mass, 0.0);
      ASSERT_GE(row.integrand_mass, std::abs(row.entropy) - 1e-12);
    }
  }
}

}  // namespace
}  // namespace entropy_lab

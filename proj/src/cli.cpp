#include "entropy_lab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/pdf_io.hpp"
#include "entropy_lab/sequences.hpp"

namespace entropy_lab::cli {

namespace {

using nlohmann::json;

enum class Format { Csv, Json };

struct UsageError : Error {
  using Error::Error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || v < -2147483647L || v > 2147483647L) {
    throw UsageError("not an integer: '" + s + "'");
  }
  return static_cast<int>(v);
}

struct NSpec {
  std::optional<NRange> range;  // "A..B"
  std::vector<int> list;        // "a,b,c"
};

NSpec parse_n(const std::string& text) {
  NSpec spec;
  if (auto pos = text.find(".."); pos != std::string::npos) {
    NRange r{parse_int(text.substr(0, pos)), parse_int(text.substr(pos + 2))};
    if (r.min > r.max) throw UsageError("--n range " + text + " is empty");
    spec.range = r;
    return spec;
  }
  for (const auto& item : split_list(text)) spec.list.push_back(parse_int(item));
  for (std::size_t i = 1; i < spec.list.size(); ++i) {
    if (spec.list[i] <= spec.list[i - 1]) throw UsageError("--n list must be increasing");
  }
  return spec;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& item : split_list(text)) grid.push_back(parse_double(item));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw UsageError("--grid values must be > 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw UsageError("--grid must be increasing");
  }
  return grid;
}

void require_members(const FamilySpec& family, const std::vector<int>& ns) {
  const auto r = family.range();
  for (int n : ns) {
    if (!r.contains(n) || family.members_in({n, n}).empty()) {
      throw UsageError("n = " + std::to_string(n) + " is outside the range of " + family.name() +
                       " [" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
    }
  }
}

std::vector<int> sweep_values(const FamilySpec& family, const std::optional<NSpec>& n) {
  std::vector<int> ns;
  if (!n) {
    ns = default_sweep(family);
  } else if (n->range) {
    ns = family.kind() == FamilyKind::Custom ? family.members_in(*n->range)
                                             : log_sweep(n->range->min, n->range->max);
    if (ns.empty()) throw UsageError("--n range selects no members of " + family.name());
  } else {
    ns = n->list;
  }
  require_members(family, ns);
  return ns;
}

NRange range_values(const FamilySpec& family, const std::optional<NSpec>& n, int default_max) {
  NRange r = family.range();
  if (!n) {
    r.max = std::min(r.max, std::max(r.min, default_max));
  } else if (n->range) {
    r = *n->range;
  } else {
    r = {n->list.front(), n->list.back()};
  }
  const auto own = family.range();
  if (!own.contains(r.min) || !own.contains(r.max)) {
    throw UsageError("--n range is outside the range of " + family.name() + " [" +
                     std::to_string(own.min) + ", " + std::to_string(own.max) + "]");
  }
  return r;
}

// --- output ---------------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // first column is n
};

Table report_table(const std::vector<DiagnosticsRow>& rows) {
  Table t;
  t.columns = {"n", "entropy", "tv", "integrand_mass"};
  if (!rows.empty()) {
    for (const auto& [name, _] : rows.front().moments) t.columns.push_back(name);
  }
  for (const auto& r : rows) {
    std::vector<double> values{static_cast<double>(r.n), r.entropy, r.tv_to_limit,
                               r.integrand_mass};
    for (const auto& [_, v] : r.moments) values.push_back(v);
    t.rows.push_back(std::move(values));
  }
  return t;
}

std::string csv_cell(const std::string& column, double v) {
  if (column == "n" || column == "argmax_n") return std::to_string(static_cast<long long>(v));
  return format_real(v);
}

std::string table_csv(const Table& t) {
  std::string s;
  for (std::size_t c = 0; c < t.columns.size(); ++c) s += (c ? "," : "") + t.columns[c];
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + csv_cell(t.columns[c], row[c]);
    s += '\n';
  }
  return s;
}

json table_rows_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (t.columns[c] == "n" || t.columns[c] == "argmax_n") {
        obj[t.columns[c]] = static_cast<long long>(row[c]);
      } else {
        obj[t.columns[c]] = number_to_json(row[c]);
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

struct Emitter {
  std::ostream& out;
  std::optional<std::string> path;

  void emit(const std::string& text) {
    if (!path) {
      out << text;
      return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw Error("cannot write output file '" + *path + "'");
    file << text;
  }
};

// --- demos -----------------------------------------------------------------

struct Assertion {
  std::string claim;
  int n = 0;
  std::string relation;  // "==", "<=", ">"
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

class AssertionLog {
 public:
  void equal(std::string claim, int n, double expected, double computed, double tol) {
    push(std::move(claim), n, "==", expected, computed, tol,
         std::abs(computed - expected) <= tol);
  }
  void at_most(std::string claim, int n, double bound, double computed) {
    push(std::move(claim), n, "<=", bound, computed, 0.0, computed <= bound);
  }
  void greater(std::string claim, int n, double previous, double computed) {
    push(std::move(claim), n, ">", previous, computed, 0.0, computed > previous);
  }
  const std::vector<Assertion>& items() const { return items_; }
  bool all_passed() const {
    return std::all_of(items_.begin(), items_.end(), [](const Assertion& a) { return a.passed; });
  }

 private:
  void push(std::string claim, int n, const char* rel, double expected, double computed,
            double tol, bool ok) {
    items_.push_back(Assertion{std::move(claim), n, rel, expected, computed, tol, ok});
  }
  std::vector<Assertion> items_;
};

struct Demo {
  std::string name;
  FamilySpec family;
  std::vector<int> default_ns;
  std::vector<MomentDescriptor> moments;
  // Extra per-row columns beyond the convergence report.
  std::vector<std::pair<std::string, std::function<double(const PiecewisePdf&)>>> extras;
  std::string summary;
  std::function<void(const Table&, AssertionLog&)> assertions;
};

std::size_t column_index(const Table& t, const std::string& name) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == name) return c;
  }
  throw Error("demo table has no column " + name);
}

// Closed forms for [0,1] spike families: spike of mass s on width d, then
// background value c = (1 - s)/(1 - d) on the remaining 1 - d.
struct SpikeClosedForm {
  double c;
  double log_c;
  double bg_width;
};

SpikeClosedForm spike_closed_form(double spike_mass, double delta) {
  const double log_c = std::log1p(-spike_mass) - std::log1p(-delta);
  return {std::exp(log_c), log_c, 1.0 - delta};
}

void check_increasing(const Table& t, const std::string& column, AssertionLog& log) {
  const auto c = column_index(t, column);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    log.greater(column + " strictly increasing", static_cast<int>(t.rows[i][0]), t.rows[i - 1][c],
                t.rows[i][c]);
  }
}

std::vector<Demo> demos() {
  std::vector<Demo> list;

  list.push_back(Demo{
      "gh-counterexample",
      FamilySpec::gh_counterexample(),
      {10, 100, 1000},
      {MomentDescriptor::moving_alpha(), MomentDescriptor::fixed_alpha(2.0)},
      {},
      "gh-counterexample: entropy column -> -1 while H(limit) = 0 (no entropy convergence); "
      "alpha_n_moment column stays <= e + 1 with alpha_n = 1 + 1/log n (moving-exponent bound "
      "holds); alpha2_moment column grows like n (fixed-alpha condition fails)",
      [](const Table& t, AssertionLog& log) {
        const auto ce = column_index(t, "entropy");
        const auto ctv = column_index(t, "tv");
        const auto can = column_index(t, "alpha_n_moment");
        const auto ca2 = column_index(t, "alpha2_moment");
        for (const auto& row : t.rows) {
          const int n = static_cast<int>(row[0]);
          const double x = n;
          const double delta = std::exp(-x) / x;
          const auto cf = spike_closed_form(1.0 / x, delta);
          const double abs_log_c = std::abs(cf.log_c);
          log.equal("entropy = -1 - c_n log c_n (1 - delta_n)", n,
                    -1.0 - cf.c * cf.log_c * cf.bg_width, row[ce], 1e-10);
          log.equal("tv = (e^n - 1) delta_n + (1 - c_n)(1 - delta_n)", n,
                    (1.0 / x - delta) + (1.0 - cf.c) * cf.bg_width, row[ctv], 1e-10);
          const double an = gh_alpha(n);
          log.equal("alpha_n moment = e + background", n,
                    std::numbers::e + cf.c * std::pow(abs_log_c, an) * cf.bg_width, row[can],
                    1e-10);
          log.at_most("alpha_n moment <= e + 1", n, std::numbers::e + 1.0, row[can]);
          log.equal("alpha=2 moment = n + background", n,
                    x + cf.c * abs_log_c * abs_log_c * cf.bg_width, row[ca2], 1e-8 * x);
        }
        check_increasing(t, "alpha2_moment", log);
      }});

  list.push_back(Demo{
      "converse-fails",
      FamilySpec::converse_fails(),
      {11, 50, 200},
      {},
      {{"tail_entropy_r10",
        [](const PiecewisePdf& f) { return tail_mass(f, 10.0, TailIntegrand::EntropyIntegrand); }},
       {"tail_density_r10",
        [](const PiecewisePdf& f) { return tail_mass(f, 10.0, TailIntegrand::Density); }}},
      "converse-fails: entropy column -> 0 = H(limit) because the spike contributions -1 and +1 "
      "cancel; tail_entropy_r10 column stays at 2 because the short spike recedes to infinity "
      "(tail concentration fails for f_n|log f_n|)",
      [](const Table& t, AssertionLog& log) {
        const auto ce = column_index(t, "entropy");
        const auto ctv = column_index(t, "tv");
        const auto cg = column_index(t, "integrand_mass");
        const auto ctail = column_index(t, "tail_entropy_r10");
        for (const auto& row : t.rows) {
          const int n = static_cast<int>(row[0]);
          const double b = 1.0 - 2.0 / n;
          const double bg = -b * std::log1p(-2.0 / n);
          log.equal("entropy = -(1 - 2/n) log(1 - 2/n)", n, bg, row[ce], 1e-10);
          log.at_most("|entropy| <= |(1 - 2/n) log(1 - 2/n)| + 1e-10", n, std::abs(bg) + 1e-10,
                      std::abs(row[ce]));
          log.equal("integrand mass = 2 + background", n, 2.0 + bg, row[cg], 1e-10);
          log.equal("tv = 4/n", n, 4.0 / n, row[ctv], 1e-12);
          if (n >= 11) log.equal("tail entropy-integrand mass beyond R=10 = 2", n, 2.0, row[ctail], 1e-10);
        }
      }});

  list.push_back(Demo{
      "orlicz-spike",
      FamilySpec::orlicz_spike(),
      {10, 100, 1000},
      {MomentDescriptor::orlicz(OrliczFn::tlog1p()),
       MomentDescriptor::orlicz(OrliczFn::power(1.5))},
      {},
      "orlicz-spike: tlog1p_moment column stays near 1 (the t log(1+t) moment is bounded) while "
      "power1.5_moment grows like sqrt(n)/log(1+n) (every fixed-alpha moment diverges); entropy "
      "column -> 0 = H(limit) at rate 1/log(1+n)",
      [](const Table& t, AssertionLog& log) {
        const auto ce = column_index(t, "entropy");
        const auto cpsi = column_index(t, "tlog1p_moment");
        const auto cpow = column_index(t, "power1.5_moment");
        for (const auto& row : t.rows) {
          const int n = static_cast<int>(row[0]);
          const double x = n;
          const double spike_mass = 1.0 / (x * std::log1p(x));
          const double delta = spike_mass * std::exp(-x);
          const auto cf = spike_closed_form(spike_mass, delta);
          const double a = std::abs(cf.log_c);
          log.equal("tlog1p moment = 1 + background", n,
                    1.0 + cf.c * a * std::log1p(a) * cf.bg_width, row[cpsi], 1e-10);
          log.at_most("tlog1p moment <= 1.1", n, 1.1, row[cpsi]);
          log.equal("power 1.5 moment = sqrt(n)/log(1+n) + background", n,
                    std::sqrt(x) / std::log1p(x) + cf.c * std::pow(a, 1.5) * cf.bg_width,
                    row[cpow], 1e-10 * std::max(1.0, std::sqrt(x)));
          log.equal("entropy = -1/log(1+n) - c_n log c_n (1 - delta_n)", n,
                    -1.0 / std::log1p(x) - cf.c * cf.log_c * cf.bg_width, row[ce], 1e-10);
        }
        check_increasing(t, "power1.5_moment", log);
      }});

  list.push_back(Demo{
      "bounded-ratio",
      FamilySpec::bounded_ratio(),
      {2, 10, 100, 1000},
      {MomentDescriptor::fixed_alpha(2.0)},
      {{"ratio_sup", [](const PiecewisePdf& f) { return ratio_sup(f, uniform_pdf(0.0, 1.0)); }}},
      "bounded-ratio: ratio_sup column = 1 + 1/n <= 2 (bounded density ratio) and entropy column "
      "-> 0 = H(limit)",
      [](const Table& t, AssertionLog& log) {
        const auto ce = column_index(t, "entropy");
        const auto ctv = column_index(t, "tv");
        const auto cr = column_index(t, "ratio_sup");
        for (const auto& row : t.rows) {
          const int n = static_cast<int>(row[0]);
          const double u = 1.0 / n;
          log.equal("entropy = -[(1+1/n)log(1+1/n) + (1-1/n)log(1-1/n)]/2", n,
                    -0.5 * ((1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u)), row[ce], 1e-10);
          log.equal("ratio sup = 1 + 1/n", n, 1.0 + u, row[cr], 1e-12);
          log.at_most("ratio sup <= 2", n, 2.0, row[cr]);
          log.equal("tv = 1/n", n, u, row[ctv], 1e-12);
        }
      }});

  list.push_back(Demo{
      "shrinking-uniform",
      FamilySpec::shrinking_uniform(),
      {2, 4, 8, 16},
      {},
      {{"sup_density", [](const PiecewisePdf& f) { return sup_density(f); }},
       {"abs_moment_beta2", [](const PiecewisePdf& f) { return abs_moment(f, 2.0); }}},
      "shrinking-uniform: sup_density <= 1 and abs_moment_beta2 bounded (bounded density plus "
      "moment); entropy column = log(1 + 1/n) -> 0 = H(limit)",
      [](const Table& t, AssertionLog& log) {
        const auto ce = column_index(t, "entropy");
        const auto ctv = column_index(t, "tv");
        const auto cs = column_index(t, "sup_density");
        const auto cm = column_index(t, "abs_moment_beta2");
        for (const auto& row : t.rows) {
          const int n = static_cast<int>(row[0]);
          const double w = 1.0 + 1.0 / n;
          log.equal("entropy = log(1 + 1/n)", n, std::log1p(1.0 / n), row[ce], 1e-12);
          log.equal("tv = 2/(n+1)", n, 2.0 / (n + 1.0), row[ctv], 1e-12);
          log.at_most("sup density <= 1", n, 1.0, row[cs]);
          log.equal("beta=2 moment = (1+1/n)^2/3", n, w * w / 3.0, row[cm], 1e-12);
        }
      }});
  return list;
}

json assertions_json(const AssertionLog& log) {
  json arr = json::array();
  for (const auto& a : log.items()) {
    arr.push_back({{"claim", a.claim},
                   {"n", a.n},
                   {"relation", a.relation},
                   {"expected", number_to_json(a.expected)},
                   {"computed", number_to_json(a.computed)},
                   {"tolerance", a.tolerance},
                   {"passed", a.passed}});
  }
  return arr;
}

// --- commands ---------------------------------------------------------------

struct Options {
  std::string family;
  std::string demo_name;
  std::string n;
  std::vector<std::string> psi;
  std::vector<std::string> alpha;
  std::string grid;
  std::string axis;
  std::string integrand = "entropy";
  std::string format;
  std::string out;
  bool dump_pdf = false;
  HypothesisConfig bounds;
};

Format parse_format(const std::string& s, Format fallback) {
  if (s.empty()) return fallback;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("--format must be csv or json");
}

FamilySpec require_family(const Options& o) {
  if (o.family.empty()) throw UsageError("--family is required");
  try {
    return parse_family(o.family);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> flatten(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    for (auto& s : split_list(item)) out.push_back(std::move(s));
  }
  return out;
}

std::vector<MomentDescriptor> moment_descriptors(const std::vector<std::string>& psi,
                                                 const std::vector<std::string>& alpha,
                                                 bool allow_moving) {
  std::vector<MomentDescriptor> list;
  try {
    for (const auto& s : flatten(psi)) list.push_back(MomentDescriptor::orlicz(parse_orlicz(s)));
    for (const auto& s : flatten(alpha)) {
      if (s == "n") {
        if (!allow_moving) throw UsageError("--alpha n is only valid for report/demo");
        list.push_back(MomentDescriptor::moving_alpha());
      } else {
        list.push_back(MomentDescriptor::fixed_alpha(parse_double(s)));
      }
    }
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return list;
}

std::optional<NSpec> n_option(const Options& o) {
  if (o.n.empty()) return std::nullopt;
  return parse_n(o.n);
}

int cmd_demo(const Options& o, Emitter& emitter, std::ostream& err) {
  std::string name = o.demo_name.empty() ? o.family : o.demo_name;
  if (name.empty()) throw UsageError("demo needs a name (gh-counterexample, converse-fails, ...)");
  const auto all = demos();
  auto it = std::find_if(all.begin(), all.end(), [&](const Demo& d) { return d.name == name; });
  if (it == all.end()) throw UsageError("unknown demo '" + name + "'");
  const Demo& demo = *it;
  const Format format = parse_format(o.format, Format::Csv);

  auto ns = o.n.empty() ? demo.default_ns : sweep_values(demo.family, n_option(o));
  require_members(demo.family, ns);
  auto rows = convergence_report(demo.family, ns, demo.moments);
  Table table = report_table(rows);
  for (const auto& [col, fn] : demo.extras) {
    table.columns.push_back(col);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      table.rows[i].push_back(fn(generate(demo.family, rows[i].n)));
    }
  }

  AssertionLog log;
  demo.assertions(table, log);

  if (format == Format::Csv) {
    emitter.emit(table_csv(table));
  } else {
    json j;
    j["kind"] = "report";
    j["family"] = demo.family.name();
    j["demo"] = demo.name;
    j["columns"] = table.columns;
    j["rows"] = table_rows_json(table);
    j["summary"] = demo.summary;
    j["assertions"] = assertions_json(log);
    j["all_passed"] = log.all_passed();
    emitter.emit(dump_json(j));
  }

  err << demo.summary << "\n";
  if (log.all_passed()) {
    err << demo.name << ": " << log.items().size() << " closed-form assertions passed\n";
    return kExitOk;
  }
  for (const auto& a : log.items()) {
    if (a.passed) continue;
    err << "FAILED [n=" << a.n << "] " << a.claim << ": expected " << a.relation << " "
        << format_real(a.expected) << ", computed " << format_real(a.computed);
    if (a.relation == "==") err << " (tolerance " << format_real(a.tolerance) << ")";
    err << "\n";
  }
  return kExitAssertionFailed;
}

int cmd_report(const Options& o, Emitter& emitter) {
  const auto family = require_family(o);
  const auto ns = sweep_values(family, n_option(o));
  if (o.dump_pdf) {
    emitter.emit(dump_json(family_to_json(family, ns)));
    return kExitOk;
  }
  const Format format = parse_format(o.format, Format::Csv);
  const auto moments = moment_descriptors(o.psi, o.alpha, true);
  // A RangeError from alpha_n at n < 3 surfaces as a usage error before any output.
  const auto table = report_table(convergence_report(family, ns, moments));
  if (format == Format::Csv) {
    emitter.emit(table_csv(table));
  } else {
    json j;
    j["kind"] = "report";
    j["family"] = family.name();
    j["columns"] = table.columns;
    j["rows"] = table_rows_json(table);
    emitter.emit(dump_json(j));
  }
  return kExitOk;
}

int cmd_profile(const Options& o, Emitter& emitter) {
  const auto family = require_family(o);
  const Format format = parse_format(o.format, Format::Csv);
  if (o.axis != "M" && o.axis != "R") throw UsageError("--axis must be M or R");
  if (o.grid.empty()) throw UsageError("--grid is required for profile");
  const auto grid = parse_grid(o.grid);
  const auto range = range_values(family, n_option(o), 100);
  ProfileTable table;
  if (o.axis == "M") {
    table = ui_profile(family, grid, range);
  } else {
    TailIntegrand integrand;
    if (o.integrand == "entropy") {
      integrand = TailIntegrand::EntropyIntegrand;
    } else if (o.integrand == "density") {
      integrand = TailIntegrand::Density;
    } else {
      throw UsageError("--integrand must be density or entropy");
    }
    table = tightness_profile(family, grid, range, integrand);
  }

  const std::string axis_column = o.axis == "M" ? "M" : "R";
  if (format == Format::Csv) {
    std::string s = axis_column + ",value,argmax_n\n";
    for (const auto& r : table.rows) {
      s += format_real(r.grid_value) + "," + format_real(r.value) + "," +
           std::to_string(r.argmax_n) + "\n";
    }
    emitter.emit(s);
  } else {
    json j;
    j["kind"] = "profile";
    j["family"] = family.name();
    j["axis"] = axis_column;
    if (table.integrand) {
      j["integrand"] = *table.integrand == TailIntegrand::Density ? "density" : "entropy";
    }
    j["n_range"] = {table.n_range.min, table.n_range.max};
    j["rows"] = json::array();
    for (const auto& r : table.rows) {
      j["rows"].push_back({{"grid", r.grid_value},
                           {"value", number_to_json(r.value)},
                           {"argmax_n", r.argmax_n}});
    }
    emitter.emit(dump_json(j));
  }
  return kExitOk;
}

int cmd_check(const Options& o, Emitter& emitter) {
  const auto family = require_family(o);
  const Format format = parse_format(o.format, Format::Json);
  const auto range = range_values(family, n_option(o), 1000);
  HypothesisConfig config = o.bounds;
  if (!o.alpha.empty()) {
    config.fixed_alphas.clear();
    for (const auto& m : moment_descriptors({}, o.alpha, false)) {
      config.fixed_alphas.push_back(m.alpha);
    }
  }
  if (!o.psi.empty()) {
    config.psis.clear();
    for (const auto& m : moment_descriptors(o.psi, {}, false)) {
      config.psis.push_back(*m.psi);
    }
  }
  const auto report = check_hypotheses(family, range, config);

  if (format == Format::Csv) {
    std::string s =
        "condition,parameter,holds_on_range,witness,witness_n,bound,first_violation_n\n";
    for (const auto& v : report.verdicts) {
      s += v.condition + "," + v.parameter + "," + (v.holds_on_range ? "true" : "false") + "," +
           format_real(v.witness.value) + "," + std::to_string(v.witness.n) + "," +
           format_real(v.witness.bound) + "," +
           (v.first_violation_n ? std::to_string(*v.first_violation_n) : std::string()) + "\n";
    }
    emitter.emit(s);
    return kExitOk;
  }

  json j;
  j["kind"] = "check";
  j["family"] = report.family;
  j["n_range"] = {report.n_range.min, report.n_range.max};
  j["finite_range_evidence"] = true;
  j["verdicts"] = json::array();
  auto witness_json = [](const Witness& w) {
    return json{{"value", number_to_json(w.value)}, {"n", w.n}, {"bound", w.bound}};
  };
  for (const auto& v : report.verdicts) {
    json obj{{"condition", v.condition},
             {"parameter", v.parameter},
             {"holds_on_range", v.holds_on_range},
             {"witness", number_to_json(v.witness.value)},
             {"witness_n", v.witness.n},
             {"bound", v.witness.bound}};
    obj["first_violation_n"] = v.first_violation_n ? json(*v.first_violation_n) : json(nullptr);
    if (v.secondary) obj["secondary_witness"] = witness_json(*v.secondary);
    j["verdicts"].push_back(std::move(obj));
  }
  emitter.emit(dump_json(j));
  return kExitOk;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (const char* seed = std::getenv("ENTROPY_LAB_SEED"); seed != nullptr) {
    err << "warning: ENTROPY_LAB_SEED is ignored (all computations are deterministic)\n";
  }

  CLI::App app{"entropy-lab: exact entropy, total variation, and uniform-integrability "
               "diagnostics for piecewise-constant density sequences"};
  app.name("entropy-lab");
  app.require_subcommand(1);

  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--family", o.family, "family name or custom:PATH");
    sub->add_option("--n", o.n, "n values: comma list or A..B");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_option("--out", o.out, "output path (default: standard output)");
  };

  auto* demo = app.add_subcommand("demo", "reproduce one family's closed-form claims");
  add_common(demo);
  demo->add_option("name", o.demo_name,
                   "gh-counterexample | converse-fails | orlicz-spike | bounded-ratio | "
                   "shrinking-uniform");

  auto* report = app.add_subcommand("report", "convergence report over n");
  add_common(report);
  report->add_option("--psi", o.psi, "Psi selectors: power:A, tlog1p, tloge, tlogpow:P, tloglog");
  report->add_option("--alpha", o.alpha, "fixed alphas; 'n' for alpha_n = 1 + 1/log n");
  report->add_flag("--dump-pdf", o.dump_pdf, "emit the pdfs as JSON instead of the report");

  auto* profile = app.add_subcommand("profile", "sup over n of threshold or tail mass");
  add_common(profile);
  profile->add_option("--axis", o.axis, "M (equi-integrability) or R (tail)");
  profile->add_option("--grid", o.grid, "increasing comma list of M or R values");
  profile->add_option("--integrand", o.integrand, "density or entropy (R axis)");

  auto* check = app.add_subcommand("check", "finite-range hypothesis verdicts");
  add_common(check);
  check->add_option("--psi", o.psi, "Psi selectors for the Orlicz verdict");
  check->add_option("--alpha", o.alpha, "fixed alphas for the fixed-alpha verdict");
  check->add_option("--moment-bound", o.bounds.moment_bound, "bound for alpha and Psi moments");
  check->add_option("--density-bound", o.bounds.density_bound, "bound C1 on sup f_n");
  check->add_option("--beta", o.bounds.beta, "beta of the |x|^beta moment");
  check->add_option("--beta-bound", o.bounds.beta_moment_bound, "bound C2 on the beta moment");
  check->add_option("--ratio-bound", o.bounds.ratio_bound, "bound C on esssup f_n/f");
  check->add_option("--support-bound", o.bounds.support_bound, "bound on max |x| over supports");

  std::vector<std::string> argv_store{"entropy-lab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  Emitter emitter{out, o.out.empty() ? std::nullopt : std::optional<std::string>(o.out)};
  try {
    if (demo->parsed()) return cmd_demo(o, emitter, err);
    if (report->parsed()) return cmd_report(o, emitter);
    if (profile->parsed()) return cmd_profile(o, emitter);
    if (check->parsed()) return cmd_check(o, emitter);
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace entropy_lab::cli

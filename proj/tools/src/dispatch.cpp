#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "possim/association.hpp"
#include "possim/baselines.hpp"
#include "possim/contour.hpp"
#include "possim/error.hpp"
#include "possim/measure.hpp"
#include "possim/models.hpp"
#include "possim/randomset.hpp"
#include "possim/validity.hpp"
#include "possim_cli/run_config.hpp"

namespace possim::cli {

std::uint64_t default_seed() {
  const char* env = std::getenv("POSSIM_SEED");
  if (env == nullptr || *env == '\0') return 1;
  std::uint64_t v = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end) throw ArgumentError("POSSIM_SEED must be an unsigned 64-bit integer");
  return v;
}

namespace {

// ------------------------------------------------------------------ parsing

double parse_number(const std::string& s) {
  try {
    return parse_double(s);
  } catch (const DataError&) {
    throw ArgumentError("not a number: '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ArgumentError("grid must look like lo:hi:step");
  const double lo = parse_number(parts[0]);
  const double hi = parse_number(parts[1]);
  const double step = parse_number(parts[2]);
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("grid needs finite lo <= hi and a positive step");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 10000000) throw ArgumentError("grid has too many points");
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo + step * static_cast<double>(k);
  return grid;
}

/// "lo:hi" pieces separated by ';' form an interval union; bare numbers a point set.
SetDescriptor parse_set(const std::string& spec) {
  if (spec.empty()) throw ArgumentError("an assertion set is required (e.g. --assertion 0:9)");
  std::vector<Interval> pieces;
  PointSet points;
  for (const auto& part : split(spec, ';')) {
    const auto ends = split(part, ':');
    if (ends.size() == 1) {
      points.points.push_back(parse_number(ends[0]));
    } else if (ends.size() == 2) {
      pieces.push_back(Interval::closed(parse_number(ends[0]), parse_number(ends[1])));
    } else {
      throw ArgumentError("set pieces look like lo:hi or a single number");
    }
  }
  if (!pieces.empty() && !points.points.empty()) throw ArgumentError("mix of intervals and points is not supported");
  if (!points.points.empty()) return points;
  return IntervalUnion(std::move(pieces));
}

DensityForm parse_form(const std::string& s) {
  if (s == "reference") return DensityForm::reference;
  if (s == "exact-jacobian") return DensityForm::exact_jacobian;
  throw ArgumentError("density form must be reference or exact-jacobian");
}

// ------------------------------------------------------------------ models

enum class ModelId { cauchy, curved_normal, eiv };

ModelId model_id(const std::string& name) {
  if (name == "cauchy") return ModelId::cauchy;
  if (name == "curved-normal") return ModelId::curved_normal;
  if (name == "exp-eiv") return ModelId::eiv;
  throw ConfigurationError("unknown model '" + name + "' (expected cauchy, curved-normal or exp-eiv)");
}

CurvedNormalModel curved_model(const RunConfig& c) {
  CurvedNormalModel m{c.n, c.sign, parse_form(c.density_form)};
  m.validate();
  return m;
}

double required(const std::optional<double>& v, const char* flag) {
  if (!v) throw ArgumentError(std::string("missing ") + flag);
  return *v;
}

double cauchy_observation(const RunConfig& c) {
  if (!c.y.empty()) return c.y.front();
  return required(c.y1, "--y");
}

CurvedNormalReduction curved_reduction(const RunConfig& c) {
  if (c.y.size() >= 2) return curved_normal_reduce(c.y);
  return CurvedNormalReduction::from_statistics(required(c.y1, "--y1 (or a --y sample)"), required(c.y2, "--y2"));
}

EivModel eiv_model(const RunConfig& c) {
  EivModel m{c.lambda1, c.lambda2, required(c.y1, "--y1"), required(c.y2, "--y2")};
  m.validate();
  return m;
}

PosteriorContour make_posterior(const RunConfig& c) {
  switch (model_id(c.model)) {
    case ModelId::cauchy:
      return cauchy_posterior_contour(cauchy_observation(c));
    case ModelId::curved_normal:
      return curved_normal_posterior_contour(curved_model(c), curved_reduction(c));
    case ModelId::eiv:
      return eiv_posterior_contour(eiv_model(c));
  }
  throw ConfigurationError("unknown model");
}

ModelSpec model_spec(const RunConfig& c) {
  switch (model_id(c.model)) {
    case ModelId::cauchy:
      return CauchySpec{};
    case ModelId::curved_normal:
      return CurvedNormalSpec{curved_model(c)};
    case ModelId::eiv:
      if (!(c.xi > 0.0)) throw ArgumentError("--xi must be positive");
      return EivSpec{c.lambda1, c.lambda2, c.xi};
  }
  throw ConfigurationError("unknown model");
}

ReplicationPlan make_plan(const RunConfig& c) {
  ReplicationPlan plan;
  plan.model = model_spec(c);
  plan.theta = required(c.theta, "--theta (true parameter)");
  plan.reps = c.reps;
  plan.seed = c.seed;
  plan.workers = c.workers;
  plan.validate();
  return plan;
}

std::string default_grid(ModelId id) {
  switch (id) {
    case ModelId::cauchy:
      return "-20:20:0.05";
    case ModelId::curved_normal:
      return "0.01:8:0.01";
    case ModelId::eiv:
      return "0.05:50:0.05";
  }
  return "";
}

// {phi <= 9}, false at the default true phi = 10.
constexpr const char* kFalseAssertion = "-inf:9";

// ------------------------------------------------------------------ output

class Summary {
 public:
  explicit Summary(const std::string& name) { line_ << name; }
  Summary& add(const std::string& key, const std::string& value) {
    line_ << ' ' << key << '=' << value;
    return *this;
  }
  Summary& add(const std::string& key, double value) { return add(key, format_double(value)); }
  Summary& add(const std::string& key, std::uint64_t value) { return add(key, std::to_string(value)); }
  Summary& add(const std::string& key, bool value) { return add(key, std::string(value ? "true" : "false")); }
  std::string str() const { return line_.str(); }

 private:
  std::ostringstream line_;
};

struct Output {
  const RunConfig& config;
  std::ostream& data;
  std::ostream& summary;
  std::ostream& err;
  // Set once a dataset has gone to `data`, so the summary does not land inside it.
  mutable bool data_streamed = false;

  void dataset(const Schema& schema, const std::vector<Row>& rows) const {
    if (config.out.empty()) {
      data << (config.format == OutputFormat::csv ? to_csv(schema, rows) : to_jsonl(schema, rows));
      data_streamed = true;
    } else {
      emit_dataset(schema, rows, config.out, config.format);
    }
  }
  void record(const Summary& s) const { (data_streamed && &data == &summary ? err : summary) << s.str() << '\n'; }
};

std::string describe(const IntervalUnion& set) {
  if (set.empty()) return "empty";
  std::string out;
  for (const auto& iv : set.intervals()) {
    if (!out.empty()) out += 'U';
    out += (iv.lo_open ? "(" : "[") + format_double(iv.lo) + ";" + format_double(iv.hi) + (iv.hi_open ? ")" : "]");
  }
  return out;
}

// ------------------------------------------------------------------ subcommands

int run_contour(const RunConfig& c, const Output& out) {
  const PosteriorContour post = make_posterior(c);
  const auto grid = parse_grid(c.grid.empty() ? default_grid(model_id(c.model)) : c.grid);
  std::vector<Row> rows;
  rows.reserve(grid.size());
  double top = 0.0;
  for (double theta : grid) {
    const double v = post(theta);
    top = std::max(top, v);
    rows.push_back({theta, v});
  }
  out.dataset(contour_schema(), rows);
  out.record(Summary("contour").add("model", c.model).add("points", std::uint64_t{grid.size()}).add("max", top));
  return kOk;
}

int run_region(const RunConfig& c, const Output& out) {
  const PosteriorContour post = make_posterior(c);
  const PlausibilityRegion region = plausibility_region(post, c.alpha);
  Summary s("region");
  s.add("model", c.model).add("alpha", c.alpha);
  if (region.set.empty()) {
    s.add("lower", std::string("nan")).add("upper", std::string("nan"));
  } else {
    s.add("lower", region.set.intervals().front().lo).add("upper", region.set.intervals().back().hi);
  }
  s.add("pieces", std::uint64_t{region.set.intervals().size()}).add("bounded", region.bounded());
  s.add("length", region.length()).add("set", describe(region.set));
  out.record(s);
  return kOk;
}

SetDescriptor on_domain(const PosteriorContour& post, const SetDescriptor& a) {
  return restrict_to(a, as_interval(post.as_contour().domain()));
}

int run_test(const RunConfig& c, const Output& out) {
  const PosteriorContour post = make_posterior(c);
  const TestResult r = hypothesis_test(post, on_domain(post, parse_set(c.assertion)), c.alpha);
  out.record(Summary("test")
                 .add("model", c.model)
                 .add("alpha", c.alpha)
                 .add("assertion", c.assertion)
                 .add("attained", r.attained)
                 .add("decision", std::string(r.reject ? "reject" : "retain")));
  return kOk;
}

Statistic parse_statistic(const std::string& s) {
  if (s == "contour") return Statistic::contour_at_truth;
  if (s == "necessity") return Statistic::necessity_of_assertion;
  if (s == "possibility") return Statistic::possibility_of_assertion;
  throw ArgumentError("statistic must be contour, necessity or possibility");
}

int run_validate(const RunConfig& c, const Output& out) {
  const ReplicationPlan plan = make_plan(c);
  const Statistic stat = parse_statistic(c.statistic);
  std::optional<SetDescriptor> assertion;
  if (stat != Statistic::contour_at_truth) assertion = parse_set(c.assertion);
  const ValidityReport report = validity_cdf(plan, stat, assertion);
  std::vector<Row> rows;
  rows.reserve(report.alpha.size());
  for (std::size_t k = 0; k < report.alpha.size(); ++k) rows.push_back({report.alpha[k], report.cdf[k], report.band});
  out.dataset(validity_schema(), rows);
  out.record(Summary("validate")
                 .add("model", c.model)
                 .add("statistic", c.statistic)
                 .add("direction", std::string(report.direction == Direction::upper ? "upper" : "lower"))
                 .add("reps", std::uint64_t{plan.reps})
                 .add("seed", plan.seed)
                 .add("band", report.band)
                 .add("max_violation", report.max_violation)
                 .add("pass", report.pass)
                 .add("two_sided_distance", report.two_sided_distance)
                 .add("two_sided_pass", report.two_sided_pass));
  return kOk;
}

int run_coverage(const RunConfig& c, const Output& out) {
  const ReplicationPlan plan = make_plan(c);
  std::vector<IntervalMethod> methods;
  if (c.method == "im" || c.method == "both") methods.push_back(IntervalMethod::im);
  if (c.method == "fiducial" || c.method == "both") methods.push_back(IntervalMethod::fiducial);
  if (methods.empty()) throw ArgumentError("method must be im, fiducial or both");
  std::vector<Row> rows;
  Summary s("coverage");
  s.add("model", c.model).add("level", c.level).add("reps", std::uint64_t{plan.reps}).add("seed", plan.seed);
  for (auto m : methods) {
    const CoverageResult r = coverage_study(plan, c.level, m, c.budget);
    rows.push_back({method_name(m), r.level, r.coverage, r.mean_length, std::uint64_t{r.unbounded_count}, r.mc_se,
                    std::uint64_t{r.reps}, r.seed});
    s.add(method_name(m) + "_coverage", r.coverage).add(method_name(m) + "_mean_length", r.mean_length);
  }
  out.dataset(coverage_schema(), rows);
  out.record(s);
  return kOk;
}

PositivityHandling parse_positivity(const std::string& s) {
  if (s == "none") return PositivityHandling::none;
  if (s == "reject") return PositivityHandling::reject_nonpositive;
  throw ArgumentError("positivity must be none or reject");
}

int run_false_confidence(const RunConfig& c, const Output& out) {
  if (model_id(c.model) != ModelId::eiv) throw ConfigurationError("false-confidence is defined for exp-eiv");
  const ReplicationPlan plan = make_plan(c);
  const SetDescriptor assertion = parse_set(c.assertion.empty() ? std::string(kFalseAssertion) : c.assertion);
  const std::vector<BeliefAssigner> assigners{
      im_necessity_assigner(plan.model),
      eiv_flat_bayes_assigner(c.lambda1, c.lambda2, c.budget, c.seed, parse_positivity(c.positivity))};
  const FalseConfidenceTable table = false_confidence_curves(plan, assertion, assigners);
  std::vector<Row> rows;
  for (std::size_t j = 0; j < table.assigners.size(); ++j) {
    for (std::size_t k = 0; k < table.alpha.size(); ++k) rows.push_back({table.alpha[k], table.assigners[j], table.cdf[j][k]});
  }
  out.dataset(false_confidence_schema(), rows);
  Summary s("false-confidence");
  s.add("model", c.model).add("reps", std::uint64_t{plan.reps}).add("seed", plan.seed).add("band", table.band);
  const auto half = static_cast<std::size_t>(
      std::lower_bound(table.alpha.begin(), table.alpha.end(), 0.5) - table.alpha.begin());
  for (std::size_t j = 0; j < table.assigners.size(); ++j) {
    double below = 0.0;
    for (std::size_t k = 0; k < table.alpha.size(); ++k) below = std::max(below, table.alpha[k] - table.cdf[j][k]);
    s.add(table.assigners[j] + "_max_below_diagonal", below);
    if (half < table.alpha.size()) s.add(table.assigners[j] + "_cdf_at_half", table.cdf[j][half]);
  }
  out.record(s);
  return kOk;
}

int run_equivalence(const RunConfig& c, const Output& out) {
  const ModelId id = model_id(c.model);
  std::unique_ptr<NestedRandomSetSampler> sampler;
  std::function<double(double)> contour;
  std::string grid_spec = c.grid;
  switch (id) {
    case ModelId::cauchy: {
      const auto dist = cauchy_distribution();
      sampler = std::make_unique<NestedRandomSetSampler>(dist);
      contour = build_max_specificity(dist, BuildMethod::closed_form);
      if (grid_spec.empty()) grid_spec = "-10:10:0.2";
      break;
    }
    case ModelId::curved_normal: {
      auto cond = std::make_shared<const CurvedNormalConditional>(curved_model(c), curved_reduction(c).h);
      sampler = std::make_unique<NestedRandomSetSampler>(cond->as_distribution());
      contour = [cond](double v) { return cond->contour(v); };
      if (grid_spec.empty()) {
        const double m = cond->mode();
        const double w = 4.0 * cond->spread();
        grid_spec = format_double(m - w) + ":" + format_double(m + w) + ":" + format_double(w / 50.0);
      }
      break;
    }
    case ModelId::eiv: {
      auto tri = build_triangular();
      sampler = std::make_unique<NestedRandomSetSampler>(uniform_distribution(0.0, 1.0), tri, 0.5);
      contour = tri;
      if (grid_spec.empty()) grid_spec = "0:1:0.01";
      break;
    }
  }
  const auto thresholds = sampler->draw_thresholds(c.budget, c.seed);
  const auto grid = parse_grid(grid_spec);
  std::vector<Row> rows;
  double worst = 0.0;
  for (double u : grid) {
    const double hit = hitting_probability(*sampler, u, thresholds);
    const double pi = contour(u);
    const double se = mc_standard_error(pi, thresholds.size());
    if (se > 0.0) worst = std::max(worst, std::abs(hit - pi) / se);
    rows.push_back({u, hit, pi, se});
  }
  out.dataset(equivalence_schema(), rows);
  out.record(Summary("equivalence")
                 .add("model", c.model)
                 .add("points", std::uint64_t{grid.size()})
                 .add("budget", std::uint64_t{c.budget})
                 .add("seed", c.seed)
                 .add("max_abs_z", worst));
  return kOk;
}

int run_baseline_fiducial(const RunConfig& c, const Output& out) {
  const ModelId id = model_id(c.model);
  if (id == ModelId::curved_normal) {
    const auto r = curved_reduction(c);
    const Interval iv = curved_normal_fiducial_interval(curved_model(c), r, c.level, c.budget, c.seed);
    out.record(Summary("baseline-fiducial")
                   .add("model", c.model)
                   .add("level", c.level)
                   .add("lower", iv.lo)
                   .add("upper", iv.hi)
                   .add("length", iv.length()));
    return kOk;
  }
  if (id != ModelId::cauchy) throw ConfigurationError("fiducial baselines exist for cauchy and curved-normal");
  const Association assoc = cauchy_association();
  const DataRecord y{cauchy_observation(c)};
  Summary s("baseline-fiducial");
  s.add("model", c.model);
  if (c.theta) {
    s.add("theta", *c.theta).add("halfline_possibility", fiducial_halfline_possibility(assoc, y, *c.theta));
  }
  if (!c.grid.empty()) {
    const PossibilityContour fc = fiducial_contour(assoc, y, c.budget, c.seed);
    std::vector<Row> rows;
    for (double theta : parse_grid(c.grid)) rows.push_back({theta, fc(theta)});
    out.dataset(contour_schema(), rows);
    s.add("budget", std::uint64_t{c.budget});
  }
  if (!c.theta && c.grid.empty()) throw ArgumentError("give --theta for the half-line value or --grid for the contour");
  out.record(s);
  return kOk;
}

int run_baseline_bayes(const RunConfig& c, const Output& out) {
  if (model_id(c.model) != ModelId::eiv) throw ConfigurationError("the flat-prior baseline is defined for exp-eiv");
  const EivModel m = eiv_model(c);
  const SetDescriptor a = parse_set(c.assertion.empty() ? std::string(kFalseAssertion) : c.assertion);
  const auto contains = [&a](double phi) {
    if (const auto* u = std::get_if<IntervalUnion>(&a)) return u->contains(phi);
    const auto& pts = std::get<PointSet>(a).points;
    return std::find(pts.begin(), pts.end(), phi) != pts.end();
  };
  const double p = eiv_flat_bayes_probability(m, contains, c.budget, c.seed, parse_positivity(c.positivity));
  out.record(Summary("baseline-bayes")
                 .add("model", c.model)
                 .add("assertion", c.assertion.empty() ? std::string(kFalseAssertion) : c.assertion)
                 .add("budget", std::uint64_t{c.budget})
                 .add("seed", c.seed)
                 .add("probability", p)
                 .add("mc_se", mc_standard_error(p, c.budget)));
  return kOk;
}

}  // namespace

int dispatch(const RunConfig& config, std::ostream& data, std::ostream& summary, std::ostream& err) {
  static const std::map<std::string, int (*)(const RunConfig&, const Output&)> table{
      {"contour", run_contour},
      {"region", run_region},
      {"test", run_test},
      {"validate", run_validate},
      {"coverage", run_coverage},
      {"false-confidence", run_false_confidence},
      {"equivalence", run_equivalence},
      {"baseline-fiducial", run_baseline_fiducial},
      {"baseline-bayes", run_baseline_bayes},
  };
  const auto it = table.find(config.subcommand);
  if (it == table.end()) {
    err << "error: unknown subcommand '" << config.subcommand << "'\n";
    return kUsage;
  }
  const Output out{config, data, summary, err};
  try {
    static const std::set<std::string> summary_only{"region", "test", "baseline-fiducial", "baseline-bayes"};
    if (!config.out.empty() && summary_only.contains(config.subcommand))
      throw ArgumentError("--out is not accepted by '" + config.subcommand + "', which writes no dataset");
    return it->second(config, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const DataError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace possim::cli

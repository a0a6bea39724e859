#include "kkmass/cli/run.hpp"

#include "report.hpp"

#include "kkmass/clifford.hpp"
#include "kkmass/mass.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace kkmass::cli {

using nlohmann::json;
using detail::format;
using detail::number;
using detail::numbers;
using detail::TextTable;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MetricField make_model(const ModelSpec& spec) {
  try {
    return build_model(spec);
  } catch (const Error& e) {
    throw ConfigError(std::string("model construction failed: ") + e.what());
  }
}

std::vector<double> ladder_for(const RunConfig& cfg, const Chart& chart) {
  std::vector<double> radii = cfg.radii.empty() ? default_radii(chart) : cfg.radii;
  if (!(radii.front() > chart.r_min)) {
    throw ConfigError("field 'radii': smallest radius " + format(radii.front()) + " is not outside r_min = " +
                      format(chart.r_min));
  }
  return radii;
}

Check tolerance_check(std::string name, double value, double reference, double tol) {
  Check c{std::move(name), false, value, reference, tol, ""};
  const double err = std::abs(value - reference);
  c.passed = reference != 0.0 ? err <= tol * std::abs(reference) : err <= tol;
  c.detail = reference != 0.0 ? "relative error " + format(err / std::abs(reference), 4) : "absolute error " + format(err, 4);
  return c;
}

Check lower_bound_check(std::string name, double value, double bound) {
  return Check{std::move(name), value >= bound, value, bound, 0.0, "lower bound"};
}

Check flag_check(std::string name, bool ok, std::string detail) {
  return Check{std::move(name), ok, ok ? 1.0 : 0.0, 1.0, 0.0, std::move(detail)};
}

json model_json(const ModelSpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.parameters) params[k] = number(v);
  json out = {{"name", to_string(spec.name)}, {"parameters", params}, {"fiber_periods", numbers(spec.fiber_periods)}};
  if (spec.name == ModelName::PerturbedProduct) out["shape"] = to_string(spec.shape);
  return out;
}

json inputs_json(const RunConfig& cfg, const std::vector<double>& radii) {
  json out = {{"model", model_json(cfg.model)},
              {"radii", numbers(radii)},
              {"quadrature", {{"polar", cfg.quadrature.polar}, {"azimuthal", cfg.quadrature.azimuthal}, {"fiber", cfg.quadrature.fiber}}},
              {"step", {{"step", number(cfg.step.step)}, {"relative", cfg.step.relative}}},
              {"seed", cfg.seed},
              {"samples_per_shell", cfg.samples_per_shell}};
  if (cfg.task == Task::VerifyIdentities) {
    out["identities"] = {{"steps", numbers(cfg.identities.steps)},
                         {"points", cfg.identities.points},
                         {"min_order", number(cfg.identities.min_order)}};
  }
  if (cfg.task == Task::Sweep) {
    out["sweep"] = {{"parameter", cfg.sweep.parameter}, {"values", numbers(cfg.sweep.values)}};
    if (cfg.sweep.fixed_circle) out["sweep"]["fixed_circle"] = number(*cfg.sweep.fixed_circle);
  }
  if (cfg.oracle) out["oracle"] = {{"mass", number(cfg.oracle->value)}, {"tolerance", number(cfg.oracle->tolerance)}};
  return out;
}

json normalization_json(const Chart& chart) {
  const double omega = sphere_volume(chart.dim_base);
  const double vol = chart.fiber_volume();
  return {{"base_dim", chart.dim_base},
          {"fiber_dim", chart.dim_fiber()},
          {"omega_k", number(omega)},
          {"fiber_volume", number(vol)},
          {"prefactor", number(1.0 / (4.0 * omega * vol))}};
}

std::string normalization_text(const Chart& chart) {
  const double omega = sphere_volume(chart.dim_base);
  std::ostringstream out;
  out << "normalization: k = " << chart.dim_base << ", dim X = " << chart.dim_fiber()
      << ", omega_k = " << format(omega) << ", vol X = " << format(chart.fiber_volume())
      << ", prefactor 1/(4 omega_k vol X) = " << format(1.0 / (4.0 * omega * chart.fiber_volume())) << '\n';
  return out.str();
}

double claimed_tau(const MetricField& m) { return m.claimed_decay(); }

MassOptions mass_options(const RunConfig& cfg, bool check_decay) {
  MassOptions o;
  o.threads = cfg.threads;
  o.check_decay = check_decay;
  o.decay.samples_per_shell = cfg.samples_per_shell;
  o.decay.seed = cfg.seed;
  o.decay.policy = cfg.step;
  return o;
}

json mass_json(const MassResult& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    rows.push_back({{"radius", number(r.radii[i])}, {"mass", number(r.estimates[i])}});
  }
  return {{"estimates", rows},          {"limit", number(r.limit)},     {"exponent", number(r.exponent)},
          {"error_estimate", number(r.error)}, {"misfit", number(r.misfit)}, {"status", r.status},
          {"tau", number(r.tau)},       {"flag", r.flag}};
}

std::string mass_text(const MassResult& r) {
  TextTable t({"R", "m(R)"});
  for (std::size_t i = 0; i < r.radii.size(); ++i) t.add({format(r.radii[i]), format(r.estimates[i], 12)});
  std::ostringstream out;
  out << t.render();
  out << "extrapolated m = " << format(r.limit, 12) << " +- " << format(r.error, 3) << " (p = " << format(r.exponent, 4)
      << ", " << r.status << ")\n";
  if (!std::isnan(r.tau)) out << "fitted decay tau = " << format(r.tau, 5) << (r.flag.empty() ? "" : "  [" + r.flag + "]") << '\n';
  return out.str();
}

// Built-in expectations for models with a known answer.
void model_oracles(const ModelSpec& spec, const MassResult& r, std::vector<Check>& checks, json& results,
                   std::ostringstream& text) {
  switch (spec.name) {
    case ModelName::Flat:
    case ModelName::ProductFlat:
      checks.push_back(tolerance_check("flat mass vanishes", r.limit, 0.0, 1e-8));
      break;
    case ModelName::SchwarzschildSlice:
      checks.push_back(tolerance_check("schwarzschild mass equals m", r.limit, spec.get("m", 1.0), 1e-3));
      break;
    case ModelName::EuclideanRN: {
      const double m = spec.get("m", 1.0);
      double q2 = spec.get("q2", kNaN);
      if (std::isnan(q2)) q2 = std::pow(spec.get("q", 1.0), 2);
      const double closed = rn_mass_closed_form(m, q2);
      const double length = rn_circle_length(m, q2);
      results["rn"] = {{"horizon", number(rn_horizon(m, q2))},
                       {"circle_length", number(length)},
                       {"closed_form", number(closed)},
                       {"flux_over_closed_form", number(closed != 0.0 ? r.limit / closed : kNaN)}};
      text << "reissner-nordstrom: r_+ = " << format(rn_horizon(m, q2)) << ", circle length L = " << format(length)
           << ", closed form m (r_+ - m)/(4 pi r_+^2) = " << format(closed) << ", flux / closed form = "
           << format(closed != 0.0 ? r.limit / closed : kNaN, 6) << '\n';
      checks.push_back(tolerance_check("rn mass matches closed form", r.limit, closed, 0.01));
      if (m < 0.0) checks.push_back(flag_check("rn mass negative for m < 0", r.limit < 0.0, "sign"));
      break;
    }
    case ModelName::PerturbedProduct: break;
  }
}

void mass_task(const RunConfig& cfg, Report& rep) {
  const MetricField model = make_model(cfg.model);
  const std::vector<double> radii = ladder_for(cfg, model.chart());
  rep.body["inputs"] = inputs_json(cfg, radii);
  rep.body["normalization"] = normalization_json(model.chart());

  std::ostringstream text;
  text << "task: mass, model " << to_string(cfg.model.name) << '\n' << normalization_text(model.chart());
  const MassResult r = mass(model, radii, cfg.quadrature, mass_options(cfg, true));
  json results = mass_json(r);
  text << mass_text(r);

  rep.checks.push_back(flag_check("extrapolation converged", r.converged, r.status));
  rep.checks.push_back(flag_check("decay rate above (k-2)/2", !r.coordinate_dependent,
                                  r.flag.empty() ? "tau = " + format(r.tau, 5) : r.flag));
  model_oracles(cfg.model, r, rep.checks, results, text);
  if (cfg.oracle) rep.checks.push_back(tolerance_check("declared mass oracle", r.limit, cfg.oracle->value, cfg.oracle->tolerance));
  rep.body["results"] = results;
  rep.text = text.str();
}

void decay_task(const RunConfig& cfg, Report& rep) {
  const MetricField model = make_model(cfg.model);
  const std::vector<double> radii = ladder_for(cfg, model.chart());
  rep.body["inputs"] = inputs_json(cfg, radii);
  rep.body["normalization"] = normalization_json(model.chart());

  DecayOptions opts;
  opts.samples_per_shell = cfg.samples_per_shell;
  opts.seed = cfg.seed;
  opts.policy = cfg.step;
  const DecayReport d = decay_order(model, radii, opts);

  std::ostringstream text;
  text << "task: decay, model " << to_string(cfg.model.name) << '\n' << normalization_text(model.chart());
  std::vector<std::string> header{"R"};
  for (const DecayFit& f : d.fits) header.push_back("sup|" + f.quantity + "|");
  TextTable t(header);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<std::string> row{format(radii[i])};
    for (const DecayFit& f : d.fits) row.push_back(format(f.norms[i], 6));
    t.add(row);
  }
  text << t.render();
  json fits = json::array();
  for (const DecayFit& f : d.fits) {
    fits.push_back({{"quantity", f.quantity}, {"norms", numbers(f.norms)}, {"slope", number(f.slope)},
                    {"tau", number(f.tau)}, {"below_noise", f.below_noise}});
    text << "  " << f.quantity << ": slope " << format(f.slope, 5) << ", tau " << format(f.tau, 5)
         << (f.below_noise ? " (below noise)" : "") << '\n';
  }
  text << "tau = " << format(d.tau, 5) << (d.flag.empty() ? "" : "  [" + d.flag + "]") << '\n';
  rep.body["results"] = {{"fits", fits},
                         {"tau", number(d.tau)},
                         {"exact_background", d.exact_background},
                         {"mass_well_defined", d.mass_well_defined},
                         {"flag", d.flag}};

  const double claimed = claimed_tau(model);
  if (std::isfinite(claimed)) {
    rep.checks.push_back(tolerance_check("fitted tau matches model rate", d.tau, claimed, 0.05));
  } else {
    rep.checks.push_back(flag_check("exact background detected", d.exact_background, "tau = inf"));
  }
  const double threshold = 0.5 * (d.base_dim - 2);
  const bool should_flag = claimed <= threshold;
  rep.checks.push_back(flag_check("coordinate-dependence flag consistent", should_flag == !d.mass_well_defined,
                                  should_flag ? "expected flag" : "expected no flag"));
  rep.text = text.str();
}

double identity_radius(const Chart& chart) { return chart.r_min > 0.0 ? 1.5 * chart.r_min + 1.0 : 2.0; }

void identities_task(const RunConfig& cfg, Report& rep) {
  const MetricField model = make_model(cfg.model);
  const std::vector<double> radii = ladder_for(cfg, model.chart());
  rep.body["inputs"] = inputs_json(cfg, radii);
  rep.body["normalization"] = normalization_json(model.chart());
  const Chart& chart = model.chart();
  std::ostringstream text;
  text << "task: verify-identities, model " << to_string(cfg.model.name) << '\n' << normalization_text(chart);
  json results = json::object();

  // Clifford relations in the manifold dimension
  auto cliff = std::make_shared<const CliffordRep>(model.dim());
  const CliffordResiduals cr = clifford_residuals(*cliff);
  const double cliff_max =
      std::max({cr.anticommutator, cr.skew_hermitian, cr.commutator_skew, cr.product_decomposition});
  results["clifford"] = {{"dim", model.dim()},
                         {"anticommutator", number(cr.anticommutator)},
                         {"skew_hermitian", number(cr.skew_hermitian)},
                         {"commutator_skew", number(cr.commutator_skew)},
                         {"product_decomposition", number(cr.product_decomposition)}};
  text << "clifford relations (dim " << model.dim() << "): max residual " << format(cliff_max, 3) << '\n';
  rep.checks.push_back(Check{"clifford relations", cliff_max <= 1e-12, cliff_max, 0.0, 1e-12, "max residual"});

  // Divergence identity under step refinement
  const double r_id = identity_radius(chart);
  const std::vector<Vec> points = shell_samples(chart, r_id, cfg.identities.points, cfg.seed);
  const std::vector<double>& steps = cfg.identities.steps;
  json div = json::array();
  TextTable t({"spinor", "step", "max residual", "div alpha", "rhs"});
  for (ProbeSpinor kind : {ProbeSpinor::Polynomial, ProbeSpinor::Trigonometric, ProbeSpinor::Gaussian}) {
    const SpinorField phi = probe_spinor(cliff, chart, kind);
    std::vector<double> residuals;
    json rows = json::array();
    for (double h : steps) {
      double worst = 0.0, div_first = 0.0, rhs_first = 0.0;
      for (std::size_t p = 0; p < points.size(); ++p) {
        const DivergenceCheck c = divergence_identity_residual(model, phi, points[p], StepPolicy{h, false});
        worst = std::max(worst, c.residual);
        if (p == 0) {
          div_first = c.div_alpha;
          rhs_first = c.rhs;
        }
      }
      residuals.push_back(worst);
      rows.push_back({{"step", number(h)}, {"residual", number(worst)}, {"div_alpha", number(div_first)}, {"rhs", number(rhs_first)}});
      t.add({to_string(kind), format(h), format(worst, 4), format(div_first, 10), format(rhs_first, 10)});
    }
    const bool noise = *std::max_element(residuals.begin(), residuals.end()) < 1e-9;
    const double order = noise ? kNaN : refinement_order(steps, residuals);
    div.push_back({{"spinor", to_string(kind)}, {"rows", rows}, {"order", number(order)}, {"below_noise", noise}});
    Check c{std::string("divergence identity order (") + to_string(kind) + ")", false, order, cfg.identities.min_order, 0.0,
            noise ? "residual below 1e-9 at every step" : "fitted refinement order"};
    c.passed = noise || order >= cfg.identities.min_order;
    rep.checks.push_back(c);
  }
  text << "divergence identity at " << points.size() << " point(s) on r = " << format(r_id) << ":\n" << t.render();
  for (const json& d : div) {
    text << "  " << d["spinor"].get<std::string>() << ": fitted order "
         << (d["order"].is_number() ? format(d["order"].get<double>(), 4) : d["order"].get<std::string>()) << '\n';
  }
  results["divergence_identity"] = div;

  // Gauge-form equivalence of the flux densities and frame orthonormality
  double gauge_gap = 0.0, ortho = 0.0;
  for (const Vec& x : shell_samples(chart, radii.front(), cfg.samples_per_shell, cfg.seed)) {
    const KKIntegrand kk = kk_integrand(model, x);
    gauge_gap = std::max(gauge_gap, std::abs(kk.full - kk.reduced));
    ortho = std::max(ortho, orthonormal_frames(model, x).orthonormality_residual(model(x)));
  }
  results["gauge_form_gap"] = number(gauge_gap);
  results["frame_orthonormality"] = number(ortho);
  text << "flux densities, full vs reduced form: max gap " << format(gauge_gap, 3) << '\n';
  text << "frame orthonormality: max residual " << format(ortho, 3) << '\n';
  rep.checks.push_back(Check{"flux density forms agree", gauge_gap < 1e-12, gauge_gap, 0.0, 1e-12, "max |full - reduced|"});
  rep.checks.push_back(Check{"frames orthonormal", ortho < 1e-12, ortho, 0.0, 1e-12, "max residual"});

  rep.body["results"] = results;
  rep.text = text.str();
}

SpinorField model_parallel_spinor(const MetricField& model) {
  const Chart& chart = model.chart();
  auto cliff = std::make_shared<const CliffordRep>(model.dim());
  CVec base = CVec::Zero(1L << (chart.dim_base / 2));
  CVec fiber = CVec::Zero(1L << (chart.dim_fiber() / 2));
  base[0] = fiber[0] = 1.0;
  return approx_parallel_spinor(model, cliff, base, fiber);
}

void boundary_task(const RunConfig& cfg, Report& rep) {
  const MetricField model = make_model(cfg.model);
  const std::vector<double> radii = ladder_for(cfg, model.chart());
  rep.body["inputs"] = inputs_json(cfg, radii);
  rep.body["normalization"] = normalization_json(model.chart());
  std::ostringstream text;
  text << "task: boundary-limit, model " << to_string(cfg.model.name) << '\n' << normalization_text(model.chart());

  const SpinorField phi0 = model_parallel_spinor(model);
  const MassResult mr = mass(model, radii, cfg.quadrature, mass_options(cfg, false));
  const BoundaryReport br = boundary_mass_check(model, phi0, radii, cfg.quadrature, cfg.threads, cfg.step);

  TextTable t({"R", "boundary", "flux side", "gap", "pointwise gap", "boundary/(omega_k vol X)", "m(R)"});
  json rows = json::array();
  for (std::size_t i = 0; i < br.rows.size(); ++i) {
    const BoundaryRow& row = br.rows[i];
    const double normalized = row.boundary / (br.omega_k * br.fiber_volume);
    rows.push_back({{"radius", number(row.radius)},
                    {"boundary", number(row.boundary)},
                    {"flux_side", number(row.flux_side)},
                    {"gap", number(row.gap)},
                    {"pointwise_gap", number(row.pointwise_gap)},
                    {"normalized_boundary", number(normalized)},
                    {"mass", number(mr.estimates[i])}});
    t.add({format(row.radius), format(row.boundary, 10), format(row.flux_side, 10), format(row.gap, 4),
           format(row.pointwise_gap, 4), format(normalized, 10), format(mr.estimates[i], 10)});
  }
  text << t.render();
  text << "integrated gap decay exponent " << format(br.gap_exponent, 4) << ", pointwise gap decay exponent "
       << format(br.pointwise_exponent, 4) << '\n';
  text << "boundary/(omega_k vol X) at R_max = " << format(br.normalized_boundary, 12) << ", extrapolated "
       << format(br.boundary_limit.limit, 12) << "; flux mass m = " << format(mr.limit, 12) << '\n';

  json results = {{"rows", rows},
                  {"gap_exponent", number(br.gap_exponent)},
                  {"pointwise_exponent", number(br.pointwise_exponent)},
                  {"normalized_boundary", number(br.normalized_boundary)},
                  {"boundary_limit", number(br.boundary_limit.limit)},
                  {"boundary_limit_status", br.boundary_limit.status},
                  {"mass", mass_json(mr)}};

  // A vanishing limit has no relative scale: compare extrapolated limits
  // against 2% of the largest shell value instead.
  double scale = 0.0;
  for (double v : mr.estimates) scale = std::max(scale, std::abs(v));
  if (std::abs(mr.limit) > 1e-8 * std::max(1.0, scale)) {
    rep.checks.push_back(tolerance_check("boundary limit equals flux mass", br.normalized_boundary, mr.limit, 0.02));
  } else {
    Check c = tolerance_check("boundary limit equals flux mass", br.boundary_limit.limit, 0.0,
                              std::max(1e-8, 0.02 * scale));
    c.detail += " (extrapolated, zero mass)";
    rep.checks.push_back(c);
  }

  const double tau = claimed_tau(model);
  if (std::isfinite(tau)) {
    const ShellDecay sd = parallel_spinor_decay(model, phi0, radii, cfg.samples_per_shell, cfg.seed, cfg.step);
    const ShellDecay cd =
        connection_difference_decay(model, *phi0.rep, radii, cfg.samples_per_shell, cfg.seed, cfg.step);
    results["parallel_spinor_decay"] = {{"sup_norms", numbers(sd.sup_norms)}, {"exponent", number(sd.exponent)}};
    results["connection_difference_decay"] = {{"sup_norms", numbers(cd.sup_norms)}, {"exponent", number(cd.exponent)}};
    text << "sup |nabla phi0| decay exponent " << format(sd.exponent, 4) << " (tau + 1 = " << format(tau + 1.0)
         << "); connection difference remainder exponent " << format(cd.exponent, 4) << " (2 tau + 1 = "
         << format(2.0 * tau + 1.0) << ")\n";
    rep.checks.push_back(tolerance_check("approximate parallel spinor decay", sd.exponent, tau + 1.0, 0.1));
    rep.checks.push_back(lower_bound_check("connection difference remainder decay", cd.exponent, 0.9 * (2.0 * tau + 1.0)));
    rep.checks.push_back(lower_bound_check("pointwise reduction gap decay", br.pointwise_exponent, 0.9 * (2.0 * tau + 1.0)));
  }
  rep.body["results"] = results;
  rep.text = text.str();
}

void sweep_task(const RunConfig& cfg, Report& rep) {
  const SweepSettings& sw = cfg.sweep;
  std::ostringstream text;
  text << "task: sweep of " << sw.parameter << ", model " << to_string(cfg.model.name) << '\n';
  const bool rn = cfg.model.name == ModelName::EuclideanRN;

  json rows = json::array();
  TextTable t({sw.parameter, "q^2", "mass", "error", "status", "closed form"});
  std::vector<std::pair<double, double>> closed, flux;
  std::vector<double> first_radii;
  bool all_converged = true;
  for (double v : sw.values) {
    ModelSpec spec = cfg.model;
    spec.parameters[sw.parameter] = v;
    double q2 = kNaN;
    if (sw.fixed_circle) {
      try {
        q2 = rn_charge_for_circle(v, *sw.fixed_circle);
      } catch (const Error& e) {
        throw ConfigError(std::string("sweep value m = ") + format(v) + ": " + e.what());
      }
      spec.parameters.erase("q");
      spec.parameters["q2"] = q2;
    } else if (rn) {
      q2 = spec.get("q2", kNaN);
      if (std::isnan(q2)) q2 = std::pow(spec.get("q", 1.0), 2);
    }
    const MetricField model = make_model(spec);
    const std::vector<double> radii = ladder_for(cfg, model.chart());
    if (first_radii.empty()) first_radii = radii;
    const MassResult r = mass(model, radii, cfg.quadrature, mass_options(cfg, false));
    all_converged = all_converged && r.converged;
    json row = {{"value", number(v)}, {"mass", number(r.limit)}, {"error", number(r.error)}, {"status", r.status},
                {"radii", numbers(radii)}, {"estimates", numbers(r.estimates)}};
    std::string closed_text = "-";
    if (rn) {
      const double c = rn_mass_closed_form(spec.get("m", 1.0), q2);
      row["q2"] = number(q2);
      row["closed_form"] = number(c);
      row["circle_length"] = number(rn_circle_length(spec.get("m", 1.0), q2));
      closed.emplace_back(v, c);
      closed_text = format(c, 8);
    }
    flux.emplace_back(v, r.limit);
    rows.push_back(row);
    t.add({format(v), std::isnan(q2) ? "-" : format(q2, 8), format(r.limit, 10), format(r.error, 3), r.status, closed_text});
  }
  text << t.render();

  rep.body["inputs"] = inputs_json(cfg, cfg.radii.empty() ? first_radii : cfg.radii);
  rep.body["results"] = {{"rows", rows}};
  rep.checks.push_back(flag_check("all sweep points converged", all_converged, "extrapolation status"));

  auto increasing_in_parameter = [](std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i].second > pts[i - 1].second)) return false;
    }
    return true;
  };
  if (sw.fixed_circle) {
    const bool c_mono = increasing_in_parameter(closed);
    const bool f_mono = increasing_in_parameter(flux);
    rep.body["results"]["closed_form_monotone"] = c_mono;
    rep.body["results"]["flux_mass_monotone"] = f_mono;
    text << "fixed circle length " << format(*sw.fixed_circle) << ": closed-form mass "
         << (c_mono ? "decreases" : "does not decrease") << " with m, flux mass " << (f_mono ? "decreases" : "does not decrease")
         << " with m\n";
    rep.checks.push_back(flag_check("closed-form mass decreases with m at fixed circle", c_mono, "monotone"));
    rep.checks.push_back(flag_check("flux mass decreases with m at fixed circle", f_mono, "monotone"));
  }
  rep.text = text.str();
}

}  // namespace

Report run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.body = json::object();
  rep.body["task"] = to_string(cfg.task);
  try {
    switch (cfg.task) {
      case Task::Mass: mass_task(cfg, rep); break;
      case Task::Decay: decay_task(cfg, rep); break;
      case Task::VerifyIdentities: identities_task(cfg, rep); break;
      case Task::BoundaryLimit: boundary_task(cfg, rep); break;
      case Task::Sweep: sweep_task(cfg, rep); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rep.checks.push_back(flag_check("run completed", false, e.what()));
    rep.text += std::string("run aborted: ") + e.what() + '\n';
  }
  json checks = json::array();
  for (const Check& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", number(c.value)},
                      {"reference", number(c.reference)}, {"tolerance", number(c.tolerance)}, {"detail", c.detail}});
  }
  rep.body["checks"] = checks;
  rep.body["status"] = rep.passed() ? "pass" : "fail";
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.execution = {{"threads", cfg.threads}, {"wall_seconds", seconds}};
  return rep;
}

}  // namespace kkmass::cli

// soliton: compute and verify radial translating solitons of Lorentzian
// mean curvature flow.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
// 3 solver error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soliton/soliton.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProfileArgs {
  int n = 2;
  double horizon = 20.0;
  double step = 1e-3;
  double eps = 0.0;
  std::string format = "csv";
  std::string out;
};

struct VerifyArgs {
  int n = 2;
  double horizon = 20.0;
  double step = 1e-3;
  std::optional<std::size_t> fault;
  std::string report;
};

struct BvpArgs {
  int n = 2;
  double radius = 5.0;
  int m = 2001;
  double tol = 1e-5;
  std::string report;
};

struct FlowArgs {
  int n = 2;
  double radius = 10.0;
  int m = 1001;
  double tau = 1.0;
  std::string scheme = "implicit";
  double dt = 0.0;
  double dt_factor = 32.0;
  double tol = 1e-3;
  std::string report;
};

struct BlowdownArgs {
  int n = 2;
  std::vector<double> rho = {10.0, 100.0, 1000.0};
  double horizon = 0.0;
  double step = 1e-2;
  double delta = 1.0;
  std::size_t pairs = 1000;
  std::uint64_t seed = 20240601;
  std::string report;
};

soliton::Dimension dimension_arg(int n) {
  if (n < 1) {
    throw UsageError("--n must be >= 1");
  }
  return soliton::Dimension(n);
}

soliton::SolverConfig config_arg(double horizon, double step, double eps) {
  soliton::SolverConfig cfg;
  cfg.horizon = horizon;
  cfg.step = step;
  cfg.epsilon = eps;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

/// Writes `text` to `path`, or to stdout when the path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw UsageError("cannot open " + path + " for writing");
  }
  f << text;
}

int finish(soliton::RunReport& rep, const std::string& report_path) {
  if (!report_path.empty()) {
    rep.artifacts.push_back(report_path);
    emit(report_path, rep.to_json().dump(2) + "\n");
  }
  rep.print(std::cout);
  return rep.exit_code();
}

int cmd_profile(const ProfileArgs& a) {
  const auto n = dimension_arg(a.n);
  const auto cfg = config_arg(a.horizon, a.step, a.eps);
  if (a.format != "csv" && a.format != "json") {
    throw UsageError("--format must be csv or json");
  }
  const auto grid = soliton::integrate(n, cfg);
  std::ostringstream os;
  if (a.format == "csv") {
    soliton::write_csv(os, grid);
  } else {
    soliton::write_json(os, grid);
  }
  emit(a.out, os.str());
  return 0;
}

int cmd_verify(const VerifyArgs& a) {
  const auto n = dimension_arg(a.n);
  const auto cfg = config_arg(a.horizon, a.step, 0.0);
  auto grid = soliton::integrate_profile(n, cfg);
  if (a.fault) {
    if (*a.fault >= grid.size()) {
      throw UsageError("--inject-fault index outside the grid of " + std::to_string(grid.size()) + " nodes");
    }
    grid = soliton::inject_curvature_fault(grid, *a.fault);
  }

  soliton::RunReport rep;
  rep.command = "verify";
  rep.param("n", a.n);
  rep.param("T", a.horizon);
  rep.param("h", a.step);
  if (a.fault) {
    rep.param("inject_fault", static_cast<int>(*a.fault));
  }
  rep.add(soliton::check_bounds(grid));

  // Fourth-order residual decay on a coarse pair of grids. For n = 1 the
  // rapidity is exactly t, so the residual sits at round-off instead.
  const double order_horizon = std::min(a.horizon, 20.0);
  if (a.n == 1) {
    const double res = soliton::max_residual(soliton::integrate_profile(n, {order_horizon, 0.05, 0.0, 0.5}), 1.0);
    rep.check("residual_roundoff", res <= 1e-10, 1e-10 - res);
  } else if (order_horizon > 2.0) {
    const auto est = soliton::residual_order(n, order_horizon, 0.05);
    const double ratio = est.ratio();
    rep.check("residual_order", ratio >= 12.0 && ratio <= 20.0, std::min(ratio - 12.0, 20.0 - ratio));
  }

  const auto convex = soliton::check_strict_convexity(grid);
  rep.check("strict_convexity", convex.pass(), convex.min_eig);
  if (a.horizon >= 10.0 * a.n) {
    const auto grad = soliton::gradient_image_check(grid);
    rep.check("gradient_image", grad.pass, grad.bound - grad.deficit);
  }
  return finish(rep, a.report);
}

int cmd_bvp_check(const BvpArgs& a) {
  const auto n = dimension_arg(a.n);
  if (a.m < 16) {
    throw UsageError("--m must be at least 16");
  }
  if (!(a.radius > 0.0)) {
    throw UsageError("--R must be positive");
  }
  const auto u = soliton::uniqueness_check(n, a.radius, a.m);
  const auto mm = static_cast<std::size_t>(a.m);
  const auto base = soliton::solve_bvp(n, a.radius, u.boundary_value, a.m);
  const auto lifted = soliton::solve_bvp(n, a.radius, u.boundary_value + 1.0, a.m);
  double shift_error = 0.0;
  for (std::size_t j = 0; j <= mm; ++j) {
    shift_error = std::max(shift_error, std::abs(lifted.r[j] - base.r[j] - 1.0));
  }

  soliton::RunReport rep;
  rep.command = "bvp-check";
  rep.param("n", a.n);
  rep.param("R", a.radius);
  rep.param("m", a.m);
  rep.param("beta", u.boundary_value);
  rep.param("iters", std::to_string(u.iters_quadratic) + "/" + std::to_string(u.iters_linear));
  const int iters = std::max(u.iters_quadratic, u.iters_linear);
  rep.check("newton_iterations", iters <= 20, 20.0 - iters);
  rep.check("two_start_agreement", u.discrepancy <= 1e-8, 1e-8 - u.discrepancy);
  const double ode_err = std::max(u.ode_error_quadratic, u.ode_error_linear);
  rep.check("ode_agreement", ode_err <= a.tol, a.tol - ode_err);
  rep.check("translation", shift_error <= 1e-9, 1e-9 - shift_error);
  return finish(rep, a.report);
}

int cmd_flow(const FlowArgs& a) {
  const auto n = dimension_arg(a.n);
  if (a.m < 16) {
    throw UsageError("--m must be at least 16");
  }
  if (!(a.radius > 0.0) || !(a.tau >= 0.0)) {
    throw UsageError("--R must be positive and --tau nonnegative");
  }
  if (a.dt < 0.0 || !(a.dt_factor > 0.0)) {
    throw UsageError("--dt must be >= 0 and --dt-factor positive");
  }
  soliton::InvarianceOptions opts;
  if (a.scheme == "implicit") {
    opts.scheme = soliton::FlowScheme::kImplicit;
  } else if (a.scheme == "explicit") {
    opts.scheme = soliton::FlowScheme::kExplicit;
  } else {
    throw UsageError("--scheme must be implicit or explicit");
  }
  opts.dt = a.dt;
  opts.dt_factor = a.dt_factor;
  const auto res = soliton::soliton_invariance_test(n, a.radius, a.m, a.tau, opts);

  soliton::RunReport rep;
  rep.command = "flow";
  rep.param("n", a.n);
  rep.param("R", a.radius);
  rep.param("m", a.m);
  rep.param("tau", a.tau);
  rep.param("scheme", a.scheme);
  rep.param("dt", res.dt);
  rep.param("steps", static_cast<int>(res.steps));
  rep.check("soliton_invariance", res.sup_error <= a.tol, a.tol - res.sup_error);
  return finish(rep, a.report);
}

int cmd_blowdown(const BlowdownArgs& a) {
  const auto n = dimension_arg(a.n);
  if (a.rho.empty()) {
    throw UsageError("--rho needs at least one value");
  }
  std::vector<double> rho = a.rho;
  std::sort(rho.begin(), rho.end());
  if (rho.front() <= 0.0 || std::adjacent_find(rho.begin(), rho.end()) != rho.end()) {
    throw UsageError("--rho values must be positive and distinct");
  }
  const double horizon = a.horizon > 0.0 ? a.horizon : rho.back();
  if (rho.back() > horizon) {
    throw UsageError("--rho values must not exceed --T");
  }
  if (!(a.delta > 0.0)) {
    throw UsageError("--delta must be positive");
  }
  const auto grid = soliton::integrate_profile(n, config_arg(horizon, a.step, 0.0));
  const auto bd = soliton::blowdown_report(grid, rho, a.delta, a.pairs, a.seed);

  soliton::RunReport rep;
  rep.command = "blowdown";
  rep.param("n", a.n);
  rep.param("T", horizon);
  rep.param("h", a.step);
  std::string samples;
  for (double r : rho) {
    samples += (samples.empty() ? "" : ",") + soliton::format_double(r);
  }
  rep.param("rho", samples);
  for (std::size_t i = 0; i < bd.rate.rho_samples.size(); ++i) {
    const double dev = bd.rate.deviations[i];
    const double bound = bd.rate.bounds[i];
    rep.check("rate_rho=" + soliton::format_double(bd.rate.rho_samples[i]), dev <= bound + 1e-12, bound - dev);
  }
  double mono = 0.0;
  for (std::size_t i = 1; i < bd.rate.deviations.size(); ++i) {
    mono = std::min(mono, bd.rate.deviations[i - 1] - bd.rate.deviations[i]);
  }
  rep.check("rate_monotone", bd.rate.monotone, mono);
  rep.param("lipschitz_rho", bd.lipschitz_rho);
  rep.check("lipschitz", bd.lipschitz.lipschitz_pass, bd.lipschitz.lipschitz_worst);
  rep.check("null_condition", bd.lipschitz.null_pass, bd.lipschitz.null_bound - bd.lipschitz.null_worst);
  if (bd.gradient_checked) {
    rep.check("gradient_image", bd.gradient.pass, bd.gradient.bound - bd.gradient.deficit);
  }
  return finish(rep, a.report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial translating solitons of mean curvature flow in Minkowski space"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "integrate the profile and write the grid");
  profile->add_option("--n", pa.n, "dimension")->capture_default_str();
  profile->add_option("--T", pa.horizon, "horizon")->capture_default_str();
  profile->add_option("--h", pa.step, "step")->capture_default_str();
  profile->add_option("--eps", pa.eps, "regularization parameter")->capture_default_str();
  profile->add_option("--format", pa.format, "csv or json")->capture_default_str();
  profile->add_option("--out", pa.out, "output file (default stdout)");

  VerifyArgs va;
  std::size_t fault_index = 0;
  auto* verify = app.add_subcommand("verify", "run the bounds, residual and convexity checks");
  verify->add_option("--n", va.n, "dimension")->capture_default_str();
  verify->add_option("--T", va.horizon, "horizon")->capture_default_str();
  verify->add_option("--h", va.step, "step")->capture_default_str();
  auto* fault_opt = verify->add_option("--inject-fault", fault_index, "force r''=0 at this node index");
  verify->add_option("--report", va.report, "write a JSON report here");

  BvpArgs ba;
  auto* bvp = app.add_subcommand("bvp-check", "Dirichlet problem uniqueness and translation checks");
  bvp->add_option("--n", ba.n, "dimension")->capture_default_str();
  bvp->add_option("--R", ba.radius, "radius")->capture_default_str();
  bvp->add_option("--m", ba.m, "number of intervals")->capture_default_str();
  bvp->add_option("--tol", ba.tol, "ODE agreement tolerance")->capture_default_str();
  bvp->add_option("--report", ba.report, "write a JSON report here");

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "evolve the soliton and compare with the translate");
  flow->add_option("--n", fa.n, "dimension")->capture_default_str();
  flow->add_option("--R", fa.radius, "radius")->capture_default_str();
  flow->add_option("--m", fa.m, "number of intervals")->capture_default_str();
  flow->add_option("--tau", fa.tau, "end time")->capture_default_str();
  flow->add_option("--scheme", fa.scheme, "implicit or explicit")->capture_default_str();
  flow->add_option("--dt", fa.dt, "time step (overrides the default)");
  flow->add_option("--dt-factor", fa.dt_factor, "implicit dt in units of drho^2")->capture_default_str();
  flow->add_option("--tol", fa.tol, "sup error tolerance")->capture_default_str();
  flow->add_option("--report", fa.report, "write a JSON report here");

  BlowdownArgs da;
  auto* blowdown = app.add_subcommand("blowdown", "rescaled profile against the light cone");
  blowdown->add_option("--n", da.n, "dimension")->capture_default_str();
  blowdown->add_option("--rho", da.rho, "scales (comma separated)")->delimiter(',')->capture_default_str();
  blowdown->add_option("--T", da.horizon, "horizon (default: largest rho)");
  blowdown->add_option("--h", da.step, "step")->capture_default_str();
  blowdown->add_option("--delta", da.delta, "null-condition distance")->capture_default_str();
  blowdown->add_option("--pairs", da.pairs, "sampled pairs")->capture_default_str();
  blowdown->add_option("--seed", da.seed, "sampling seed")->capture_default_str();
  blowdown->add_option("--report", da.report, "write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (fault_opt->count() > 0) {
    va.fault = fault_index;
  }

  try {
    if (profile->parsed()) {
      return cmd_profile(pa);
    }
    if (verify->parsed()) {
      return cmd_verify(va);
    }
    if (bvp->parsed()) {
      return cmd_bvp_check(ba);
    }
    if (flow->parsed()) {
      return cmd_flow(fa);
    }
    if (blowdown->parsed()) {
      return cmd_blowdown(da);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const soliton::CflViolation& e) {
    std::cerr << "CFL violation: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitUsage;
}

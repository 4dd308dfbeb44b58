// Command-line front end.
//
//   regspec gen              sample a random regular graph, print it as JSON
//   regspec spectrum         eigen-decompose one graph, emit a local measure
//   regspec cycles           cycle census and tree-like fractions of one graph
//   regspec quadrature-demo  Gauss rule nodes/weights as CSV
//   regspec green            tree Green function, four ways
//   regspec verify <suite>   run a verification suite, print the JSON report
//
// Exit codes: 0 success / all checks passed, 1 a verification check failed,
// 2 bad usage, 3 a work budget or convergence failure.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <regspec/regspec.hpp>

using namespace regspec;

namespace {

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    require(f.good(), "cannot open output file: " + out_path);
    f << j.dump(2) << "\n";
  }
}

json complex_json(std::complex<double> z) {
  return json::array({z.real(), z.imag()});
}

std::pair<double, double> parse_interval(const std::string& s) {
  double a = 0, b = 0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf%c", &a, &b, &extra) != 2 || a >= b)
    throw CLI::ValidationError("--interval wants a,b with a < b, got " + s);
  return {a, b};
}

// Options shared by every verify subcommand, applied over the suite's
// reference configuration. Sentinels mean "keep the default".
struct verify_opts {
  int n = -1, d = -1, graphs = -1, trials = -1, x0_count = -1, kmax = -1;
  int r_ball = -1, part = -1, threads = 0, dos_trials = -1, grid_points = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double eta = -1, rho0 = -1, epsilon = -1, delta = -1, fail_fraction = -1;
  std::vector<std::string> intervals;
  std::vector<int> d_schedule;
  bool no_schedule = false, corrupted = false, tree_reference = false;
  std::string out, csv, svg;
};

void add_verify_flags(CLI::App* s, verify_opts& o) {
  s->add_option("--n", o.n, "number of vertices");
  s->add_option("--d", o.d, "degree");
  s->add_option("--seed", o.seed, "master seed")->each([&](std::string) {
    o.seed_set = true;
  });
  s->add_option("--graphs", o.graphs, "independent graphs");
  s->add_option("--trials", o.trials, "Monte Carlo trials per graph");
  s->add_option("--x0-count", o.x0_count, "random base vertices per trial");
  s->add_option("--kmax", o.kmax, "largest cycle length");
  s->add_option("--r-ball", o.r_ball, "ball radius");
  s->add_option("--part", o.part, "green suite statement (1..3)");
  s->add_option("--threads", o.threads, "worker threads (0 = auto)");
  s->add_option("--dos-trials", o.dos_trials, "density-of-states trials");
  s->add_option("--grid-points", o.grid_points, "distance evaluation grid");
  s->add_option("--eta", o.eta, "spectral smoothing (0 = derive)");
  s->add_option("--rho0", o.rho0, "potential half-width (0 = no potential)");
  s->add_option("--epsilon", o.epsilon, "target accuracy");
  s->add_option("--delta", o.delta, "interval count tolerance");
  s->add_option("--fail-fraction", o.fail_fraction, "allowed failing fraction");
  s->add_option("--interval", o.intervals, "interval a,b (repeatable)");
  s->add_option("--d-schedule", o.d_schedule, "degrees for growing-d parts");
  s->add_flag("--no-schedule", o.no_schedule, "drop the default degree schedule");
  s->add_flag("--corrupted", o.corrupted, "run the planted negative control");
  s->add_flag("--tree-reference", o.tree_reference,
              "also compare against finite-tree local measures");
  s->add_option("--out", o.out, "write the JSON report here too");
}

int run_verify(const std::string& suite, const verify_opts& o) {
  experiment_config cfg = default_config(suite);
  if (o.n >= 0) cfg.n = o.n;
  if (o.d >= 0) cfg.d = o.d;
  if (o.seed_set) cfg.seed = o.seed;
  if (o.graphs >= 0) cfg.graphs = o.graphs;
  if (o.trials >= 0) cfg.trials = o.trials;
  if (o.x0_count >= 0) cfg.x0_count = o.x0_count;
  if (o.kmax >= 0) cfg.kmax = o.kmax;
  if (o.r_ball >= 0) cfg.r_ball = o.r_ball;
  if (o.part >= 0) cfg.green_part = o.part;
  if (o.dos_trials >= 0) cfg.dos_trials = o.dos_trials;
  if (o.grid_points >= 0) cfg.grid_points = o.grid_points;
  if (o.eta >= 0) cfg.eta = o.eta;
  if (o.rho0 >= 0)
    cfg.pot = o.rho0 > 0 ? potential_spec::uniform(o.rho0) : potential_spec::none();
  if (o.epsilon >= 0) cfg.epsilon = o.epsilon;
  if (o.delta >= 0) cfg.delta = o.delta;
  if (o.fail_fraction >= 0) cfg.fail_fraction = o.fail_fraction;
  if (!o.intervals.empty()) {
    cfg.intervals.clear();
    for (const std::string& s : o.intervals)
      cfg.intervals.push_back(parse_interval(s));
  }
  if (!o.d_schedule.empty()) cfg.d_schedule = o.d_schedule;
  if (o.no_schedule) cfg.d_schedule.clear();
  if (o.corrupted) cfg.control = control_mode::corrupted;
  if (o.tree_reference) cfg.tree_reference = true;
  cfg.threads = o.threads > 0 ? o.threads : default_threads();

  json report = run_suite(cfg);
  std::cout << report.dump(2) << "\n";
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    require(f.good(), "cannot open output file: " + o.out);
    f << report.dump(2) << "\n";
  }
  return report.at("pass").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral experiments on random regular graphs"};
  app.require_subcommand(1);
  int rc = 0;

  // --- gen ---
  struct {
    int n = 100, d = 3;
    std::uint64_t seed = 1;
    std::string out;
  } gen;
  {
    CLI::App* s = app.add_subcommand("gen", "sample a uniform random d-regular graph");
    s->add_option("--n", gen.n, "number of vertices");
    s->add_option("--d", gen.d, "degree");
    s->add_option("--seed", gen.seed, "seed");
    s->add_option("--out", gen.out, "output path (default stdout)");
    s->callback([&] {
      sample_stats st;
      regular_graph g = sample_regular_graph(gen.n, gen.d, gen.seed, &st);
      json j = graph_to_json(g);
      j["seed"] = gen.seed;
      j["attempts"] = st.attempts;
      emit(j, gen.out);
    });
  }

  // --- spectrum ---
  struct {
    int n = 500, d = 3, x = 0, grid = 512, bins = 40;
    std::uint64_t seed = 1, pot_seed = 0;
    double rho0 = 0;
    bool esd = false;
    std::string out, csv, density_csv, svg, cdf_svg;
  } sp;
  {
    CLI::App* s = app.add_subcommand(
        "spectrum", "local or empirical spectral measure of one sampled graph");
    s->add_option("--n", sp.n, "number of vertices");
    s->add_option("--d", sp.d, "degree");
    s->add_option("--seed", sp.seed, "graph seed");
    s->add_option("--x", sp.x, "base vertex for the local measure");
    s->add_flag("--esd", sp.esd, "whole-spectrum measure instead of one vertex");
    s->add_option("--rho0", sp.rho0, "add a uniform potential of this half-width");
    s->add_option("--pot-seed", sp.pot_seed, "potential seed (default: graph seed)");
    s->add_option("--grid-points", sp.grid, "rows in the reference density table");
    s->add_option("--bins", sp.bins, "histogram bins for --svg");
    s->add_option("--csv", sp.csv, "write the measure as atom,weight,cdf");
    s->add_option("--density-csv", sp.density_csv,
                  "write the reference density as lambda,density,cdf");
    s->add_option("--svg", sp.svg, "write an eigenvalue histogram");
    s->add_option("--cdf-svg", sp.cdf_svg, "write a CDF comparison plot");
    s->add_option("--out", sp.out, "output path (default stdout)");
    s->callback([&] {
      regular_graph g = sample_regular_graph(sp.n, sp.d, sp.seed);
      std::vector<double> pot;
      if (sp.rho0 > 0)
        pot = sample_potential(potential_spec::uniform(sp.rho0), g.n,
                               sp.pot_seed ? sp.pot_seed : sp.seed)
                  .values;
      spectral_decomposition dec =
          eig_sym(hamiltonian(g, pot.empty() ? nullptr : &pot));
      discrete_measure m =
          sp.esd ? esd_measure(dec) : local_spectral_measure(dec, sp.x);
      analytic_measure km = kesten_mckay(sp.d);
      json j;
      j["n"] = sp.n;
      j["d"] = sp.d;
      j["seed"] = sp.seed;
      if (!sp.esd) j["x"] = sp.x;
      if (sp.rho0 > 0) j["rho0"] = sp.rho0;
      j["measure"] = measure_to_json(m);
      if (pot.empty()) j["ks_to_reference"] = kolmogorov_distance(m, km);
      if (!sp.csv.empty()) write_measure_csv(sp.csv, m);
      if (!sp.density_csv.empty()) write_density_csv(sp.density_csv, km, sp.grid);
      if (!sp.svg.empty())
        write_histogram_svg(sp.svg, dec.values, sp.bins,
                            pot.empty() ? &km : nullptr);
      if (!sp.cdf_svg.empty())
        write_cdf_svg(sp.cdf_svg, m, pot.empty() ? &km : nullptr);
      emit(j, sp.out);
    });
  }

  // --- cycles ---
  struct {
    int n = 1000, d = 3, kmax = 6;
    std::uint64_t seed = 1;
    std::string out;
  } cy;
  {
    CLI::App* s =
        app.add_subcommand("cycles", "cycle census of one sampled graph");
    s->add_option("--n", cy.n, "number of vertices");
    s->add_option("--d", cy.d, "degree");
    s->add_option("--seed", cy.seed, "seed");
    s->add_option("--kmax", cy.kmax, "largest cycle length");
    s->add_option("--out", cy.out, "output path (default stdout)");
    s->callback([&] {
      regular_graph g = sample_regular_graph(cy.n, cy.d, cy.seed);
      cycle_census_result cc = cycle_census(g, cy.kmax);
      json j;
      j["n"] = cy.n;
      j["d"] = cy.d;
      j["seed"] = cy.seed;
      json counts;
      for (int k = 3; k <= cy.kmax; ++k)
        counts[std::to_string(k)] = cc.at(k);
      j["cycles"] = counts;
      json tl;
      for (int k : {2, 3}) tl[std::to_string(k)] = tree_like_fraction(g, k);
      j["tree_like_fraction"] = tl;
      emit(j, cy.out);
    });
  }

  // --- quadrature-demo ---
  struct {
    int d = 3, m = 7;
    double shift = 0;
    bool sc = false;
    std::string csv;
  } qd;
  {
    CLI::App* s = app.add_subcommand(
        "quadrature-demo", "Gauss rule for a reference measure, as CSV");
    s->add_option("--d", qd.d, "Kesten-McKay degree");
    s->add_flag("--semicircle", qd.sc, "use the semicircle measure instead");
    s->add_option("--m", qd.m, "rule order (m+1 nodes)");
    s->add_option("--shift", qd.shift, "boundary shift parameter s");
    s->add_option("--csv", qd.csv, "output path (default stdout)");
    s->callback([&] {
      analytic_measure ref = qd.sc ? semicircle() : kesten_mckay(qd.d);
      recurrence_coeffs coeffs = recurrence_coefficients(ref, qd.m + 2);
      quadrature_rule q = gauss_rule(coeffs, qd.m, qd.shift);
      std::ostringstream os;
      os << "node,weight\n";
      os.precision(17);
      for (std::size_t i = 0; i < q.nodes.size(); ++i)
        os << q.nodes[i] << "," << q.weights[i] << "\n";
      if (qd.csv.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(qd.csv);
        require(f.good(), "cannot open output file: " + qd.csv);
        f << os.str();
      }
    });
  }

  // --- green ---
  struct {
    int d = 3, depth = 14, trials = 0;
    double lambda = 0, eta = 0.5, rho0 = 0;
    std::uint64_t seed = 1;
    std::string out;
  } gr;
  {
    CLI::App* s = app.add_subcommand(
        "green", "tree Green function: closed form, quadrature, recursion");
    s->add_option("--d", gr.d, "degree");
    s->add_option("--lambda", gr.lambda, "real part of z");
    s->add_option("--eta", gr.eta, "imaginary part of z")->check(CLI::PositiveNumber);
    s->add_option("--depth", gr.depth, "recursion truncation depth");
    s->add_option("--rho0", gr.rho0, "potential half-width for the Monte Carlo");
    s->add_option("--trials", gr.trials, "Monte Carlo trials (with --rho0)");
    s->add_option("--seed", gr.seed, "seed");
    s->add_option("--out", gr.out, "output path (default stdout)");
    s->callback([&] {
      std::complex<double> z(gr.lambda, gr.eta);
      std::complex<double> closed = gamma_tree(z, gr.d);
      std::complex<double> quad = stieltjes_numeric(kesten_mckay(gr.d), z);
      std::complex<double> rec =
          tree_green_recursive(gr.d, gr.depth, nullptr, z).value;
      json j;
      j["z"] = complex_json(z);
      j["d"] = gr.d;
      j["closed_form"] = complex_json(closed);
      j["quadrature"] = complex_json(quad);
      j["recursion"] = complex_json(rec);
      j["branch"] = complex_json(gamma_branch(z, gr.d));
      j["max_disagreement"] = std::max(std::abs(closed - quad),
                                       std::abs(closed - rec));
      if (gr.rho0 > 0) {
        int trials = gr.trials > 0 ? gr.trials : 200;
        dos_estimate e = dos_mc(gr.d, potential_spec::uniform(gr.rho0),
                                gr.lambda, gr.eta, gr.depth, trials, gr.seed);
        j["dos"] = json{{"value", e.value}, {"stderr", e.stderr_}};
      }
      emit(j, gr.out);
    });
  }

  // --- verify ---
  verify_opts vo;
  {
    CLI::App* v = app.add_subcommand("verify", "run a verification suite");
    v->require_subcommand(1);
    const std::pair<const char*, const char*> suites[] = {
        {"adj", "adjacency"},     {"grow", "growing"},
        {"esd", "schrodinger"},   {"green", "green"},
        {"deloc", "delocalization"}, {"cycles", "cycles"}};
    for (auto [alias, suite] : suites) {
      CLI::App* s = v->add_subcommand(
          alias, std::string("suite: ") + suite);
      add_verify_flags(s, vo);
      s->callback([&vo, &rc, suite = std::string(suite)] {
        rc = run_verify(suite, vo);
      });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const budget_exceeded& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 3;
  } catch (const convergence_error& e) {
    std::cerr << "convergence: " << e.what() << "\n";
    return 3;
  } catch (const invariant_violation& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}

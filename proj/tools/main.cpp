// Command-line front end: every verifier and generator with reproducible,
// machine-readable JSON output.  All randomness flows from --seed through
// counter-based streams; identical inputs and flags give identical bytes.
//
// Exit codes: 0 all verifications passed, 1 error, 2 hypothesis unverified,
// 64 usage error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <graphcurv/graphcurv.hpp>

using namespace graphcurv;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_hypothesis = 2;
constexpr int exit_usage = 64;

struct Common {
  std::uint64_t seed = 0;
  std::string output;  // empty = stdout
  double tolerance = 1e-9;
};

void emit(const Common& c, const std::string& command, const ojson& params, const ojson& result) {
  ojson j;
  j["command"] = command;
  j["version"] = version_string;
  j["seed"] = c.seed;
  j["params"] = params;
  j["result"] = result;
  const std::string text = j.dump(2) + "\n";
  if (c.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream out(c.output);
    if (!out) throw parse_error("cannot open for writing: " + c.output);
    out << text;
  }
}

Dim parse_dim(const std::string& s) {
  if (s == "inf" || s == "infinity") return Dim::inf();
  return Dim::finite(std::stod(s));
}

std::vector<double> parse_times(const std::string& spec) {
  std::vector<double> out;
  if (spec.rfind("linspace:", 0) == 0) {
    double a, b;
    int k;
    if (std::sscanf(spec.c_str(), "linspace:%lg:%lg:%d", &a, &b, &k) != 3 || k < 1)
      throw domain_error("bad times spec: " + spec);
    for (int i = 0; i < k; ++i)
      out.push_back(k == 1 ? b : a + (b - a) * i / static_cast<double>(k - 1));
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

VertexFunction parse_u0(const std::string& spec, int n, std::uint64_t seed) {
  VertexFunction u0(static_cast<std::size_t>(n), 1.0);
  if (spec.rfind("const:", 0) == 0) {
    const double c = std::stod(spec.substr(6));
    std::fill(u0.begin(), u0.end(), c);
  } else if (spec.rfind("point:", 0) == 0) {
    int v = 0;
    double floor = 0.01;
    if (std::sscanf(spec.c_str(), "point:%d:%lg", &v, &floor) < 1)
      throw domain_error("bad u0 spec: " + spec);
    std::fill(u0.begin(), u0.end(), floor);
    if (v < 0 || v >= n) throw domain_error("u0 point vertex out of range");
    u0[static_cast<std::size_t>(v)] += 1.0;
  } else if (spec.rfind("random", 0) == 0) {
    double sigma = 1.0;
    if (spec.size() > 7) sigma = std::stod(spec.substr(7));
    CounterRng rng(seed, {0x5eedf00dULL});
    for (auto& v : u0) v = rng.lognormal(sigma);
  } else {
    throw domain_error("bad u0 spec: " + spec);
  }
  return u0;
}

CutoffFunction parse_cutoff(const std::string& spec, const WeightedGraph& g) {
  if (spec.rfind("zd:", 0) == 0) {
    int d, m;
    double r;
    if (std::sscanf(spec.c_str(), "zd:%d:%lg:%d", &d, &r, &m) != 3)
      throw domain_error("bad cutoff spec: " + spec);
    auto cut = make_zd_strong_cutoff(d, r, m);
    if (static_cast<int>(cut.phi.size()) != g.num_vertices())
      throw domain_error("cutoff spec does not match the graph size");
    return cut;
  }
  if (spec.rfind("distance:", 0) == 0) {
    int x0;
    double r;
    if (std::sscanf(spec.c_str(), "distance:%d:%lg", &x0, &r) != 2)
      throw domain_error("bad cutoff spec: " + spec);
    return make_distance_cutoff(g, x0, r);
  }
  throw domain_error("bad cutoff spec: " + spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete curvature, heat-semigroup and spectral-bound toolkit"};
  app.require_subcommand(1);

  Common common;
  app.add_option("--seed", common.seed, "seed for all randomized work");
  app.add_option("-o,--output", common.output, "write the JSON report here (default stdout)");
  app.add_option("--tolerance", common.tolerance, "margin tolerance for pass/fail verdicts");

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "construct a named graph family");
  std::string family, gen_weights, gen_measure = "unit", gen_out;
  int gen_d = 2, gen_m = 5, gen_size = 5, gen_branching = 3, gen_depth = 2;
  gen->add_option("--family", family, "torus|tree|path|cycle|complete|star|hypercube")
      ->required();
  gen->add_option("--d", gen_d, "torus/hypercube dimension");
  gen->add_option("--m", gen_m, "torus side length");
  gen->add_option("--size", gen_size, "path/cycle/complete/star size");
  gen->add_option("--branching", gen_branching, "tree branching degree");
  gen->add_option("--depth", gen_depth, "tree depth");
  gen->add_option("--weights", gen_weights, "per-generator weights w+1,w-1,... (torus)");
  gen->add_option("--measure", gen_measure, "unit|degree");
  gen->add_option("--graph-output", gen_out, "graph file to write (defaults to --output)");

  // ---- curvature ----
  auto* curv = app.add_subcommand("curvature", "per-vertex optimal curvature");
  std::string curv_graph, curv_condition = "cde", curv_n = "2";
  int curv_vertex = -1, curv_starts = 64;
  bool curv_all = false, curv_sampling = false;
  double curv_target_k = 0.0, curv_k_tol = 1e-6;
  curv->add_option("graph", curv_graph, "graph file")->required();
  curv->add_option("--condition", curv_condition, "cd|cde|cdeprime");
  curv->add_option("--n", curv_n, "dimension parameter (float or 'inf')");
  curv->add_option("--vertex", curv_vertex, "single vertex");
  curv->add_flag("--all", curv_all, "all vertices");
  curv->add_option("--starts", curv_starts, "multistart count");
  curv->add_flag("--sampling-oracle", curv_sampling, "cross-check with the sampling oracle");
  curv->add_option("--target-k", curv_target_k, "pass iff optimal_k >= target");
  curv->add_option("--k-tolerance", curv_k_tol, "tolerance for the target");

  // ---- heat ----
  auto* heat = app.add_subcommand("heat", "solve the heat equation");
  std::string heat_graph, heat_u0 = "random", heat_times = "linspace:0.1:2:20", heat_q,
              heat_out = "solution";
  heat->add_option("graph", heat_graph, "graph file")->required();
  heat->add_option("--u0", heat_u0, "const:<c> | point:<v>[:<floor>] | random[:<sigma>]");
  heat->add_option("--times", heat_times, "t1,t2,... or linspace:<a>:<b>:<k>");
  heat->add_option("--q", heat_q, "potential: const:<c> | random:<amp>");
  heat->add_option("--solution-output", heat_out, "base path for .json/.csv output");

  // ---- liyau ----
  auto* liyau = app.add_subcommand("liyau", "verify a gradient estimate on a solution");
  std::string ly_sol, ly_theorem = "finite_n0", ly_n = "2", ly_cutoff, ly_hypothesis = "sampled";
  double ly_k = 0.0, ly_alpha = 0.0, ly_r = 0.0, ly_eps = 0.5;
  int ly_x0 = 0;
  liyau->add_option("solution", ly_sol, "solution .json file")->required();
  liyau->add_option("--theorem", ly_theorem,
                    "finite_n0|finite_nK|potential|ball_weak|ball_strong");
  liyau->add_option("--n", ly_n, "dimension");
  liyau->add_option("--K", ly_k, "curvature lower bound magnitude");
  liyau->add_option("--alpha", ly_alpha, "alpha in (0,1)");
  liyau->add_option("--x0", ly_x0, "ball center");
  liyau->add_option("--R", ly_r, "ball radius");
  liyau->add_option("--cutoff", ly_cutoff, "zd:<d>:<R>:<m> or distance:<x0>:<R>");
  liyau->add_option("--epsilon", ly_eps, "epsilon in (0,1) for ball_strong");
  liyau->add_option("--hypothesis", ly_hypothesis, "assume|sampled|full");

  // ---- harnack ----
  auto* harn = app.add_subcommand("harnack", "verify the Harnack inequality on a solution");
  std::string ha_sol, ha_pairs = "random:20";
  double ha_c1 = 1.0, ha_c2 = 0.0, ha_alpha = 0.0;
  harn->add_option("solution", ha_sol, "solution .json file")->required();
  harn->add_option("--pairs", ha_pairs, "random:<count>");
  harn->add_option("--c1", ha_c1, "constant c1 (e.g. n/2)");
  harn->add_option("--c2", ha_c2, "constant c2");
  harn->add_option("--alpha", ha_alpha, "alpha in [0,1)");

  // ---- agmon ----
  auto* agm = app.add_subcommand("agmon", "space-time distance between two vertices");
  std::string ag_graph;
  int ag_x = 0, ag_y = 0, ag_x0 = -1, ag_cap = -1;
  double ag_t1 = 1.0, ag_t2 = 2.0, ag_alpha = 0.0, ag_r = -1.0;
  agm->add_option("graph", ag_graph, "graph file")->required();
  agm->add_option("--x", ag_x)->required();
  agm->add_option("--y", ag_y)->required();
  agm->add_option("--T1", ag_t1);
  agm->add_option("--T2", ag_t2);
  agm->add_option("--alpha", ag_alpha);
  agm->add_option("--x0", ag_x0, "ball center (-1: unrestricted)");
  agm->add_option("--R", ag_r, "ball radius");
  agm->add_option("--cap", ag_cap, "max path length");

  // ---- spectral ----
  auto* spec_cmd = app.add_subcommand("spectral", "spectrum of -Delta");
  std::string sp_graph, sp_csv;
  spec_cmd->add_option("graph", sp_graph, "graph file")->required();
  spec_cmd->add_option("--csv", sp_csv, "also write eigenvalues as CSV");

  // ---- cheeger ----
  auto* chg = app.add_subcommand("cheeger", "Cheeger constant");
  std::string ch_graph, ch_method = "exact", ch_csv;
  chg->add_option("graph", ch_graph, "graph file")->required();
  chg->add_option("--method", ch_method, "exact|sweep");
  chg->add_option("--csv", ch_csv, "write the sweep curve (subset_size, ratio) as CSV");

  // ---- buser ----
  auto* bus = app.add_subcommand("buser", "Buser-type eigenvalue bound");
  std::string bu_graph, bu_n = "2", bu_method = "exact", bu_hypothesis = "sampled";
  double bu_k = 0.0, bu_alpha = 0.5;
  bus->add_option("graph", bu_graph, "graph file")->required();
  bus->add_option("--n", bu_n, "dimension");
  bus->add_option("--K", bu_k, "curvature magnitude (CDE(n,-K))");
  bus->add_option("--alpha", bu_alpha, "alpha in (0,1), used when K > 0");
  bus->add_option("--cheeger-method", bu_method, "exact|sweep");
  bus->add_option("--hypothesis", bu_hypothesis, "assume|sampled|full");

  // ---- hkbounds ----
  auto* hkb = app.add_subcommand("hkbounds", "two-sided heat-kernel bounds (fit + re-verify)");
  std::string hk_graph;
  double hk_n = 2.0, hk_tmin = 2.0, hk_tmax = 10.0, hk_slack = 0.05;
  int hk_tcount = 5, hk_pairs = 200;
  bool hk_fit = true;
  hkb->add_option("graph", hk_graph, "graph file")->required();
  hkb->add_option("--n", hk_n, "dimension (polynomial order)");
  hkb->add_flag("--fit", hk_fit, "fit constants on a sample, re-verify on another");
  hkb->add_option("--tmin", hk_tmin);
  hkb->add_option("--tmax", hk_tmax);
  hkb->add_option("--tcount", hk_tcount);
  hkb->add_option("--pairs", hk_pairs, "sample size");
  hkb->add_option("--slack", hk_slack, "relative slack applied to fitted constants");

  // ---- cutoff ----
  auto* cut_cmd = app.add_subcommand("cutoff", "build and verify cut-off functions");
  std::string co_graph, co_kind;
  double co_c = 100.0, co_k = 0.0, co_r = -1.0;
  bool co_verify = false;
  cut_cmd->add_option("graph", co_graph, "graph file")->required();
  cut_cmd->add_option("--kind", co_kind, "zd:<d>:<R>:<m> or distance:<x0>:<R>")->required();
  cut_cmd->add_option("--c", co_c, "strength constant");
  cut_cmd->add_option("--K", co_k, "curvature magnitude");
  cut_cmd->add_option("--R", co_r, "override radius for verification");
  cut_cmd->add_flag("--verify", co_verify, "check the strong cut-off dichotomy");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*gen) {
      WeightedGraph g;
      VertexMeasure mu;
      const MeasureKind mk = gen_measure == "degree" ? MeasureKind::degree : MeasureKind::unit;
      if (family == "torus") {
        std::vector<double> w;
        if (!gen_weights.empty()) {
          std::stringstream ss(gen_weights);
          std::string tok;
          while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
        }
        auto t = make_torus(gen_d, gen_m, w, mk);
        g = std::move(t.graph);
        mu = std::move(t.measure);
      } else if (family == "tree") {
        g = make_tree(gen_branching, gen_depth).graph;
        mu = make_measure(g, mk);
      } else if (family == "path") {
        g = make_path(gen_size);
        mu = make_measure(g, mk);
      } else if (family == "cycle") {
        g = make_cycle(gen_size);
        mu = make_measure(g, mk);
      } else if (family == "complete") {
        g = make_complete(gen_size);
        mu = make_measure(g, mk);
      } else if (family == "star") {
        g = make_star(gen_size);
        mu = make_measure(g, mk);
      } else if (family == "hypercube") {
        g = make_hypercube(gen_d).graph;
        mu = make_measure(g, mk);
      } else {
        std::cerr << "unknown family: " << family << "\n";
        return exit_usage;
      }
      const std::string path = gen_out.empty() ? common.output : gen_out;
      if (path.empty()) {
        std::cout << graph_to_json(g, mu).dump(2) << "\n";
      } else {
        save_graph(path, g, mu);
      }
      return exit_ok;
    }

    if (*curv) {
      auto lg = load_graph(curv_graph);
      const Dim n = parse_dim(curv_n);
      CurvatureOptions opt;
      opt.seed = common.seed;
      opt.starts = curv_starts;
      opt.sampling_oracle = curv_sampling;
      std::vector<int> verts;
      if (curv_all) {
        for (int v = 0; v < lg.graph.num_vertices(); ++v) verts.push_back(v);
      } else if (curv_vertex >= 0) {
        verts.push_back(curv_vertex);
      } else {
        std::cerr << "need --vertex or --all\n";
        return exit_usage;
      }
      ojson reports = ojson::array();
      bool pass = true;
      for (int v : verts) {
        CurvatureReport rep;
        if (curv_condition == "cd")
          rep = optimal_cd_k(lg.graph, lg.measure, v, n);
        else if (curv_condition == "cde")
          rep = optimal_cde_k(lg.graph, lg.measure, v, n, opt);
        else if (curv_condition == "cdeprime")
          rep = optimal_cde_prime_k(lg.graph, lg.measure, v, n, opt);
        else {
          std::cerr << "unknown condition: " << curv_condition << "\n";
          return exit_usage;
        }
        pass = pass && rep.optimal_k >= curv_target_k - curv_k_tol;
        reports.push_back(rep.to_json());
      }
      ojson params{{"graph", curv_graph},     {"condition", curv_condition},
                   {"n", curv_n},             {"starts", curv_starts},
                   {"target_k", curv_target_k}, {"k_tolerance", curv_k_tol}};
      emit(common, "curvature", params, ojson{{"reports", reports}, {"passed", pass}});
      return pass ? exit_ok : exit_fail;
    }

    if (*heat) {
      auto lg = load_graph(heat_graph);
      const auto times = parse_times(heat_times);
      const auto u0 = parse_u0(heat_u0, lg.graph.num_vertices(), common.seed);
      HeatSolution sol;
      std::optional<Potential> q;
      if (!heat_q.empty()) {
        Eigen::MatrixXd vals(lg.graph.num_vertices(), 1);
        if (heat_q.rfind("const:", 0) == 0) {
          vals.setConstant(std::stod(heat_q.substr(6)));
        } else if (heat_q.rfind("random:", 0) == 0) {
          const double amp = std::stod(heat_q.substr(7));
          CounterRng rng(common.seed, {0x9u});
          for (int x = 0; x < vals.rows(); ++x) vals(x, 0) = rng.uniform(-amp, amp);
        } else {
          std::cerr << "bad --q spec\n";
          return exit_usage;
        }
        q = Potential::measured(lg.graph, lg.measure, vals, {0.0});
        sol = heat_with_potential(lg.graph, lg.measure, u0, *q, times);
      } else {
        sol = heat_semigroup(lg.graph, lg.measure, u0, times);
      }
      save_heat_solution(heat_out, lg.graph, lg.measure, sol, q ? &*q : nullptr);
      ojson params{{"graph", heat_graph}, {"u0", heat_u0}, {"times", heat_times}, {"q", heat_q}};
      emit(common, "heat", params,
           ojson{{"solution", heat_out + ".json"},
                 {"provenance", sol.provenance},
                 {"positive", sol.positive},
                 {"max_rel_mass_drift", sol.mass_drift}});
      return exit_ok;
    }

    if (*liyau) {
      auto ls = load_heat_solution(ly_sol);
      GradientEstimateParams p;
      p.n = parse_dim(ly_n);
      p.k = ly_k;
      p.alpha = ly_alpha;
      p.x0 = ly_x0;
      p.radius = ly_r;
      p.epsilon = ly_eps;
      p.seed = common.seed;
      p.hypothesis = ly_hypothesis == "assume"  ? HypothesisCheck::assume
                     : ly_hypothesis == "full" ? HypothesisCheck::full
                                               : HypothesisCheck::sampled;
      if (ls.has_potential) p.q = &ls.potential;
      CutoffFunction cut;
      if (!ly_cutoff.empty()) {
        cut = parse_cutoff(ly_cutoff, ls.graph);
        p.cutoff = &cut;
      }
      GradientTheorem theorem;
      if (ly_theorem == "finite_n0")
        theorem = GradientTheorem::finite_n0;
      else if (ly_theorem == "finite_nK")
        theorem = GradientTheorem::finite_nK;
      else if (ly_theorem == "potential")
        theorem = GradientTheorem::potential;
      else if (ly_theorem == "ball_weak")
        theorem = GradientTheorem::ball_weak;
      else if (ly_theorem == "ball_strong")
        theorem = GradientTheorem::ball_strong;
      else {
        std::cerr << "unknown theorem: " << ly_theorem << "\n";
        return exit_usage;
      }
      const auto rep = verify_gradient_estimate(ls.graph, ls.measure, ls.solution, theorem, p);
      ojson params{{"solution", ly_sol}, {"theorem", ly_theorem}, {"n", ly_n},
                   {"K", ly_k},          {"alpha", ly_alpha},     {"x0", ly_x0},
                   {"R", ly_r},          {"cutoff", ly_cutoff}};
      emit(common, "liyau", params, rep.to_json());
      if (!rep.hypothesis_ok) return exit_hypothesis;
      return rep.min_margin >= -common.tolerance ? exit_ok : exit_fail;
    }

    if (*harn) {
      auto ls = load_heat_solution(ha_sol);
      int count = 20;
      if (ha_pairs.rfind("random:", 0) == 0) count = std::stoi(ha_pairs.substr(7));
      CounterRng rng(common.seed, {0x4aULL});
      std::vector<HarnackPair> pairs;
      const auto& times = ls.solution.times;
      for (int i = 0; i < count; ++i) {
        HarnackPair pr;
        pr.x = rng.uniform_int(0, ls.graph.num_vertices() - 1);
        pr.y = rng.uniform_int(0, ls.graph.num_vertices() - 1);
        int i1 = rng.uniform_int(0, static_cast<int>(times.size()) - 2);
        int i2 = rng.uniform_int(i1 + 1, static_cast<int>(times.size()) - 1);
        pr.t1 = times[static_cast<std::size_t>(i1)];
        pr.t2 = times[static_cast<std::size_t>(i2)];
        if (!(pr.t1 > 0.0)) {
          --i;
          continue;
        }
        pairs.push_back(pr);
      }
      const auto rep = verify_harnack(ls.graph, ls.measure, ls.solution, {ha_c1, ha_c2}, pairs,
                                      ha_alpha, ls.has_potential ? &ls.potential : nullptr);
      ojson params{{"solution", ha_sol}, {"pairs", ha_pairs}, {"c1", ha_c1},
                   {"c2", ha_c2},        {"alpha", ha_alpha}};
      emit(common, "harnack", params, rep.to_json());
      if (!rep.hypothesis_ok) return exit_hypothesis;
      return rep.min_log_margin >= -common.tolerance ? exit_ok : exit_fail;
    }

    if (*agm) {
      auto lg = load_graph(ag_graph);
      AgmonQuery q;
      q.x = ag_x;
      q.y = ag_y;
      q.t1 = ag_t1;
      q.t2 = ag_t2;
      q.alpha = ag_alpha;
      q.x0 = ag_x0;
      if (ag_r >= 0.0) q.radius = ag_r;
      q.max_path_length = ag_cap;
      const auto res = agmon_distance(lg.graph, lg.measure, q);
      ojson params{{"graph", ag_graph}, {"x", ag_x},         {"y", ag_y},
                   {"T1", ag_t1},       {"T2", ag_t2},       {"alpha", ag_alpha},
                   {"x0", ag_x0},       {"R", ag_r},         {"cap", ag_cap}};
      emit(common, "agmon", params, res.to_json());
      return exit_ok;
    }

    if (*spec_cmd) {
      auto lg = load_graph(sp_graph);
      const auto spec = spectrum(lg.graph, lg.measure);
      ojson result;
      result["eigenvalues"] =
          std::vector<double>(spec.eigenvalues.data(),
                              spec.eigenvalues.data() + spec.eigenvalues.size());
      result["lambda1"] = spec.eigenvalues(1);
      result["volume"] = spec.volume;
      if (!sp_csv.empty()) {
        std::ofstream csv(sp_csv);
        csv << "i,lambda\n";
        for (int i = 0; i < spec.eigenvalues.size(); ++i)
          csv << i << "," << std::setprecision(17) << spec.eigenvalues(i) << "\n";
      }
      emit(common, "spectral", ojson{{"graph", sp_graph}}, result);
      return exit_ok;
    }

    if (*chg) {
      auto lg = load_graph(ch_graph);
      const auto method = ch_method == "sweep" ? CheegerMethod::sweep : CheegerMethod::exact;
      const auto [h, cut] = cheeger_constant(lg.graph, lg.measure, method);
      ojson result;
      result["h"] = h;
      result["cut"] = cut.to_json();
      if (!ch_csv.empty()) {
        std::ofstream csv(ch_csv);
        csv << "subset_size,ratio\n";
        for (const auto& [size, ratio] : cheeger_sweep_curve(lg.graph, lg.measure))
          csv << size << "," << std::setprecision(17) << ratio << "\n";
      }
      emit(common, "cheeger", ojson{{"graph", ch_graph}, {"method", ch_method}}, result);
      return exit_ok;
    }

    if (*bus) {
      auto lg = load_graph(bu_graph);
      BuserOptions opt;
      opt.cheeger = bu_method == "sweep" ? CheegerMethod::sweep : CheegerMethod::exact;
      opt.seed = common.seed;
      opt.hypothesis = bu_hypothesis == "assume"  ? HypothesisCheck::assume
                       : bu_hypothesis == "full" ? HypothesisCheck::full
                                                 : HypothesisCheck::sampled;
      const auto rep = verify_buser(lg.graph, lg.measure, parse_dim(bu_n), bu_k, bu_alpha, opt);
      ojson params{{"graph", bu_graph}, {"n", bu_n}, {"K", bu_k}, {"alpha", bu_alpha}};
      emit(common, "buser", params, rep.to_json());
      if (opt.hypothesis != HypothesisCheck::assume && !rep.hypothesis_checked)
        return exit_hypothesis;
      return rep.margin >= -common.tolerance ? exit_ok : exit_fail;
    }

    if (*hkb) {
      auto lg = load_graph(hk_graph);
      std::vector<double> t_grid;
      for (int i = 0; i < hk_tcount; ++i)
        t_grid.push_back(hk_tmin + (hk_tmax - hk_tmin) * i / std::max(1, hk_tcount - 1));
      auto draw_pairs = [&](std::uint64_t tag) {
        CounterRng rng(common.seed, {tag});
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < hk_pairs; ++i)
          pairs.emplace_back(rng.uniform_int(0, lg.graph.num_vertices() - 1),
                             rng.uniform_int(0, lg.graph.num_vertices() - 1));
        return pairs;
      };
      const auto fit_pairs = draw_pairs(0x41ULL);
      const auto check_pairs = draw_pairs(0x42ULL);
      const auto constants =
          fit_heat_kernel_bounds(lg.graph, lg.measure, hk_n, fit_pairs, t_grid, hk_slack);
      const auto rep =
          verify_heat_kernel_bounds(lg.graph, lg.measure, constants, check_pairs, t_grid);
      ojson params{{"graph", hk_graph}, {"n", hk_n},       {"tmin", hk_tmin},
                   {"tmax", hk_tmax},   {"tcount", hk_tcount}, {"pairs", hk_pairs},
                   {"slack", hk_slack}};
      emit(common, "hkbounds", params, rep.to_json());
      return rep.passed ? exit_ok : exit_fail;
    }

    if (*cut_cmd) {
      auto lg = load_graph(co_graph);
      auto cut = parse_cutoff(co_kind, lg.graph);
      ojson result;
      result["kind"] = co_kind;
      result["center"] = cut.center;
      result["radius"] = cut.radius;
      result["support_size"] = cut.support.size();
      bool pass = true;
      if (co_verify) {
        const double r = co_r > 0.0 ? co_r : cut.radius;
        const auto rep = verify_strong_cutoff(lg.graph, lg.measure, cut, co_c, r, co_k);
        result["verify"] = rep.to_json();
        pass = rep.passed;
      }
      emit(common, "cutoff", ojson{{"graph", co_graph}, {"kind", co_kind}, {"c", co_c},
                                   {"K", co_k}},
           result);
      return pass ? exit_ok : exit_fail;
    }
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  }
  return exit_usage;
}

// fairsc: generate instances, cluster, evaluate, benchmark, convert data.
//
// Exit codes: 0 ok, 2 usage/config, 3 parse or I/O, 4 solver did not
// converge, 5 dense guard (run skipped), 6 invalid input.

#include "fairsc/clustering.hpp"
#include "fairsc/io.hpp"
#include "fairsc/metrics.hpp"
#include "fairsc/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fairsc;

namespace {

enum Exit { kOk = 0, kUsage = 2, kParse = 3, kSolver = 4, kGuard = 5, kInput = 6 };

int exit_code(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Parse:
  case ErrorKind::Io:
    return kParse;
  case ErrorKind::ConvergenceFailure:
  case ErrorKind::ShiftTooSmall:
    return kSolver;
  case ErrorKind::TooLargeForDense:
    return kGuard;
  default:
    return kInput;
  }
}

std::vector<std::vector<Index>> parse_blocks(const std::string &text) {
  // "2,2;2,2;1,1": clusters separated by ';', groups by ','.
  std::vector<std::vector<Index>> u;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::vector<Index> r;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ','))
      r.push_back(detail::parse_index(detail::trim(cell), "--u", 0));
    u.push_back(std::move(r));
  }
  return u;
}

std::string algorithm_name(const std::string &a) {
  if (a != "sc" && a != "sfairsc" && a != "fairsc")
    throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + a + "'");
  return a;
}

// ---- generate ---------------------------------------------------------

struct GenerateArgs {
  std::string kind = "msbm", out = "instance", u, config;
  Index n = 1000, k = 5, h = 5, avg_degree = 10;
  std::uint64_t seed = 1;
  std::optional<double> a, b, c, d;
  double alpha = 1.5, beta = 1.0;
};

void apply_config(GenerateArgs &g, const Config &cfg) {
  cfg.validate_keys({"kind", "n", "k", "h", "seed", "u", "a", "b", "c", "d", "alpha", "beta",
                     "avg_degree", "out"});
  g.kind = cfg.get("kind", g.kind);
  g.n = cfg.get_index("n", g.n);
  g.k = cfg.get_index("k", g.k);
  g.h = cfg.get_index("h", g.h);
  g.seed = cfg.get_index("seed", g.seed);
  g.u = cfg.get("u", g.u);
  g.avg_degree = cfg.get_index("avg_degree", g.avg_degree);
  g.out = cfg.get("out", g.out);
  g.alpha = cfg.get_real("alpha", g.alpha);
  g.beta = cfg.get_real("beta", g.beta);
  for (auto [key, slot] : {std::pair{"a", &g.a}, {"b", &g.b}, {"c", &g.c}, {"d", &g.d}})
    if (cfg.has(key))
      *slot = cfg.get_real(key);
}

int cmd_generate(GenerateArgs g) {
  if (const auto env = read_env_overrides(); env.seed)
    g.seed = *env.seed;
  fs::create_directories(g.out);
  json echo{{"kind", g.kind}, {"seed", g.seed}};

  if (g.kind == "laplacian") {
    const auto inst = random_laplacian_instance(g.n, g.h, g.avg_degree, g.seed);
    save_graph((fs::path(g.out) / "graph.txt").string(), inst.graph);
    auto out = detail::open_out((fs::path(g.out) / "constraint.txt").string());
    for (Index i = 0; i < inst.f.rows(); ++i) {
      for (Index j = 0; j < inst.f.cols(); ++j)
        out << (j ? " " : "") << detail::format_real(inst.f(i, j));
      out << '\n';
    }
    echo.update({{"n", g.n}, {"h", g.h}, {"avg_degree", g.avg_degree}});
  } else {
    SyntheticInstance inst;
    if (g.kind == "msbm") {
      MsbmSpec s;
      if (g.u.empty()) {
        s = msbm_spec_for_experiment(g.n, g.k, g.h, g.seed, {}, g.alpha, g.beta);
      } else {
        s.u = parse_blocks(g.u);
        s.alpha = g.alpha;
        s.beta = g.beta;
        s.seed = g.seed;
      }
      if (g.a) s.a = *g.a;
      if (g.b) s.b = *g.b;
      if (g.c) s.c = *g.c;
      if (g.d) s.d = *g.d;
      inst = generate_msbm(s);
      echo.update({{"u", s.u}, {"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d},
                   {"alpha", s.alpha}, {"beta", s.beta}});
    } else if (g.kind == "sbm") {
      SbmSpec s;
      if (g.u.empty()) {
        require(g.n % g.k == 0, ErrorKind::IndivisibleSize, "n must be divisible by k");
        s.u.assign(g.k, g.n / g.k);
      } else {
        const auto blocks = parse_blocks(g.u);
        require(blocks.size() == 1, ErrorKind::InvalidArgument, "SBM --u is a single list");
        s.u = blocks.front();
      }
      s.a = g.a.value_or(s.a);
      s.b = g.b.value_or(s.b);
      s.alpha = g.alpha;
      s.beta = g.beta;
      s.seed = g.seed;
      inst = generate_sbm(s);
      echo.update({{"u", s.u}, {"a", s.a}, {"b", s.b}, {"alpha", s.alpha}, {"beta", s.beta}});
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown kind '" + g.kind + "'");
    }
    save_graph((fs::path(g.out) / "graph.txt").string(), inst.graph);
    save_labels((fs::path(g.out) / "groups.txt").string(), inst.groups);
    save_labels((fs::path(g.out) / "truth.txt").string(), inst.ground_truth);
  }
  detail::open_out((fs::path(g.out) / "spec.json").string()) << echo.dump(2) << '\n';
  std::cout << "wrote instance to " << g.out << '\n';
  return kOk;
}

// ---- cluster ----------------------------------------------------------

struct ClusterArgs {
  std::string graph, groups, truth, algorithm = "sfairsc", out, record;
  Index k = 2;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::optional<double> sigma;
  int restarts = 10;
  int threads = 1;
  Index dense_guard = 3000;
  bool oracle_check = false;
};

PipelineConfig pipeline_config(std::uint64_t seed, double tol, int restarts, int threads,
                               Index guard, std::optional<double> sigma) {
  PipelineConfig p;
  p.lanczos.seed = seed;
  p.lanczos.tol = tol;
  p.kmeans.seed = seed;
  p.kmeans.n_restarts = restarts;
  p.kmeans.threads = threads;
  p.dense.guard = guard;
  p.sigma = sigma;
  return p;
}

PipelineResult run_algorithm(const std::string &algorithm, const WeightedGraph &g,
                             const GroupPartition &groups, Index k, const PipelineConfig &p) {
  if (algorithm == "sc")
    return sc(g, k, p);
  if (algorithm == "sfairsc")
    return sfairsc(g, groups, k, p);
  return fairsc::fairsc(g, groups, k, p);
}

void fill_metrics(RunRecord &rec, const PipelineResult &r, const GroupPartition &groups,
                  const WeightedGraph &g, const Clustering *truth) {
  const auto rep = evaluate(r.clustering, groups, &g, truth);
  if (rep.error) {
    rec.err = rep.error->err;
    rec.misclustered = rep.error->misclustered_fraction;
  }
  rec.average_balance = rep.balance.average;
  rec.ncut = rep.ncut;
}

int cmd_cluster(ClusterArgs a) {
  const auto env = read_env_overrides();
  if (env.seed)
    a.seed = *env.seed;
  if (env.threads)
    a.threads = *env.threads;
  algorithm_name(a.algorithm);
  const auto g = load_graph(a.graph);
  if (a.algorithm != "sc")
    require(!a.groups.empty(), ErrorKind::InvalidArgument, a.algorithm + " requires --groups");
  const GroupPartition groups = a.groups.empty() ? GroupPartition(std::vector<int>(g.n(), 0), 1)
                                                 : load_groups(a.groups, g.n());
  std::optional<Clustering> truth;
  if (!a.truth.empty())
    truth = load_clustering(a.truth, g.n(), static_cast<int>(a.k));

  const auto p = pipeline_config(a.seed, a.tol, a.restarts, a.threads, a.dense_guard, a.sigma);
  const auto r = run_algorithm(a.algorithm, g, groups, a.k, p);

  RunRecord rec;
  rec.algorithm = a.algorithm;
  rec.n = g.n();
  rec.nnz = g.adjacency().nnz();
  rec.h = static_cast<Index>(groups.groups());
  rec.k = a.k;
  rec.seed = a.seed;
  rec.t_build = r.seconds.build;
  rec.t_eigs = r.seconds.eigs;
  rec.t_kmeans = r.seconds.kmeans;
  rec.matvecs = r.matvec_count;
  fill_metrics(rec, r, groups, g, truth ? &*truth : nullptr);

  if (!a.out.empty())
    save_labels(a.out, r.clustering);
  if (!a.record.empty())
    append_run_record(a.record, rec);

  std::cout << "algorithm " << a.algorithm << "  n " << rec.n << "  k " << a.k << '\n';
  std::cout << "eigenvalues";
  for (double v : r.eigenvalues)
    std::cout << ' ' << detail::format_real(v);
  std::cout << '\n';
  if (a.oracle_check) {
    const auto lap = build_laplacians(g);
    const auto fc = a.algorithm == "sc" ? build_fairness_constraint(
                                              GroupPartition(std::vector<int>(g.n(), 0), 1), lap)
                                        : build_fairness_constraint(groups, lap);
    const auto ref = variant_oracle_eigs(lap, fc, a.k, DenseEigOptions{a.dense_guard});
    double worst = 0.0;
    std::cout << "oracle";
    for (Index j = 0; j < a.k; ++j) {
      std::cout << ' ' << detail::format_real(ref.eigenvalues[j]);
      worst = std::max(worst, std::abs(ref.eigenvalues[j] - r.eigenvalues[j]));
    }
    std::cout << "\noracle_max_abs_diff " << detail::format_real(worst) << '\n';
  }
  std::cout << "time build " << rec.t_build << " eigs " << rec.t_eigs << " kmeans " << rec.t_kmeans
            << "  matvecs " << rec.matvecs << '\n';
  if (rec.err)
    std::cout << "err " << *rec.err << "  misclustered " << *rec.misclustered << '\n';
  std::cout << "average_balance " << *rec.average_balance << '\n';
  return kOk;
}

// ---- evaluate ---------------------------------------------------------

struct EvaluateArgs {
  std::string assignment, groups, truth, graph, out;
};

int cmd_evaluate(const EvaluateArgs &a) {
  std::optional<WeightedGraph> g;
  std::optional<Index> n;
  if (!a.graph.empty()) {
    g = load_graph(a.graph);
    n = g->n();
  }
  auto computed = load_clustering(a.assignment, n);
  n = computed.size();
  std::optional<Clustering> truth;
  if (!a.truth.empty()) {
    truth = load_clustering(a.truth, n);
    // Both sides need the same k for the matched error.
    const int k = std::max(computed.k(), truth->k());
    computed = Clustering(computed.labels(), k);
    truth = Clustering(truth->labels(), k);
  }
  const auto groups = a.groups.empty() ? GroupPartition(std::vector<int>(*n, 0), 1)
                                       : load_groups(a.groups, n);
  const auto rep = evaluate(computed, groups, g ? &*g : nullptr, truth ? &*truth : nullptr);

  json out;
  out["n"] = *n;
  out["k"] = computed.k();
  out["h"] = groups.groups();
  if (rep.error) {
    out["err"] = rep.error->err;
    out["misclustered_fraction"] = rep.error->misclustered_fraction;
    out["permutation"] = rep.error->permutation;
    if (computed.k() <= 6) {
      // Exhaustive check of the matching.
      std::vector<int> perm(static_cast<Index>(computed.k()));
      std::iota(perm.begin(), perm.end(), 0);
      Index best = 0;
      const auto t = contingency(computed, *truth);
      do {
        Index m = 0;
        for (Index r = 0; r < perm.size(); ++r)
          m += t(r, static_cast<Index>(perm[r]));
        best = std::max(best, m);
      } while (std::next_permutation(perm.begin(), perm.end()));
      const double brute = 2.0 * static_cast<double>(*n - best) / static_cast<double>(*n);
      out["brute_force_err"] = brute;
      out["brute_force_agrees"] = brute == rep.error->err;
    }
  }
  out["balance"] = rep.balance.per_cluster;
  out["average_balance"] = rep.balance.average;
  out["empty_clusters"] = rep.balance.empty_clusters;
  std::vector<std::vector<double>> table;
  for (Index s = 0; s < rep.fractions.table.rows(); ++s) {
    table.emplace_back();
    for (Index l = 0; l < rep.fractions.table.cols(); ++l)
      table.back().push_back(rep.fractions.table(s, l));
  }
  out["fractions"] = table; // rows are groups, columns clusters
  std::vector<double> global;
  for (Index s : groups.sizes())
    global.push_back(static_cast<double>(s) / static_cast<double>(*n));
  out["group_fractions"] = global;
  if (rep.ncut)
    out["ncut"] = *rep.ncut;

  if (a.out.empty())
    std::cout << out.dump(2) << '\n';
  else
    detail::open_out(a.out) << out.dump(2) << '\n';
  return kOk;
}

// ---- bench ------------------------------------------------------------

int cmd_bench(const std::string &config_path, std::string output_dir) {
  const auto cfg = Config::load(config_path);
  cfg.validate_keys({"instance", "algorithms", "n", "k", "h", "seeds", "avg_degree", "tol",
                     "output_dir", "dense_guard", "warmup", "kmeans_restarts", "threads",
                     "alpha", "beta", "planted_k"});
  const auto env = read_env_overrides();
  const std::string instance = cfg.get("instance", "msbm");
  require(instance == "msbm" || instance == "laplacian", ErrorKind::InvalidArgument,
          "instance must be msbm or laplacian");
  const auto algorithms = cfg.get_list("algorithms", {"sc", "sfairsc", "fairsc"});
  for (const auto &alg : algorithms)
    algorithm_name(alg);
  const auto ns = cfg.get_index_list("n");
  const auto ks = cfg.get_index_list("k", {5});
  auto seeds = cfg.get_index_list("seeds", {1});
  if (env.seed)
    seeds = {*env.seed};
  const Index h = cfg.get_index("h", 5);
  const Index avg_degree = cfg.get_index("avg_degree", 10);
  const Index planted_k = cfg.get_index("planted_k", 0);
  const double tol = cfg.get_real("tol", 1e-8);
  const Index guard = cfg.get_index("dense_guard", 3000);
  const bool warmup = cfg.get_index("warmup", 1) != 0;
  const int restarts = static_cast<int>(cfg.get_index("kmeans_restarts", 10));
  const int threads = env.threads.value_or(static_cast<int>(cfg.get_index("threads", 1)));
  const double alpha = cfg.get_real("alpha", 1.5), beta = cfg.get_real("beta", 1.0);
  if (output_dir.empty())
    output_dir = cfg.get("output_dir", "bench_out");
  fs::create_directories(output_dir);

  const auto csv_path = (fs::path(output_dir) / "runs.csv").string();
  detail::open_out(csv_path) << RunRecord::csv_header() << '\n';
  auto err_n = detail::open_out((fs::path(output_dir) / "error_vs_n.dat").string());
  auto time_n = detail::open_out((fs::path(output_dir) / "time_vs_n.dat").string());
  auto time_k = detail::open_out((fs::path(output_dir) / "time_vs_k.dat").string());
  auto bal_k = detail::open_out((fs::path(output_dir) / "balance_vs_k.dat").string());
  err_n << "# algorithm n k seed misclustered err\n";
  time_n << "# algorithm n k seed seconds\n";
  time_k << "# algorithm k n seed seconds\n";
  bal_k << "# algorithm k n seed average_balance\n";

  bool skipped = false, warmed = !warmup;
  for (Index n : ns)
    for (std::uint64_t seed : seeds)
      for (Index k : ks) {
        // Instance for this point.
        std::optional<SyntheticInstance> syn;
        std::optional<RandomLaplacianInstance> rnd;
        if (instance == "msbm")
          syn = generate_msbm(
              msbm_spec_for_experiment(n, planted_k ? planted_k : k, h, seed, {}, alpha, beta));
        else
          rnd = random_laplacian_instance(n, h, avg_degree, seed);
        const WeightedGraph &g = syn ? syn->graph : rnd->graph;
        const auto p = pipeline_config(seed, tol, restarts, threads, guard, std::nullopt);

        for (const auto &alg : algorithms) {
          RunRecord rec;
          rec.algorithm = alg;
          rec.n = n;
          rec.nnz = g.adjacency().nnz();
          rec.h = h;
          rec.k = k;
          rec.seed = seed;
          if (alg == "fairsc" && n > guard) {
            rec.status = "skipped: dense guard";
            skipped = true;
            append_run_record(csv_path, rec);
            continue;
          }
          auto run = [&] {
            if (syn)
              return run_algorithm(alg, g, syn->groups, k, p);
            const auto lap = build_laplacians(g);
            const auto fc = fairness_constraint_from_matrix(rnd->f, lap);
            if (alg == "sc")
              return sc(g, k, p);
            auto r = alg == "sfairsc" ? sfairsc(lap, fc, k, p) : fairsc::fairsc(lap, fc, k, p);
            return r;
          };
          if (!warmed) {
            run(); // discarded
            warmed = true;
          }
          const auto r = run();
          rec.t_build = r.seconds.build;
          rec.t_eigs = r.seconds.eigs;
          rec.t_kmeans = r.seconds.kmeans;
          rec.matvecs = r.matvec_count;
          if (syn) {
            const Clustering *truth = syn->ground_truth.k() == static_cast<int>(k)
                                          ? &syn->ground_truth
                                          : nullptr;
            fill_metrics(rec, r, syn->groups, g, truth);
          }
          append_run_record(csv_path, rec);
          const double total = rec.t_build + rec.t_eigs + rec.t_kmeans;
          if (rec.misclustered)
            err_n << alg << ' ' << n << ' ' << k << ' ' << seed << ' ' << *rec.misclustered << ' '
                  << *rec.err << '\n';
          time_n << alg << ' ' << n << ' ' << k << ' ' << seed << ' ' << total << '\n';
          time_k << alg << ' ' << k << ' ' << n << ' ' << seed << ' ' << total << '\n';
          if (rec.average_balance)
            bal_k << alg << ' ' << k << ' ' << n << ' ' << seed << ' ' << *rec.average_balance
                  << '\n';
          std::cout << rec.csv_row() << '\n';
        }
      }
  if (skipped) {
    std::cerr << "some fairsc runs exceeded the dense guard and were skipped\n";
    return kGuard;
  }
  return kOk;
}

// ---- convert ----------------------------------------------------------

struct ConvertArgs {
  std::string edges, groups, out_graph, out_groups, out_ids;
};

int cmd_convert(const ConvertArgs &a) {
  auto in = detail::open_in(a.edges);
  const auto conv = convert_raw_edges(in, a.edges);
  {
    auto out = detail::open_out(a.out_graph);
    write_edge_list(out, conv.adjacency);
  }
  if (!a.out_ids.empty()) {
    auto out = detail::open_out(a.out_ids);
    for (Index i = 0; i < conv.original_ids.size(); ++i)
      out << i << ' ' << conv.original_ids[i] << '\n';
  }
  if (!a.groups.empty()) {
    require(!a.out_groups.empty(), ErrorKind::InvalidArgument, "--groups needs --out-groups");
    auto gin = detail::open_in(a.groups);
    const auto labels = convert_raw_groups(gin, conv, a.groups);
    save_labels(a.out_groups, GroupPartition(labels, label_count(labels)));
  }
  std::cout << "kept " << conv.adjacency.rows() << " vertices, " << conv.adjacency.nnz() / 2
            << " edges (largest connected component, unit weights)\n";
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Group-fair spectral clustering"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help"); // frees -h/--h for the group count

  GenerateArgs gen;
  auto *g = app.add_subcommand("generate", "write a synthetic instance");
  g->add_option("--config", gen.config, "key = value file; flags override it");
  g->add_option("--kind", gen.kind, "msbm | sbm | laplacian");
  g->add_option("--n", gen.n);
  g->add_option("--k", gen.k);
  g->add_option("--h", gen.h);
  g->add_option("--seed", gen.seed);
  g->add_option("--u", gen.u, "block sizes, e.g. \"2,2;2,2;1,1\" (m-SBM) or \"2,2,2\" (SBM)");
  g->add_option("--a", gen.a);
  g->add_option("--b", gen.b);
  g->add_option("--c", gen.c);
  g->add_option("--d", gen.d);
  g->add_option("--alpha", gen.alpha);
  g->add_option("--beta", gen.beta);
  g->add_option("--avg-degree", gen.avg_degree);
  g->add_option("--out", gen.out, "output directory");

  ClusterArgs cl;
  auto *c = app.add_subcommand("cluster", "cluster a graph");
  c->add_option("--graph", cl.graph)->required();
  c->add_option("--groups", cl.groups);
  c->add_option("--truth", cl.truth, "ground-truth assignment for the error rate");
  c->add_option("--algorithm", cl.algorithm, "sc | sfairsc | fairsc");
  c->add_option("--k", cl.k)->required();
  c->add_option("--seed", cl.seed);
  c->add_option("--tol", cl.tol);
  c->add_option("--sigma", cl.sigma, "deflation shift (default ||L_n||_1)");
  c->add_option("--kmeans-restarts", cl.restarts);
  c->add_option("--threads", cl.threads);
  c->add_option("--dense-guard", cl.dense_guard);
  c->add_option("--out", cl.out, "assignment file");
  c->add_option("--record", cl.record, "CSV file to append a run record to");
  c->add_flag("--oracle-check", cl.oracle_check, "compare eigenvalues with the dense oracle");

  EvaluateArgs ev;
  auto *e = app.add_subcommand("evaluate", "score an assignment");
  e->add_option("--assignment", ev.assignment)->required();
  e->add_option("--groups", ev.groups);
  e->add_option("--truth", ev.truth);
  e->add_option("--graph", ev.graph);
  e->add_option("--out", ev.out, "report file (default stdout)");

  std::string bench_config, bench_out;
  auto *b = app.add_subcommand("bench", "run a sweep from a config file");
  b->add_option("--config", bench_config)->required();
  b->add_option("--out", bench_out, "output directory (overrides output_dir)");

  ConvertArgs cv;
  auto *v = app.add_subcommand("convert", "raw edge list -> largest component, unit weights");
  v->add_option("--edges", cv.edges)->required();
  v->add_option("--groups", cv.groups, "raw 'id group' file");
  v->add_option("--out-graph", cv.out_graph)->required();
  v->add_option("--out-groups", cv.out_groups);
  v->add_option("--out-ids", cv.out_ids, "new id -> original id map");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) {
      if (!gen.config.empty()) {
        // Config first, then re-apply flags given explicitly.
        GenerateArgs merged;
        apply_config(merged, Config::load(gen.config));
        for (auto *opt : g->get_options())
          if (opt->count() > 0 && opt->get_name() != "--config") {
            const auto name = opt->get_name();
            if (name == "--kind") merged.kind = gen.kind;
            else if (name == "--n") merged.n = gen.n;
            else if (name == "--k") merged.k = gen.k;
            else if (name == "--h") merged.h = gen.h;
            else if (name == "--seed") merged.seed = gen.seed;
            else if (name == "--u") merged.u = gen.u;
            else if (name == "--a") merged.a = gen.a;
            else if (name == "--b") merged.b = gen.b;
            else if (name == "--c") merged.c = gen.c;
            else if (name == "--d") merged.d = gen.d;
            else if (name == "--alpha") merged.alpha = gen.alpha;
            else if (name == "--beta") merged.beta = gen.beta;
            else if (name == "--avg-degree") merged.avg_degree = gen.avg_degree;
            else if (name == "--out") merged.out = gen.out;
          }
        return cmd_generate(merged);
      }
      return cmd_generate(gen);
    }
    if (*c)
      return cmd_cluster(cl);
    if (*e)
      return cmd_evaluate(ev);
    if (*b)
      return cmd_bench(bench_config, bench_out);
    if (*v)
      return cmd_convert(cv);
  } catch (const Error &err) {
    std::cerr << "error (" << to_string(err.kind()) << "): " << err.what() << '\n';
    return exit_code(err.kind());
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInput;
  }
  return kUsage;
}

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ssepotts/generators.hpp>
#include <ssepotts/report.hpp>
#include <ssepotts/ssepotts.hpp>

using namespace ssepotts;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kPrecondition = 1, kVerification = 2, kBudget = 3 };

struct Config {
  std::string input;
  std::string gen;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 1;
  int threads = 1;

  int k = 2;
  int q = 2;
  double beta = 0;
  double eps = 0.1;
  double C = 1.0;

  std::string mode = "sse";
  double alpha = 0;
  double eta = 0;
  std::string parts_file;
  bool no_fallback = false;
  bool ursell = false;

  std::uint64_t budget_states = kOracleStateBudget;
  std::uint64_t budget_polymers = kPolymerCountBudget;
  std::uint64_t budget_clusters = kClusterBudget;
  std::uint64_t budget_families = 10'000'000;
  std::uint64_t budget_ground_states = kGroundStateCap;
  std::size_t budget_exact_conductance = 20;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Graph load_graph(const Config& c) {
  if (!c.gen.empty() && !c.input.empty()) throw PreconditionError("give either an input file or --gen, not both");
  if (!c.gen.empty()) return generate(c.gen, c.seed);
  if (c.input.empty()) throw PreconditionError("no input graph (file path or --gen spec)");
  return parse_edge_list(read_file(c.input));
}

/// One part per line, whitespace-separated vertex ids; '#' starts a comment.
std::vector<VertexSet> load_parts(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<VertexSet> parts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<Vertex> ids;
    std::string tok;
    while (ls >> tok) {
      if (tok.find_first_not_of("0123456789") != std::string::npos) throw ParseError(lineno, "bad vertex id '" + tok + "'");
      ids.push_back(static_cast<Vertex>(std::stoul(tok)));
    }
    if (!ids.empty()) parts.emplace_back(std::move(ids));
  }
  if (parts.empty()) throw PreconditionError("parts file " + path + " has no parts");
  return parts;
}

void warn_budgets(const Config& c) {
  const Config d;
  auto warn = [](const char* name, auto value) {
    std::cerr << "WARNING: " << name << " overridden to " << value << "\n";
  };
  if (c.budget_states != d.budget_states) warn("--budget-states", c.budget_states);
  if (c.budget_polymers != d.budget_polymers) warn("--budget-polymers", c.budget_polymers);
  if (c.budget_clusters != d.budget_clusters) warn("--budget-clusters", c.budget_clusters);
  if (c.budget_families != d.budget_families) warn("--budget-families", c.budget_families);
  if (c.budget_ground_states != d.budget_ground_states) warn("--budget-ground-states", c.budget_ground_states);
  if (c.budget_exact_conductance != d.budget_exact_conductance)
    warn("--budget-exact-conductance", c.budget_exact_conductance);
}

OracleOptions oracle_options(const Config& c) {
  OracleOptions o;
  o.threads = c.threads;
  o.state_budget = c.budget_states;
  o.family_budget = c.budget_families;
  return o;
}

PottsOptions potts_options(const Config& c) {
  PottsOptions o;
  o.threads = c.threads;
  o.allow_bruteforce = !c.no_fallback;
  o.cluster.method = c.ursell ? ClusterMethod::Ursell : ClusterMethod::Series;
  o.cluster.polymer_budget = c.budget_polymers;
  o.cluster.cluster_budget = c.budget_clusters;
  o.oracle = oracle_options(c);
  o.ground_state_cap = c.budget_ground_states;
  return o;
}

PartitionParams partition_params(const Config& c) {
  PartitionParams p;
  p.k = c.k;
  p.C = c.C;
  p.brute_force_limit = c.budget_exact_conductance;
  return p;
}

void emit(const Config& c, const json& j, const std::string& text) {
  std::string out = c.format == "text" ? text : j.dump(2) + "\n";
  if (c.output.empty()) {
    std::cout << out;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + c.output);
  f << out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string parts_text(const std::vector<VertexSet>& parts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    os << "  part " << i << " (" << parts[i].size() << "):";
    for (Vertex v : parts[i]) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

int cmd_partition(const Config& c) {
  const Graph g = load_graph(c);
  const auto p = partition_into_expanders(g, partition_params(c));
  std::ostringstream text;
  text << "ell = " << p.ell() << " (k = " << p.k << ", C = " << fmt(p.C) << ")\n"
       << "phi_in = " << fmt(p.constants.phi_in) << ", phi_out = " << fmt(p.constants.phi_out)
       << ", tau = " << fmt(p.constants.tau) << "\n"
       << parts_text(p.parts) << "main loop iterations = " << p.iterations.main_loop << "\n"
       << "certificates: " << (p.report.ok() ? "PASS" : "FAIL") << "\n";
  emit(c, partition_json(p), text.str());
  return p.report.ok() ? kOk : kVerification;
}

struct PottsRun {
  PottsResult result;
  json extra;
};

PottsRun run_potts(const Config& c, const Graph& g) {
  if (!(c.eps > 0)) throw PreconditionError("--eps must be positive");
  const PottsOptions opt = potts_options(c);
  PottsRun run;
  if (c.mode == "sse") {
    SseOptions so;
    so.potts = opt;
    so.partition = partition_params(c);
    const SseResult r = approx_z_sse(g, c.k, c.q, c.beta, c.eps, so);
    run.result = r.potts;
    run.extra = {{"alpha", r.alpha}, {"partition", partition_json(r.partition)}};
    return run;
  }
  if (!(c.alpha > 0)) throw PreconditionError("--alpha is required for mode " + c.mode);
  if (c.mode == "expander") {
    run.result = approx_z_expander(g, c.q, c.beta, c.eps, c.alpha, opt);
  } else if (c.mode == "partition") {
    if (c.parts_file.empty()) throw PreconditionError("--parts is required for mode partition");
    const auto parts = load_parts(c.parts_file);
    run.result = c.eta > 0 ? approx_z_with_partition(g, parts, c.alpha, c.q, c.beta, c.eps, c.eta, opt)
                           : approx_z_good_parts(g, parts, c.alpha, c.q, c.beta, c.eps, opt);
  } else {
    throw PreconditionError("unknown mode '" + c.mode + "'");
  }
  run.extra = {{"alpha", c.alpha}};
  return run;
}

std::string potts_text(const PottsResult& r) {
  std::ostringstream os;
  os << "log Z ~ " << fmt(r.approx.log_value) << " (eps bound " << fmt(r.approx.eps_bound) << ")\n"
     << "mode = " << r.mode << ", ground states = " << r.ground_states << ", depth = " << r.truncation_depth
     << ", clusters = " << r.clusters_evaluated << "\n"
     << "beta threshold = " << fmt(r.beta_threshold) << "\n";
  return os.str();
}

int cmd_potts(const Config& c) {
  const Graph g = load_graph(c);
  const PottsRun run = run_potts(c, g);
  json j = potts_json(run.result);
  j["q"] = c.q;
  j["beta"] = c.beta;
  j["eps"] = c.eps;
  for (const auto& [key, value] : run.extra.items()) j[key] = value;
  emit(c, j, potts_text(run.result));
  return kOk;
}

int cmd_oracle(const Config& c) {
  const Graph g = load_graph(c);
  if (c.q < 2) throw PreconditionError("q must be at least 2");
  const double log_z = exact_log_z(g, c.q, c.beta, oracle_options(c));
  emit(c, oracle_json(log_z, g.num_vertices(), g.num_edges(), c.q, c.beta), "log Z = " + fmt(log_z) + "\n");
  return kOk;
}

int cmd_verify(const Config& c) {
  const Graph g = load_graph(c);
  const PottsRun run = run_potts(c, g);
  const double exact = exact_log_z(g, c.q, c.beta, oracle_options(c));
  const double diff = std::abs(run.result.approx.log_value - exact);
  const bool pass = diff <= run.result.approx.eps_bound;
  json j = {{"schemaVersion", kSchemaVersion},
            {"approx", potts_json(run.result)},
            {"exactLogZ", exact},
            {"absError", diff},
            {"epsBound", run.result.approx.eps_bound},
            {"pass", pass}};
  emit(c, j,
       std::string(pass ? "PASS" : "FAIL") + ": |log Z_hat - log Z| = " + fmt(diff) + " vs bound " +
           fmt(run.result.approx.eps_bound) + "\n");
  return pass ? kOk : kVerification;
}

int cmd_generate(const Config& c) {
  const Graph g = generate(c.gen, c.seed);
  const std::string text = serialize_edge_list(g);
  Config out = c;
  out.format = "text";
  emit(out, {}, text);
  return kOk;
}

void add_graph_input(CLI::App* sub, Config& c) {
  sub->add_option("input", c.input, "edge-list file");
  sub->add_option("--gen", c.gen, "generator spec instead of a file, e.g. cycle(8)");
}

void add_potts_flags(CLI::App* sub, Config& c) {
  sub->add_option("--q", c.q, "number of colours")->check(CLI::Range(2, 1 << 20));
  sub->add_option("--beta", c.beta, "inverse temperature")->required();
  sub->add_option("--eps", c.eps, "requested relative error");
  sub->add_option("--mode", c.mode, "sse | expander | partition")->check(CLI::IsMember({"sse", "expander", "partition"}));
  sub->add_option("--k", c.k, "k for the sse pipeline");
  sub->add_option("--C", c.C, "constant of the partitioning lemma");
  sub->add_option("--alpha", c.alpha, "expansion constant (expander / partition modes)");
  sub->add_option("--eta", c.eta, "bad-part threshold; enables cutting out small parts");
  sub->add_option("--parts", c.parts_file, "parts file, one part per line");
  sub->add_flag("--no-fallback", c.no_fallback, "never switch to brute force for tiny eps");
  sub->add_flag("--ursell", c.ursell, "sum clusters explicitly with Ursell coefficients");
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--seed", c.seed, "generator seed");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 1024));
  sub->add_option("--format", c.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("-o,--output", c.output, "write output here instead of stdout");
  sub->add_option("--budget-states", c.budget_states, "colouring enumeration cap");
  sub->add_option("--budget-polymers", c.budget_polymers, "polymer enumeration cap");
  sub->add_option("--budget-clusters", c.budget_clusters, "cluster enumeration cap");
  sub->add_option("--budget-families", c.budget_families, "compatible family cap");
  sub->add_option("--budget-ground-states", c.budget_ground_states, "ground state cap");
  sub->add_option("--budget-exact-conductance", c.budget_exact_conductance,
                  "largest part checked by exact conductance enumeration");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expander partitioning and low-temperature Potts partition functions"};
  app.require_subcommand(1);
  Config c;

  auto* partition = app.add_subcommand("partition", "partition a graph into expanders");
  add_graph_input(partition, c);
  add_common(partition, c);
  partition->add_option("--k", c.k, "spectral index k")->check(CLI::Range(2, 1 << 20));
  partition->add_option("--C", c.C, "constant of the partitioning lemma");

  auto* potts = app.add_subcommand("potts", "approximate log Z");
  add_graph_input(potts, c);
  add_common(potts, c);
  add_potts_flags(potts, c);

  auto* verify = app.add_subcommand("verify", "compare the approximation against exact enumeration");
  add_graph_input(verify, c);
  add_common(verify, c);
  add_potts_flags(verify, c);

  auto* oracle = app.add_subcommand("oracle", "exact log Z by enumeration");
  add_graph_input(oracle, c);
  add_common(oracle, c);
  oracle->add_option("--q", c.q, "number of colours")->check(CLI::Range(2, 1 << 20));
  oracle->add_option("--beta", c.beta, "inverse temperature")->required();

  auto* gen = app.add_subcommand("generate", "write a generated graph as an edge list");
  gen->add_option("spec", c.gen, "random-regular(n,d) | clique-chain(t,s,bridges) | cycle(n) | complete(n)")->required();
  gen->add_option("--seed", c.seed, "generator seed");
  gen->add_option("-o,--output", c.output, "write output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kPrecondition;
  }

  try {
    warn_budgets(c);
    if (*partition) return cmd_partition(c);
    if (*potts) return cmd_potts(c);
    if (*verify) return cmd_verify(c);
    if (*oracle) return cmd_oracle(c);
    if (*gen) return cmd_generate(c);
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: value out of range: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::logic_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }
  return kPrecondition;
}

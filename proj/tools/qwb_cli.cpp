// Batch front end for the workbench.  One process runs one command and
// prints a machine-readable report (json or csv) with the tolerance, seed
// and version embedded so runs can be reproduced byte for byte.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwb/adversary.hpp"
#include "qwb/dual_adversary.hpp"
#include "qwb/electric_walks.hpp"
#include "qwb/learning_graphs.hpp"
#include "qwb/quantum_sim.hpp"
#include "qwb/span_programs.hpp"

using nlohmann::json;
using namespace qwb;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitBudget = 4;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

struct RunConfig {
  unsigned long long seed = 1;
  double tol = 1e-9;
  std::string format = "json";
  std::string out;
  int threads = 1;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitParse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_csv(const json& j) {
  std::ostringstream out;
  out << "i,j,value\n";
  int row = 0;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_array()) {
      int col = 0;
      for (const auto& v : it.value())
        out << row << "," << col++ << "," << v.dump() << "\n";
    } else {
      out << row << ",0," << it.value().dump() << "\n";
    }
    ++row;
  }
  return out.str();
}

void emit(const RunConfig& cfg, const std::string& command, json body) {
  body["command"] = command;
  body["version"] = kVersion;
  body["tolerance"] = cfg.tol;
  body["seed"] = cfg.seed;
  std::string text =
      cfg.format == "csv" ? format_csv(body) : body.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw CliError(kExitParse, "cannot write " + cfg.out);
    f << text;
  }
}

std::map<std::string, long> collect_params(long n, long k, long q, long d,
                                           long m, long half) {
  std::map<std::string, long> p;
  if (n >= 0) p["n"] = n;
  if (k >= 0) p["k"] = k;
  if (q >= 0) p["q"] = q;
  if (d >= 0) p["d"] = d;
  if (m >= 0) p["m"] = m;
  if (half >= 0) p["half"] = half;
  return p;
}

PartialFunction named_or_throw(const std::string& family,
                               const std::map<std::string, long>& params) {
  try {
    return make_named(family, params);
  } catch (const std::exception& e) {
    throw CliError(kExitParse, e.what());
  }
}

int hamming(const Input& x, const Input& y) {
  int d = 0;
  for (size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

Input parse_input(const std::string& s) {
  Input z;
  for (char c : s) {
    if (c < '0' || c > '9') throw CliError(kExitParse, "bad input string");
    z.push_back(c - '0');
  }
  return z;
}

WeightedGraph load_graph(const std::string& graph_path,
                         const std::string& dist_path) {
  WeightedGraph g;
  try {
    g = weighted_graph_from_text(slurp(graph_path));
    if (!dist_path.empty()) load_distribution_json(g, slurp(dist_path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kExitParse, e.what());
  }
  return g;
}

LGBundle lg_by_name(const std::string& name, long n, long k, long r, long l) {
  if (name == "trivial") return trivial_lg((int)n);
  if (name == "or") return or_lg((int)n);
  if (name == "collision") return collision_lg((int)n, (int)r);
  if (name == "ksubset") return ksubset_lg((int)n, (int)k, (int)r);
  if (name == "triangle") return triangle_lg((int)n, (int)k, (int)r, (int)l);
  throw CliError(kExitParse, "unknown construction " + name);
}

// smallest certifying restriction of z, by growing support size
json extract_certificate(const PartialFunction& f, const Input& z) {
  if (!f.find(z)) throw CliError(kExitParse, "input not in the domain");
  if (f.n > 20) throw CliError(kExitBudget, "certificate scan too large");
  for (int size = 0; size <= f.n; ++size) {
    for (uint32_t mask = 0; mask < (1u << f.n); ++mask) {
      if (__builtin_popcount(mask) != size) continue;
      Assignment a = Assignment::restrict_to(z, mask);
      if (is_certificate(f, a)) {
        json out;
        out["value"] = f.value_of(z);
        out["positions"] = a.support;
        out["values"] = a.values;
        out["size"] = size;
        return out;
      }
    }
  }
  throw CliError(kExitInfeasible, "no certificate found");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* t = std::getenv("ADVERSARIUM_THREADS"))
    cfg.threads = std::max(1, std::atoi(t));

  CLI::App app{"quantum query complexity workbench"};
  app.require_subcommand(1);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--tol", cfg.tol, "numeric tolerance");
  app.add_option("--format", cfg.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "write the report to a file");

  // ---- adv -----------------------------------------------------------------
  auto* adv = app.add_subcommand("adv", "primal adversary matrices")->fallthrough();
  auto* adv_ratio_cmd = adv->add_subcommand("ratio", "spectral ratio report")->fallthrough();
  std::string function, construction = "relation", weights, matrix_path;
  long n = -1, k = -1, q = -1, d = -1, m = -1, half = -1;
  adv_ratio_cmd->add_option("--function", function);
  adv_ratio_cmd->add_option("--construction", construction);
  adv_ratio_cmd->add_option("--weights", weights, "comma separated");
  adv_ratio_cmd->add_option("--matrix", matrix_path, "matrix json file");
  adv_ratio_cmd->add_option("--n", n);
  adv_ratio_cmd->add_option("--k", k);

  // ---- dual ----------------------------------------------------------------
  auto* dual = app.add_subcommand("dual", "dual adversary solutions")->fallthrough();
  auto* dual_check = dual->add_subcommand("check", "feasibility + objective")->fallthrough();
  std::string dual_function, dual_file;
  dual_check->add_option("--function", dual_function, "threshold|maj3");
  dual_check->add_option("--file", dual_file, "unsupported: solutions are built in");
  dual_check->add_option("--n", n);
  dual_check->add_option("--k", k);

  // ---- span ----------------------------------------------------------------
  auto* span = app.add_subcommand("span", "span programs")->fallthrough();
  std::string program_path, input_str;
  bool use_stored = false;
  long runs = 1;
  auto* span_eval = span->add_subcommand("eval", "evaluate on one input")->fallthrough();
  span_eval->add_option("--program", program_path)->required();
  span_eval->add_option("--input", input_str)->required();
  auto* span_wsize = span->add_subcommand("wsize", "witness sizes")->fallthrough();
  span_wsize->add_option("--program", program_path)->required();
  span_wsize->add_flag("--stored", use_stored, "use stored witnesses");
  auto* span_sim = span->add_subcommand("simulate", "run the compiled algorithm")->fallthrough();
  span_sim->add_option("--program", program_path)->required();
  span_sim->add_option("--input", input_str)->required();
  span_sim->add_option("--runs", runs);

  // ---- lg ------------------------------------------------------------------
  auto* lg = app.add_subcommand("lg", "learning graphs")->fallthrough();
  std::string lg_construction, cert_name, alpha_mode = "builtin";
  long r = -1, l = -1;
  auto* lg_cx = lg->add_subcommand("complexity", "negative/positive complexity")->fallthrough();
  lg_cx->add_option("--construction", lg_construction)->required();
  lg_cx->add_option("--n", n);
  lg_cx->add_option("--k", k);
  lg_cx->add_option("--r", r);
  lg_cx->add_option("--l", l);
  auto* lg_dc = lg->add_subcommand("dual-check", "dual certificate scan")->fallthrough();
  lg_dc->add_option("--cert", cert_name)->required();
  lg_dc->add_option("--n", n);
  lg_dc->add_option("--k", k);
  lg_dc->add_option("--alpha", alpha_mode);
  auto* lg_sim = lg->add_subcommand("simulate", "run the graph as a walk")->fallthrough();
  lg_sim->add_option("--construction", lg_construction)->required();
  lg_sim->add_option("--function", function)->required();
  lg_sim->add_option("--input", input_str)->required();
  lg_sim->add_option("--n", n);
  lg_sim->add_option("--k", k);
  lg_sim->add_option("--r", r);
  lg_sim->add_option("--l", l);
  lg_sim->add_option("--q", q);
  lg_sim->add_option("--d", d);

  // ---- walk ----------------------------------------------------------------
  auto* walk = app.add_subcommand("walk", "electric networks and walks")->fallthrough();
  std::string graph_path, dist_path;
  long s_vertex = -1, t_vertex = -1;
  double r_bound = 0.0;
  auto* walk_res = walk->add_subcommand("resistance", "effective resistance")->fallthrough();
  walk_res->add_option("--graph", graph_path)->required();
  walk_res->add_option("--dist", dist_path)->required();
  auto* walk_hit = walk->add_subcommand("hitting", "hitting time")->fallthrough();
  walk_hit->add_option("--graph", graph_path)->required();
  walk_hit->add_option("--dist", dist_path)->required();
  auto* walk_commute = walk->add_subcommand("commute", "commute identity")->fallthrough();
  walk_commute->add_option("--graph", graph_path)->required();
  walk_commute->add_option("--s", s_vertex)->required();
  walk_commute->add_option("--t", t_vertex)->required();
  auto* walk_run = walk->add_subcommand("run", "electric quantum walk")->fallthrough();
  walk_run->add_option("--graph", graph_path)->required();
  walk_run->add_option("--dist", dist_path)->required();
  walk_run->add_option("--rbound", r_bound)->required();

  // ---- cert ----------------------------------------------------------------
  auto* cert = app.add_subcommand("cert", "certificates")->fallthrough();
  auto* cert_extract = cert->add_subcommand("extract", "minimal certificate")->fallthrough();
  cert_extract->add_option("--function", function)->required();
  cert_extract->add_option("--input", input_str)->required();
  cert_extract->add_option("--n", n);
  cert_extract->add_option("--k", k);
  cert_extract->add_option("--q", q);
  cert_extract->add_option("--d", d);
  cert_extract->add_option("--m", m);
  cert_extract->add_option("--half", half);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*adv_ratio_cmd) {
      AdversaryMatrix g;
      if (!matrix_path.empty()) {
        json j = json::parse(slurp(matrix_path));
        auto f = PartialFunction{};
        try {
          f = function_from_json(j.at("function").dump());
        } catch (const std::exception& e) {
          throw CliError(kExitParse, e.what());
        }
        g = AdversaryMatrix::for_function(f);
        auto rows = j.at("matrix");
        if ((long)rows.size() != g.m.rows())
          throw CliError(kExitParse, "matrix shape mismatch");
        for (long i = 0; i < g.m.rows(); ++i)
          for (long c = 0; c < g.m.cols(); ++c)
            g.m(i, c) = rows[i][c].get<double>();
      } else if (function == "threshold" && construction == "relation") {
        auto f = named_or_throw("threshold", collect_params(n, k, q, d, m, half));
        g = relation_adversary(f, f.preimage(1), f.preimage(0),
                               [](const Input& x, const Input& y) {
                                 return hamming(x, y) == 1;
                               });
      } else if (function == "ambainis") {
        std::vector<double> w;
        std::stringstream ss(weights);
        std::string tok;
        while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
        if (w.size() != 4)
          throw CliError(kExitParse, "ambainis needs 4 weights");
        g = monotone4_gamma(w[0], w[1], w[2], w[3]);
      } else {
        throw CliError(kExitParse, "unknown function/construction");
      }
      auto rep = adv_ratio(g);
      if (rep.norm <= cfg.tol)
        throw CliError(kExitInfeasible, "adversary matrix has zero norm");
      json body;
      body["norm"] = rep.norm;
      body["masked_norms"] = rep.masked_norms;
      body["ratio"] = rep.ratio;
      body["infinite"] = rep.infinite;
      emit(cfg, "adv ratio", body);
    } else if (*dual_check) {
      if (!dual_file.empty())
        throw CliError(kExitParse, "file input not supported; use --function");
      DualAdversarySolution sol;
      if (dual_function == "threshold")
        sol = threshold_dual((int)k, (int)n);
      else if (dual_function == "maj3")
        sol = maj3_solution();
      else
        throw CliError(kExitParse, "unknown dual solution " + dual_function);
      auto rep = check_feasible(sol, cfg.tol);
      json body;
      body["feasible"] = rep.feasible;
      body["violation"] = rep.violation;
      body["objective"] = objective(sol);
      emit(cfg, "dual check", body);
      if (!rep.feasible) return kExitInfeasible;
    } else if (*span_eval || *span_wsize || *span_sim) {
      SpanProgram p;
      try {
        p = span_program_from_json(slurp(program_path));
      } catch (const CliError&) {
        throw;
      } catch (const std::exception& e) {
        throw CliError(kExitParse, e.what());
      }
      if (*span_eval) {
        json body;
        body["output"] = evaluate(p, parse_input(input_str)) ? 1 : 0;
        emit(cfg, "span eval", body);
      } else if (*span_wsize) {
        auto ws = witness_size(p, {}, use_stored);
        json body;
        body["w0"] = ws.w0;
        body["w1"] = ws.w1;
        body["wsize"] = ws.wsize;
        emit(cfg, "span wsize", body);
      } else {
        auto ws = witness_size(p);
        std::vector<RunResult> results;
        for (long i = 0; i < runs; ++i)
          results.push_back(run_span_program(p, parse_input(input_str),
                                             ws.wsize, 4.0, 16.0,
                                             (unsigned)(cfg.seed + i)));
        json body = json::parse(transcript_json("span simulate", results));
        emit(cfg, "span simulate", body);
      }
    } else if (*lg_cx) {
      auto b = lg_by_name(lg_construction, n, k, r, l);
      auto c = complexities(b.g, b.flow);
      json body;
      body["negative"] = c.cn;
      body["positive"] = c.cp;
      body["total"] = c.total;
      emit(cfg, "lg complexity", body);
    } else if (*lg_dc) {
      DualLGCertificate a;
      CertificateStructure structure;
      if (alpha_mode != "builtin")
        throw CliError(kExitParse, "only --alpha builtin is available");
      if (cert_name == "ksubset") {
        a = ksubset_dual_certificate((int)n, (int)k);
        structure = ksubset_structure((int)n, (int)k);
      } else if (cert_name == "hidden_shift") {
        a = hidden_shift_dual_certificate((int)n / 2);
        structure = hidden_shift_structure((int)n / 2);
      } else {
        throw CliError(kExitParse, "unknown certificate " + cert_name);
      }
      auto rep = check_dual_certificate(structure, a);
      json body;
      body["objective"] = rep.objective;
      body["max_constraint"] = rep.max_constraint;
      emit(cfg, "lg dual-check", body);
    } else if (*lg_sim) {
      auto b = lg_by_name(lg_construction, n, k, r, l);
      auto f = named_or_throw(function, collect_params(n, k, q, d, m, half));
      auto res = lg_as_walk(b.g, f, parse_input(input_str), (unsigned)cfg.seed);
      json body;
      body["output"] = res.output;
      body["queries"] = res.queries;
      emit(cfg, "lg simulate", body);
    } else if (*walk_res) {
      auto g = load_graph(graph_path, dist_path);
      auto res = effective_resistance(g);
      json body;
      body["resistance"] = res.r;
      body["flow"] = res.flow.p;
      emit(cfg, "walk resistance", body);
    } else if (*walk_hit) {
      auto g = load_graph(graph_path, dist_path);
      json body;
      body["hitting_time"] = hitting_time(g);
      emit(cfg, "walk hitting", body);
    } else if (*walk_commute) {
      auto g = load_graph(graph_path, "");
      auto [lhs, rhs] = commute_identity_check(g, (int)s_vertex, (int)t_vertex);
      json body;
      body["lhs"] = lhs;
      body["rhs"] = rhs;
      emit(cfg, "walk commute", body);
    } else if (*walk_run) {
      auto g = load_graph(graph_path, dist_path);
      auto res = electric_walk_run(g, r_bound, 16.0, 8.0, (unsigned)cfg.seed);
      json body;
      body["output"] = res.output;
      body["steps"] = res.steps;
      body["zero_probability"] = res.zero_probability;
      emit(cfg, "walk run", body);
    } else if (*cert_extract) {
      auto f = named_or_throw(function, collect_params(n, k, q, d, m, half));
      emit(cfg, "cert extract", extract_certificate(f, parse_input(input_str)));
    } else {
      throw CliError(kExitParse, "missing subcommand");
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    if (what.find("too large") != std::string::npos ||
        what.find("budget") != std::string::npos)
      return kExitBudget;
    if (what.find("infeasible") != std::string::npos ||
        what.find("zero adversary") != std::string::npos ||
        what.find("unreachable") != std::string::npos ||
        what.find("violated") != std::string::npos)
      return kExitInfeasible;
    return kExitParse;
  }
  return 0;
}

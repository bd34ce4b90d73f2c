#include "abelcs/problem.hpp"
#include "abelcs/suites.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace abelcs;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInput = 2, kPrecondition = 3, kCounterexample = 4 };

struct Globals {
  int numeric_bits = 0;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool json = false;
};

Globals g;

EvalOptions eval_options() {
  EvalOptions o;
  o.threads = g.threads;
  if (const char* env = std::getenv("CS_MAX_TERMS")) {
    BigInt v;
    if (v.set_str(env, 10) != 0 || v < 0) throw InputError("CS_MAX_TERMS must be a nonnegative integer");
    o.max_terms = v;
  }
  return o;
}

json numeric_json(const ComplexBall& b) {
  auto str = [](mpfr_srcptr x) {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.40Rg", x);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  };
  return {{"re", str(b.re())}, {"im", str(b.im())}, {"radius", str(b.radius())}, {"bits", b.precision()}};
}

void print_numeric(json& out, const std::string& key, const ExactValue& v) {
  if (g.numeric_bits <= 0) return;
  ComplexBall b = numeric_eval(v, g.numeric_bits);
  if (g.json)
    out[key + "_numeric"] = numeric_json(b);
  else
    std::cout << key << " numeric: " << b.to_string(std::max(6, g.numeric_bits * 3 / 10)) << "\n";
}

void emit(const json& j) {
  if (g.json) std::cout << j.dump(2) << "\n";
}

json gates_json(const GateReport& r) {
  json a = json::array();
  for (const auto& c : r.checks) {
    json e = {{"name", c.name}, {"passed", c.passed}};
    if (!c.passed) e["detail"] = c.detail;
    a.push_back(e);
  }
  return a;
}

int cmd_eval(const std::string& path, bool partition) {
  Problem p = load_problem(path);
  ObservableSpec obs = partition ? ObservableSpec::empty(p.m(), p.n()) : p.obs;
  EvalReport r = evaluate(p.L, p.C, obs, eval_options(), partition ? std::nullopt : p.hint);
  json out;
  out["value"] = render(r.value);
  out["gates"] = gates_json(r.gates);
  out["term_count"] = r.term_count.get_str();
  out["prefactor"] = r.prefactor.get_str();
  if (r.gates.passed()) {
    out["trivial_phase"] = render(r.trivial_phase);
    out["gauss_sum"] = render(r.completed_sum);
    out["self_linking"] = render_rat(r.self_linking);
  }
  if (!g.json) {
    std::cout << "value: " << render(r.value) << "\n";
    if (r.gates.passed())
      std::cout << "gates: all passed\n";
    else
      std::cout << "gate " << r.gates.failed_gate() << " failed: " << r.gates.checks.back().detail << "\n";
    std::cout << "terms: " << r.term_count.get_str() << "\n";
    if (r.gates.passed()) {
      std::cout << "prefactor: " << r.prefactor.get_str() << "\n";
      std::cout << "trivial phase: " << render(r.trivial_phase) << "\n";
      std::cout << "gauss sum: " << render(r.completed_sum) << "\n";
    }
  }
  print_numeric(out, "value", r.value);
  emit(out);
  return kOk;
}

int cmd_duality(const std::string& path) {
  Problem p = load_problem(path);
  DualityResult d = duality_check(p.L, p.C, p.obs, eval_options());
  const char* verdict = d.verdict == Verdict::Equal              ? "EQUAL"
                        : d.verdict == Verdict::NumericCertified ? "NUMERIC-CERTIFIED"
                                                                 : "NOT-EQUAL";
  json out = {{"lhs", render(d.lhs)},
              {"rhs", render(d.rhs)},
              {"verdict", verdict},
              {"primal_value", render(d.primal.value)},
              {"dual_value", render(d.dual.value)},
              {"dual_term_count", d.dual.term_count.get_str()}};
  if (!g.json) {
    std::cout << "lhs: " << render(d.lhs) << "\n";
    std::cout << "rhs: " << render(d.rhs) << "\n";
    std::cout << "verdict: " << verdict << "\n";
  }
  print_numeric(out, "lhs", d.lhs);
  print_numeric(out, "rhs", d.rhs);
  emit(out);
  return kOk;
}

json report_json(const SuiteReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures) fails.push_back({{"instance", f.instance}, {"detail", f.detail}});
  return {{"suite", r.name}, {"checked", r.checked}, {"failures", fails}, {"notes", r.notes}, {"seconds", r.seconds}};
}

int print_reports(const std::vector<SuiteReport>& reports) {
  bool ok = true;
  json arr = json::array();
  for (const auto& r : reports) {
    ok = ok && r.ok();
    arr.push_back(report_json(r));
    if (g.json) continue;
    std::printf("%-28s %6ld checked %4zu failed  %.2f s\n", r.name.c_str(), r.checked, r.failures.size(), r.seconds);
    for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
    for (const auto& f : r.failures) std::printf("  COUNTEREXAMPLE %s\n    %s\n", f.instance.c_str(), f.detail.c_str());
  }
  emit(json{{"reports", arr}, {"ok", ok}});
  return ok ? kOk : kCounterexample;
}

int cmd_reciprocity(long count, long dims, long bound, long det_bound) {
  if (count < 0 || dims < 1 || bound < 0 || det_bound < 1) throw InputError("reciprocity: bad fuzz parameters");
  FuzzConfig cfg;
  cfg.count = count;
  cfg.max_dim = dims;
  cfg.entry_bound = bound;
  cfg.det_bound = det_bound;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  FuzzConfig dual = cfg;
  dual.count = count / 2;
  return print_reports({reciprocity_suite(cfg), wu_suite(cfg), duality_suite(dual), dual_involution_suite(cfg)});
}

std::string read_log(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw InputError(arg.substr(1) + ": cannot open move log");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_kirby_fuzz(const std::string& path, long steps, long seeds, const std::string& replay_arg) {
  if (steps < 0 || seeds < 0) throw InputError("kirby-fuzz: steps and seeds must be nonnegative");
  Problem p = load_problem(path);
  KirbyState s{p.L, p.C, p.obs};
  if (replay_arg.empty()) return print_reports({kirby_suite({s}, steps, seeds, g.seed, g.threads)});

  std::vector<Move> log = parse_log(read_log(replay_arg));
  EvalOptions opts = eval_options();
  ExactValue before = evaluate(s.L, s.C, s.obs, opts).value;
  KirbyState t = replay(s, log);
  ExactValue after = evaluate(t.L, t.C, t.obs, opts).value;
  bool same = compare_values(before, after) == Verdict::Equal;
  json out = {{"before", render(before)}, {"after", render(after)}, {"moves", log.size()}, {"equal", same},
              {"final_state", describe(t)}};
  if (!g.json) {
    std::cout << "before: " << render(before) << "\n";
    std::cout << "after: " << render(after) << "\n";
    std::cout << "moves: " << log.size() << "\n";
    std::cout << (same ? "EQUAL" : "NOT-EQUAL") << "\n";
  }
  emit(out);
  return same ? kOk : kCounterexample;
}

int cmd_zero_modes(const std::string& path) {
  Problem p = load_problem(path);
  CongruenceResult cl = congruence_block_diag(p.L.L);
  auto modes = zero_modes_torsion(cl.M0, p.C);
  json arr = json::array();
  for (const auto& v : modes) {
    json e = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) e.push_back(v(k).get_si());
    arr.push_back(e);
  }
  if (g.json) {
    emit({{"L0", mat_to_json(cl.M0)}, {"zero_modes", arr}});
  } else {
    std::cout << "L0: " << format_mat(cl.M0) << "\n";
    std::cout << "zero modes: " << modes.size() << "\n";
    for (const auto& e : arr) std::cout << "  " << e.dump() << "\n";
  }
  return kOk;
}

int cmd_ingest(const std::string& path) {
  Problem p = load_problem(path);
  std::cout << problem_to_json(p).dump(2) << "\n";
  return kOk;
}

int fail(int code, const std::string& kind, const std::string& msg, const std::string& term_count = "") {
  if (g.json) {
    json e = {{"error", kind}, {"message", msg}, {"exit_code", code}};
    if (!term_count.empty()) e["term_count"] = term_count;
    std::cout << e.dump(2) << "\n";
  }
  std::cerr << "error: " << msg << "\n";
  if (!term_count.empty()) std::cerr << "term count: " << term_count << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact expectation values in abelian Chern-Simons theory on surgery presentations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--numeric", g.numeric_bits, "Also print a certified numeric enclosure with BITS of precision")
      ->check(CLI::Range(16, 1 << 16));
  app.add_option("--threads", g.threads, "Worker threads for Gauss sums (0 = all cores)");
  app.add_option("--seed", g.seed, "Seed for fuzzing subcommands");
  app.add_flag("--json", g.json, "Machine-readable output");

  std::string file;
  auto* eval = app.add_subcommand("eval", "Evaluate the expectation value of the observable");
  eval->add_option("file", file, "Problem JSON")->required();
  auto* part = app.add_subcommand("partition", "Evaluate the partition function (observable ignored)");
  part->add_option("file", file, "Problem JSON")->required();
  auto* dual = app.add_subcommand("duality", "Compare both sides of the level-rank duality");
  dual->add_option("file", file, "Problem JSON")->required();

  long count = 100, dims = 2, bound = 4, det_bound = 8;
  auto* rec = app.add_subcommand("reciprocity", "Fuzz the reciprocity and duality identities");
  rec->add_option("--count", count, "Instances per suite");
  rec->add_option("--dims", dims, "Maximum matrix dimension");
  rec->add_option("--bound", bound, "Entry bound");
  rec->add_option("--det-bound", det_bound, "Bound on |det| of the nondegenerate blocks");

  long steps = 10, seeds = 20;
  std::string replay_log;
  auto* kf = app.add_subcommand("kirby-fuzz", "Check invariance under random Kirby moves");
  kf->add_option("file", file, "Problem JSON")->required();
  kf->add_option("--steps", steps, "Moves per run");
  kf->add_option("--seeds", seeds, "Number of runs, seeds seed .. seed+seeds-1");
  kf->add_option("--replay", replay_log, "Replay a move log (text, or @file) instead of fuzzing");

  auto* zm = app.add_subcommand("zero-modes", "List torsion zero-mode classes");
  zm->add_option("file", file, "Problem JSON")->required();
  auto* ing = app.add_subcommand("ingest-crossings", "Resolve crossing lists into linking matrices");
  ing->add_option("file", file, "Problem JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*eval) return cmd_eval(file, false);
    if (*part) return cmd_eval(file, true);
    if (*dual) return cmd_duality(file);
    if (*rec) return cmd_reciprocity(count, dims, bound, det_bound);
    if (*kf) return cmd_kirby_fuzz(file, steps, seeds, replay_log);
    if (*zm) return cmd_zero_modes(file);
    if (*ing) return cmd_ingest(file);
  } catch (const TermLimitError& e) {
    return fail(kPrecondition, "term-limit", e.what(), e.term_count());
  } catch (const InputError& e) {
    return fail(kInput, "input", e.what());
  } catch (const PreconditionError& e) {
    return fail(kPrecondition, "precondition", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return kOk;
}

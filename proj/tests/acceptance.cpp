// One PASS/FAIL line per acceptance criterion.
#include "abelcs/problem.hpp"
#include "abelcs/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace abelcs;

namespace {

std::string fixture(const char* name) { return std::string(ABELCS_FIXTURES) + "/" + name; }

Rat q(long a, long b) {
  Rat r(a);
  return r / b;
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit) out.expect(false, "took " + std::to_string(secs) + " s, limit " + std::to_string(limit) + " s");
  if (!out.ok) ++failures;
  std::printf("%s %d %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, title, secs, out.ok ? "" : ": ",
              out.detail.c_str());
  std::fflush(stdout);
}

std::string report_line(const SuiteReport& r) {
  std::string s = r.name + " " + std::to_string(r.checked) + " checked, " + std::to_string(r.failures.size()) +
                  " failed";
  if (!r.failures.empty()) s += "; first: " + r.failures[0].instance + ": " + r.failures[0].detail;
  return s;
}

}  // namespace

int main() {
  criterion(1, "example 1 end to end", 1.0, [] {
    Outcome o;
    Problem p = load_problem(fixture("ex1.json"));
    EvalReport r = evaluate(p.L, p.C, p.obs, {}, p.hint);
    o.expect(r.gates.passed(), "gate failed: " + r.gates.failed_gate());
    o.expect(r.prefactor == 5, "prefactor " + r.prefactor.get_str());
    o.expect(r.trivial_phase == PhaseSum::unit(q(1, 3)), "trivial phase " + render(r.trivial_phase));
    o.expect(r.completed_sum == PhaseSum::monomial(Rat(-5), Rat(0)), "Gauss sum " + render(r.completed_sum));
    o.expect(r.value == ExactValue(Rat(-25), BigInt(1), PhaseSum::unit(q(1, 3))), "value " + render(r.value));
    o.expect(render(r.value) == "-25 * exp(i*pi*1/3)", "rendered " + render(r.value));
    EvalReport raw = evaluate(p.L, p.C, p.obs);
    o.expect(raw.value == r.value, "value without the frame hint " + render(raw.value));
    return o;
  });

  criterion(2, "example 2 both sides", 10.0, [] {
    Outcome o;
    Problem p = load_problem(fixture("ex2.json"));
    EvalReport r = evaluate(p.L, p.C, p.obs);
    o.expect(render(r.completed_sum) == "12 * exp(i*pi*-16/23)", "Gauss sum " + render(r.completed_sum));
    o.expect(r.self_link_phase == PhaseSum::unit(q(-37, 46)), "self-link phase " + render(r.self_link_phase));
    DualityResult d = duality_check(p.L, p.C, p.obs);
    o.expect(d.dual.term_count == 12167, "dual term count " + d.dual.term_count.get_str());
    ExactValue mag = ExactValue(Rat(23), BigInt(23), PhaseSum::one());
    o.expect(compare_values(d.dual.value, mag) == Verdict::Equal, "dual sum " + render(d.dual.value));
    ExactValue both(Rat(276), BigInt(23), PhaseSum::unit(q(1, 2)));
    o.expect(d.verdict != Verdict::NotEqual, std::string("verdict ") + verdict_name(d.verdict));
    o.expect(compare_values(d.lhs, both) != Verdict::NotEqual, "lhs " + render(d.lhs));
    o.expect(compare_values(d.rhs, both) != Verdict::NotEqual, "rhs " + render(d.rhs));
    return o;
  });

  criterion(3, "reciprocity fuzz", 60.0, [] {
    Outcome o;
    FuzzConfig cfg;
    cfg.count = 100;
    cfg.seed = 20231;
    SuiteReport r = reciprocity_suite(cfg);
    o.expect(r.ok() && r.checked == 100, report_line(r));
    return o;
  });

  criterion(4, "kirby invariance fuzz", 120.0, [] {
    Outcome o;
    std::vector<KirbyState> inst;
    for (const char* f : {"ex1.json", "ex2.json"}) {
      Problem p = load_problem(fixture(f));
      inst.push_back({p.L, p.C, p.obs});
    }
    for (auto& s : random_kirby_instances(20, 99)) inst.push_back(std::move(s));
    SuiteReport r = kirby_suite(inst, 10, 20, 1);
    o.expect(r.ok() && r.checked == 22 * 20, report_line(r));
    return o;
  });

  criterion(5, "zero modes of Z4 at level 1", 1.0, [] {
    Outcome o;
    auto modes = zero_modes_torsion(int_mat({{4}}), int_mat({{1}}));
    std::vector<long> classes;
    for (const auto& v : modes) classes.push_back(v(0).get_si());
    auto has = [&](long c) { return std::find(classes.begin(), classes.end(), c) != classes.end(); };
    o.expect(has(0) && has(2), "class 2 missing");
    o.expect(!has(1) && !has(3), "classes 1 or 3 accepted");
    return o;
  });

  criterion(6, "property suites", 120.0, [] {
    Outcome o;
    FuzzConfig small;
    small.count = 50;
    small.seed = 7;
    FuzzConfig wu;
    wu.count = 100;
    wu.max_dim = 3;
    wu.entry_bound = 5;
    wu.seed = 11;
    FuzzConfig inv;
    inv.count = 100;
    inv.seed = 13;
    for (const SuiteReport& r : {representative_independence_suite(small), route_equivalence_suite(small),
                                 zero_regularization_suite(small), wu_suite(wu), dual_involution_suite(inv)})
      o.expect(r.ok(), report_line(r));
    return o;
  });

  return failures == 0 ? 0 : 1;
}

#include "abelcs/problem.hpp"

#include <fstream>

namespace abelcs {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw InputError(source_ + ": " + where + ": " + what);
  }

  BigInt integer(const json& v, const std::string& where) const {
    if (v.is_number_integer()) return BigInt(v.get<long>());
    if (v.is_string()) {
      BigInt out;
      if (out.set_str(v.get<std::string>(), 10) == 0) return out;
    }
    fail(where, "expected an integer");
  }

  IntMat matrix(const json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected a matrix (array of rows)");
    if (v.empty()) return IntMat(0, 0);
    long rows = static_cast<long>(v.size()), cols = -1;
    for (long i = 0; i < rows; ++i) {
      if (!v[i].is_array()) fail(where + "[" + std::to_string(i) + "]", "expected a row array");
      long c = static_cast<long>(v[i].size());
      if (cols >= 0 && c != cols)
        fail(where + "[" + std::to_string(i) + "]", "row has " + std::to_string(c) + " entries, expected " +
                                                        std::to_string(cols));
      cols = c;
    }
    IntMat M(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long k = 0; k < cols; ++k)
        M(i, k) = integer(v[i][k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    return M;
  }

  IntMat square(const json& v, const std::string& where) const {
    IntMat M = matrix(v, where);
    if (M.rows() != M.cols()) fail(where, "matrix must be square");
    return M;
  }

  std::vector<Crossing> crossings(const json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected a list of [a, b, sign]");
    std::vector<Crossing> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      std::string at = where + "[" + std::to_string(k) + "]";
      if (!v[k].is_array() || v[k].size() != 3) fail(at, "expected [a, b, sign]");
      out.push_back({integer(v[k][0], at).get_si(), integer(v[k][1], at).get_si(),
                     static_cast<int>(integer(v[k][2], at).get_si())});
    }
    return out;
  }

  IntMat from_crossings(long comps, const std::vector<Crossing>& cs, const std::vector<BigInt>& framings,
                        const std::string& where) const {
    try {
      return linking_from_crossings(comps, cs, framings);
    } catch (const InputError& e) {
      fail(where, e.what());
    }
  }

 private:
  std::string source_;
};

}  // namespace

Problem parse_problem(const json& j, const std::string& source) {
  Reader rd(source);
  if (!j.is_object()) rd.fail("top level", "expected a JSON object");
  static const char* known[] = {"name", "surgery", "coupling", "K", "charges", "ell", "trivial",
                                "trivial_links", "cross_links", "normalized_frame", "comment"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) rd.fail(key, "unknown field");
  }
  Problem p;
  p.name = j.value("name", std::string());

  if (!j.contains("surgery")) rd.fail("surgery", "missing");
  const json& sj = j["surgery"];
  if (sj.is_object()) {
    if (!sj.contains("framings") || !sj["framings"].is_array()) rd.fail("surgery.framings", "missing");
    std::vector<BigInt> fr;
    for (std::size_t k = 0; k < sj["framings"].size(); ++k)
      fr.push_back(rd.integer(sj["framings"][k], "surgery.framings[" + std::to_string(k) + "]"));
    auto cs = rd.crossings(sj.value("crossings", json::array()), "surgery.crossings");
    p.L.L = rd.from_crossings(static_cast<long>(fr.size()), cs, fr, "surgery.crossings");
  } else {
    p.L.L = rd.square(sj, "surgery");
    if (!is_symmetric(p.L.L)) rd.fail("surgery", "matrix must be symmetric");
  }
  long m = p.m();

  bool hasC = j.contains("coupling"), hasK = j.contains("K");
  if (hasC == hasK) rd.fail("coupling", "give exactly one of 'coupling' and 'K'");
  if (hasC) {
    p.C = rd.square(j["coupling"], "coupling");
  } else {
    IntMat K = rd.square(j["K"], "K");
    if (!is_symmetric(K)) rd.fail("K", "matrix must be symmetric");
    long odd = first_odd_diagonal(K);
    if (odd >= 0)
      rd.fail("K", "K must be even: K[" + std::to_string(odd) + "][" + std::to_string(odd) +
                       "] = " + K(odd, odd).get_str() + " is odd");
    p.C = half_coupling(K);
  }
  long n = p.n();

  IntMat charges = IntMat::Zero(m, n);
  if (j.contains("charges") && j.contains("ell")) rd.fail("charges", "give at most one of 'charges' and 'ell'");
  if (j.contains("charges")) {
    charges = rd.matrix(j["charges"], "charges");
    if (m * n == 0 && charges.size() == 0) charges = IntMat::Zero(m, n);
    if (charges.rows() != m || charges.cols() != n)
      rd.fail("charges", "expected " + std::to_string(m) + " x " + std::to_string(n) + ", got " +
                             std::to_string(charges.rows()) + " x " + std::to_string(charges.cols()));
  } else if (j.contains("ell")) {
    const json& e = j["ell"];
    if (!e.is_array() || static_cast<long>(e.size()) != n * m)
      rd.fail("ell", "expected a flat list of " + std::to_string(n * m) + " integers");
    for (long c = 0; c < n; ++c)
      for (long i = 0; i < m; ++i)
        charges(i, c) = rd.integer(e[c * m + i], "ell[" + std::to_string(c * m + i) + "]");
  }

  std::vector<TrivialComponent> trivial;
  if (j.contains("trivial")) {
    const json& t = j["trivial"];
    if (!t.is_array()) rd.fail("trivial", "expected a list");
    for (std::size_t k = 0; k < t.size(); ++k) {
      std::string at = "trivial[" + std::to_string(k) + "]";
      if (!t[k].is_object() || !t[k].contains("copy") || !t[k].contains("charge"))
        rd.fail(at, "expected {\"copy\", \"charge\", \"framing\"}");
      TrivialComponent tc;
      tc.copy = rd.integer(t[k]["copy"], at + ".copy").get_si();
      tc.charge = rd.integer(t[k]["charge"], at + ".charge");
      tc.framing = t[k].contains("framing") ? rd.integer(t[k]["framing"], at + ".framing") : BigInt(0);
      if (tc.copy < 0 || tc.copy >= n) rd.fail(at + ".copy", "copy index out of range");
      trivial.push_back(tc);
    }
  }
  long t = static_cast<long>(trivial.size());
  IntMat links;
  if (j.contains("trivial_links")) {
    const json& tl = j["trivial_links"];
    if (tl.is_object()) {
      std::vector<BigInt> fr;
      for (const auto& tc : trivial) fr.push_back(tc.framing);
      links = rd.from_crossings(t, rd.crossings(tl.value("crossings", json::array()), "trivial_links.crossings"),
                                fr, "trivial_links.crossings");
    } else {
      links = rd.square(tl, "trivial_links");
    }
  }

  if (j.contains("normalized_frame")) {
    const json& f = j["normalized_frame"];
    if (!f.is_object() || !f.contains("P_L") || !f.contains("P_K"))
      rd.fail("normalized_frame", "expected {\"P_L\", \"P_K\"}");
    FrameHint h{rd.square(f["P_L"], "normalized_frame.P_L"), rd.square(f["P_K"], "normalized_frame.P_K")};
    if (h.P_L.rows() != m) rd.fail("normalized_frame.P_L", "must be " + std::to_string(m) + " x " + std::to_string(m));
    if (h.P_K.rows() != n) rd.fail("normalized_frame.P_K", "must be " + std::to_string(n) + " x " + std::to_string(n));
    if (!is_unimodular(h.P_L)) rd.fail("normalized_frame.P_L", "not unimodular");
    if (!is_unimodular(h.P_K)) rd.fail("normalized_frame.P_K", "not unimodular");
    if (j.contains("cross_links")) rd.fail("cross_links", "not supported together with normalized_frame");
    try {
      p.obs = pull_back_frame(h, charges, trivial, links);
    } catch (const InputError& e) {
      rd.fail("trivial", e.what());
    }
    p.hint = h;
  } else {
    p.obs.charges = charges;
    p.obs.trivial = trivial;
    p.obs.trivial_links = links;
    if (j.contains("cross_links")) p.obs.cross_links = rd.matrix(j["cross_links"], "cross_links");
  }
  try {
    validate_observable(p.obs, m, n);
  } catch (const InputError& e) {
    rd.fail("observable", e.what());
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return parse_problem(j, path);
}

json mat_to_json(const IntMat& M) {
  json out = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) {
      const BigInt& v = M(i, k);
      if (v.fits_slong_p())
        row.push_back(v.get_si());
      else
        row.push_back(v.get_str());
    }
    out.push_back(row);
  }
  return out;
}

json problem_to_json(const Problem& p) {
  json j;
  if (!p.name.empty()) j["name"] = p.name;
  j["surgery"] = mat_to_json(p.L.L);
  j["coupling"] = mat_to_json(p.C);
  j["charges"] = mat_to_json(p.obs.charges);
  if (!p.obs.trivial.empty()) {
    json t = json::array();
    for (const auto& tc : p.obs.trivial)
      t.push_back({{"copy", tc.copy}, {"charge", tc.charge.get_si()}, {"framing", tc.framing.get_si()}});
    j["trivial"] = t;
    j["trivial_links"] = mat_to_json(p.obs.trivial_links);
    if (p.obs.has_cross_links()) j["cross_links"] = mat_to_json(p.obs.cross_links);
  }
  return j;
}

}  // namespace abelcs

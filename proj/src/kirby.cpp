#include "abelcs/kirby.hpp"

#include <cctype>
#include <random>
#include <sstream>

namespace abelcs {

namespace {

const BigInt kEntryBound(1000000);

bool within_bound(const IntMat& M) {
  for (Eigen::Index i = 0; i < M.size(); ++i)
    if (abs(M.data()[i]) > kEntryBound) return false;
  return true;
}

}  // namespace

bool within_entry_bound(const KirbyState& s) {
  if (!within_bound(s.L.L) || !within_bound(s.C) || !within_bound(s.obs.charges)) return false;
  if (!within_bound(s.obs.trivial_links)) return false;
  for (const auto& t : s.obs.trivial)
    if (abs(t.charge) > kEntryBound) return false;
  return true;
}

namespace {

void require_no_cross(const ObservableSpec& obs, const char* what) {
  if (obs.has_cross_links())
    throw UnsupportedCaseError(std::string(what) + " is not defined for observables with cross links");
}

// Column index j*m + i of cross_links, with component `skip` removed or a new last component.
IntMat reindex_cross(const IntMat& cross, long n, long m_old, long m_new, long skip) {
  IntMat out = IntMat::Zero(cross.rows(), n * m_new);
  for (long j = 0; j < n; ++j)
    for (long i = 0, k = 0; i < m_old; ++i) {
      if (i == skip) continue;
      out.col(j * m_new + k) = cross.col(j * m_old + i);
      ++k;
    }
  return out;
}

KirbyState prepared(const KirbyState& s) {
  KirbyState out = s;
  validate_observable(out.obs, out.L.m(), static_cast<long>(out.C.rows()));
  return out;
}

}  // namespace

KirbyState kirby1(const KirbyState& in, int sign) {
  if (sign != 1 && sign != -1) throw InputError("kirby1: sign must be +1 or -1");
  KirbyState s = prepared(in);
  long m = s.L.m(), n = static_cast<long>(s.C.rows());
  KirbyState out = s;
  out.L.L = IntMat::Zero(m + 1, m + 1);
  out.L.L.topLeftCorner(m, m) = s.L.L;
  out.L.L(m, m) = sign;
  out.obs.charges = IntMat::Zero(m + 1, n);
  out.obs.charges.topRows(m) = s.obs.charges;
  out.obs.cross_links = reindex_cross(s.obs.cross_links, n, m, m + 1, -1);
  return out;
}

KirbyState kirby1_inverse(const KirbyState& in, long comp) {
  KirbyState s = prepared(in);
  long m = s.L.m(), n = static_cast<long>(s.C.rows());
  if (comp < 0 || comp >= m) throw InputError("kirby1_inverse: component out of range");
  const BigInt& eps = s.L.L(comp, comp);
  if (eps != 1 && eps != -1)
    throw NotBlowdownableError("component " + std::to_string(comp) + " has framing " + eps.get_str() +
                               ", not +-1");
  for (long k = 0; k < m; ++k)
    if (k != comp && s.L.L(comp, k) != 0)
      throw NotBlowdownableError("component " + std::to_string(comp) + " links component " +
                                 std::to_string(k));
  for (long j = 0; j < n; ++j)
    for (Eigen::Index a = 0; a < s.obs.cross_links.rows(); ++a)
      if (s.obs.cross_links(a, j * m + comp) != 0)
        throw NotBlowdownableError("component " + std::to_string(comp) + " has cross links");

  KirbyState out = s;
  IntMat L(m - 1, m - 1), ch(m - 1, n);
  for (long a = 0, ra = 0; a < m; ++a) {
    if (a == comp) continue;
    for (long b = 0, rb = 0; b < m; ++b) {
      if (b == comp) continue;
      L(ra, rb++) = s.L.L(a, b);
    }
    ch.row(ra++) = s.obs.charges.row(a);
  }
  out.L.L = L;
  out.obs.charges = ch;

  long t = static_cast<long>(s.obs.trivial.size());
  std::vector<long> added;
  for (long j = 0; j < n; ++j) {
    const BigInt& q = s.obs.charges(comp, j);
    if (q == 0) continue;
    out.obs.trivial.push_back({j, q, eps});
    added.push_back(j);
  }
  long t2 = t + static_cast<long>(added.size());
  IntMat links = IntMat::Zero(t2, t2);
  links.topLeftCorner(t, t) = s.obs.trivial_links;
  for (long a = t; a < t2; ++a)
    for (long b = t; b < t2; ++b) links(a, b) = eps;
  out.obs.trivial_links = links;
  IntMat cross = reindex_cross(s.obs.cross_links, n, m, m - 1, comp);
  out.obs.cross_links = IntMat::Zero(t2, n * (m - 1));
  out.obs.cross_links.topRows(t) = cross;
  return out;
}

KirbyState kirby2(KirbyState s, long i, long j, int sign) {
  long m = s.L.m();
  if (i == j) throw InputError("kirby2: i and j must differ");
  if (i < 0 || j < 0 || i >= m || j >= m) throw InputError("kirby2: component out of range");
  if (sign != 1 && sign != -1) throw InputError("kirby2: sign must be +1 or -1");
  require_no_cross(s.obs, "kirby2");
  s = prepared(s);
  IntMat P = IntMat::Identity(m, m);
  P(i, j) = sign;
  KirbyState out = s;
  out.L.L = P.transpose() * s.L.L * P;
  out.obs.charges = P.transpose() * s.obs.charges;
  return out;
}

KirbyState field_redef(const KirbyState& in, const IntMat& R) {
  KirbyState s = prepared(in);
  long n = static_cast<long>(s.C.rows());
  if (R.rows() != n || R.cols() != n) throw DimensionError("field_redef: R must be n x n");
  if (!is_unimodular(R)) throw PreconditionError("field_redef: R is not unimodular");
  require_no_cross(s.obs, "field_redef");
  KirbyState out = s;
  out.C = R.transpose() * s.C * R;
  out.obs.charges = s.obs.charges * R;
  if (!s.obs.trivial.empty()) {
    auto groups = parallel_groups(s.obs);
    auto loops = group_vectors(s.obs, groups, n);
    long g = static_cast<long>(groups.size());
    IntMat links(g, g);
    for (long a = 0; a < g; ++a)
      for (long b = 0; b < g; ++b) links(a, b) = s.obs.trivial_links(groups[a].front(), groups[b].front());
    for (auto& v : loops) v.charge = R.transpose() * v.charge;
    set_vector_loops(out.obs, loops, links);
  }
  return out;
}

KirbyState apply_move(const KirbyState& s, const Move& m) {
  switch (m.kind) {
    case Move::Kind::Kirby1: return kirby1(s, m.sign);
    case Move::Kind::Kirby1Inverse: return kirby1_inverse(s, m.i);
    case Move::Kind::Kirby2: return kirby2(s, m.i, m.j, m.sign);
    case Move::Kind::FieldRedef: return field_redef(s, m.R);
  }
  return s;
}

KirbyState replay(const KirbyState& s, const std::vector<Move>& log) {
  KirbyState cur = s;
  for (const auto& m : log) cur = apply_move(cur, m);
  return cur;
}

std::string format_move(const Move& m) {
  std::ostringstream os;
  switch (m.kind) {
    case Move::Kind::Kirby1: os << "K1 " << (m.sign > 0 ? "+1" : "-1"); break;
    case Move::Kind::Kirby1Inverse: os << "K1I " << m.i; break;
    case Move::Kind::Kirby2: os << "K2 " << m.i << ' ' << m.j << ' ' << (m.sign > 0 ? "+1" : "-1"); break;
    case Move::Kind::FieldRedef: os << "FR " << format_mat(m.R); break;
  }
  return os.str();
}

std::string format_log(const std::vector<Move>& log) {
  std::string out;
  for (std::size_t k = 0; k < log.size(); ++k) {
    if (k) out += " | ";
    out += format_move(log[k]);
  }
  return out;
}

namespace {

class LogParser {
 public:
  explicit LogParser(std::string_view t) : text_(t) {}

  std::vector<Move> parse() {
    std::vector<Move> out;
    skip();
    if (pos_ == text_.size()) return out;
    for (;;) {
      out.push_back(move());
      skip();
      if (pos_ == text_.size()) break;
      expect('|');
    }
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw InputError("move log, offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string word() {
    skip();
    std::size_t b = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }
  long integer() {
    skip();
    std::size_t b = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected an integer");
    return std::stol(std::string(text_.substr(b, pos_ - b)));
  }
  int sign() {
    long v = integer();
    if (v != 1 && v != -1) fail("sign must be +1 or -1");
    return static_cast<int>(v);
  }
  IntMat matrix() {
    std::vector<std::vector<long>> rows;
    expect('[');
    for (;;) {
      expect('[');
      std::vector<long> row{integer()};
      skip();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        row.push_back(integer());
        skip();
      }
      expect(']');
      rows.push_back(std::move(row));
      skip();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    expect(']');
    for (const auto& r : rows)
      if (r.size() != rows.size()) fail("FR matrix must be square");
    return int_mat(rows);
  }
  Move move() {
    std::string w = word();
    if (w == "K1") return Move::kirby1(sign());
    if (w == "K1I") return Move::blow_down(integer());
    if (w == "K2") {
      long i = integer(), j = integer();
      return Move::slide(i, j, sign());
    }
    if (w == "FR") return Move::redef(matrix());
    fail("unknown move '" + w + "'");
  }
};

}  // namespace

std::vector<Move> parse_log(std::string_view text) { return LogParser(text).parse(); }

bool blowdown_keeps_gates(const KirbyState& s, long comp) {
  long n = static_cast<long>(s.C.rows());
  IntMat K = s.C + s.C.transpose();
  CongruenceResult ck = congruence_block_diag(K);
  IntVec v = ck.P.transpose() * s.obs.charges.row(comp).transpose();
  for (long k = ck.rank; k < n; ++k)
    if (v(k) != 0) return false;
  return true;
}

RandomRun random_equivalent(const KirbyState& s, long steps, std::uint64_t seed) {
  RandomRun run{s, {}};
  std::mt19937_64 g(seed);
  long attempts = 0;
  while (static_cast<long>(run.log.size()) < steps) {
    if (++attempts > 100 * (steps + 1)) break;
    const KirbyState& cur = run.state;
    long m = cur.L.m(), n = static_cast<long>(cur.C.rows());
    bool cross = cur.obs.has_cross_links();
    Move mv;
    switch (g() % 4) {
      case 0:
        mv = Move::kirby1(g() % 2 ? 1 : -1);
        break;
      case 1: {
        std::vector<long> ok;
        for (long c = 0; c < m; ++c) {
          const BigInt& f = cur.L.L(c, c);
          if (f != 1 && f != -1) continue;
          bool free = true;
          for (long k = 0; k < m && free; ++k)
            if (k != c && cur.L.L(c, k) != 0) free = false;
          if (free && blowdown_keeps_gates(cur, c)) ok.push_back(c);
        }
        if (ok.empty()) continue;
        mv = Move::blow_down(ok[g() % ok.size()]);
        break;
      }
      case 2: {
        if (m < 2 || cross) continue;
        long i = static_cast<long>(g() % m), j = static_cast<long>(g() % (m - 1));
        if (j >= i) ++j;
        mv = Move::slide(i, j, g() % 2 ? 1 : -1);
        break;
      }
      default: {
        if (n < 1 || cross) continue;
        IntMat R = IntMat::Identity(n, n);
        if (n >= 2 && g() % 4 != 0) {
          long a = static_cast<long>(g() % n), b = static_cast<long>(g() % (n - 1));
          if (b >= a) ++b;
          if (g() % 3 == 0) {
            R(a, a) = 0;
            R(b, b) = 0;
            R(a, b) = 1;
            R(b, a) = 1;
          } else {
            R(a, b) = g() % 2 ? 1 : -1;
          }
        } else {
          R(static_cast<long>(g() % n), static_cast<long>(g() % n)) = -1;
          if (n >= 2 && g() % 2) R = -R;
        }
        mv = Move::redef(R);
        break;
      }
    }
    KirbyState next = apply_move(cur, mv);
    if (!within_entry_bound(next)) continue;
    run.state = std::move(next);
    run.log.push_back(std::move(mv));
  }
  return run;
}

}  // namespace abelcs

#include "abelcs/errors.hpp"
#include "abelcs/evaluator.hpp"
#include "abelcs/kirby.hpp"

#include "doctest.h"
#include "support/worked_examples.hpp"

using namespace abelcs;

namespace {

KirbyState state_of(const testdata::Instance& in) { return {in.L, in.C, in.obs}; }

std::string value_of(const KirbyState& s) { return render(evaluate(s.L, s.C, s.obs).value); }

KirbyState single(long m_framing, const IntMat& charges_row) {
  KirbyState s;
  s.L.L = IntMat::Zero(2, 2);
  s.L.L(0, 0) = 3;
  s.L.L(1, 1) = m_framing;
  s.C = int_mat({{2}});
  s.obs = ObservableSpec::empty(2, 1);
  s.obs.charges = IntMat::Zero(2, 1);
  s.obs.charges(0, 0) = 1;
  s.obs.charges.row(1) = charges_row;
  return s;
}

}  // namespace

TEST_CASE("kirby1 on example one") {
  KirbyState s = state_of(testdata::example1());
  KirbyState t = kirby1(s, 1);
  CHECK(t.L.L == int_mat({{2, 2, -1, 0}, {2, 2, -1, 0}, {-1, -1, -2, 0}, {0, 0, 0, 1}}));
  CHECK(t.obs.charges.rows() == 4);
  CHECK(t.obs.charges.row(3).isZero());
  CHECK(value_of(t) == "-25 * exp(i*pi*1/3)");
  CHECK(value_of(kirby1(s, -1)) == "-25 * exp(i*pi*1/3)");
  KirbyState back = kirby1_inverse(t, 3);
  CHECK(back.L.L == s.L.L);
  CHECK(back.obs.charges == s.obs.charges);
  CHECK(back.obs.trivial.size() == s.obs.trivial.size());
}

TEST_CASE("kirby1 on the empty presentation") {
  KirbyState s{{IntMat(0, 0)}, int_mat({{2}}), ObservableSpec::empty(0, 1)};
  KirbyState t = kirby1(s, -1);
  CHECK(t.L.L == int_mat({{-1}}));
  CHECK(t.obs.charges == IntMat::Zero(1, 1));
  CHECK_THROWS_AS(kirby1(s, 2), InputError);
}

TEST_CASE("kirby2 moves") {
  KirbyState s{{int_mat({{2, 1}, {1, 3}})}, int_mat({{2}}), ObservableSpec::empty(2, 1)};
  s.obs.charges = int_mat({{1}, {0}});
  KirbyState t = kirby2(s, 0, 1, 1);
  CHECK(t.obs.charges == int_mat({{1}, {1}}));
  KirbyState u = kirby2(t, 0, 1, -1);
  CHECK(u.L.L == s.L.L);
  CHECK(u.obs.charges == s.obs.charges);
  CHECK_THROWS_AS(kirby2(s, 1, 1, 1), InputError);

  KirbyState e = state_of(testdata::example1());
  for (Move m : {Move::slide(1, 0, -1), Move::slide(2, 0, -1), Move::slide(0, 2, 1)}) e = apply_move(e, m);
  CHECK(e.L.L == int_mat({{-2, 1, 0}, {1, 2, 0}, {0, 0, 0}}));
  CHECK(value_of(e) == "-25 * exp(i*pi*1/3)");
}

TEST_CASE("field redefinitions") {
  auto ex = testdata::example1();
  KirbyState s = state_of(ex);
  KirbyState t = field_redef(s, ex.hint->P_K);
  IntMat K = t.C + t.C.transpose();
  CHECK(K == int_mat({{4, 2, 0}, {2, 4, 0}, {0, 0, 0}}));
  CHECK(value_of(t) == "-25 * exp(i*pi*1/3)");
  KirbyState id = field_redef(s, IntMat::Identity(3, 3));
  CHECK(id.C == s.C);
  CHECK(id.obs.charges == s.obs.charges);
  CHECK_THROWS_AS(field_redef(s, int_mat({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}})), PreconditionError);

  KirbyState e2 = state_of(testdata::example2());
  std::string before = value_of(e2);
  CHECK(value_of(field_redef(e2, int_mat({{1, 0}, {-2, 1}}))) == before);
  CHECK(value_of(field_redef(e2, int_mat({{0, 1}, {1, 0}}))) == before);
  CHECK(value_of(field_redef(e2, int_mat({{-1, 0}, {0, 1}}))) == before);
}

TEST_CASE("blow-down") {
  KirbyState plain = single(1, int_mat({{0}}));
  KirbyState d = kirby1_inverse(plain, 1);
  CHECK(d.L.L == int_mat({{3}}));
  CHECK(d.obs.trivial.empty());
  CHECK(value_of(d) == value_of(plain));

  for (long framing : {1L, -1L})
    for (long q = -3; q <= 3; ++q) {
      CAPTURE(framing);
      CAPTURE(q);
      KirbyState s = single(framing, int_mat({{q}}));
      KirbyState t = kirby1_inverse(s, 1);
      if (q != 0) {
        REQUIRE(t.obs.trivial.size() == 1);
        CHECK(t.obs.trivial[0].copy == 0);
        CHECK(t.obs.trivial[0].charge == q);
        CHECK(t.obs.trivial[0].framing == framing);
      }
      CHECK(value_of(t) == value_of(s));
    }

  KirbyState linked = single(1, int_mat({{1}}));
  linked.L.L(0, 1) = linked.L.L(1, 0) = 1;
  CHECK_THROWS_AS(kirby1_inverse(linked, 1), NotBlowdownableError);
  CHECK_THROWS_AS(kirby1_inverse(single(2, int_mat({{0}})), 1), NotBlowdownableError);
}

TEST_CASE("blow-down with two charged copies") {
  KirbyState s = state_of(testdata::example2());
  s = kirby1(s, -1);
  s.obs.charges(3, 0) = 2;
  s.obs.charges(3, 1) = -1;
  KirbyState t = kirby1_inverse(s, 3);
  REQUIRE(t.obs.trivial.size() == 2);
  CHECK(t.obs.trivial_links == int_mat({{-1, -1}, {-1, -1}}));
  CHECK(value_of(t) == value_of(s));
}

TEST_CASE("move log round trip") {
  std::vector<Move> log{Move::kirby1(1), Move::blow_down(3), Move::slide(0, 1, -1),
                        Move::redef(int_mat({{1, 0}, {-2, 1}}))};
  std::string text = format_log(log);
  CHECK(text == "K1 +1 | K1I 3 | K2 0 1 -1 | FR [[1,0],[-2,1]]");
  CHECK(format_log(parse_log(text)) == text);
  CHECK(parse_log("  ").empty());
  CHECK_THROWS_AS(parse_log("K3 1"), InputError);
  CHECK_THROWS_AS(parse_log("K1 +2"), InputError);
  CHECK_THROWS_AS(parse_log("K1 +1 |"), InputError);
}

TEST_CASE("random equivalence on the examples") {
  KirbyState e1 = state_of(testdata::example1());
  CHECK(random_equivalent(e1, 0, 5).log.empty());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RandomRun run = random_equivalent(e1, 10, seed);
    CHECK(run.log.size() == 10);
    CHECK(value_of(run.state) == "-25 * exp(i*pi*1/3)");
    KirbyState again = replay(e1, parse_log(format_log(run.log)));
    CHECK(again.L.L == run.state.L.L);
    CHECK(format_log(random_equivalent(e1, 10, seed).log) == format_log(run.log));
  }
  KirbyState e2 = state_of(testdata::example2());
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    CHECK(value_of(random_equivalent(e2, 10, seed).state) == "12 * exp(i*pi*-16/23)");
}

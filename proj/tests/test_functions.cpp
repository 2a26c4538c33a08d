#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "qwb/functions.hpp"

using namespace qwb;

TEST_CASE("threshold table") {
  auto f = make_named("threshold", {{"k", 2}, {"n", 3}});
  CHECK(f.value_of({0, 1, 1}) == 1);
  CHECK(f.value_of({1, 0, 1}) == 1);
  CHECK(f.value_of({1, 1, 0}) == 1);
  CHECK(f.value_of({1, 1, 1}) == 1);
  CHECK(f.value_of({1, 0, 0}) == 0);
  CHECK(f.preimage(1).size() == 4);
  CHECK_THROWS_AS(make_named("threshold", {{"k", 4}, {"n", 3}}), FunctionError);
}

TEST_CASE("monotone-sequence 4-bit function") {
  auto f = make_named("ambainis", {});
  CHECK(f.value_of({0, 0, 0, 0}) == 1);
  CHECK(f.value_of({0, 1, 0, 1}) == 0);
  CHECK(f.preimage(1).size() == 8);
  CHECK(f.preimage(0).size() == 8);
}

TEST_CASE("collision family tables") {
  auto f = make_named("collision", {{"n", 4}, {"q", 4}});
  CHECK(f.value_of({1, 1, 2, 2}) == 1);
  CHECK(f.value_of({0, 1, 2, 3}) == 0);
  CHECK(!f.find({1, 1, 1, 2}).has_value());
  for (int idx : f.preimage(1)) {
    // positive inputs are 2-to-1
    auto z = f.domain[idx];
    std::map<int, int> cnt;
    for (int v : z) ++cnt[v];
    for (auto& [v, c] : cnt) CHECK(c == 2);
  }
}

TEST_CASE("certificates") {
  auto orf = make_named("or", {{"n", 3}});
  Assignment a;
  a.support = {0};
  a.values = {1};
  CHECK(is_certificate(orf, a));
  a.values = {0};
  CHECK(!is_certificate(orf, a));

  auto ed = make_named("element_distinctness", {{"n", 3}, {"q", 3}});
  Assignment b;
  b.support = {0, 1};
  b.values = {2, 2};
  CHECK(is_certificate(ed, b));
}

TEST_CASE("certificate structure of named functions") {
  auto orf = make_named("or", {{"n", 2}});
  auto cs = certificate_structure_of(orf);
  auto ref = ksubset_structure(2, 1);
  REQUIRE(cs.members.size() == ref.members.size());

  // constant-1 function: the empty set certifies
  PartialFunction one;
  one.n = 2;
  one.q = 2;
  for (auto& z : all_inputs(2, 2)) {
    one.domain.push_back(z);
    one.values.push_back(1);
  }
  auto cs1 = certificate_structure_of(one);
  REQUIRE(cs1.members.size() == 1);
  CHECK(cs1.members[0] == std::vector<uint32_t>{0});

  auto ed = make_named("element_distinctness", {{"n", 3}, {"q", 3}});
  auto cse = certificate_structure_of(ed);
  auto ref2 = ksubset_structure(3, 2);
  CHECK(cse.members.size() == ref2.members.size());

  PartialFunction zero;
  zero.n = 1;
  zero.q = 2;
  zero.domain = {{0}};
  zero.values = {0};
  CHECK_THROWS_AS(certificate_structure_of(zero), FunctionError);
}

TEST_CASE("members are upward closed, generators are certificates") {
  for (auto f : {make_named("or", {{"n", 3}}), make_named("threshold", {{"k", 2}, {"n", 3}}),
                 make_named("element_distinctness", {{"n", 3}, {"q", 3}})}) {
    auto cs = certificate_structure_of(f);
    cs.validate();
    for (size_t m = 0; m < cs.members.size(); ++m) {
      // each generator must be a 1-certificate of some positive input
      for (uint32_t g : cs.members[m]) {
        bool cert_for_some = false;
        for (int xi : f.preimage(1)) {
          auto a = Assignment::restrict_to(f.domain[xi], g);
          if (is_certificate(f, a)) {
            cert_for_some = true;
            break;
          }
        }
        CHECK(cert_for_some);
      }
      // upward closure check at n <= 8
      for (uint32_t s = 0; s < (1u << cs.n); ++s)
        if (cs.member_contains(m, s))
          for (int j = 0; j < cs.n; ++j) CHECK(cs.member_contains(m, s | (1u << j)));
    }
  }
}

TEST_CASE("certificate complexity") {
  auto orf = make_named("or", {{"n", 4}});
  auto cc = certificate_complexity(orf);
  CHECK(cc.c1 == 1);
  CHECK(cc.c0 == 4);

  auto par = make_named("parity", {{"n", 2}});
  auto cp = certificate_complexity(par);
  CHECK(cp.c0 == 2);
  CHECK(cp.c1 == 2);

  auto tri = make_named("triangle", {{"m", 3}});
  CHECK(certificate_complexity(tri).c1 == 3);
}

TEST_CASE("block sensitivity") {
  CHECK(block_sensitivity(make_named("or", {{"n", 4}})) == 4);
  CHECK(block_sensitivity(make_named("and", {{"n", 4}})) == 4);
  CHECK(block_sensitivity(make_named("ambainis", {})) == 3);
}

TEST_CASE("bs <= C on sampled functions") {
  for (auto f : {make_named("or", {{"n", 4}}), make_named("and", {{"n", 3}}),
                 make_named("threshold", {{"k", 2}, {"n", 4}}), make_named("ambainis", {}),
                 make_named("parity", {{"n", 3}})}) {
    CHECK(block_sensitivity(f) <= certificate_complexity(f).c);
  }
}

TEST_CASE("hidden shift structure shape") {
  auto hs = hidden_shift_structure(4);
  CHECK(hs.n == 8);
  CHECK(hs.members.size() == 4);
  for (auto& gens : hs.members) {
    CHECK(gens.size() == 4);
    for (uint32_t g : gens) {
      CHECK(std::popcount(g) == 2);
      CHECK(std::popcount(g & 0b1111u) == 1);  // one element in each half
    }
  }
  hs.validate();
}

TEST_CASE("json and csv round trips") {
  auto f = make_named("threshold", {{"k", 2}, {"n", 3}});
  auto g = function_from_json(to_json(f));
  CHECK(g.domain == f.domain);
  CHECK(g.values == f.values);
  auto h = function_from_csv(to_csv(f));
  CHECK(h.domain == f.domain);
  CHECK(h.values == f.values);
}

TEST_CASE("graph collision function") {
  std::vector<std::vector<int>> path = {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
  auto f = graph_collision_function(path);
  CHECK(f.value_of({1, 1, 0}) == 1);
  CHECK(f.value_of({1, 0, 1}) == 0);
  CHECK(f.value_of({0, 0, 0}) == 0);
}

#include <algorithm>
#include <stdexcept>

#include "corpus.hpp"
#include "doctest.h"
#include "laws.hpp"
#include "reachcorr/frontier.hpp"
#include "reachcorr/galois.hpp"
#include "reachcorr/lattice.hpp"

using namespace reachcorr;

namespace {

FrontierPoint pt(double p, double r) { return {p, ExtReal(r)}; }
ParetoFrontier fr(std::vector<FrontierPoint> pts) { return ParetoFrontier(std::move(pts)); }

}  // namespace

TEST_CASE("extended reals follow 0 * inf = 0") {
  const ExtReal inf = ExtReal::infinity();
  CHECK((ExtReal(0.0) * inf == ExtReal(0.0)));
  CHECK((inf * ExtReal(0.0) == ExtReal(0.0)));
  CHECK((ExtReal(2.0) * inf == inf));
  CHECK((ExtReal(3.0) + inf == inf));
  CHECK((inf + ExtReal(3.0) == inf));
  CHECK(ExtReal(1e300) < inf);
  CHECK_THROWS_AS(ExtReal(-1.0), std::domain_error);
  CHECK(inf.to_string() == "inf");
  CHECK(ExtReal(0.5).to_string() == "0.5");
}

TEST_CASE("extended naturals") {
  const ExtNat inf = ExtNat::infinity();
  CHECK((ExtNat(0) * inf == ExtNat(0)));
  CHECK((ExtNat(2) * inf == inf));
  CHECK((ExtNat(2) + ExtNat(3) == ExtNat(5)));
  CHECK(ExtNat(7) < inf);
  CHECK_THROWS_AS(ExtNat(~0ULL) + ExtNat(1), std::overflow_error);
}

TEST_CASE("order examples") {
  const Lex2Lattice lex;
  CHECK(lex.leq({false, true}, {true, false}));
  CHECK_FALSE(lex.leq({true, false}, {false, true}));
  CHECK(lex.leq({true, false}, {true, true}));

  const FrontierLattice f;
  CHECK(f.leq(fr({pt(1, 0)}), fr({pt(1, 5)})));
  CHECK_FALSE(f.leq(fr({pt(1, 5)}), fr({pt(1, 0)})));

  const BoundedNatLattice m(3);
  CHECK(m.leq(BoundedNat::bottom(), BoundedNat::of(0)));
  CHECK_FALSE(m.leq(BoundedNat::of(2), BoundedNat::bottom()));
  CHECK(m.contains(BoundedNat::of(3)));
  CHECK_FALSE(m.contains(BoundedNat::of(4)));
}

TEST_CASE("runtime-described elements") {
  const auto lex = LatticeDescriptor{LatticeKind::Lex2, 0, {}};
  CHECK(leq(Element::lex2({false, true}), Element::lex2({true, false}), lex));
  const auto m3 = LatticeDescriptor::bounded_nat(3);
  CHECK(leq(Element::bounded_nat(BoundedNat::bottom()), Element::bounded_nat(BoundedNat::of(0)), m3));
  CHECK_FALSE(leq(Element::bounded_nat(BoundedNat::of(2)), Element::bounded_nat(BoundedNat::bottom()), m3));
  CHECK_THROWS_AS(leq(Element::boolean(true), Element::lex2({}), lex), LatticeError);
  const auto pr = LatticeDescriptor::product({LatticeKind::UnitInterval, 0, {}}, {LatticeKind::ExtReal, 0, {}});
  CHECK(leq(Element::pair(Element::real(0.5), Element::ext_real(1.0)),
            Element::pair(Element::real(1.0), Element::ext_real(ExtReal::infinity())), pr));
}

TEST_CASE("frontier union and sup") {
  CHECK(frontier_union(fr({pt(1, 0)}), fr({pt(0.5, 10)})).points() == fr({pt(0.5, 10), pt(1, 0)}).points());
  CHECK(frontier_union(fr({pt(1, 0)}), fr({pt(0.5, 0)})).points() == std::vector<FrontierPoint>{pt(1, 0)});
  const auto u = frontier_union(fr({pt(0.2, 3), pt(0.8, 1)}), fr({pt(0.5, 2)}));
  CHECK(u.points() == std::vector<FrontierPoint>{pt(0.2, 3), pt(0.5, 2), pt(0.8, 1)});

  CHECK(frontier_sup(fr({pt(1, 0), pt(0.5, 10)})) == pt(1, 10));
  CHECK(frontier_sup(ParetoFrontier::origin()) == pt(0, 0));
  CHECK(frontier_sup(fr({pt(0.2, 3), pt(0.8, 1)})) == pt(0.8, 3));
  CHECK_THROWS(frontier_sup(ParetoFrontier()));
  CHECK_THROWS(fr({pt(1.5, 0)}));
}

TEST_CASE("frontier canonical form is order independent") {
  corpus::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    std::vector<FrontierPoint> pts;
    const int k = corpus::uniform(rng, 1, 6);
    for (int j = 0; j < k; ++j) pts.push_back({corpus::sample_unit(rng), corpus::sample_ext_real(rng)});
    const ParetoFrontier a(pts);
    std::shuffle(pts.begin(), pts.end(), rng);
    const ParetoFrontier b(pts);
    REQUIRE(a.points() == b.points());
    REQUIRE(ParetoFrontier(a.points()).points() == a.points());
    // antichain, sorted by increasing probability and decreasing reward
    for (std::size_t j = 1; j < a.size(); ++j) {
      REQUIRE(a.points()[j - 1].prob < a.points()[j].prob);
      REQUIRE(a.points()[j].reward < a.points()[j - 1].reward);
    }
  }
}

TEST_CASE("frontier sup is monotone") {
  corpus::Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto a = corpus::sample_frontier(rng);
    const auto b = frontier_union(a, corpus::sample_frontier(rng));
    REQUIRE(frontier_leq(a, b));
    const auto sa = frontier_sup(a);
    const auto sb = frontier_sup(b);
    REQUIRE(dominated_by(sa, sb));
  }
}

TEST_CASE("frontier equality needs matching cardinality") {
  CHECK(frontier_equal(fr({pt(1, 10)}), fr({pt(1, 10 + 1e-9)}), 1e-6));
  CHECK_FALSE(frontier_equal(fr({pt(1, 10)}), fr({pt(1, 10), pt(0.5, 12)}), 1e-6));
  CHECK(frontier_distance(fr({pt(1, 10)}), fr({pt(1, 12)})) == ExtReal(2.0));
}

TEST_CASE("lattice laws on samples") {
  corpus::Rng rng(13);
  CHECK(laws::check_lattice(Bool2Lattice{}, [&] { return corpus::sample_bool(rng); }, 500).empty());
  CHECK(laws::check_lattice(UnitIntervalLattice{}, [&] { return corpus::sample_unit(rng); }, 500).empty());
  CHECK(laws::check_lattice(ExtRealLattice{}, [&] { return corpus::sample_ext_real(rng); }, 500).empty());
  CHECK(laws::check_lattice(ExtNatLattice{}, [&] { return corpus::sample_ext_nat(rng); }, 500).empty());
  CHECK(laws::check_lattice(BoundedNatLattice(4), [&] { return corpus::sample_bounded(rng, 4); }, 500).empty());
  CHECK(laws::check_lattice(Lex2Lattice{}, [&] { return corpus::sample_lex2(rng); }, 500).empty());
  CHECK(laws::check_lattice(FrontierLattice{}, [&] { return corpus::sample_frontier(rng); }, 500).empty());
  CHECK(laws::check_lattice(ProbRewardLattice{}, [&] {
          return ProbReward{corpus::sample_unit(rng), corpus::sample_ext_real(rng)};
        }, 500).empty());
}

TEST_CASE("connection examples") {
  const Valuation<ProbReward> v{{0.5, ExtReal(3.0)}};
  CHECK((apply_lower(ProbRewardConnection{}, v)[0] == ExtReal(3.0)));
  CHECK((apply_upper(ProbRewardConnection{}, Valuation<ExtReal>{ExtReal(3.0)})[0] == ProbReward{1.0, ExtReal(3.0)}));

  const Valuation<ParetoFrontier> f{fr({pt(1, 0), pt(0.5, 10)})};
  CHECK((apply_lower(FrontierConnection{}, f)[0] == ExtReal(10.0)));
  CHECK(apply_upper(FrontierConnection{}, Valuation<ExtReal>{ExtReal(10.0)})[0] == fr({pt(1, 10)}));

  CHECK((apply_lower(CountingConnection{}, Valuation<bool>{true})[0] == ExtNat(1)));

  const ResourceConnection rc(3);
  CHECK((apply_upper(rc, Valuation<bool>{true, false}) == Valuation<BoundedNat>{BoundedNat::of(3), BoundedNat::bottom()}));
  CHECK(in_fix_unit(rc, Valuation<BoundedNat>{BoundedNat::bottom(), BoundedNat::of(3)}, 0.0));
  CHECK_FALSE(in_fix_unit(rc, Valuation<BoundedNat>{BoundedNat::bottom(), BoundedNat::of(2)}, 0.0));
  CHECK(unit_defects(rc, Valuation<BoundedNat>{BoundedNat::bottom(), BoundedNat::of(2)}, 0.0) ==
        std::vector<std::size_t>{1});

  CHECK(in_fix_unit(ProbRewardConnection{}, Valuation<ProbReward>{{1.0, ExtReal(7.0)}}, 0.0));
  CHECK_FALSE(in_fix_unit(ProbRewardConnection{}, Valuation<ProbReward>{{0.5, ExtReal(7.0)}}, 0.0));

  CHECK(in_fix_counit(CountingConnection{}, Valuation<ExtNat>{ExtNat(1)}, 0.0));
  CHECK_FALSE(in_fix_counit(CountingConnection{}, Valuation<ExtNat>{ExtNat(2)}, 0.0));
}

TEST_CASE("counit is an isomorphism for the reward connections") {
  corpus::Rng rng(14);
  for (int i = 0; i < 200; ++i) {
    const auto v = corpus::sample_valuation<ExtReal>(4, [&] { return corpus::sample_ext_real(rng); });
    REQUIRE(in_fix_counit(ProbRewardConnection{}, v, 0.0));
    REQUIRE(in_fix_counit(FrontierConnection{}, v, 0.0));
  }
}

TEST_CASE("connection law suite") {
  corpus::Rng rng(15);
  auto ext_real = [&] { return corpus::sample_ext_real(rng); };
  auto frontier = [&] { return corpus::sample_frontier(rng); };
  auto prob_reward = [&] { return ProbReward{corpus::sample_unit(rng), corpus::sample_ext_real(rng)}; };
  auto boolean = [&] { return corpus::sample_bool(rng); };
  auto ext_nat = [&] { return corpus::sample_ext_nat(rng); };

  const auto check = [](const laws::LawReport& r) {
    for (const auto& f : r.failures) MESSAGE(f);
    CHECK(r.ok());
  };
  check(laws::check_connection(ProbRewardConnection{}, prob_reward, ext_real, 1000));
  check(laws::check_connection(FrontierConnection{}, frontier, ext_real, 1000));
  for (int m = 1; m <= 5; ++m) {
    check(laws::check_connection(ResourceConnection(m), [&] { return corpus::sample_bounded(rng, m); }, boolean, 1000));
  }
  check(laws::check_connection(Lex2Connection{}, [&] { return corpus::sample_lex2(rng); }, boolean, 1000));
  check(laws::check_connection(CountingConnection{}, boolean, ext_nat, 1000));
  check(laws::check_connection(WeightedCountingConnection{},
                               [&] { return BoolProb{corpus::sample_bool(rng), corpus::sample_unit(rng)}; },
                               [&] { return CountReward{corpus::sample_ext_nat(rng), corpus::sample_ext_real(rng)}; },
                               1000));
}

TEST_CASE("valuation helpers") {
  const Bool2Lattice b;
  const auto bot = bottom_valuation(b, 3);
  CHECK(bot == Valuation<bool>{false, false, false});
  const Valuation<bool> x{true, false, true};
  CHECK(leq(b, bot, x));
  CHECK(join(b, bot, x) == x);
  CHECK_THROWS_AS(leq(b, bot, Valuation<bool>{true}), LatticeError);
  const ExtRealLattice r;
  CHECK(max_distance(r, Valuation<ExtReal>{ExtReal(1.0), ExtReal(2.0)},
                     Valuation<ExtReal>{ExtReal(1.5), ExtReal(2.0)}) == ExtReal(0.5));
  CHECK(max_distance(r, Valuation<ExtReal>{ExtReal(1.0)}, Valuation<ExtReal>{ExtReal::infinity()}) ==
        ExtReal::infinity());
  CHECK_THROWS_AS(require_contains(BoundedNatLattice(2), Valuation<BoundedNat>{BoundedNat::of(3)}), LatticeError);
}

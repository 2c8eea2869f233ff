#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "pseudosieve/moduli.hpp"
#include "pseudosieve/wheel.hpp"

using namespace pseudosieve;

namespace {

std::vector<u64> sorted(std::vector<u64> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Trial-division oracle: t is admissible iff t mod f is listed for every f.
std::vector<u64> naive(const std::vector<u64>& factors, const std::vector<std::vector<u64>>& sets, u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 t = lo; t < hi; ++t) {
    bool ok = true;
    for (std::size_t i = 0; i < factors.size() && ok; ++i) {
      ok = std::find(sets[i].begin(), sets[i].end(), t % factors[i]) != sets[i].end();
    }
    if (ok) out.push_back(t);
  }
  return out;
}

struct ToyWheel {
  std::vector<u64> factors;
  std::vector<std::vector<u64>> sets;
};

ToyWheel random_toy_wheel(std::mt19937_64& rng, u64 max_product) {
  const std::vector<std::vector<u64>> pool = {{2, 4, 8, 16}, {3, 9, 27}, {5, 25}, {7, 49}, {11}, {13}, {17}, {19}, {23}, {29}, {31}, {37}};
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  ToyWheel w;
  u64 prod = 1;
  for (std::size_t idx : order) {
    u64 f = pool[idx][rng() % pool[idx].size()];
    if (prod * f > max_product) continue;
    prod *= f;
    w.factors.push_back(f);
    std::vector<u64> set;
    for (u64 r = 0; r < f; ++r) {
      if (rng() % 3 == 0) set.push_back(r);
    }
    if (set.empty()) set.push_back(rng() % f);
    w.sets.push_back(set);
    if (w.factors.size() >= 2 + rng() % 5) break;
  }
  return w;
}

Wheel toy15() { return build_wheel(FactoredModulus({3, 5}), {{1}, {1, 4}}); }

}  // namespace

TEST(FactoredModulusType, Validation) {
  FactoredModulus m({8, 3, 5});
  EXPECT_EQ(m.product(), 120u);
  EXPECT_EQ(m.largest_prime(), 5u);
  EXPECT_THROW(FactoredModulus({6}), InvalidModulus);
  EXPECT_THROW(FactoredModulus({3, 9}), InvalidModulus);
  EXPECT_THROW(FactoredModulus(std::vector<u64>{}), InvalidModulus);
  EXPECT_THROW(FactoredModulus({4294967311ULL}), InvalidModulus);
}

TEST(AdmissibleResidues, TpExamples) {
  // M_n = 5 mod 7: quadratic residues {1,2,4} times 5^-1 = 3.
  EXPECT_EQ(admissible_tp_residues(Mode::square, 7, 5), (std::vector<u64>{3, 5, 6}));
  EXPECT_EQ(admissible_tp_residues(Mode::cube, 2, 9 * 19), (std::vector<u64>{1}));
  EXPECT_EQ(admissible_tp_residues(Mode::cube, 7, 1), (std::vector<u64>{1, 6}));
  EXPECT_THROW(admissible_tp_residues(Mode::square, FactoredModulus({7, 11}), 13, 5), InvalidArgument);
  EXPECT_THROW(admissible_tp_residues(Mode::square, 7, 14), InvalidArgument);
}

TEST(AdmissibleResidues, TnExamples) {
  EXPECT_EQ(admissible_tn_residues(Mode::square, 8, 5), (std::vector<u64>{3}));
  EXPECT_EQ(admissible_tn_residues(Mode::cube, 9, 1), (std::vector<u64>{1, 8}));
  EXPECT_EQ(admissible_tn_residues(Mode::square, 5, 1), (std::vector<u64>{1, 4}));
  EXPECT_THROW(admissible_tn_residues(Mode::square, FactoredModulus({8, 3}), 5, 7), InvalidArgument);
}

TEST(AdmissibleResidues, SizesMatchResidueCounts) {
  for (u64 q : primes_up_to(400)) {
    if (q < 3) continue;
    EXPECT_EQ(admissible_tp_residues(Mode::square, q, q + 1).size(), (q - 1) / 2);
    EXPECT_EQ(admissible_tn_residues(Mode::square, q, q - 1).size(), (q - 1) / 2);
    if (q % 3 == 1) {
      EXPECT_EQ(admissible_tp_residues(Mode::cube, q, 2).size(), (q - 1) / 3);
    }
  }
}

TEST(WheelEnumerate, ToyExamples) {
  Wheel w = toy15();
  EXPECT_EQ(w.period_count(), 2u);
  EXPECT_EQ(sorted(w.enumerate(0, 15)), (std::vector<u64>{1, 4}));
  EXPECT_EQ(sorted(w.enumerate(0, 30)), (std::vector<u64>{1, 4, 16, 19}));
  EXPECT_EQ(sorted(w.enumerate(4, 17)), (std::vector<u64>{4, 16}));
  EXPECT_TRUE(w.enumerate(7, 7).empty());
  EXPECT_THROW(w.enumerate(8, 7), InvalidArgument);
}

TEST(WheelEnumerate, FullSingleFactor) {
  std::vector<u64> all(13);
  for (u64 i = 0; i < 13; ++i) all[i] = i;
  Wheel w = build_wheel(FactoredModulus({13}), {all});
  EXPECT_EQ(w.period_count(), 13u);
  EXPECT_EQ(sorted(w.enumerate(0, 13)), all);
}

TEST(WheelEnumerate, EmptySetThrows) { EXPECT_THROW(build_wheel(FactoredModulus({3, 5}), {{1}, {}}), EmptyWheel); }

TEST(WheelEnumerate, RejectsOutOfRangeResidue) {
  EXPECT_THROW(build_wheel(FactoredModulus({3, 5}), {{3}, {1}}), InvalidArgument);
}

TEST(WheelEnumerate, RandomWheelsMatchNaiveFilter) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    ToyWheel tw = random_toy_wheel(rng, 1'000'000);
    Wheel w = build_wheel(FactoredModulus(tw.factors), tw.sets);
    const u64 m = w.modulus().product();
    u64 expect_count = 1;
    for (const auto& s : tw.sets) expect_count *= s.size();
    EXPECT_EQ(w.period_count(), expect_count);

    auto got = w.enumerate(0, m);
    EXPECT_EQ(got.size(), expect_count);
    auto ref = naive(tw.factors, tw.sets, 0, m);
    ASSERT_EQ(sorted(got), ref) << "trial " << trial;
    for (u64 t : ref) ASSERT_TRUE(w.contains(t));
  }
}

TEST(WheelEnumerate, WindowingConsistency) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    ToyWheel tw = random_toy_wheel(rng, 20'000);
    Wheel w = build_wheel(FactoredModulus(tw.factors), tw.sets);
    const u64 m = w.modulus().product();
    u64 lo = rng() % (3 * m), hi = lo + rng() % (3 * m);
    auto whole = w.enumerate(0, hi);
    auto head = w.enumerate(0, lo);
    std::set<u64> diff(whole.begin(), whole.end());
    for (u64 t : head) diff.erase(t);
    auto part = sorted(w.enumerate(lo, hi));
    EXPECT_EQ(part, std::vector<u64>(diff.begin(), diff.end()));
    EXPECT_EQ(part, naive(tw.factors, tw.sets, lo, hi));
  }
}

TEST(WheelEnumerate, NoDuplicatesOverManyPeriods) {
  Wheel w = build_wheel(FactoredModulus({8, 9, 5, 7}), {{1, 3}, {1, 4, 7}, {2, 3}, {0, 6}});
  auto v = w.enumerate(123, 123 + 7 * w.modulus().product() + 11);
  std::set<u64> s(v.begin(), v.end());
  EXPECT_EQ(s.size(), v.size());
}

TEST(WheelEnumerate, HighRangeNearTwoTo64) {
  Wheel w = toy15();
  const u64 hi = ~u64{0};
  const u64 lo = hi - 100;
  auto got = sorted(w.enumerate(lo, hi));
  std::vector<u64> ref;
  for (u64 t = lo; t < hi; ++t) {
    if (t % 3 == 1 && (t % 5 == 1 || t % 5 == 4)) ref.push_back(t);
  }
  EXPECT_EQ(got, ref);
}

TEST(WheelStorage, GrowsLinearlyWithFactors) {
  std::vector<u64> factors;
  std::vector<std::vector<u64>> sets;
  std::size_t prev = 0;
  for (u64 q : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43}) {
    factors.push_back(q);
    sets.push_back(admissible_tp_residues(Mode::square, q, 1));
    Wheel w = build_wheel(FactoredModulus(factors), sets);
    // Each level adds its residue list and a membership table of size q.
    EXPECT_EQ(w.storage_size() - prev, q + (q - 1) / 2);
    prev = w.storage_size();
  }
  u64 sum = 0;
  for (u64 q : factors) sum += q;
  EXPECT_LE(prev, 2 * sum);
}

TEST(DefaultWheels, ProductionSquareTpPeriodCount) {
  ModuliPair m = production_moduli(Mode::square);
  EXPECT_EQ(m.mp.product(), 2057046173382917717ULL);
  EXPECT_EQ(m.mn.product(), 4483259527721526840ULL);
  Wheel w = make_tp_wheel(Mode::square, m.mp, m.mn);
  u64 expect = 1;
  for (u64 q : m.mp.factors()) expect *= (q - 1) / 2;
  EXPECT_EQ(w.period_count(), expect);
  // Brute-force one level: residues are the s with (s * M_n / q) = 1.
  const auto& lv = w.levels().back();
  std::vector<u64> ref;
  for (u64 s = 0; s < lv.factor; ++s) {
    if (legendre_symbol(mulmod(s, m.mn.product() % lv.factor, lv.factor), lv.factor) == 1) ref.push_back(s);
  }
  EXPECT_EQ(lv.residues, ref);
}

TEST(DefaultWheels, ProductionCubeModuli) {
  ModuliPair m = production_moduli(Mode::cube);
  EXPECT_EQ(m.mp.product(), 701856356111039402ULL);
  EXPECT_EQ(m.mn.product(), 693110504329192503ULL);
  Wheel tp = make_tp_wheel(Mode::cube, m.mp, m.mn);
  Wheel tn = make_tn_wheel(Mode::cube, m.mp, m.mn);
  EXPECT_EQ(tp.levels().front().residues, (std::vector<u64>{1}));
  EXPECT_EQ(tn.levels().front().factor, 9u);
  EXPECT_EQ(tn.levels().front().residues.size(), 2u);
  for (const auto& lv : tp.levels()) {
    if (lv.factor > 2) {
      EXPECT_EQ(lv.residues.size(), (lv.factor - 1) / 3);
    }
  }
}

TEST(WheelConfigFile, ParseAndWriteRoundTrip) {
  std::istringstream in("# toy wheel\n3 1\n5 1 4   # two residues\n\n");
  WheelConfig cfg = parse_wheel_config(in);
  EXPECT_EQ(cfg.modulus.factors(), (std::vector<u64>{3, 5}));
  Wheel w = build_wheel(cfg.modulus, cfg.admissible);
  std::ostringstream out;
  write_wheel_config(out, w);
  EXPECT_EQ(out.str(), "3 1\n5 1 4\n");
  std::istringstream again(out.str());
  WheelConfig cfg2 = parse_wheel_config(again);
  EXPECT_EQ(cfg2.admissible, cfg.admissible);
}

TEST(WheelConfigFile, Errors) {
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(parse_wheel_config(empty), InvalidConfig);
  std::istringstream bad("3 x\n");
  EXPECT_THROW(parse_wheel_config(bad), InvalidConfig);
  std::istringstream noncoprime("3 1\n9 1\n");
  EXPECT_THROW(parse_wheel_config(noncoprime), InvalidModulus);
}

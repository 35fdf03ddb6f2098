#include <gtest/gtest.h>

#include <random>

#include "sl2/canonical_form.hpp"
#include "sl2/decomposition.hpp"

using namespace sl2;

namespace {

using PMod = SL2Module<PrimeField>;
using PMat = Matrix<PrimeField>;

template <class Fn>
Errc error_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Malformed;
}

PMod sum_of(std::uint64_t p, std::size_t ann, const std::vector<unsigned>& ks) {
  const auto spec = FieldSpec::make(p);
  std::vector<PMod> parts;
  if (ann) parts.push_back(trivial<PrimeField>(ann, spec));
  for (unsigned k : ks) parts.push_back(sym_power<PrimeField>(k, spec));
  return direct_sum<PrimeField>(parts, spec);
}

std::map<unsigned, std::size_t> counts(const std::vector<unsigned>& ks) {
  std::map<unsigned, std::size_t> m;
  for (unsigned k : ks)
    if (k > 0) ++m[k];
  return m;
}

PMat one(std::uint64_t p, long long v) { return PMat::from_ints(PrimeField(p), {{v}}); }

// Brute-force similarity of 2x2 matrices over F_p: search all of GL_2.
bool similar_by_search(const PMat& a, const PMat& b) {
  const auto& f = a.field();
  const long long p = static_cast<long long>(f.characteristic());
  for (long long c = 0; c < p * p * p * p; ++c) {
    const auto g = PMat::from_ints(f, {{c % p, (c / p) % p}, {(c / (p * p)) % p, c / (p * p * p)}});
    if (!is_invertible(g)) continue;
    if (g * a == b * g) return true;
  }
  return false;
}

}  // namespace

TEST(CanonicalForm, InvariantFactorsBasics) {
  const PrimeField f(5);
  const auto id = PMat::identity(f, 2);
  EXPECT_EQ(invariant_factors(id), (std::vector<Poly>{{4, 1}, {4, 1}}));
  const auto comp = PMat::from_ints(f, {{0, 3}, {1, 0}});  // x^2 + 2
  EXPECT_EQ(invariant_factors(comp), (std::vector<Poly>{{2, 0, 1}}));
  const auto nil = PMat::from_ints(f, {{0, 1, 0}, {0, 0, 0}, {0, 0, 0}});
  EXPECT_EQ(invariant_factors(nil), (std::vector<Poly>{{0, 1}, {0, 0, 1}}));
}

TEST(CanonicalForm, SimilarityAgreesWithSearchOverF3) {
  const PrimeField f(3);
  std::vector<PMat> all;
  for (long long c = 0; c < 81; ++c) all.push_back(PMat::from_ints(f, {{c % 3, (c / 3) % 3}, {(c / 9) % 3, c / 27}}));
  for (std::size_t i = 0; i < all.size(); i += 4)
    for (std::size_t j = 0; j < all.size(); j += 3) EXPECT_EQ(similar(all[i], all[j]), similar_by_search(all[i], all[j]));
}

TEST(CanonicalForm, ConjugatesAreSimilar) {
  std::mt19937_64 rng(4);
  const PrimeField f(7);
  for (int t = 0; t < 10; ++t) {
    PMat a(f, 5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) a(i, j) = rng() % 7;
    const auto g = random_invertible(f, 5, rng);
    EXPECT_TRUE(similar(a, *inverse(g) * a * g));
  }
}

TEST(Classify, RoundTripOverF7) {
  const auto v = scramble(sum_of(7, 1, {1, 2}), 11);
  const auto rep = classify(v, 3);
  EXPECT_EQ(rep.ann_dim, 1u);
  EXPECT_EQ(rep.multiplicities, (std::map<unsigned, std::size_t>{{1, 1}, {2, 1}}));
  EXPECT_TRUE(rep.witness.is_isomorphism());
  EXPECT_EQ(rep.route, Route::LargeChar);
}

TEST(Classify, RationalSymSquare) {
  const auto rep = classify(sym_power<RationalField>(2), 3);
  EXPECT_EQ(rep.ann_dim, 0u);
  EXPECT_EQ(rep.multiplicities, (std::map<unsigned, std::size_t>{{2, 1}}));
  const auto mixed = scramble(direct_sum<RationalField>({trivial<RationalField>(2), sym_power<RationalField>(3),
                                                         sym_power<RationalField>(1)}),
                              5);
  const auto r2 = classify(mixed, 4);
  EXPECT_EQ(r2.ann_dim, 2u);
  EXPECT_EQ(r2.multiplicities, (std::map<unsigned, std::size_t>{{1, 1}, {3, 1}}));
}

TEST(Classify, RandomRoundTripsAllRoutes) {
  struct Case {
    std::uint64_t p;
    unsigned n;
    Route route;
  };
  const std::vector<Case> cases = {{11, 4, Route::LargeChar}, {5, 4, Route::TwoSided},
                                   {7, 5, Route::TwoSided},   {3, 2, Route::Char3}};
  std::mt19937_64 rng(99);
  for (const auto& c : cases)
    for (int t = 0; t < 6; ++t) {
      const std::size_t ann = rng() % 3;
      std::vector<unsigned> ks;
      const std::size_t parts = 1 + rng() % 3;
      for (std::size_t i = 0; i < parts; ++i) ks.push_back(1 + rng() % (c.n - 1));
      std::sort(ks.begin(), ks.end());
      const auto v = scramble(sum_of(c.p, ann, ks), rng());
      const auto rep = classify(v, c.n, c.route);
      EXPECT_EQ(rep.ann_dim, ann);
      EXPECT_EQ(rep.multiplicities, counts(ks));
      EXPECT_TRUE(rep.witness.is_isomorphism());
      EXPECT_EQ(classify(v, c.n).route, c.route == Route::TwoSided && c.p == 3 ? Route::Char3 : c.route);
    }
}

TEST(Classify, ConjugationInvariant) {
  const auto base = sum_of(13, 2, {1, 3, 3, 4});
  const auto ref = classify(base, 5);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto rep = classify(scramble(base, s), 5);
    EXPECT_EQ(rep.ann_dim, ref.ann_dim);
    EXPECT_EQ(rep.multiplicities, ref.multiplicities);
  }
}

TEST(Classify, Char3Quadratic) {
  const auto v = scramble(sum_of(3, 0, {1, 1}), 2);
  const auto rep = classify_quadratic_char3(v);
  EXPECT_EQ(rep.ann_dim, 0u);
  EXPECT_EQ(rep.multiplicities, (std::map<unsigned, std::size_t>{{1, 2}}));
  const auto t = classify_quadratic_char3(trivial<PrimeField>(2, FieldSpec::make(3)));
  EXPECT_EQ(t.ann_dim, 2u);
  EXPECT_TRUE(t.multiplicities.empty());
}

TEST(Classify, NegativeControls) {
  const auto s = s_alpha_beta(2, 3, one(3, 1), one(3, 1));
  EXPECT_EQ(error_of([&] { classify(s, 2, Route::XOnly); }), Errc::WitnessConstructionFailed);
  EXPECT_EQ(error_of([&] { classify_quadratic_char3(s); }), Errc::HypothesisViolated);
  EXPECT_EQ(error_of([&] { classify(s, 2); }), Errc::HypothesisViolated);
  EXPECT_EQ(error_of([&] { classify(s, 2, Route::LargeChar); }), Errc::HypothesisViolated);
  EXPECT_EQ(error_of([&] { classify(sym_power<PrimeField>(2, FieldSpec::make(7)), 2); }), Errc::HypothesisViolated);
  EXPECT_EQ(error_of([&] { classify(sym_power<PrimeField>(1, FieldSpec::make(3, 2)), 2); }),
            Errc::HypothesisViolated);
}

TEST(Classify, ZeroModule) {
  const auto rep = classify(trivial<PrimeField>(0, FieldSpec::make(5)), 1);
  EXPECT_EQ(rep.ann_dim, 0u);
  EXPECT_TRUE(rep.multiplicities.empty());
}

TEST(ProofInternals, LargeCharacteristic) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const unsigned n = 3;
    const auto v = scramble(sum_of(11, 1, {1, 2, 2}), seed);
    EXPECT_TRUE(h_polynomial_check(v, n));
    EXPECT_TRUE(v.Y().pow(n).is_zero());
    const auto cs = casimir_split(v, n);
    EXPECT_TRUE(cs.bottom.intersect(cs.top).is_zero());
    EXPECT_EQ(cs.bottom.dim() + cs.top.dim(), v.dim());
    EXPECT_EQ(cs.top.dim(), 6u);
    const auto top = restrict(v, cs.top);
    EXPECT_EQ(kernel(top.X()), weight_space(top, n - 1));
  }
}

TEST(ProofInternals, TwoSidedSquaredSplit) {
  // p = 7, n = 5, m = 2: c - n^2 + 1 vanishes on the Sym^4 and Sym^1 parts.
  const unsigned n = 5;
  const auto v = scramble(sum_of(7, 2, {1, 2, 4}), 8);
  EXPECT_TRUE(h_polynomial_check(v, n));
  const auto cs = casimir_split(v, n);
  EXPECT_TRUE(cs.bottom_sq.intersect(cs.top_sq).is_zero());
  EXPECT_EQ(cs.bottom_sq.dim() + cs.top_sq.dim(), v.dim());
  const auto top = restrict(v, cs.top_sq);
  EXPECT_EQ(top.dim(), 7u);
  EXPECT_EQ(kernel(top.X()), weight_space(top, n - 1).sum(weight_space(top, 1)));
}

TEST(Sab, ExtractSmallest) {
  const auto plain = extract_alpha_beta(s_alpha_beta(2, 3, one(3, 1), one(3, 1)), 2);
  EXPECT_EQ(plain.alpha, one(3, 1));
  EXPECT_EQ(plain.beta, one(3, 1));
  const auto v = scramble(s_alpha_beta(2, 3, one(3, 1), one(3, 1)), 1);
  const auto rep = extract_alpha_beta(v, 2);
  EXPECT_EQ(rep.beta * rep.alpha, one(3, 1));
  EXPECT_EQ(rep.beta_alpha_charpoly, (Poly{2, 1}));
  EXPECT_TRUE(rep.simple);
  EXPECT_TRUE(rep.witness.is_isomorphism());
  EXPECT_TRUE(is_simple_bruteforce(v, 1000));
}

TEST(Sab, IrreducibleCompanionIsSimple) {
  const PrimeField f(5);
  const auto id = PMat::identity(f, 2);
  const auto comp = PMat::from_ints(f, {{0, 3}, {1, 0}});
  const auto v = s_alpha_beta(3, 5, id, comp);
  const auto rep = extract_alpha_beta(scramble(v, 3), 3);
  EXPECT_TRUE(rep.simple);
  EXPECT_EQ(rep.beta_alpha_charpoly, (Poly{2, 0, 1}));
  EXPECT_TRUE(is_simple_bruteforce(v, 100000, SimplicityMode::WeightVectors));
}

TEST(Sab, ReducibleIsNotSimpleWithSubmodule) {
  const PrimeField f(5);
  const auto id = PMat::identity(f, 2);
  const auto diag = PMat::from_ints(f, {{1, 0}, {0, 0}});
  for (const auto& beta : {diag, PMat::from_ints(f, {{1, 0}, {0, 2}}), PMat::from_ints(f, {{1, 1}, {0, 1}})}) {
    const auto v = scramble(s_alpha_beta(3, 5, id, beta), 6);
    const auto rep = extract_alpha_beta(v, 3);
    EXPECT_FALSE(rep.simple);
    ASSERT_TRUE(rep.proper_submodule.has_value());
    EXPECT_FALSE(rep.proper_submodule->is_zero());
    EXPECT_FALSE(rep.proper_submodule->is_full());
    EXPECT_TRUE(is_invariant(v, *rep.proper_submodule));
    EXPECT_FALSE(is_simple_bruteforce(v, 100000, SimplicityMode::WeightVectors));
  }
}

TEST(Sab, CriterionMatchesBruteForceOnWindows) {
  std::mt19937_64 rng(17);
  const std::vector<std::pair<unsigned, std::uint64_t>> windows = {{2, 3}, {3, 5}, {4, 5}, {4, 7}, {5, 7}};
  for (const auto& [n, p] : windows) {
    const PrimeField f(p);
    for (std::size_t d1 = 1; d1 <= 2; ++d1)
      for (std::size_t d2 = 1; d2 <= 2; ++d2)
        for (int t = 0; t < 3; ++t) {
          PMat a(f, d2, d1), b(f, d1, d2);
          for (std::size_t i = 0; i < d2; ++i)
            for (std::size_t j = 0; j < d1; ++j) {
              a(i, j) = rng() % p;
              b(j, i) = rng() % p;
            }
          const auto v = s_alpha_beta(n, p, a, b);
          const auto rep = extract_alpha_beta(v, n);
          EXPECT_EQ(rep.simple, sab_criterion(a, b));
          EXPECT_EQ(rep.simple, is_simple_bruteforce(v, 1000000, SimplicityMode::WeightVectors))
              << "n=" << n << " p=" << p << " d1=" << d1 << " d2=" << d2;
          EXPECT_EQ(rep.alpha, a);
          EXPECT_EQ(rep.beta, b);
        }
  }
}

TEST(Sab, Isomorphism) {
  const PrimeField f(5);
  const auto id = PMat::identity(f, 2);
  const auto c2 = PMat::from_ints(f, {{0, 3}, {1, 0}});
  const auto c3 = PMat::from_ints(f, {{0, 2}, {1, 0}});
  const auto r = extract_alpha_beta(s_alpha_beta(3, 5, id, c2), 3);
  const auto rs = extract_alpha_beta(scramble(s_alpha_beta(3, 5, id, c2), 21), 3);
  const auto r3 = extract_alpha_beta(s_alpha_beta(3, 5, id, c3), 3);
  EXPECT_TRUE(sab_isomorphic(r, rs));
  EXPECT_FALSE(sab_isomorphic(r, r3));
  const auto a = extract_alpha_beta(s_alpha_beta(2, 3, one(3, 2), one(3, 1)), 2);
  const auto b = extract_alpha_beta(s_alpha_beta(2, 3, one(3, 1), one(3, 2)), 2);
  EXPECT_TRUE(sab_isomorphic(a, b));
  const auto sing = extract_alpha_beta(s_alpha_beta(2, 3, one(3, 0), one(3, 1)), 2);
  EXPECT_EQ(error_of([&] { sab_isomorphic(a, sing); }), Errc::NonInvertibleUnsupported);
  // agreement with hom-space isomorphism on the modules themselves
  const auto va = s_alpha_beta(3, 5, id, c2);
  const auto vb = s_alpha_beta(3, 5, PMat::from_ints(f, {{1, 1}, {0, 1}}), *inverse(PMat::from_ints(f, {{1, 1}, {0, 1}})) * c2);
  EXPECT_TRUE(sab_isomorphic(r, extract_alpha_beta(vb, 3)));
  bool iso = false;
  for (const auto& h : hom_space(va, vb)) iso = iso || is_invertible(h);
  EXPECT_TRUE(iso);
}

TEST(Sab, ExtractRefusals) {
  EXPECT_EQ(error_of([&] { extract_alpha_beta(sym_power<PrimeField>(2, FieldSpec::make(7)), 2); }),
            Errc::HypothesisViolated);
  EXPECT_EQ(error_of([&] { extract_alpha_beta(sum_of(5, 0, {2}), 3); }), Errc::NotAnSab);
}

#include <gtest/gtest.h>

#include "sl2/linearization.hpp"

using namespace sl2;

namespace {

using PMod = SL2Module<PrimeField>;

template <class Fn>
Errc error_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Malformed;
}

PMod k_sum(const FieldSpec& spec, std::size_t ann, const std::vector<unsigned>& ks) {
  std::vector<PMod> parts;
  if (ann) parts.push_back(trivial<PrimeField>(ann * spec.degree(), spec));
  for (unsigned k : ks) parts.push_back(sym_power<PrimeField>(k, spec));
  return direct_sum<PrimeField>(parts, spec);
}

void expect_action_invariants(const PMod& v, const ScalarAction<PrimeField>& s, unsigned n) {
  const auto& spec = v.spec();
  EXPECT_EQ(s.S[0], Matrix<PrimeField>::identity(v.field(), v.dim()));
  for (unsigned i = 0; i < v.degree(); ++i)
    for (unsigned j = 0; j < v.degree(); ++j) {
      EXPECT_EQ(s.S[i] * s.S[j], s.act(spec.mul(spec.basis(i), spec.basis(j))));
      EXPECT_EQ(s.S[i] * s.S[j], s.S[j] * s.S[i]);
    }
  for (const auto& m : s.S) {
    for (const auto* g : v.generators()) EXPECT_EQ(*g * m, m * *g);
    for (unsigned i = 1; i <= n; ++i) {
      const auto e = weight_space(v, static_cast<long long>(n) + 1 - 2 * static_cast<long long>(i));
      EXPECT_TRUE(e.contains(e.image_under(m)));
    }
  }
}

bool nested_invariant(const PMod& v, const std::vector<Subspace<PrimeField>>& terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!is_invariant(v, terms[i])) return false;
    if (i > 0 && !terms[i].contains(terms[i - 1])) return false;
  }
  return true;
}

}  // namespace

TEST(DCoefficients, SmallValuesAndRecurrence) {
  EXPECT_EQ(d_coefficients(3), (std::vector<BigInt>{1, 2, 4}));
  EXPECT_EQ(d_coefficients(2), (std::vector<BigInt>{1, 1}));
  for (unsigned n = 2; n <= 12; ++n) {
    const auto d = d_coefficients(n);
    BigInt fact = 1;
    for (unsigned i = 2; i < n; ++i) fact *= i;
    EXPECT_EQ(d.back(), fact * fact);
    for (unsigned i = 1; i <= n; ++i) {
      BigInt a = 1, b = 1, c = 1;
      for (unsigned t = 2; t < i; ++t) a *= t;
      for (unsigned t = 2; t < n; ++t) b *= t;
      for (unsigned t = 2; t <= n - i; ++t) c *= t;
      EXPECT_EQ(d[i - 1], a * b / c);
    }
  }
}

TEST(Linearize, NaturalOverF9) {
  const auto spec = FieldSpec::make(3, 2);
  const auto v = sym_power<PrimeField>(1, spec);
  const auto lin = linearize(v, 2);
  EXPECT_EQ(lin.multiplicities, (std::map<unsigned, std::size_t>{{1, 1}}));
  EXPECT_TRUE(lin.witness.is_isomorphism());
  expect_action_invariants(v, lin.action, 2);
  // S_t on a genuinely K-linear carrier is the given multiplication by t
  const auto lt = Matrix<PrimeField>::from_ints(PrimeField(3), spec.mult_matrix(spec.basis(1)));
  EXPECT_EQ(lin.action.S[1], kron(Matrix<PrimeField>::identity(PrimeField(3), 2), lt));
}

TEST(Linearize, ScrambledNaturalOverF9) {
  const auto spec = FieldSpec::make(3, 2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto v = scramble(sym_power<PrimeField>(1, spec), seed);
    const auto lin = linearize(v, 2);
    EXPECT_EQ(lin.multiplicities, (std::map<unsigned, std::size_t>{{1, 1}}));
    EXPECT_TRUE(lin.witness.is_isomorphism());
    expect_action_invariants(v, lin.action, 2);
  }
}

TEST(Linearize, ExtensionFieldsUpToFour) {
  const std::vector<FieldSpec> fields = {FieldSpec::make(3, 2), FieldSpec::make(5, 2), FieldSpec::make(3, 3)};
  std::uint64_t seed = 100;
  for (const auto& spec : fields)
    for (unsigned n = 2; n <= 4 && n <= spec.characteristic(); ++n)
      for (std::size_t j = 1; j <= 2; ++j) {
        const auto v = scramble(k_sum(spec, 0, std::vector<unsigned>(j, n - 1)), seed++);
        const auto lin = linearize(v, n);
        EXPECT_EQ(lin.multiplicities, (std::map<unsigned, std::size_t>{{n - 1, j}})) << spec.name() << " n=" << n;
        EXPECT_TRUE(lin.witness.is_isomorphism());
        expect_action_invariants(v, lin.action, n);
        EXPECT_TRUE(kernel_coherent(v));
        EXPECT_TRUE(image_coherent(v));
      }
}

TEST(Linearize, Refusals) {
  const auto t = twisted_tensor_nat(FieldSpec::make(3, 2), {0, 1});
  EXPECT_EQ(error_of([&] { linearize(t, 3); }), Errc::HypothesisViolated);
  const auto mixed = k_sum(FieldSpec::make(5, 2), 0, {1, 2});
  EXPECT_EQ(error_of([&] { linearize(mixed, 3); }), Errc::HypothesisViolated);
  const auto with_ann = k_sum(FieldSpec::make(5, 2), 1, {2});
  EXPECT_EQ(error_of([&] { linearize(with_ann, 3); }), Errc::HypothesisViolated);
  EXPECT_EQ(error_of([&] { linearize(sym_power<PrimeField>(2, FieldSpec::make(3, 2)), 4); }),
            Errc::HypothesisViolated);
}

TEST(Linearize, PrimeFieldAndRational) {
  const auto lin = linearize(scramble(k_sum(FieldSpec::make(7), 0, {2, 2}), 3), 3);
  EXPECT_EQ(lin.multiplicities, (std::map<unsigned, std::size_t>{{2, 2}}));
  const auto q = linearize(sym_power<RationalField>(3), 4);
  EXPECT_EQ(q.action.S[0], Matrix<RationalField>::identity(RationalField(), 4));
}

TEST(Coherence, KernelAndImageExamples) {
  const auto t = twisted_tensor_nat(FieldSpec::make(3, 2), {0, 1});
  EXPECT_FALSE(kernel_coherent(t));
  EXPECT_FALSE(image_coherent(t));
  // a = e_{2,1} - e_{1,2}: x a = 0 but x_t a != 0
  const auto& f = t.field();
  std::vector<std::uint64_t> a(8, 0);
  a[2 * 2 + 0] = 1;      // e_{2,1}, coordinate 1
  a[1 * 2 + 0] = f.neg(1);  // e_{1,2}
  EXPECT_TRUE(f.equal(t.X().apply(a)[0], 0));
  bool zero = true;
  for (auto z : t.X().apply(a)) zero = zero && z == 0;
  EXPECT_TRUE(zero);
  bool xt_zero = true;
  for (auto z : t.X(1).apply(a)) xt_zero = xt_zero && z == 0;
  EXPECT_FALSE(xt_zero);
  const auto triv = trivial<PrimeField>(3, FieldSpec::make(3, 2));
  EXPECT_TRUE(kernel_coherent(triv));
  EXPECT_TRUE(image_coherent(triv));
}

TEST(Coherence, DualSwapsKernelAndImage) {
  const std::vector<PMod> mods = {twisted_tensor_nat(FieldSpec::make(3, 2), {0, 1}),
                                  scramble(k_sum(FieldSpec::make(5, 2), 1, {1, 2}), 2),
                                  twisted_tensor_nat(FieldSpec::make(5, 3), {0, 1, 2})};
  for (const auto& v : mods) {
    const auto d = dual(v);
    EXPECT_TRUE(validate(d).ok());
    EXPECT_EQ(kernel_coherent(d), image_coherent(v));
    EXPECT_EQ(image_coherent(d), kernel_coherent(v));
  }
}

TEST(Series, KernelSeriesPrimeField) {
  const auto v = k_sum(FieldSpec::make(7), 0, {1, 2});
  const auto rep = series_ker(v, 3);
  ASSERT_EQ(rep.terms.size(), 3u);
  EXPECT_EQ(rep.terms[0], annihilator(v));
  EXPECT_EQ(rep.terms[1].dim(), 2u);
  EXPECT_TRUE(rep.terms[2].is_full());
  ASSERT_EQ(rep.steps.size(), 2u);
  EXPECT_EQ(rep.steps[0].k, 1u);
  EXPECT_EQ(rep.steps[1].k, 2u);
  EXPECT_TRUE(nested_invariant(v, rep.terms));
}

TEST(Series, KernelSeriesExtensionFields) {
  for (const auto& spec : {FieldSpec::make(5, 2), FieldSpec::make(7, 2)}) {
    const auto v = scramble(k_sum(spec, 1, {1, 2, 2}), 9);
    const auto rep = series_ker(v, 3);
    ASSERT_EQ(rep.terms.size(), 3u);
    EXPECT_EQ(rep.terms[0], annihilator(v));
    EXPECT_TRUE(rep.terms.back().is_full());
    EXPECT_TRUE(nested_invariant(v, rep.terms));
    ASSERT_EQ(rep.steps.size(), 2u);
    EXPECT_EQ(rep.steps[0].k, 1u);
    EXPECT_EQ(rep.steps[0].structure.multiplicities, (std::map<unsigned, std::size_t>{{1, 1}}));
    EXPECT_EQ(rep.steps[0].quotient.dim(), 4u);
    EXPECT_EQ(rep.steps[1].k, 2u);
    EXPECT_EQ(rep.steps[1].structure.multiplicities, (std::map<unsigned, std::size_t>{{2, 2}}));
    EXPECT_EQ(rep.steps[1].quotient.dim(), 12u);
    for (std::size_t i = 0; i < rep.terms.size(); ++i) EXPECT_TRUE(kernel_coherent(restrict(v, rep.terms[i])));
  }
}

TEST(Series, ImageSeriesExtensionFields) {
  for (const auto& spec : {FieldSpec::make(5, 2), FieldSpec::make(7, 2)}) {
    const auto v = scramble(k_sum(spec, 1, {1, 2, 2}), 10);
    const auto rep = series_im(v, 3);
    ASSERT_EQ(rep.terms.size(), 3u);
    EXPECT_TRUE(rep.terms[0].is_zero());
    EXPECT_EQ(rep.terms.back(), g_dot_V(v));
    EXPECT_TRUE(nested_invariant(v, rep.terms));
    ASSERT_EQ(rep.steps.size(), 2u);
    EXPECT_EQ(rep.steps[0].k, 2u);
    EXPECT_EQ(rep.steps[0].structure.multiplicities, (std::map<unsigned, std::size_t>{{2, 2}}));
    EXPECT_EQ(rep.steps[1].k, 1u);
    EXPECT_EQ(rep.steps[1].structure.multiplicities, (std::map<unsigned, std::size_t>{{1, 1}}));
    for (std::size_t i = 0; i < rep.terms.size(); ++i) EXPECT_TRUE(image_coherent(quotient(v, rep.terms[i])));
  }
}

TEST(Series, FormulaTermsMatchInvariantCharacterizations) {
  const auto v = scramble(k_sum(FieldSpec::make(7, 2), 2, {1, 2}), 4);
  EXPECT_EQ(kernel_series_term(v, 3), invariant_core(v, kernel(v.X().pow(2))));
  EXPECT_EQ(image_series_term(v, 3), submodule_closure(v, image(v.X().pow(2)).vectors()));
}

TEST(Series, RefusesIncoherent) {
  const auto t = twisted_tensor_nat(FieldSpec::make(3, 2), {0, 1});
  EXPECT_EQ(error_of([&] { series_ker(t, 3); }), Errc::HypothesisViolated);
  EXPECT_EQ(error_of([&] { series_im(t, 3); }), Errc::HypothesisViolated);
  const auto t5 = twisted_tensor_nat(FieldSpec::make(5, 2), {0, 1});
  EXPECT_EQ(error_of([&] { series_ker(t5, 3); }), Errc::HypothesisViolated);
}

TEST(Separate, MixedOverF25) {
  const auto v = scramble(k_sum(FieldSpec::make(5, 2), 1, {1, 2}), 12);
  const auto sep = separate(v, 3);
  EXPECT_EQ(sep.ann.dim(), 2u);
  EXPECT_EQ(sep.gv.dim(), 10u);
  EXPECT_TRUE(sep.ann.intersect(sep.gv).is_zero());
  EXPECT_EQ(sep.structure.multiplicities, (std::map<unsigned, std::size_t>{{1, 1}, {2, 1}}));
  EXPECT_TRUE(sep.structure.witness.is_isomorphism());
}

TEST(Separate, TrivialAndRefusals) {
  const auto triv = trivial<PrimeField>(3, FieldSpec::make(5, 2));
  const auto sep = separate(triv, 1);
  EXPECT_TRUE(sep.ann.is_full());
  EXPECT_TRUE(sep.gv.is_zero());
  const auto t = twisted_tensor_nat(FieldSpec::make(3, 2), {0, 1});
  EXPECT_EQ(error_of([&] { separate(t, 3); }), Errc::HypothesisViolated);
}

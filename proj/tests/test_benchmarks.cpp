#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sabres/benchmarks.hpp"

namespace sabres {
namespace {

// Reference values below were computed independently at 40 significant
// digits and rounded.

TEST(EvalBase, KnownMinima) {
  const Vector zeros(10, 0.0), ones(10, 1.0);
  EXPECT_EQ(eval_base(BaseFunction::sphere, zeros), 0.0);
  EXPECT_EQ(eval_base(BaseFunction::rosenbrock, ones), 0.0);
  EXPECT_EQ(eval_base(BaseFunction::rastrigin, zeros), 0.0);
  EXPECT_EQ(eval_base(BaseFunction::zakharov, zeros), 0.0);
  EXPECT_EQ(eval_base(BaseFunction::schaffer_f7, zeros), 0.0);
  EXPECT_NEAR(eval_base(BaseFunction::levy, ones), 0.0, 1e-30);
}

TEST(EvalBase, RastriginUnitOffset) {
  Vector x(10, 0.0);
  x[0] = 1.0;
  EXPECT_NEAR(eval_base("rastrigin", x), 1.0, 1e-12);
}

TEST(EvalBase, ReferenceValues) {
  EXPECT_DOUBLE_EQ(eval_base(BaseFunction::zakharov, Vector{1, 1}), 9.3125);
  EXPECT_DOUBLE_EQ(eval_base(BaseFunction::zakharov, Vector{1, -2, 0.5}), 6.12890625);
  EXPECT_DOUBLE_EQ(eval_base(BaseFunction::rosenbrock, Vector{0, 0}), 1.0);
  EXPECT_NEAR(eval_base(BaseFunction::rosenbrock, Vector{-1.2, 1}), 24.2, 1e-12);
  EXPECT_NEAR(eval_base(BaseFunction::rastrigin, Vector{0.5, -0.5}), 40.5, 1e-12);
  EXPECT_NEAR(eval_base(BaseFunction::schaffer_f7, Vector{3, 4}), 3.8001630861114336, 1e-12);
  EXPECT_NEAR(eval_base(BaseFunction::schaffer_f7, Vector{1, 2, 3}), 10.474538560642141, 1e-12);
  EXPECT_NEAR(eval_base(BaseFunction::levy, Vector{0, 0}), 0.71584455411697447, 1e-12);
  EXPECT_NEAR(eval_base(BaseFunction::levy, Vector{2, -3, 0.5}), 9.2633271286187375, 1e-12);
}

TEST(EvalBase, Errors) {
  EXPECT_THROW(eval_base("nope", Vector{1.0}), std::invalid_argument);
  EXPECT_THROW(eval_base(BaseFunction::sphere, Vector{1.0, std::nan("")}), std::invalid_argument);
  EXPECT_THROW(eval_base(BaseFunction::sphere, Vector{}), std::invalid_argument);
}

TEST(Transform, ShiftMapsToOrigin) {
  RandomStream s(1);
  const auto t = generate_transform(s, 5, {});
  const auto z = apply_transform(t.shift, t);
  for (double v : z) EXPECT_EQ(v, 0.0);
}

TEST(Transform, IdentityRotationSubtractsShift) {
  auto t = TransformData::identity(3);
  t.shift = {1.0, -2.0, 3.5};
  const auto z = apply_transform(Vector{0.0, 0.0, 0.0}, t);
  EXPECT_EQ(z, (Vector{-1.0, 2.0, -3.5}));
}

TEST(Transform, DimensionMismatch) {
  const auto t = TransformData::identity(3);
  EXPECT_THROW(apply_transform(Vector{1.0, 2.0}, t), std::invalid_argument);
}

TEST(Transform, PreservesScaledNorm) {
  RandomStream s(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + s.below(20);
    const double scale = s.uniform(0.1, 3.0);
    const auto t = generate_transform(s, d, {}, scale);
    Vector x(d);
    for (auto& v : x) v = s.uniform(-100, 100);
    const auto z = apply_transform(x, t);
    double nz = 0.0, nd = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      nz += z[i] * z[i];
      nd += (x[i] - t.shift[i]) * (x[i] - t.shift[i]);
    }
    EXPECT_NEAR(std::sqrt(nz), scale * std::sqrt(nd), 1e-10 * (1.0 + scale * std::sqrt(nd)));
  }
}

TEST(Transform, GeneratedRotationsAreOrthogonal) {
  RandomStream s(3);
  for (std::size_t d : {1u, 2u, 10u, 20u}) {
    for (int i = 0; i < 25; ++i) EXPECT_LE(orthogonality_error(generate_transform(s, d, {})), 1e-10);
  }
}

TEST(Transform, OneDimensionalRotationIsSign) {
  RandomStream s(4);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(std::abs(generate_transform(s, 1, {}).rotation[0]), 1.0);
}

TEST(Transform, GenerationIsDeterministicAndShiftInsideMiddleBand) {
  RandomStream a(5), b(5);
  const Bounds box{-100, 100};
  const auto ta = generate_transform(a, 10, box);
  const auto tb = generate_transform(b, 10, box);
  EXPECT_EQ(ta.shift, tb.shift);
  EXPECT_EQ(ta.rotation, tb.rotation);
  for (double v : ta.shift) {
    EXPECT_GE(v, -80.0);
    EXPECT_LT(v, 80.0);
  }
}

class TransformFile : public ::testing::Test {
 protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "sabres_transform_test";
  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }
  std::string write(const std::string& name, const std::string& body) {
    const auto p = dir / name;
    std::ofstream(p) << body;
    return p.string();
  }
};

TEST_F(TransformFile, LoadsIdentity) {
  const auto path = write("id.txt", "3\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n1\n");
  const auto t = load_transform(path, 3);
  EXPECT_EQ(t.shift, Vector(3, 0.0));
  EXPECT_EQ(t.rotation, TransformData::identity(3).rotation);
  EXPECT_EQ(t.scale, 1.0);
}

TEST_F(TransformFile, RoundTripsGeneratedData) {
  RandomStream s(8);
  const auto t = generate_transform(s, 7, {}, 0.5);
  std::stringstream buf;
  write_transform(buf, t);
  const auto back = parse_transform(buf, 7);
  EXPECT_EQ(back.shift, t.shift);
  EXPECT_EQ(back.rotation, t.rotation);
  EXPECT_EQ(back.scale, t.scale);
}

TEST_F(TransformFile, RejectsNonOrthogonal) {
  const auto path = write("bad.txt", "2\n0 0\n2 0\n0 1\n1\n");
  try {
    load_transform(path, 2);
    FAIL() << "expected an error";
  } catch (const TransformFileError& e) {
    EXPECT_EQ(e.kind(), TransformFileError::Kind::not_orthogonal);
  }
}

TEST_F(TransformFile, TruncatedFileNamesLine) {
  const auto path = write("short.txt", "3\n0 0 0\n1 0 0\n0 1 0\n");
  try {
    load_transform(path, 3);
    FAIL() << "expected an error";
  } catch (const TransformFileError& e) {
    EXPECT_EQ(e.kind(), TransformFileError::Kind::parse);
    EXPECT_NE(std::string(e.what()).find(":5:"), std::string::npos) << e.what();
  }
}

TEST_F(TransformFile, BadTokenAndCountsAreParseErrors) {
  const auto bad_token = write("tok.txt", "2\n0 x\n1 0\n0 1\n1\n");
  const auto short_row = write("row.txt", "2\n0 0\n1\n0 1\n1\n");
  for (const auto& p : {bad_token, short_row}) {
    try {
      load_transform(p, 2);
      FAIL();
    } catch (const TransformFileError& e) {
      EXPECT_EQ(e.kind(), TransformFileError::Kind::parse) << e.what();
    }
  }
}

TEST_F(TransformFile, DimensionMismatchAndMissingFile) {
  const auto path = write("id2.txt", "2\n0 0\n1 0\n0 1\n1\n");
  try {
    load_transform(path, 3);
    FAIL();
  } catch (const TransformFileError& e) {
    EXPECT_EQ(e.kind(), TransformFileError::Kind::dimension_mismatch);
  }
  try {
    load_transform((dir / "absent.txt").string(), 2);
    FAIL();
  } catch (const TransformFileError& e) {
    EXPECT_EQ(e.kind(), TransformFileError::Kind::missing_file);
  }
}

ObjectiveSpec shifted_base(BaseFunction f, std::size_t d, double f_star, std::uint64_t seed) {
  ObjectiveSpec spec;
  spec.id = "t";
  spec.dim = d;
  spec.function = f;
  spec.f_star = f_star;
  RandomStream s(seed);
  spec.transform = generate_transform(s, d, spec.bounds);
  return spec;
}

TEST(Objective, BaseAtShiftIsFStar) {
  for (auto f : {BaseFunction::sphere, BaseFunction::zakharov, BaseFunction::rosenbrock, BaseFunction::rastrigin,
                 BaseFunction::levy, BaseFunction::schaffer_f7}) {
    const auto spec = shifted_base(f, 10, 300.0, 9);
    EXPECT_NEAR(eval_objective(spec, spec.transform->shift), 300.0, 1e-12) << to_string(f);
  }
}

TEST(Objective, HybridAtShiftIsFStar) {
  ObjectiveSpec spec;
  spec.dim = 10;
  spec.kind = ObjectiveKind::hybrid;
  spec.groups = {{BaseFunction::sphere, 0.5}, {BaseFunction::rastrigin, 0.5}};
  spec.f_star = 42.0;
  RandomStream s(10);
  spec.transform = generate_transform(s, 10, spec.bounds);
  EXPECT_NEAR(eval_objective(spec, spec.transform->shift), 42.0, 1e-12);
}

TEST(Objective, HybridGroupSizes) {
  const std::vector<HybridGroup> g = {{BaseFunction::sphere, 0.4}, {BaseFunction::rastrigin, 0.3},
                                      {BaseFunction::levy, 0.3}};
  EXPECT_EQ(hybrid_group_sizes(g, 10), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(hybrid_group_sizes(g, 20), (std::vector<std::size_t>{8, 6, 6}));
  EXPECT_EQ(hybrid_group_sizes(g, 2), (std::vector<std::size_t>{1, 1, 0}));
}

TEST(Objective, HybridSingleGroupEqualsBase) {
  RandomStream s(11);
  for (auto f : {BaseFunction::sphere, BaseFunction::levy, BaseFunction::rosenbrock}) {
    auto base = shifted_base(f, 6, 0.0, 12);
    ObjectiveSpec hybrid = base;
    hybrid.kind = ObjectiveKind::hybrid;
    hybrid.groups = {{f, 1.0}};
    for (int i = 0; i < 100; ++i) {
      Vector x(6);
      for (auto& v : x) v = s.uniform(-100, 100);
      EXPECT_EQ(eval_objective(hybrid, x), eval_objective(base, x));
    }
  }
}

ObjectiveSpec two_component(Vector o1, Vector o2, double sigma) {
  ObjectiveSpec spec;
  spec.dim = o1.size();
  spec.kind = ObjectiveKind::composition;
  auto t1 = TransformData::identity(spec.dim), t2 = TransformData::identity(spec.dim);
  t1.shift = std::move(o1);
  t2.shift = std::move(o2);
  spec.components.push_back({BaseFunction::rastrigin, t1, 2.0, 5.0, sigma});
  spec.components.push_back({BaseFunction::sphere, t2, 1.0, 100.0, sigma});
  return spec;
}

TEST(Objective, CompositionAtFirstShift) {
  const auto spec = two_component({0.0, 0.0}, {20.0, 20.0}, 10.0);
  // lambda_1 * f_1(o_1) + bias_1 = 2 * 0 + 5
  EXPECT_EQ(eval_objective(spec, Vector{0.0, 0.0}), 5.0);
}

TEST(Objective, CompositionFarComponentNegligible) {
  const auto spec = two_component({0.0, 0.0}, {60.0, 60.0}, 10.0);
  const Vector x{1e-3, 0.0};
  // Direct evaluation of the normalized weight of component 2.
  auto raw = [&](const Vector& o) {
    long double d2 = 0;
    for (std::size_t i = 0; i < 2; ++i) d2 += (x[i] - o[i]) * (long double)(x[i] - o[i]);
    return std::exp(-d2 / (2.0L * 2 * 100)) / std::sqrt(d2);
  };
  const long double w2 = raw({60, 60}) / (raw({0, 0}) + raw({60, 60}));
  ASSERT_LT(w2, 1e-12L);
  const long double near = 2.0L * eval_base(BaseFunction::rastrigin, x) + 5.0L;
  const long double far = eval_base(BaseFunction::sphere, Vector{x[0] - 60.0, x[1] - 60.0}) + 100.0L;
  const double expected = static_cast<double>((1.0L - w2) * near + w2 * far);
  EXPECT_NEAR(eval_objective(spec, x), expected, 1e-12);
  EXPECT_NEAR(eval_objective(spec, x), static_cast<double>(near), 1e-8);
  EXPECT_NEAR(composition_weights(x, spec.components)[1], static_cast<double>(w2), 1e-15);
}

TEST(Objective, CompositionSingleComponentIsScaledBase) {
  RandomStream s(13);
  ObjectiveSpec spec;
  spec.dim = 4;
  spec.kind = ObjectiveKind::composition;
  spec.components.push_back({BaseFunction::levy, generate_transform(s, 4, spec.bounds), 3.0, 7.0, 20.0});
  for (int i = 0; i < 100; ++i) {
    Vector x(4);
    for (auto& v : x) v = s.uniform(-100, 100);
    auto z = apply_transform(x, spec.components[0].transform);
    for (auto& v : z) v += 1.0;
    EXPECT_EQ(eval_objective(spec, x), 3.0 * eval_base(BaseFunction::levy, z) + 7.0);
  }
}

TEST(Objective, DimensionMismatchAndNaN) {
  const auto spec = shifted_base(BaseFunction::sphere, 3, 0.0, 1);
  EXPECT_THROW(eval_objective(spec, Vector{1.0}), std::invalid_argument);
  EXPECT_THROW(eval_objective(spec, Vector{1.0, std::nan(""), 0.0}), std::invalid_argument);
}

TEST(ErrorValue, Floor) {
  EXPECT_EQ(error_value(7.0, 7.0), 1e-8);
  EXPECT_EQ(error_value(7.5, 7.0), 0.5);
  EXPECT_EQ(error_value(1e-12, 0.0), 1e-8);
  EXPECT_THROW(error_value(-1e-6, 0.0), OptimumViolation);
  EXPECT_EQ(error_value(-5e-10, 0.0), 1e-8);
}

TEST(Registry, EveryIdAttainsFStarAtItsOptimizerAndIsBoundedBelow) {
  for (const auto& id : registry_ids()) {
    for (std::size_t d : {2u, 10u, 20u}) {
      const auto spec = make_objective(id, d);
      EXPECT_LT(spec.bounds.lower, spec.bounds.upper);
      const auto opt = spec.optimizer();
      EXPECT_NEAR(eval_objective(spec, opt), spec.f_star, 1e-12) << id << " D=" << d;
      if (spec.transform) {
        EXPECT_LE(orthogonality_error(*spec.transform), 1e-10);
      }
      for (const auto& c : spec.components) EXPECT_LE(orthogonality_error(c.transform), 1e-10);
    }
  }
}

TEST(Registry, RandomPointsNeverBeatOptimum) {
  RandomStream s(21);
  for (const auto& id : registry_ids()) {
    const auto spec = make_objective(id, 10);
    for (int i = 0; i < 10000; ++i) {
      Vector x(10);
      for (auto& v : x) v = s.uniform(spec.bounds.lower, spec.bounds.upper);
      ASSERT_GE(eval_objective(spec, x), spec.f_star) << id;
    }
  }
}

TEST(Registry, EvaluationIsPureAndInstancesAreStable) {
  const auto a = make_objective("f9", 10), b = make_objective("f9", 10);
  RandomStream s(22);
  Vector x(10);
  for (auto& v : x) v = s.uniform(-100, 100);
  EXPECT_EQ(eval_objective(a, x), eval_objective(a, x));
  EXPECT_EQ(eval_objective(a, x), eval_objective(b, x));
  EXPECT_NE(make_objective("f1", 10).transform->shift, make_objective("f1", 10, 7).transform->shift);
}

TEST(Registry, UnknownIdListsKnownOnes) {
  try {
    make_objective("nope", 10);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("f1"), std::string::npos);
  }
}

}  // namespace
}  // namespace sabres

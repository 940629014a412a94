// Copyright 2026 The Equitable Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>

#include "doctest.h"

#include "equitable/partition.h"
#include "equitable/rng.h"

using namespace equitable;

namespace {

Partition swapped(Partition p) {
  for (auto& label : p.labels) label = 1 - label;
  return p;
}

Partition random_partition(Rng& rng, int n) {
  Partition p;
  for (int i = 0; i < n; ++i) p.labels.push_back(static_cast<int>(rng.below(2)));
  return p;
}

double recovered_overlap(const BlockModel& model, std::uint64_t seed, Method method,
                         RecoveryResult* out = nullptr) {
  const Graph g = sample(model, seed);
  const RecoveryResult r = recover(eigendecompose(g), method);
  if (out != nullptr) *out = r;
  return overlap(r.partition, g.labels());
}

// Four-vertex system with hand-picked unit columns; only IPRs and signs
// matter to the functions under test.
EigenSystem toy_system(Eigen::Vector4d values) {
  EigenSystem eigs;
  eigs.values = values;
  eigs.vectors.resize(4, 4);
  eigs.vectors.col(0) << 1, 0, 0, 0;
  eigs.vectors.col(1) << 0, 1, -1, 0;
  eigs.vectors.col(2) << 0, 1, 1, -1;
  eigs.vectors.col(3) << 0, 1, 1, 1;
  eigs.vectors.col(1).normalize();
  eigs.vectors.col(2) /= std::sqrt(3.0);
  eigs.vectors.col(3) /= std::sqrt(3.0);
  return eigs;
}

}  // namespace

TEST_CASE("overlap conventions") {
  const Partition truth{{0, 0, 0, 1, 1, 1}};
  CHECK(overlap(truth, truth) == 1.0);
  CHECK(overlap(swapped(truth), truth) == 1.0);
  CHECK(overlap(Partition{{0, 0, 0, 0, 0, 0}}, truth) == 0.0);
  CHECK(overlap(Partition{{0, 0, 1, 1, 1, 1}}, truth) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(overlap(Partition{{0, 1}}, truth), DimensionError);
  CHECK_THROWS_AS(overlap(Partition{{0, 0, 0, 2, 1, 1}}, truth), DimensionError);

  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Partition p = random_partition(rng, 200);
    const Partition q = random_partition(rng, 200);
    CHECK(overlap(swapped(p), q) == overlap(p, q));
    CHECK(overlap(p, q) >= 0.0);
    CHECK(overlap(p, q) <= 1.0);
  }
}

TEST_CASE("independent labels score near zero") {
  Rng rng(8);
  Partition truth;
  for (int i = 0; i < 10000; ++i) truth.labels.push_back(i < 5000 ? 0 : 1);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(std::abs(overlap(random_partition(rng, 10000), truth)) <= 0.05);
}

TEST_CASE("naive bisection above and below the critical line") {
  SUBCASE("c_in = 16, c_out = 4 recovers exactly") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      CHECK(recovered_overlap(BlockModel::Modular(1000, 16, 4), seed, Method::kNaive) == 1.0);
  }
  SUBCASE("c = 9, r = 2 is near random") {
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      total += recovered_overlap(BlockModel::Modular(1024, 6, 3), seed, Method::kNaive);
    CHECK(total / 10 < 0.2);
  }
  SUBCASE("two disconnected 3-regular blocks") {
    RecoveryResult r;
    CHECK(recovered_overlap({{200, 200}, {{3, 0}, {0, 3}}}, 4, Method::kNaive, &r) == 1.0);
    CHECK(r.selected_eigenvalue == doctest::Approx(3.0));
    CHECK_FALSE(r.degenerate);
  }
}

TEST_CASE("naive threshold consistency") {
  struct Case { int c_in, c_out; bool above; };
  for (const auto [c_in, c_out, above] :
       {Case{8, 1, true}, Case{6, 3, false}, Case{10, 2, true}, Case{8, 4, false},
        Case{16, 4, true}, Case{12, 8, false}}) {
    const int c = c_in + c_out;
    const double r = static_cast<double>(c_in) / c_out;
    REQUIRE((above ? r > 1.1 * critical_ratio(c) : r < 0.9 * critical_ratio(c)));
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double o = recovered_overlap(BlockModel::Modular(1024, c_in, c_out), seed, Method::kNaive);
      if (above) CHECK(o == 1.0);
      total += o;
    }
    if (!above) CHECK(total / 10 < 0.2);
  }
}

TEST_CASE("IPR recovery below the naive threshold") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RecoveryResult r;
    CHECK(recovered_overlap(BlockModel::Modular(1024, 6, 3), seed, Method::kIprSearch, &r) == 1.0);
    CHECK(std::abs(r.selected_eigenvalue - 3.0) < 1e-6);
    CHECK(r.selected_ipr == doctest::Approx(1.0 / 1024).epsilon(1e-6));
    CHECK_FALSE(r.degenerate);
  }
}

TEST_CASE("IPR recovery in the bipartite case") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RecoveryResult r;
    CHECK(recovered_overlap(BlockModel::Modular(1000, 1, 2), seed, Method::kIprSearch, &r) == 1.0);
    CHECK(std::abs(r.selected_eigenvalue + 1.0) < 1e-6);
  }
}

TEST_CASE("IPR recovery is exact across assortative models") {
  struct Case { int c_in, c_out; };
  const Case cases[] = {{2, 1}, {3, 1}, {3, 2}, {4, 3}, {6, 3}, {5, 4},
                        {8, 4}, {10, 9}, {12, 8}, {16, 4}, {11, 9}, {15, 5}};
  for (const auto [c_in, c_out] : cases) {
    for (int n : {256, 1024}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RecoveryResult r;
        const double o = recovered_overlap(BlockModel::Modular(n, c_in, c_out), seed,
                                           Method::kIprSearch, &r);
        INFO("c_in=" << c_in << " c_out=" << c_out << " n=" << n << " seed=" << seed);
        CHECK(o == 1.0);
        CHECK(std::abs(r.selected_eigenvalue - (c_in - c_out)) < 1e-6);
      }
    }
  }
}

TEST_CASE("c_in = c_out is flagged degenerate") {
  RecoveryResult r;
  recovered_overlap(BlockModel::Modular(512, 3, 3), 1, Method::kIprSearch, &r);
  CHECK(r.degenerate);
  CHECK(std::abs(r.selected_eigenvalue) < 1e-8);
}

TEST_CASE("tie-breaking and degeneracy warnings on hand-built systems") {
  SUBCASE("equal IPRs resolve toward larger |eigenvalue|") {
    // Columns 1 and 2 both have IPR 1/3; column 3 is the excluded top one.
    EigenSystem eigs = toy_system({-0.5, -0.7, 0.2, 3.0});
    eigs.vectors.col(1) = -eigs.vectors.col(2);
    const RecoveryResult r = ipr_recovery(eigs);
    CHECK(r.selected_index == 1);
    CHECK(r.selected_eigenvalue == -0.7);
    REQUIRE_FALSE(r.warnings.empty());
    CHECK(r.warnings[0].find("share the minimal IPR") != std::string::npos);
  }
  SUBCASE("coinciding second and third eigenvalues") {
    const RecoveryResult r = naive_bisection(toy_system({0.0, 1.0, 1.0, 3.0}));
    CHECK(r.selected_index == 2);
    CHECK_FALSE(r.warnings.empty());
  }
  SUBCASE("single-label output is flagged") {
    CHECK_FALSE(naive_bisection(toy_system({0.5, 1.0, 2.0, 3.0})).degenerate);
    EigenSystem eigs = toy_system({0.5, 1.0, 2.0, 3.0});
    eigs.vectors.col(2) = eigs.vectors.col(0);
    const RecoveryResult flat = naive_bisection(eigs);
    CHECK(flat.degenerate);
    CHECK(flat.partition.labels == std::vector<int>{0, 0, 0, 0});
  }
}

TEST_CASE("relative IPR divergence") {
  SUBCASE("two equal minimal IPRs give zero") {
    EigenSystem eigs;
    eigs.values = Eigen::Vector4d(-1.0, 0.0, 1.0, 2.0);
    eigs.vectors.resize(4, 4);
    eigs.vectors.col(0) << 1, 1, -1, -1;
    eigs.vectors.col(1) << 1, -1, 1, -1;
    eigs.vectors.col(2) << 1, -1, -1, 1;
    eigs.vectors.col(3) << 1, 1, 1, 1;
    eigs.vectors /= 2.0;
    const IprDivergence d = ipr_divergence(eigs);
    CHECK(d.delta == 0.0);
    CHECK(d.ipr2 == doctest::Approx(0.25));
  }
  SUBCASE("positive on equitable graphs") {
    for (int n : {256, 512}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const IprDivergence d = ipr_divergence(eigendecompose(sample(BlockModel::Modular(n, 6, 3), seed)));
        CHECK(d.delta > 0.0);
        CHECK(d.delta <= 2.0);
        CHECK(d.ipr2 == doctest::Approx(1.0 / n).epsilon(1e-6));
        CHECK(d.delta == doctest::Approx((d.ipr3 - d.ipr2) / d.ipr2));
      }
    }
  }
  CHECK_THROWS_AS(ipr_divergence(eigendecompose(Graph(2, {{0, 1}}))), std::invalid_argument);
}

TEST_CASE("method names and result export") {
  CHECK(parse_method("naive") == Method::kNaive);
  CHECK(parse_method("iprSearch") == Method::kIprSearch);
  CHECK_THROWS_AS(parse_method("bp"), std::invalid_argument);
  RecoveryResult r;
  r.method = Method::kIprSearch;
  r.selected_eigenvalue = 3.0;
  std::ostringstream os;
  write_recovery(os, r, 1.0);
  CHECK(os.str().find("method = iprSearch\n") != std::string::npos);
  CHECK(os.str().find("overlap = 1\n") != std::string::npos);
}

// Copyright 2026 The urdfgen Authors
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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "test_objects.h"
#include "test_util.h"
#include "urdfgen/common/error.h"
#include "urdfgen/dataset/toy.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/metrics/metrics.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen {
namespace {

using testing::Gen;

double brute_chamfer(const std::vector<Vec3>& p, const std::vector<Vec3>& g) {
  auto one_way = [](const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    double sum = 0;
    for (const Vec3& x : a) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& y : b) {
        const double dx = x.x() - y.x(), dy = x.y() - y.y(), dz = x.z() - y.z();
        best = std::min(best, dx * dx + dy * dy + dz * dz);
      }
      sum += best;
    }
    return sum / static_cast<double>(a.size());
  };
  return one_way(p, g) + one_way(g, p);
}

double brute_fscore(const std::vector<Vec3>& p, const std::vector<Vec3>& g, double tau) {
  auto frac = [tau](const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    int n = 0;
    for (const Vec3& x : a) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& y : b) {
        const double dx = x.x() - y.x(), dy = x.y() - y.y(), dz = x.z() - y.z();
        best = std::min(best, dx * dx + dy * dy + dz * dz);
      }
      n += std::sqrt(best) < tau;
    }
    return static_cast<double>(n) / static_cast<double>(a.size());
  };
  const double pr = frac(p, g), rc = frac(g, p);
  return pr + rc == 0 ? 0.0 : 2 * pr * rc / (pr + rc);
}

std::vector<Vec3> pts(std::initializer_list<Vec3> v) { return v; }

TEST_CASE("chamfer and fscore examples") {
  const auto a = pts({{0, 0, 0}}), b = pts({{1, 0, 0}}), ab = pts({{0, 0, 0}, {1, 0, 0}});
  CHECK(chamfer(a, a) == 0.0);
  CHECK(chamfer(a, b) == 2.0);
  CHECK(chamfer(ab, a) == 0.5);
  CHECK(fscore(ab, ab, 0.02) == 1.0);
  CHECK(fscore(a, b, 0.02) == 0.0);
  CHECK(fscore(ab, a, 0.02) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // Strict threshold.
  CHECK(fscore(pts({{0.02, 0, 0}}), a, 0.02) == 0.0);
  CHECK_THROWS_AS(chamfer({}, a), InvalidArgument);
  CHECK_THROWS_AS(fscore(a, {}, 0.02), InvalidArgument);
}

TEST_CASE("chamfer and fscore equal brute force") {
  Gen gen(1);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = gen.integer(1, 500), m = gen.integer(1, 500);
    std::vector<Vec3> p, g;
    for (int i = 0; i < n; ++i) p.push_back(gen.vec(-1, 1));
    for (int i = 0; i < m; ++i) g.push_back(gen.coin() ? p[gen.integer(0, n - 1)] + 0.01 * gen.vec(-1, 1) : gen.vec(-1, 1));
    CHECK(chamfer(p, g) == brute_chamfer(p, g));
    const double tau = gen.uniform(0.005, 0.2);
    CHECK(fscore(p, g, tau) == brute_fscore(p, g, tau));
  }
}

TEST_CASE("joint error examples") {
  const Vec3 z = Vec3::UnitZ();
  CHECK(joint_axis_error(z, z) == 0.0);
  CHECK(joint_axis_error(z, Vec3::UnitX()) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(joint_axis_error(z, -z) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK_THROWS_AS(joint_axis_error(2 * z, z), InvalidArgument);
  CHECK(joint_origin_error({0, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(joint_origin_error({0, 0, 0}, {3, 4, 0}) == 5.0);
  CHECK(joint_origin_error({1, 2, 3}, {-1, 0, 4}) == joint_origin_error({-1, 0, 4}, {1, 2, 3}));
  const double pi = std::numbers::pi;
  CHECK(joint_limit_error({0, pi / 2}, {0, pi / 2}) == 0.0);
  CHECK(joint_limit_error({0, pi / 2}, {0, pi}) == doctest::Approx(pi / 4).epsilon(1e-15));
  CHECK(joint_limit_error({0.1, 0.3}, {-0.2, 0.9}) == joint_limit_error({-0.2, 0.9}, {0.1, 0.3}));
}

TEST_CASE("voxel IoU of boxes") {
  const TriangleMesh a = make_box({0, 0, 0}, {1, 1, 1});
  const TriangleMesh b = make_box({0.5, 0, 0}, {1.5, 1, 1});
  MetricConfig cfg;
  for (int res : {32, 64, 128}) {
    cfg.voxel_resolution = res;
    CHECK(iou(a, a, cfg) == 1.0);
    CHECK(iou(a, make_box({2, 2, 2}, {3, 3, 3}), cfg) == 0.0);
    CHECK(std::abs(iou(a, b, cfg) - 1.0 / 3.0) <= 3.0 / res);
  }
  Gen gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 lo1 = gen.vec(-1, 0), lo2 = gen.vec(-1, 0);
    const Vec3 hi1 = lo1 + gen.vec(0.3, 1), hi2 = lo2 + gen.vec(0.3, 1);
    const double inter = testing::box_intersection_volume(lo1, hi1, lo2, hi2);
    const double expect = inter / (testing::box_volume(lo1, hi1) + testing::box_volume(lo2, hi2) - inter);
    for (int res : {32, 64, 128}) {
      cfg.voxel_resolution = res;
      CHECK(std::abs(iou(make_box(lo1, hi1), make_box(lo2, hi2), cfg) - expect) <= 3.0 / res);
    }
  }
  TriangleMesh open = a;
  open.triangles.pop_back();
  CHECK_THROWS_AS(iou(open, a, cfg), InvalidMesh);
}

double brute_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows()), m = static_cast<int>(cost.cols());
  // Permute the larger side.
  const bool by_rows = n <= m;
  std::vector<int> perm(std::max(n, m));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0;
    for (int i = 0; i < std::min(n, m); ++i) total += by_rows ? cost(i, perm[i]) : cost(perm[i], i);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST_CASE("hungarian equals exhaustive search") {
  Gen gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen.integer(1, 6), m = gen.integer(1, 6);
    Eigen::MatrixXd cost(n, m);
    for (Eigen::Index i = 0; i < cost.size(); ++i) cost.data()[i] = gen.coin() ? gen.uniform(0, 1) : gen.integer(0, 3);
    const Assignment a = hungarian(cost);
    CHECK(a.total_cost == doctest::Approx(brute_assignment(cost)).epsilon(1e-12));
    std::vector<int> seen;
    double total = 0;
    for (int i = 0; i < n; ++i) {
      if (a.row_to_col[i] < 0) continue;
      seen.push_back(a.row_to_col[i]);
      total += cost(i, a.row_to_col[i]);
    }
    CHECK(static_cast<int>(seen.size()) == std::min(n, m));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    CHECK(total == doctest::Approx(a.total_cost).epsilon(1e-12));
    CHECK(static_cast<int>(a.unmatched_rows.size()) == n - static_cast<int>(seen.size()));
    CHECK(static_cast<int>(a.unmatched_cols.size()) == m - static_cast<int>(seen.size()));
  }
}

ArticulatedObject hinged(std::uint64_t seed) { return generate_toy_dataset(1, ToyFamily::kHingedBox, seed)[0].object; }

MetricConfig fast_config() {
  MetricConfig cfg;
  cfg.eval_points = 2000;
  cfg.voxel_resolution = 32;
  return cfg;
}

TEST_CASE("part matching recovers permutations") {
  Gen gen(4);
  testing::ObjectOptions opt;
  opt.min_links = 2;
  opt.max_links = 4;
  for (int trial = 0; trial < 5; ++trial) {
    const ArticulatedObject obj = testing::random_object(gen, opt);
    const Assignment self = match_parts(obj, obj, fast_config());
    for (int i = 0; i < obj.size(); ++i) CHECK(self.row_to_col[i] == i);
    CHECK(self.total_cost == 0.0);
    // Reorder links without changing geometry.
    std::vector<int> perm(obj.size());
    std::iota(perm.begin(), perm.end(), 0);
    gen.shuffle(perm);
    ArticulatedObject shuffled;
    for (int p : perm) shuffled.links.push_back(obj.links[p]);
    const Assignment a = match_parts(shuffled, obj, fast_config());
    for (int i = 0; i < obj.size(); ++i) CHECK(a.row_to_col[i] == perm[i]);
  }
}

TEST_CASE("evaluate_object on identical and perturbed pairs") {
  const ArticulatedObject gt = hinged(7);
  const MetricConfig cfg = fast_config();
  const EvalReport same = evaluate_object(gt, gt, cfg);
  CHECK(same.whole.iou == 1.0);
  CHECK(same.whole.fscore == 1.0);
  CHECK(same.whole.chamfer == 0.0);
  REQUIRE(same.parts.size() == 2);
  for (const PartReport& p : same.parts) {
    CHECK(p.pred_link == p.gt_link);
    CHECK(p.scores.iou == 1.0);
    CHECK(p.scores.chamfer == 0.0);
  }
  REQUIRE(same.joints.size() == 1);
  CHECK(same.joints[0].axis_err == 0.0);
  CHECK(same.joints[0].origin_err == 0.0);
  CHECK(*same.joints[0].limit_err == 0.0);

  ArticulatedObject pred = gt;
  JointSpec& j = *pred.links[1].joint;
  const Vec3 perp = j.axis.unitOrthogonal();
  j.axis = Eigen::AngleAxisd(0.1, perp) * j.axis;
  j.origin += 0.05 * perp;
  j.upper += 0.2;
  const EvalReport r = evaluate_object(pred, gt, cfg);
  REQUIRE(r.joints.size() == 1);
  CHECK(std::abs(r.joints[0].axis_err - 0.1) <= 1e-9);
  CHECK(std::abs(r.joints[0].origin_err - 0.05) <= 1e-9);
  CHECK(*r.joints[0].limit_err == doctest::Approx(0.1).epsilon(1e-12));

  // Missing part: the door is reported unmatched, whole metrics still run.
  ArticulatedObject base_only;
  base_only.links.push_back(gt.links[0]);
  const EvalReport missing = evaluate_object(base_only, gt, cfg);
  CHECK(missing.unmatched_gt == std::vector<std::string>{gt.links[1].name});
  CHECK(missing.whole.iou > 0.0);
  CHECK(missing.whole.iou < 1.0);
  CHECK(missing.joints.empty());

  const nlohmann::json js = report_to_json(r);
  CHECK(js["joints"][0]["gt_type"] == "revolute");
  CHECK(js["parts"].size() == 2);
}

TEST_CASE("metrics are invariant to a common rigid motion") {
  Gen gen(5);
  const ArticulatedObject a = hinged(11), b = hinged(12);
  const MetricConfig cfg = fast_config();
  SimilarityTransform g;
  g.rotation = gen.rotation();
  g.translation = gen.vec(-2, 2);
  const EvalReport r0 = evaluate_object(a, b, cfg);
  const EvalReport r1 = evaluate_object(apply_similarity(a, g), apply_similarity(b, g), cfg);
  CHECK(std::abs(r0.whole.chamfer - r1.whole.chamfer) <= 1e-9);
  CHECK(std::abs(r0.whole.fscore - r1.whole.fscore) <= 1e-9);
  REQUIRE(r0.joints.size() == r1.joints.size());
  for (std::size_t i = 0; i < r0.joints.size(); ++i) {
    CHECK(std::abs(r0.joints[i].axis_err - r1.joints[i].axis_err) <= 1e-9);
    CHECK(std::abs(r0.joints[i].origin_err - r1.joints[i].origin_err) <= 1e-9);
  }
  // Point metrics on raw sets.
  std::vector<Vec3> p, q, gp, gq;
  for (int i = 0; i < 200; ++i) {
    p.push_back(gen.vec(-1, 1));
    q.push_back(gen.vec(-1, 1));
    gp.push_back(g.apply(p.back()));
    gq.push_back(g.apply(q.back()));
  }
  CHECK(std::abs(chamfer(p, q) - chamfer(gp, gq)) <= 1e-9);
  // Voxel IoU depends on grid placement; compare against a loose tolerance.
  const TriangleMesh m1 = make_box({0, 0, 0}, {1, 1, 1}), m2 = make_box({0.3, 0.2, 0}, {1.2, 1, 0.8});
  SimilarityTransform shift;
  shift.translation = gen.vec(-2, 2);
  MetricConfig c64;
  CHECK(std::abs(iou(m1, m2, c64) - iou(transform_mesh(m1, shift), transform_mesh(m2, shift), c64)) <= 3.0 / 64);
}

TEST_CASE("summary statistics and CSV") {
  const double v[] = {1, 2, 3, 4};
  const MetricStat s = describe(v);
  CHECK(s.mean == 2.5);
  CHECK(s.std == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
  CHECK(s.count == 4);
  CHECK(format_mean_std({0.1294, 0.02, 3}) == "0.129 ± 0.020");
  EvalReport r;
  r.whole = {1, 1, 0};
  const CorpusSummary summary = summarize(std::span(&r, 1));
  const std::string csv = summary_to_csv(summary);
  CHECK(csv.rfind("metric,mean,std,count,formatted\n", 0) == 0);
  CHECK(csv.find("whole_iou,1,0,1,1.000 ± 0.000") != std::string::npos);
  CHECK(csv.find("axis_err,0,0,0,") != std::string::npos);
}

TEST_CASE("metric config validation") {
  MetricConfig cfg;
  cfg.fscore_tau = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.eval_points = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

}  // namespace
}  // namespace urdfgen

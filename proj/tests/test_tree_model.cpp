#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "mstree/covariance_tree.hpp"
#include "mstree/errors.hpp"
#include "mstree/innovations_tree.hpp"
#include "mstree/midpoint.hpp"
#include "support/fixtures.hpp"

using namespace mstree;
using mstree::testing::scale_invariant_config;

namespace {

NodeId at(const InnovationsTree& tree, const char* address) {
  return tree.topology().at(NodeAddress::parse(address));
}

Eigen::MatrixXd dense_leaf_covariance(const CovarianceTree& cov) {
  const auto n = static_cast<Eigen::Index>(cov.leaf_count());
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      q(i, j) = cov.leaf_covariance(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return q;
}

Eigen::MatrixXd dense_leaf_covariance(const InnovationsTree& tree) {
  const Topology& topo = tree.topology();
  const auto n = static_cast<Eigen::Index>(topo.leaf_count());
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      q(i, j) = tree.covariance(topo.leaf_node(static_cast<std::size_t>(i)),
                                topo.leaf_node(static_cast<std::size_t>(j)));
  return q;
}

}  // namespace

TEST_CASE("node addresses parse and print") {
  CHECK(NodeAddress::parse("").is_root());
  CHECK(NodeAddress::parse("121").digits() == std::vector<int>{1, 2, 1});
  CHECK(NodeAddress::parse("1.12.3").digits() == std::vector<int>{1, 12, 3});
  CHECK(NodeAddress({1, 12}).to_string() == "1.12");
  CHECK(NodeAddress::parse("121").parent().to_string() == "12");
  CHECK(NodeAddress::parse("1").is_prefix_of(NodeAddress::parse("12")));
  CHECK_FALSE(NodeAddress::parse("2").is_prefix_of(NodeAddress::parse("12")));
  CHECK_THROWS_AS(NodeAddress::parse("1a"), ConfigError);
  CHECK_THROWS_AS(NodeAddress::parse("10"), ConfigError);
}

TEST_CASE("T2 and T4 variances") {
  const auto t2 = mstree::testing::t2();
  CHECK(t2.leaf_count() == 2);
  CHECK(t2.variance(at(t2, "1")) == 2.0);
  CHECK(t2.variance(at(t2, "2")) == 2.0);

  const auto t4 = mstree::testing::t4();
  CHECK(t4.leaf_count() == 4);
  for (const char* leaf : {"11", "12", "21", "22"}) CHECK(t4.variance(at(t4, leaf)) == 3.0);
}

TEST_CASE("node covariance on T4") {
  const auto t4 = mstree::testing::t4();
  const auto a = [](const char* s) { return NodeAddress::parse(s); };
  CHECK(t4.covariance(a("11"), a("12")) == 2.0);
  CHECK(t4.covariance(a("11"), a("21")) == 1.0);
  CHECK(t4.covariance(a(""), a("")) == 1.0);
  CHECK(t4.covariance(a("22"), a("22")) == 3.0);
  CHECK(t4.covariance(a("21"), a("12")) == t4.covariance(a("12"), a("21")));
  CHECK_THROWS_AS(t4.covariance(a("13"), a("11")), DomainError);
}

TEST_CASE("covariance follows rho along both paths") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto tree = mstree::testing::random_tree(rng, {.max_depth = 3, .early_leaf = 0.2});
    const Topology& topo = tree.topology();
    for (NodeId id = 1; id < topo.node_count(); ++id) {
      const NodeId up = topo.parent(id);
      const double expected = tree.rho(id) * tree.rho(id) * tree.variance(up) + tree.innovation_variance(id);
      CHECK(tree.variance(id) == doctest::Approx(expected).epsilon(1e-14));
      CHECK(tree.covariance(id, up) == doctest::Approx(tree.rho(id) * tree.variance(up)).epsilon(1e-14));
    }
  }
}

TEST_CASE("builder validation") {
  auto cfg = scale_invariant_config(2);
  CHECK_NOTHROW(InnovationsTree::build(cfg));

  auto bad = cfg;
  bad.root_variance = 0.0;
  CHECK_THROWS_AS(InnovationsTree::build(bad), DomainError);

  bad = cfg;
  bad.scales[1].rho = 0.0;
  CHECK_THROWS_AS(InnovationsTree::build(bad), DomainError);

  bad = cfg;
  bad.scales[0].innovation_variance = -1.0;
  CHECK_THROWS_AS(InnovationsTree::build(bad), DomainError);

  bad = cfg;
  bad.prune = {NodeAddress{}};
  CHECK_THROWS_AS(InnovationsTree::build(bad), DomainError);

  bad = cfg;
  bad.overrides = {{NodeAddress::parse("31"), std::nullopt, 2.0}};
  CHECK_THROWS_AS(InnovationsTree::build(bad), DomainError);

  bad = cfg;
  bad.prune = {NodeAddress::parse("1"), NodeAddress::parse("2")};
  CHECK_THROWS_AS(InnovationsTree::build(bad), DomainError);
}

TEST_CASE("override of the right scale-1 child") {
  auto cfg = scale_invariant_config(3);
  cfg.overrides = {{NodeAddress::parse("2"), std::nullopt, 5.0}};
  const auto tree = InnovationsTree::build(cfg);
  CHECK(tree.innovation_variance(at(tree, "2")) == 5.0);
  CHECK(tree.innovation_variance(at(tree, "1")) == 1.0);
  CHECK(tree.variance(at(tree, "2")) == 6.0);
  CHECK(tree.variance(at(tree, "222")) == 8.0);
  CHECK_FALSE(tree.is_scale_invariant());
}

TEST_CASE("pruning keeps labels and drops empty interior nodes") {
  auto cfg = scale_invariant_config(3);
  cfg.prune = {NodeAddress::parse("212"), NodeAddress::parse("222")};
  const auto tree = InnovationsTree::build(cfg);
  const Topology& topo = tree.topology();
  CHECK(tree.leaf_count() == 6);
  CHECK_FALSE(topo.find(NodeAddress::parse("212")));
  CHECK(topo.find(NodeAddress::parse("221")));
  CHECK(topo.address(topo.leaf_node(5)).to_string() == "221");

  cfg.prune = {NodeAddress::parse("211"), NodeAddress::parse("212")};
  const auto thinner = InnovationsTree::build(cfg);
  CHECK_FALSE(thinner.topology().find(NodeAddress::parse("21")));
  CHECK(thinner.leaf_count() == 6);
}

TEST_CASE("proximity") {
  const CovarianceTree cov({2, 2}, {1.0, 2.0, 3.0}, 0.5, 1.0);
  const auto a = [](const char* s) { return NodeAddress::parse(s); };
  CHECK(cov.proximity(a("11"), a("12")) == 1);
  CHECK(cov.proximity(a("11"), a("21")) == 0);
  CHECK(cov.proximity(a("22"), a("22")) == 2);
  CHECK_THROWS_AS(cov.proximity(a("1"), a("11")), DomainError);
}

TEST_CASE("covariance tree validation") {
  CHECK_THROWS_AS(CovarianceTree({2, 2}, {1.0, 2.0}, 0.5, 1.0), DomainError);
  // Spectrum level 2: c_2 - c_1 = 0 makes siblings identical.
  CHECK_THROWS_AS(CovarianceTree({2, 2}, {1.0, 2.0, 2.0}, 0.5, 1.0), DomainError);
  // lambda_0 = 4 c_0 + 2 (c_1 - c_0) + (c_2 - c_1) changes sign between c_0 = -2 and -3.
  CHECK_NOTHROW(CovarianceTree({2, 2}, {-2.0, 2.0, 3.0}, 0.1, 1.0));
  CHECK_THROWS_AS(CovarianceTree({2, 2}, {-3.0, 2.0, 3.0}, 0.1, 1.0), DomainError);
  // All four leaves explain 4 rho^2 / lambda_0 = 4 / 7 of the root.
  CHECK_NOTHROW(CovarianceTree({2, 2}, {1.0, 2.0, 3.0}, 1.0, 4.0 / 7.0));
  CHECK_THROWS_AS(CovarianceTree({2, 2}, {1.0, 2.0, 3.0}, 1.0, 0.57), DomainError);
}

TEST_CASE("spectrum matches dense eigenvalues") {
  const std::vector<CovarianceTree> trees{
      CovarianceTree({2, 2}, {1.0, 2.0, 3.0}, 0.5, 1.0),
      CovarianceTree({3, 2}, {0.5, 0.25, 1.0}, 0.1, 1.0),
      CovarianceTree({2, 3, 2}, {0.2, 0.7, 0.9, 1.5}, 0.1, 1.0),
      build_wig_covariance_tree(4, 2, 0.3, 1.0),
  };
  for (const auto& cov : trees) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_leaf_covariance(cov));
    const auto& eig = solver.eigenvalues();
    const auto lambda = cov.spectrum();
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
      bool found = false;
      for (double l : lambda) found = found || std::abs(l - eig(i)) < 1e-10;
      CHECK(found);
    }
    CHECK(Eigen::LLT<Eigen::MatrixXd>(dense_leaf_covariance(cov)).info() == Eigen::Success);
  }
}

TEST_CASE("progression classes") {
  CHECK(CovarianceTree({2, 2}, {1.0, 2.0, 3.0}, 0.5, 1.0).progression() == Progression::positive);
  CHECK(CovarianceTree({2, 2}, {0.5, 0.25, 1.0}, 0.5, 1.0).progression() == Progression::negative);
  CHECK(CovarianceTree({2, 2, 2}, {0.5, 0.6, 0.4, 1.0}, 0.1, 1.0).progression() == Progression::mixed);
  CHECK(to_string(Progression::negative) == "negative");
}

TEST_CASE("WIG trees") {
  CHECK(build_wig_covariance_tree(6, 2, 0.8, 1.0).progression() == Progression::positive);
  CHECK(build_wig_covariance_tree(6, 2, 0.3, 1.0).progression() == Progression::negative);
  CHECK_THROWS_AS(build_wig_covariance_tree(6, 3, 0.8, 1.0), DomainError);
  CHECK_THROWS_AS(build_wig_covariance_tree(3, 2, 1.2, 1.0), DomainError);

  const auto half = build_wig_covariance_tree(2, 2, 0.5, 1.0);
  CHECK(half.c()[0] == 0.0);
  CHECK(half.c()[1] == 0.0);
  CHECK(half.c()[2] == 0.25);
  CHECK(half.rho() == 0.25);
  CHECK(half.root_variance() == 1.0);
}

TEST_CASE("WIG covariance agrees with synthesized leaves") {
  const int depth = 2;
  const auto cov = build_wig_covariance_tree(depth, 2, 0.5, 1.0);
  const auto schedule = fbm_schedule(depth, 0.5);
  const std::size_t leaves = cov.leaf_count();
  const int samples = 100000;
  Eigen::MatrixXd x(samples, static_cast<Eigen::Index>(leaves));
  for (int s = 0; s < samples; ++s) {
    const auto path = synthesize_midpoint_path(schedule, 2024, static_cast<std::uint64_t>(s));
    for (std::size_t i = 0; i < leaves; ++i) x(s, static_cast<Eigen::Index>(i)) = path.increments[i];
  }
  for (std::size_t i = 0; i < leaves; ++i) {
    for (std::size_t j = 0; j < leaves; ++j) {
      const auto xi = x.col(static_cast<Eigen::Index>(i));
      const auto xj = x.col(static_cast<Eigen::Index>(j));
      const double sample = (xi.array() * xj.array()).mean();
      const double expected = cov.leaf_covariance(i, j);
      // Zero-mean Gaussians: var(x_i x_j) = c_ii c_jj + c_ij^2.
      const double se = std::sqrt((cov.c().back() * cov.c().back() + expected * expected) / samples);
      CHECK(std::abs(sample - expected) <= 3.0 * se);
    }
  }
}

TEST_CASE("matched innovations tree") {
  const CovarianceTree small({2, 2}, {1.0, 2.0, 3.0}, 0.5, 1.0);
  const auto matched = matched_innovations_tree(small);
  CHECK(matched.root_variance() == 1.0);
  CHECK(matched.is_scale_invariant());
  for (NodeId id = 1; id < matched.topology().node_count(); ++id) {
    CHECK(matched.rho(id) == 1.0);
    CHECK(matched.innovation_variance(id) == 1.0);
  }

  const auto wig = build_wig_covariance_tree(6, 2, 0.8, 1.0);
  const auto from_wig = matched_innovations_tree(wig);
  const Eigen::MatrixXd diff = dense_leaf_covariance(wig) - dense_leaf_covariance(from_wig);
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(matched_innovations_tree(CovarianceTree({2, 2}, {1.0, 0.5, 2.0}, 0.1, 1.0)), DomainError);
}

TEST_CASE("scale-invariant trees have positive progression") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto tree = mstree::testing::random_scale_invariant_tree(rng, 1 + trial % 4);
    REQUIRE(tree.is_scale_invariant());
    const auto cov = covariance_tree_of(tree);
    CHECK(cov.c()[0] > 0.0);
    for (std::size_t m = 1; m < cov.c().size(); ++m) CHECK(cov.c()[m] > cov.c()[m - 1]);
    const Eigen::MatrixXd diff = dense_leaf_covariance(cov) - dense_leaf_covariance(tree);
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-12 * dense_leaf_covariance(tree).cwiseAbs().maxCoeff());
  }
}

TEST_CASE("midpoint synthesis") {
  const auto brownian = brownian_schedule(3);
  CHECK(brownian.innovation_variance == std::vector<double>{0.25, 0.125, 0.0625});
  CHECK(brownian.node_variance(1) == 0.5);
  CHECK(brownian.node_variance(3) == 0.125);

  const auto half = fbm_schedule(3, 0.5);
  for (int j = 0; j <= 3; ++j) CHECK(half.node_variance(j) == doctest::Approx(brownian.node_variance(j)).epsilon(1e-15));
  CHECK_THROWS_AS(brownian_schedule(0), DomainError);

  const auto a = synthesize_midpoint_path(brownian, 7);
  const auto b = synthesize_midpoint_path(brownian, 7);
  CHECK(a.increments == b.increments);
  CHECK(a.increments.size() == 8);
  CHECK(std::abs(a.cumulative.back() - a.root) <= 1e-12);
  CHECK(synthesize_midpoint_path(brownian, 8).increments != a.increments);

  const auto one = synthesize_midpoint_path(brownian_schedule(1), 3);
  CHECK(std::abs(one.increments[0] + one.increments[1] - one.root) <= 1e-12);
}

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "rosenau/errors.hpp"
#include "rosenau/rosenau.hpp"
#include "rosenau/timestepper.hpp"

using namespace rosenau;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

FunctionSystem decay(double rate = 1.0) {
  return FunctionSystem(
      MatrixXd::Identity(1, 1), [rate](double, const VectorXd& y) { return VectorXd(-rate * y); },
      [rate](double, const VectorXd&) { return MatrixXd::Constant(1, 1, -rate); });
}

// y1' = -y1, 0 = y2 - y1
FunctionSystem constrained() {
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = 1.0;
  return FunctionSystem(m, [](double, const VectorXd& y) {
    VectorXd f(2);
    f << -y(0), y(1) - y(0);
    return f;
  });
}

SolverConfig config(double rtol, std::vector<double> outs) {
  SolverConfig c;
  c.rel_tol = rtol;
  c.abs_tol = 1e-14;
  c.output_times = std::move(outs);
  return c;
}

double decay_error(double rtol) {
  const auto traj = integrate(decay(), 0.0, VectorXd::Ones(1), config(rtol, {1.0}));
  return std::abs(traj.states.back()(0) - std::exp(-1.0));
}

bool same_bits(const VectorXd& a, const VectorXd& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar decay") {
  const auto traj = integrate(decay(), 0.0, VectorXd::Ones(1), config(1e-10, {1.0}));
  REQUIRE(traj.states.size() == 1);
  CHECK(traj.times.back() == 1.0);
  CHECK(std::abs(traj.states.back()(0) - 0.3678794412) <= 1e-8);
  CHECK(traj.stats.steps > 0);
  CHECK(traj.stats.factorizations > 0);
}

TEST_CASE("index-1 constraint holds at every output time") {
  SolverConfig c = config(1e-10, {0.0, 0.25, 0.5, 1.0, 2.0});
  c.abs_tol = 1e-12;
  const auto traj = integrate(constrained(), 0.0, VectorXd::Ones(2), c);
  REQUIRE(traj.states.size() == 5);
  CHECK(traj.times.front() == 0.0);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    CHECK(std::abs(traj.states[k](1) - traj.states[k](0)) <= c.abs_tol);
    CHECK(std::abs(traj.states[k](0) - std::exp(-traj.times[k])) <= 1e-8);
  }
}

TEST_CASE("non-identity constant mass") {
  MatrixXd m = MatrixXd::Identity(2, 2);
  m(0, 0) = 2.0;
  const FunctionSystem sys(m, [](double, const VectorXd& y) { return VectorXd(-y); });
  SolverConfig c = config(1e-10, {1.0});
  c.jacobian_mode = JacobianMode::FiniteDifference;
  const auto traj = integrate(sys, 0.0, VectorXd::Ones(2), c);
  CHECK(std::abs(traj.states.back()(0) - std::exp(-0.5)) <= 1e-8);
  CHECK(std::abs(traj.states.back()(1) - std::exp(-1.0)) <= 1e-8);
  CHECK(traj.stats.jacobian_evaluations > 0);
}

TEST_CASE("second-order convergence at fixed steps") {
  auto err = [](double dt) {
    SolverConfig c = config(1e-10, {1.0});
    c.fixed_step = dt;
    const auto traj = integrate(decay(), 0.0, VectorXd::Ones(1), c);
    return std::abs(traj.states.back()(0) - std::exp(-1.0));
  };
  for (double dt : {0.02, 0.01, 0.005}) {
    const double ratio = err(dt) / err(dt / 2);
    CHECK(ratio >= 3.4);
    CHECK(ratio <= 4.6);
  }
  SolverConfig c1 = config(1e-10, {1.0});
  c1.fixed_step = 0.01;
  c1.max_order = 1;
  auto e1 = [&](double dt) {
    c1.fixed_step = dt;
    return std::abs(integrate(decay(), 0.0, VectorXd::Ones(1), c1).states.back()(0) - std::exp(-1.0));
  };
  CHECK(e1(0.01) / e1(0.005) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("tightening the tolerance never increases the error") {
  double prev = decay_error(1e-4);
  for (double rtol : {1e-6, 1e-8, 1e-10, 1e-12}) {
    const double e = decay_error(rtol);
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("deterministic trajectories") {
  const auto inst = park1d();
  const auto sys = make_system(Method::Fictitious, inst, uniform1d_fictitious(20, 1.0), Kernel(0.08 / (2.0 / 17)));
  const SolverConfig c = config(1e-9, {0.5, 1.0});
  const auto a = integrate(*sys, 0.0, sys->initial_state(0.0), c);
  const auto b = integrate(*sys, 0.0, sys->initial_state(0.0), c);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(same_bits(a.states[k], b.states[k]));
  CHECK(a.stats.steps == b.stats.steps);
}

TEST_CASE("factor reuse and refactorizing every step agree on park1d") {
  const auto inst = park1d();
  const auto sys = make_system(Method::Fictitious, inst, uniform1d_fictitious(30, 1.0), Kernel(0.08 / (2.0 / 27)));
  SolverConfig fast = config(1e-9, {1.0});
  fast.abs_tol = 1e-12;
  SolverConfig slow = fast;
  slow.disable_factor_reuse = true;
  const auto a = integrate(*sys, 0.0, sys->initial_state(0.0), fast);
  const auto b = integrate(*sys, 0.0, sys->initial_state(0.0), slow);
  const double scale = a.states.back().cwiseAbs().maxCoeff();
  CHECK((a.states.back() - b.states.back()).cwiseAbs().maxCoeff() <= 10.0 * fast.rel_tol * scale);
  CHECK(a.stats.factorizations < b.stats.factorizations);
}

TEST_CASE("consistency checks") {
  const auto sys = constrained();
  CHECK(check_consistency(sys, VectorXd::Ones(2), 0.0) == 0.0);
  VectorXd bad(2);
  bad << 1.0, 2.0;
  CHECK(check_consistency(sys, bad, 0.0) >= 1.0);
  CHECK_THROWS_AS(integrate(sys, 0.0, bad, config(1e-8, {1.0})), ConsistencyError);
  CHECK(check_consistency(decay(), VectorXd::Ones(1), 0.0) == 0.0);

  const VectorXd fixed = make_consistent(sys, bad, 0.0, 1e-12);
  CHECK(check_consistency(sys, fixed, 0.0) <= 1e-12);

  // Fictitious DAE form built from the boundary data: consistent by
  // construction. Perturbing one boundary value breaks a selector row by 1.
  const auto dae = make_system(Method::FictitiousDae, park1d(), uniform1d_fictitious(30, 1.0),
                               Kernel(0.08 / (2.0 / 27)));
  VectorXd y0 = dae->initial_state(0.0);
  CHECK(check_consistency(*dae, y0, 0.0) < 1e-10);
  y0(static_cast<Eigen::Index>(dae->nodes().boundary()[0])) += 1.0;
  CHECK(check_consistency(*dae, y0, 0.0) >= 1.0);
}

TEST_CASE("blow-up is reported with the time reached") {
  const FunctionSystem sys(MatrixXd::Identity(1, 1), [](double, const VectorXd& y) { return VectorXd(y.cwiseProduct(y)); });
  SolverConfig c = config(1e-8, {2.0});
  c.jacobian_mode = JacobianMode::FiniteDifference;
  try {
    integrate(sys, 0.0, VectorXd::Ones(1), c);
    FAIL("expected IntegrationFailure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.time_reached() > 0.9);
    CHECK(e.time_reached() < 1.0 + 1e-6);
  }
}

TEST_CASE("argument validation") {
  const auto sys = decay();
  const VectorXd y0 = VectorXd::Ones(1);
  CHECK_THROWS_AS(integrate(sys, 0.0, y0, config(1e-15, {1.0})), InvalidArgument);
  CHECK_THROWS_AS(integrate(sys, 0.0, y0, config(1e-8, {})), InvalidArgument);
  CHECK_THROWS_AS(integrate(sys, 0.0, y0, config(1e-8, {1.0, 0.5})), InvalidArgument);
  CHECK_THROWS_AS(integrate(sys, 0.0, VectorXd::Ones(2), config(1e-8, {1.0})), InvalidArgument);
  SolverConfig c = config(1e-8, {1.0});
  c.fixed_step = -0.1;
  CHECK_THROWS_AS(integrate(sys, 0.0, y0, c), InvalidArgument);
}

TEST_CASE("trajectory csv") {
  const auto traj = integrate(constrained(), 0.0, VectorXd::Ones(2), config(1e-8, {0.5, 1.0}));
  std::ostringstream all, one;
  write_csv(all, traj);
  write_csv(one, traj, {1});
  CHECK(all.str().rfind("t,y0,y1\n", 0) == 0);
  CHECK(one.str().rfind("t,y1\n", 0) == 0);
}

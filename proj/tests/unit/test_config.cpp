// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>

#include "airs/config.hpp"
#include "airs/error.hpp"
#include "doctest.h"

using namespace airs;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected airs::Error");
  return ErrorCode::Numerical;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("unit conversions of the reference scenario") {
    const NetworkConfig c = table1_config();
    CHECK(c.sigma2() == doctest::Approx(1e-7).epsilon(1e-12));
    CHECK(c.eps2() == doctest::Approx(1e-7).epsilon(1e-12));
    CHECK(c.P_max() == doctest::Approx(0.794328234724281).epsilon(1e-12));
    CHECK(c.h0() == 1.0);
    CHECK(c.h1() == doctest::Approx(100.0));
    CHECK(c.E_th() == doctest::Approx(1e-8).epsilon(1e-12));
    CHECK(c.horizon() == 50.0);
    CHECK_NOTHROW(validate(c));
  }

  TEST_CASE("json round trip preserves every field") {
    NetworkConfig c = table1_config();
    c.M = 32;
    c.v = {20.0, 21.5, 33.0};
    c.q0 = {240.0, -3.0, 25.0};
    c.qf = {1200.0, 5.0, 25.0};
    c.H_U = 25.0;
    const NetworkConfig d = config_from_json(config_to_json(c));
    CHECK(config_to_json(d) == config_to_json(c));
    CHECK(d.M == 32);
    CHECK(d.v == c.v);
    CHECK(d.q0.y == -3.0);
    CHECK(d.lane_of == c.lane_of);
  }

  TEST_CASE("partial json keeps the defaults") {
    const NetworkConfig c = config_from_json(R"({"M": 8, "unknown_key": 3})");
    CHECK(c.M == 8);
    CHECK(c.N == table1_config().N);
  }

  TEST_CASE("null threshold disables the energy requirement") {
    const NetworkConfig c = config_from_json(R"({"E_th_dbm": null})");
    CHECK(std::isinf(c.E_th_dbm));
    CHECK(c.E_th() == 0.0);
    const NetworkConfig d = config_from_json(config_to_json(c));
    CHECK(d.E_th() == 0.0);
  }

  TEST_CASE("invalid configurations are rejected") {
    CHECK(code_of([] { config_from_json(R"({"lane_of": [1, 2, 4, 2]})"); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"N": 0})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"M": -1})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"t_arrival": [0, 1]})"); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"zeta": 1.5})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"M": "many"})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json("{not json"); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("loading from disk") {
    CHECK(code_of([] { load_config("/nonexistent/dir/cfg.json"); }) == ErrorCode::Io);
    const auto path = std::filesystem::temp_directory_path() / "airs_config_test.json";
    {
      std::ofstream f(path);
      f << R"({"M": 64, "N": 40})";
    }
    const NetworkConfig c = load_config(path.string());
    CHECK(c.M == 64);
    CHECK(c.N == 40);
    std::filesystem::remove(path);
  }
}

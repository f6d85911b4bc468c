// SPDX-License-Identifier: Apache-2.0
#include "airs/config.hpp"

#include <fstream>
#include <sstream>

#include "airs/error.hpp"
#include "json.hpp"

namespace airs {

using nlohmann::json;

NetworkConfig table1_config() { return NetworkConfig{}; }

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, "invalid config: " + what);
}

Vec3 vec3_from(const json& j, const char* key) {
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) invalid(std::string(key) + " must be a 3-element array");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void validate(const NetworkConfig& c) {
  if (c.I < 1) invalid("I must be >= 1");
  if (c.K < 0) invalid("K must be >= 0");
  if (c.J < 1) invalid("J must be >= 1");
  if (c.M < 0) invalid("M must be >= 0");
  if (c.N < 2) invalid("N must be >= 2");
  if (!(c.delta > 0)) invalid("delta must be > 0");
  if (!(c.V_max > 0)) invalid("V_max must be > 0");
  if (!(c.r_rsu > 0) || !(c.d_rsu > 0)) invalid("RSU radius and spacing must be > 0");
  if (!(c.d_lane >= 0)) invalid("d_lane must be >= 0");
  if (static_cast<int>(c.v.size()) != c.J) invalid("v must have J entries");
  for (double vj : c.v)
    if (!(vj > 0)) invalid("lane speeds must be > 0");
  if (static_cast<int>(c.t_arrival.size()) != c.K) invalid("t_arrival must have K entries");
  if (static_cast<int>(c.lane_of.size()) != c.K) invalid("lane_of must have K entries");
  for (int lane : c.lane_of)
    if (lane < 1 || lane > c.J) invalid("lane_of entries must lie in 1..J");
  if (!(c.H_U > 0)) invalid("H_U must be > 0");
  if (std::abs(c.q0.z - c.H_U) > 1e-9 || std::abs(c.qf.z - c.H_U) > 1e-9)
    invalid("q0.z and qf.z must equal H_U");
  if (!(c.zeta > 0 && c.zeta <= 1)) invalid("zeta must lie in (0, 1]");
  if (!(c.d_M > 0) || !(c.lambda > 0)) invalid("d_M and lambda must be > 0");
  if (!(c.d_ref > 0)) invalid("d_ref must be > 0");
  const double reach = (c.N - 1) * c.V_max * c.delta;
  if (distance(c.q0, c.qf) > reach + 1e-9)
    invalid("endpoints q0, qf are farther apart than (N-1)*V_max*delta");
}

NetworkConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  NetworkConfig c;
  try {
    read(j, "I", c.I);
    read(j, "K", c.K);
    read(j, "J", c.J);
    read(j, "M", c.M);
    read(j, "N", c.N);
    read(j, "delta", c.delta);
    read(j, "r_rsu", c.r_rsu);
    read(j, "d_rsu", c.d_rsu);
    read(j, "d_lane", c.d_lane);
    read(j, "v", c.v);
    read(j, "t_arrival", c.t_arrival);
    read(j, "lane_of", c.lane_of);
    if (j.contains("q0")) c.q0 = vec3_from(j, "q0");
    if (j.contains("qf")) c.qf = vec3_from(j, "qf");
    read(j, "H_U", c.H_U);
    read(j, "V_max", c.V_max);
    read(j, "h0_db", c.h0_db);
    read(j, "h1_db", c.h1_db);
    read(j, "d_M", c.d_M);
    read(j, "lambda", c.lambda);
    read(j, "sigma2_dbw", c.sigma2_dbw);
    read(j, "eps2_dbw", c.eps2_dbw);
    read(j, "zeta", c.zeta);
    if (j.contains("E_th_dbm")) {
      const auto& e = j.at("E_th_dbm");
      c.E_th_dbm = e.is_null() ? -std::numeric_limits<double>::infinity() : e.get<double>();
    }
    read(j, "P_max_dbm", c.P_max_dbm);
    read(j, "d_ref", c.d_ref);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config field has wrong type: ") + e.what());
  }
  validate(c);
  return c;
}

std::string config_to_json(const NetworkConfig& c) {
  json j;
  j["I"] = c.I;
  j["K"] = c.K;
  j["J"] = c.J;
  j["M"] = c.M;
  j["N"] = c.N;
  j["delta"] = c.delta;
  j["r_rsu"] = c.r_rsu;
  j["d_rsu"] = c.d_rsu;
  j["d_lane"] = c.d_lane;
  j["v"] = c.v;
  j["t_arrival"] = c.t_arrival;
  j["lane_of"] = c.lane_of;
  j["q0"] = {c.q0.x, c.q0.y, c.q0.z};
  j["qf"] = {c.qf.x, c.qf.y, c.qf.z};
  j["H_U"] = c.H_U;
  j["V_max"] = c.V_max;
  j["h0_db"] = c.h0_db;
  j["h1_db"] = c.h1_db;
  j["d_M"] = c.d_M;
  j["lambda"] = c.lambda;
  j["sigma2_dbw"] = c.sigma2_dbw;
  j["eps2_dbw"] = c.eps2_dbw;
  j["zeta"] = c.zeta;
  if (std::isinf(c.E_th_dbm))
    j["E_th_dbm"] = nullptr;
  else
    j["E_th_dbm"] = c.E_th_dbm;
  j["P_max_dbm"] = c.P_max_dbm;
  j["d_ref"] = c.d_ref;
  return j.dump(2);
}

NetworkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace airs

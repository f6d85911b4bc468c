// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace airs {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Static scenario description. Field names match the JSON keys one to one.
//
// Units: distances in m, speeds in m/s, times in s. Gains h0_db/h1_db are dB at
// the 1 m reference distance; noise powers are dB re 1 W; E_th_dbm and
// P_max_dbm are dBm. A threshold of -inf dBm (JSON null) disables the
// harvested-energy requirement. Lanes in lane_of are numbered from 1.
struct NetworkConfig {
  int I = 3;
  int K = 4;
  int J = 3;
  int M = 16;
  int N = 50;
  double delta = 1.0;
  double r_rsu = 250.0;
  double d_rsu = 500.0;
  double d_lane = 4.0;
  std::vector<double> v{25.0, 27.0, 30.0};
  std::vector<double> t_arrival{0.0, 5.0, 20.0, 20.0};
  std::vector<int> lane_of{1, 2, 3, 2};
  Vec3 q0{250.0, 10.0, 20.0};
  Vec3 qf{1250.0, 10.0, 20.0};
  double H_U = 20.0;
  double V_max = 40.0;
  double h0_db = 0.0;
  double h1_db = 20.0;
  double d_M = 0.05;
  double lambda = 0.1;
  double sigma2_dbw = -70.0;
  double eps2_dbw = -70.0;
  double zeta = 0.97;
  double E_th_dbm = -50.0;
  double P_max_dbm = 29.0;
  // Floor on the RSU-vehicle distance. The path-loss law is only meaningful
  // beyond the reference distance, and a lane-1 vehicle passes directly over
  // an RSU.
  double d_ref = 1.0;

  double h0() const { return db_to_linear(h0_db); }
  double h1() const { return db_to_linear(h1_db); }
  double sigma2() const { return db_to_linear(sigma2_dbw); }
  double eps2() const { return db_to_linear(eps2_dbw); }
  double P_max() const { return dbm_to_watts(P_max_dbm); }
  // Energy threshold in joules.
  double E_th() const { return std::isinf(E_th_dbm) && E_th_dbm < 0 ? 0.0 : dbm_to_watts(E_th_dbm); }
  double horizon() const { return N * delta; }
};

// Simulation parameters of the reference highway scenario.
NetworkConfig table1_config();

// Throws Error(InvalidArgument) naming the first violated invariant.
void validate(const NetworkConfig& cfg);

NetworkConfig config_from_json(std::string_view text);
std::string config_to_json(const NetworkConfig& cfg);
NetworkConfig load_config(const std::string& path);

}  // namespace airs

#pragma once

// Artifact writers.  Everything funnels through fmt() (%.15g) so that two runs
// with the same config produce byte-identical files.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semiwave/dispersion.hpp"
#include "semiwave/grid.hpp"
#include "semiwave/params.hpp"

namespace semiwave::io {

using json = nlohmann::ordered_json;

inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

inline std::string hash_tag(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
  return std::string(buf).substr(0, 8);
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_config_error("cannot open " + path.string() + " for writing");
  out << content;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline void write_profile_csv(const std::filesystem::path& path, const Grid& g, const Array& phi) {
  std::string s = "z,phi\n";
  for (int i = 0; i < g.n; ++i) s += fmt(g.z(i)) + "," + fmt(phi[i]) + "\n";
  write_text(path, s);
}

inline void write_series_csv(const std::filesystem::path& path, const std::vector<double>& t,
                             const std::vector<double>& v) {
  std::string s = "t,value\n";
  for (size_t i = 0; i < t.size(); ++i) s += fmt(t[i]) + "," + fmt(v[i]) + "\n";
  write_text(path, s);
}

inline void write_probes_csv(const std::filesystem::path& path, const std::vector<double>& t,
                             const std::vector<double>& wnorm, const std::vector<double>& snorm) {
  std::string s = "t,norm_lambda,sup_norm\n";
  for (size_t i = 0; i < t.size(); ++i)
    s += fmt(t[i]) + "," + fmt(wnorm[i]) + "," + fmt(snorm[i]) + "\n";
  write_text(path, s);
}

inline void write_snapshots_csv(const std::filesystem::path& path, const Grid& g,
                                const std::vector<double>& times,
                                const std::vector<Array>& fields) {
  std::string s = "t,z,v\n";
  for (size_t k = 0; k < times.size(); ++k)
    for (int i = 0; i < g.n; ++i)
      s += fmt(times[k]) + "," + fmt(g.z(i)) + "," + fmt(fields[k][i]) + "\n";
  write_text(path, s);
}

inline void write_region_csv(const std::filesystem::path& path,
                             const std::vector<dispersion::RegionRow>& rows) {
  std::string s = "h,c,lambda,beta,R,delta,stable,unique\n";
  for (const auto& r : rows) {
    s += fmt(r.h) + "," + fmt(r.c) + "," + fmt(r.lambda) + "," + fmt(r.beta) + "," + fmt(r.R) +
         "," + fmt(r.delta) + "," + (r.stable ? "1" : "0") + "," + (r.unique_tag ? "1" : "0") +
         "\n";
  }
  write_text(path, s);
}

}  // namespace semiwave::io

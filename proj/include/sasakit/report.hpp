#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sasakit/futaki_soliton.hpp"
#include "sasakit/reeb_optimizer.hpp"
#include "sasakit/transverse_potential.hpp"

namespace sasakit {

inline constexpr const char* kToolVersion = "sasakit 0.1.0";

/// %.17g formatting; all numeric report fields go through this so repeated
/// runs serialize byte-identically.
std::string fmt17(double x);

std::string json_escape(const std::string& s);

/// Write via a temp file in the same directory plus rename, so failures
/// leave no partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

struct GammaSection {
  VecQ gamma;
  Integer ell;
};

struct ReebSection {
  std::string label;  // "canonical" or "user"
  VecD xi;
  bool on_slice = false;
  bool interior = false;
};

struct MinimizeSection {
  MinimizeResult result;
};

struct VolumeSection {
  VecD xi;
  double value = 0;
  VecD grad;
  double euler_residual = 0;
};

struct FutakiSection {
  VecD xi;
  FutakiReport report;
};

struct SolitonSection {
  VecD xi;
  SolitonResult result;
};

struct PotentialSection {
  VecD xi;
  double radius = 0;
  int samples = 0;
  double asym_sup = 0;
  double ma_sup = 0;
  double asym_proxy = 0;
  double ma_proxy = 0;
  int skipped = 0;
  int total = 0;
  std::string csv_path;
};

struct StageTime {
  std::string name;
  double ms = 0;
};

/// Machine-readable run report.  JSON rendering is deterministic
/// (fixed field order, fmt17 numerics) and excludes wall-clock timings,
/// which appear in the text rendering only.
struct RunReport {
  std::string command;
  std::string name;
  int dim = 0;
  MatZ normals;

  std::optional<GammaSection> gamma;
  std::optional<MatZ> rays;
  std::optional<ReebSection> reeb;
  std::optional<MinimizeSection> minimize;
  std::optional<VolumeSection> volume;
  std::optional<FutakiSection> futaki;
  std::optional<SolitonSection> soliton;
  std::optional<PotentialSection> potential;

  std::vector<StageTime> timings;

  std::string to_json() const;
  std::string to_text() const;
};

std::string potential_csv(const PotentialCheckReport& rep);

}  // namespace sasakit

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mep/eulerian.hpp"

namespace mep {

struct DiagnosticsRecord {
  double t = 0.0;
  double H1 = 0.0;
  double H2 = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double sobolev_v = 0.0;  ///< |v|_{H^sigma}
  double sobolev_n = 0.0;  ///< |n|_{H^{sigma-1}}
  double sigma_n = 0.0;
  double sigma_v = 0.0;
  /// "none" or the terminal event kind.
  std::string event = "none";
};

/// On the 2-D torus H1 uses |v|^2 and |grad L^-2 n|^2, while H2 and momentum
/// sum over velocity components.
DiagnosticsRecord make_record(const State& s, double sigma, const std::optional<Event>& event = std::nullopt);

inline constexpr const char* kDiagnosticsHeader = "t,H1,H2,mass,momentum,sobolev_v,sobolev_n,sigma_n,sigma_v,event";

std::string to_csv_row(const DiagnosticsRecord& r);
DiagnosticsRecord parse_csv_row(const std::string& line);

class DiagnosticsWriter {
 public:
  /// Truncates, or appends without a header when `append` is set.
  explicit DiagnosticsWriter(const std::filesystem::path& path, bool append = false);
  void write(const DiagnosticsRecord& r);

 private:
  std::ofstream out_;
};

std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path);

/// 17 significant digits; non-finite values as nan / inf / -inf.
std::string format_double(double x);
double parse_double(const std::string& s);

}  // namespace mep

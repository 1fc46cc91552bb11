#include "mep/diagnostics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mep/errors.hpp"
#include "mep/gevrey.hpp"
#include "mep/hamiltonian.hpp"
#include "mep/spectral.hpp"

namespace mep {

namespace {

double h1_general(const State& s) {
  // Integrals of products of trigonometric polynomials, made exact by
  // evaluating on a grid four times finer.
  const int fine = 4 * s.grid().points_per_axis();
  const RealField n = resample(s.n, fine);
  const RealField v = resample(s.v, fine);
  const int m = s.grid().dimension();
  RealField kinetic(n.grid());
  for (int c = 0; c < m; ++c) {
    const auto vc = v.component(c);
    for (std::size_t i = 0; i < vc.size(); ++i) kinetic.samples()[i] += vc[i] * vc[i] * n.samples()[i];
  }
  const RealField phi = bessel_potential(s.n, -2.0);
  double quadratic = inner_product(phi, phi);
  const RealField g = gradient(phi);
  quadratic += inner_product(g, g);
  return 0.5 * (integral(kinetic) + quadratic);
}

}  // namespace

DiagnosticsRecord make_record(const State& s, double sigma, const std::optional<Event>& event) {
  DiagnosticsRecord r;
  r.t = s.t;
  if (s.grid().dimension() == 1) {
    r.H1 = eval_functional(FunctionalKind::H1, s);
    r.H2 = eval_functional(FunctionalKind::H2, s);
    r.momentum = eval_functional(FunctionalKind::momentum, s);
  } else {
    r.H1 = h1_general(s);
    RealField vsum = s.v.extract(0);
    for (int c = 1; c < s.v.components(); ++c) vsum += s.v.extract(c);
    r.H2 = inner_product(s.n, vsum);
    r.momentum = integral(vsum);
  }
  r.mass = integral(s.n);
  r.sobolev_v = sobolev_norm(s.v, sigma);
  r.sobolev_n = sobolev_norm(s.n, sigma - 1.0);
  const RadiusSample radius = radius_track(std::span<const State>(&s, 1)).front();
  r.sigma_n = radius.n.sigma_fit;
  r.sigma_v = radius.v.sigma_fit;
  if (event) r.event = to_string(event->kind);
  return r;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != s.size()) throw InvalidInput("not a number: '" + s + "'");
  return x;
}

std::string to_csv_row(const DiagnosticsRecord& r) {
  std::ostringstream os;
  for (double x : {r.t, r.H1, r.H2, r.mass, r.momentum, r.sobolev_v, r.sobolev_n, r.sigma_n, r.sigma_v}) {
    os << format_double(x) << ',';
  }
  os << r.event;
  return os.str();
}

DiagnosticsRecord parse_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (cells.size() != 10) throw InvalidInput("diagnostics row must have 10 columns");
  DiagnosticsRecord r;
  double* slots[] = {&r.t, &r.H1, &r.H2, &r.mass, &r.momentum, &r.sobolev_v, &r.sobolev_n, &r.sigma_n, &r.sigma_v};
  for (int i = 0; i < 9; ++i) *slots[i] = parse_double(cells[i]);
  r.event = cells[9];
  return r;
}

DiagnosticsWriter::DiagnosticsWriter(const std::filesystem::path& path, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc) {
  if (!out_) throw Error("cannot open '" + path.string() + "' for writing");
  if (!append) out_ << kDiagnosticsHeader << '\n';
}

void DiagnosticsWriter::write(const DiagnosticsRecord& r) { out_ << to_csv_row(r) << '\n' << std::flush; }

std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) throw InvalidInput("diagnostics header mismatch");
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_csv_row(line));
  }
  return out;
}

}  // namespace mep

#include "mep/snapshot.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "mep/diagnostics.hpp"
#include "mep/errors.hpp"

namespace mep {

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_field(std::ostream& os, const std::string& name, const RealField& f) {
  os << "field " << name << ' ' << f.components() << ' ' << f.samples().size() << '\n';
  for (double x : f.samples()) os << format_double(x) << '\n';
}

class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  std::string line() {
    std::string l;
    if (!std::getline(in_, l)) throw SnapshotError("truncated snapshot");
    return l;
  }

  std::vector<std::string> words() {
    std::istringstream ws(line());
    std::vector<std::string> out;
    std::string w;
    while (ws >> w) out.push_back(w);
    return out;
  }

  std::string expect(const std::string& key) {
    const auto w = words();
    if (w.size() != 2 || w[0] != key) throw SnapshotError("expected '" + key + "' line");
    return w[1];
  }

  RealField field(const std::string& name, const Grid& grid) {
    const auto w = words();
    if (w.size() != 4 || w[0] != "field" || w[1] != name) throw SnapshotError("expected field '" + name + "'");
    const int components = std::stoi(w[2]);
    const std::size_t count = std::stoul(w[3]);
    if (components < 1 || count != grid.size() * static_cast<std::size_t>(components)) {
      throw SnapshotError("field '" + name + "' has the wrong size");
    }
    std::vector<double> values(count);
    for (double& x : values) {
      try {
        x = parse_double(line());
      } catch (const InvalidInput& e) {
        throw SnapshotError("field '" + name + "': " + e.what());
      }
    }
    return RealField(grid, components, std::move(values));
  }

 private:
  std::istringstream in_;
};

}  // namespace

std::string serialize(const Snapshot& s) {
  std::ostringstream os;
  os << "mep-snapshot " << s.version << '\n'
     << "kind " << (s.flow ? "lagrangian" : "eulerian") << '\n'
     << "step " << s.step << '\n'
     << "t " << format_double(s.state.t) << '\n'
     << "dimension " << s.state.grid().dimension() << '\n'
     << "points " << s.state.grid().points_per_axis() << '\n';
  write_field(os, "n", s.state.n);
  write_field(os, "v", s.state.v);
  if (s.flow) {
    write_field(os, "p", s.flow->p);
    write_field(os, "zeta", s.flow->zeta);
    write_field(os, "eta", s.flow->eta);
  }
  const std::string body = os.str();
  return body + "checksum " + std::to_string(fnv1a(body)) + '\n';
}

Snapshot deserialize(const std::string& text) {
  const auto tail = text.rfind("checksum ");
  if (tail == std::string::npos) throw SnapshotError("missing checksum");
  const std::string body = text.substr(0, tail);
  std::string stored = text.substr(tail + 9);
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  if (stored != std::to_string(fnv1a(body))) throw SnapshotError("checksum mismatch");

  try {
    Reader r(body);
    const int version = std::stoi(r.expect("mep-snapshot"));
    if (version != kSnapshotVersion) {
      throw SnapshotError("unsupported snapshot version " + std::to_string(version));
    }
    const std::string kind = r.expect("kind");
    if (kind != "eulerian" && kind != "lagrangian") throw SnapshotError("unknown snapshot kind");
    const long step = std::stol(r.expect("step"));
    const double t = parse_double(r.expect("t"));
    const int dimension = std::stoi(r.expect("dimension"));
    const int points = std::stoi(r.expect("points"));
    const Grid grid(dimension, points);
    RealField n = r.field("n", grid);
    RealField v = r.field("v", grid);
    Snapshot s{version, step, State{std::move(n), std::move(v), t}, std::nullopt};
    validate(s.state);
    if (kind == "lagrangian") {
      RealField p = r.field("p", grid);
      RealField zeta = r.field("zeta", grid);
      RealField eta = r.field("eta", grid);
      s.flow = FlowState{std::move(p), std::move(zeta), std::move(eta), t};
    }
    return s;
  } catch (const SnapshotError&) {
    throw;
  } catch (const std::exception& e) {
    throw SnapshotError(std::string("malformed snapshot: ") + e.what());
  }
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw SnapshotError("cannot write '" + tmp.string() + "'");
    out << serialize(s);
    if (!out) throw SnapshotError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

Snapshot read_snapshot(const std::filesystem::path& path, const std::optional<Grid>& expected) {
  std::ifstream in(path);
  if (!in) throw SnapshotError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Snapshot s = deserialize(buf.str());
  if (expected && !(s.state.grid() == *expected)) throw SnapshotError("grid mismatch");
  return s;
}

std::string snapshot_name(long step) {
  std::ostringstream os;
  os << "snapshot_" << std::setw(6) << std::setfill('0') << step << ".txt";
  return os.str();
}

}  // namespace mep

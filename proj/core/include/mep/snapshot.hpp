#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mep/eulerian.hpp"
#include "mep/lagrangian.hpp"

namespace mep {

inline constexpr int kSnapshotVersion = 1;

struct Snapshot {
  int version = kSnapshotVersion;
  long step = 0;
  /// n, v and t; for Lagrangian runs the Eulerian view of `flow`.
  State state;
  std::optional<FlowState> flow;
};

/// Text format: header lines, one field block per array (17 significant
/// digits) and a trailing FNV-1a checksum over everything before it.
std::string serialize(const Snapshot& s);
/// Throws SnapshotError on version mismatch, truncation, bad numbers or a
/// checksum mismatch.
Snapshot deserialize(const std::string& text);

void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
/// When `expected` is given, a snapshot on a different grid is rejected.
Snapshot read_snapshot(const std::filesystem::path& path, const std::optional<Grid>& expected = std::nullopt);

/// snapshot_000123.txt
std::string snapshot_name(long step);

}  // namespace mep

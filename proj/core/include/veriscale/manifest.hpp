#pragma once

#include <map>
#include <string>

namespace veriscale {

// Reproducibility envelope written beside every run's artifacts: the
// subcommand, every resolved parameter, input file digests, tool version,
// and a timestamp. The digest (and therefore the run directory name) covers
// everything except the timestamp, so re-running identical parameters maps
// to the same directory with byte-identical artifacts.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> input_digests;
  std::string tool_version;
  std::string timestamp;
};

// Canonical JSON rendering (sorted keys); the digested form excludes the
// timestamp.
std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

// 16-hex-digit FNV-1a 64 over the canonical timestamp-free rendering.
std::string manifest_digest(const RunManifest& manifest);

std::string file_digest_hex(const std::string& path);

// Write via a temporary file and rename, so readers never observe partial
// content and failed runs leave nothing behind.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// ISO 8601 UTC, seconds resolution.
std::string utc_timestamp_now();

}  // namespace veriscale

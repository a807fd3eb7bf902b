#include "veriscale/manifest.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "veriscale/dataset.hpp"
#include "veriscale/rng.hpp"

namespace veriscale {

namespace {

using nlohmann::json;

std::string hex16(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

json manifest_json(const RunManifest& manifest, bool with_timestamp) {
  json obj;
  obj["command"] = manifest.command;
  obj["parameters"] = manifest.parameters;
  obj["input_digests"] = manifest.input_digests;
  obj["tool_version"] = manifest.tool_version;
  if (with_timestamp) obj["timestamp"] = manifest.timestamp;
  return obj;
}

}  // namespace

std::string manifest_to_json(const RunManifest& manifest) {
  return manifest_json(manifest, true).dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  RunManifest manifest;
  try {
    manifest.command = obj.at("command").get<std::string>();
    manifest.parameters = obj.at("parameters").get<std::map<std::string, std::string>>();
    manifest.input_digests = obj.at("input_digests").get<std::map<std::string, std::string>>();
    manifest.tool_version = obj.at("tool_version").get<std::string>();
    manifest.timestamp = obj.value("timestamp", std::string());
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest schema error: ") + e.what());
  }
  return manifest;
}

std::string manifest_digest(const RunManifest& manifest) {
  // Timestamp excluded: the digest (and the run directory name) identifies
  // the computation, not the moment it ran.
  return hex16(fnv1a64(manifest_json(manifest, false).dump()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string file_digest_hex(const std::string& path) { return hex16(fnv1a64(read_file(path))); }

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string utc_timestamp_now() {
  std::time_t now = std::time(nullptr);
  // Reproducible-builds convention: a pinned epoch overrides the clock so
  // whole runs (manifest included) can be compared byte for byte.
  if (const char* pinned = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long value = std::strtoll(pinned, &end, 10);
    if (end != pinned && *end == '\0') now = static_cast<std::time_t>(value);
  }
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace veriscale

#include "gdiff/manifest.hpp"

#include <ctime>

#include "gdiff/csv.hpp"
#include "gdiff/errors.hpp"

namespace gdiff {

namespace {
std::string utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}
}  // namespace

RunManifest make_manifest(const std::string& command,
                          const std::vector<std::string>& args,
                          const std::string& output) {
    RunManifest m;
    m.command = command;
    m.args = args;
    m.timestamp = utc_now();
    m.output = output;
    return m;
}

std::string manifest_text(const RunManifest& manifest) {
    std::string out;
    out += "artifact_version=" + manifest.artifact_version + '\n';
    out += "command=" + manifest.command + '\n';
    out += "timestamp=" + manifest.timestamp + '\n';
    out += "output=" + manifest.output + '\n';
    out += "argc=" + std::to_string(manifest.args.size()) + '\n';
    for (std::size_t i = 0; i < manifest.args.size(); ++i) {
        out += "arg" + std::to_string(i) + "=" + manifest.args[i] + '\n';
    }
    return out;
}

void write_manifest(const RunManifest& manifest) {
    write_file(manifest.output + ".manifest", manifest_text(manifest));
}

RunManifest load_manifest(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    RunManifest m;
    m.artifact_version.clear();
    std::size_t argc = 0;
    std::vector<std::pair<std::size_t, std::string>> indexed_args;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw IngestError(path + ":" + std::to_string(i + 1) +
                              ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "artifact_version") {
            m.artifact_version = value;
        } else if (key == "command") {
            m.command = value;
        } else if (key == "timestamp") {
            m.timestamp = value;
        } else if (key == "output") {
            m.output = value;
        } else if (key == "argc") {
            argc = static_cast<std::size_t>(parse_long(value, path, i + 1));
        } else if (key.rfind("arg", 0) == 0) {
            std::size_t idx = static_cast<std::size_t>(
                parse_long(key.substr(3), path, i + 1));
            indexed_args.emplace_back(idx, value);
        }
        // Unknown keys are ignored so manifests stay forward-compatible.
    }
    if (m.command.empty()) throw IngestError(path + ": missing command key");
    m.args.assign(argc, "");
    for (const auto& [idx, value] : indexed_args) {
        if (idx >= argc) {
            throw IngestError(path + ": arg index out of range");
        }
        m.args[idx] = value;
    }
    return m;
}

}  // namespace gdiff

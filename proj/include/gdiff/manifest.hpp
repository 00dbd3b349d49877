#pragma once

#include <string>
#include <vector>

namespace gdiff {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Flat key=value record written next to every output file. The stored argv
// makes any run replayable: re-dispatching the recorded arguments reproduces
// byte-identical outputs.
struct RunManifest {
    std::string artifact_version = kArtifactVersion;
    std::string command;
    std::vector<std::string> args;  // full CLI argv after the program name
    std::string timestamp;          // informational; not used by replay
    std::string output;             // primary output path
};

RunManifest make_manifest(const std::string& command,
                          const std::vector<std::string>& args,
                          const std::string& output);

std::string manifest_text(const RunManifest& manifest);

// Writes <output_path>.manifest next to the output.
void write_manifest(const RunManifest& manifest);

RunManifest load_manifest(const std::string& path);

}  // namespace gdiff

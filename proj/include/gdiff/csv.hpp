#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gdiff {

// Round-trip formatting (17 significant digits, %g trimming); used for
// spectrum and sample files that feed back into the pipeline.
std::string format_full(double v);

// Display formatting (12 significant digits); used for derived outputs.
std::string format_short(double v);

// Whole-string strtod; raises IngestError naming file and line on failure.
double parse_double(const std::string& text, const std::string& path,
                    std::size_t line_number);

long parse_long(const std::string& text, const std::string& path,
                std::size_t line_number);

// Reads a text file into lines ('\n' separated, trailing '\r' stripped,
// final empty line dropped). Raises IngestError if the file cannot be read.
std::vector<std::string> read_lines(const std::string& path);

std::vector<std::string> split(const std::string& line, char sep);

// Writes content atomically enough for our purposes (single write call);
// raises DomainError if the file cannot be opened.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace gdiff

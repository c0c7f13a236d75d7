#pragma once

#include <filesystem>
#include <string>

#include "stacksdict/diagnostics.hpp"

namespace stacksdict {

// Reads a whole file as bytes. Throws PipelineError(MissingFile) if absent.
std::string read_file(const std::filesystem::path& path);

// Writes bytes, creating parent directories. LF endings are the caller's job.
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace stacksdict

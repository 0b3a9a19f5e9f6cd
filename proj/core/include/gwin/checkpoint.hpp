#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <string>

namespace gwin {

/// FNV-1a over the file bytes, hex-encoded. Cheap content identity for
/// tying subsets and eval reports to the exact parameters that made them.
std::string file_hash(const std::filesystem::path& path);

/// Writes module parameters+buffers to `path` and a JSON sidecar
/// `path.json` holding the architecture name and the content hash.
/// Returns the hash.
std::string save_checkpoint(const torch::nn::Module& module,
                            const std::filesystem::path& path,
                            const std::string& arch_name);

/// Loads parameters saved by save_checkpoint into a freshly constructed
/// module of the same architecture. Returns the stored hash.
std::string load_checkpoint(torch::nn::Module& module,
                            const std::filesystem::path& path);

/// Architecture name recorded in the sidecar (for CLI dispatch).
std::string checkpoint_arch(const std::filesystem::path& path);

}  // namespace gwin

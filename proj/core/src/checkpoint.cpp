#include "gwin/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gwin/errors.hpp"

namespace gwin {

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

std::string save_checkpoint(const torch::nn::Module& module,
                            const std::filesystem::path& path,
                            const std::string& arch_name) {
  torch::serialize::OutputArchive archive;
  for (const auto& p : module.named_parameters())
    archive.write(p.key(), p.value());
  for (const auto& b : module.named_buffers())
    archive.write(b.key(), b.value());
  archive.save_to(path.string());

  const std::string hash = file_hash(path);
  nlohmann::json j;
  j["arch"] = arch_name;
  j["hash"] = hash;
  std::ofstream side(path.string() + ".json");
  side << j.dump(2) << "\n";
  return hash;
}

std::string load_checkpoint(torch::nn::Module& module,
                            const std::filesystem::path& path) {
  torch::serialize::InputArchive archive;
  archive.load_from(path.string());
  torch::NoGradGuard no_grad;
  for (auto& p : module.named_parameters()) {
    torch::Tensor t;
    archive.read(p.key(), t);
    p.value().copy_(t);
  }
  for (auto& b : module.named_buffers()) {
    torch::Tensor t;
    archive.read(b.key(), t);
    b.value().copy_(t);
  }
  return file_hash(path);
}

std::string checkpoint_arch(const std::filesystem::path& path) {
  std::ifstream side(path.string() + ".json");
  if (!side) throw Error("missing checkpoint sidecar for " + path.string());
  nlohmann::json j;
  side >> j;
  return j.at("arch").get<std::string>();
}

}  // namespace gwin

#ifndef KGCORPUS_DIGEST_HPP
#define KGCORPUS_DIGEST_HPP

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace kgcorpus {

// Incremental SHA-256 producing lowercase hex.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;

  void update(std::string_view data);
  std::string hex_digest();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace kgcorpus

#endif  // KGCORPUS_DIGEST_HPP

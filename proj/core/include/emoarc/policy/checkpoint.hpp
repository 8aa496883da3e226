#pragma once

#include <filesystem>
#include <iosfwd>

#include "emoarc/policy/model.hpp"
#include "emoarc/policy/vocab.hpp"

namespace emoarc::policy {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  Vocab vocab;
  PolicyModel model;
};

// Text header (magic + format version, shape, vocab listing, block table)
// followed by the parameters as little-endian float64 in layout order.
void save_checkpoint(const Vocab& vocab, const PolicyModel& model, std::ostream& out);
void save_checkpoint(const Vocab& vocab, const PolicyModel& model, const std::filesystem::path& path);

// Throws ParseError on a malformed or truncated file, or an unknown version.
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace emoarc::policy

#include "emoarc/policy/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "emoarc/errors.hpp"

namespace emoarc::policy {
namespace {

constexpr const char* kMagic = "EMOARC-POLICY";

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char buf[8];
  for (int i = 0; i < 8; ++i) {
    buf[i] = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(buf, 8);
}

double get_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (in.gcount() != 8) throw ParseError(0, "checkpoint truncated in parameter block");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | buf[i];
  return std::bit_cast<double>(bits);
}

struct HeaderReader {
  std::istream& in;
  std::size_t line_no = 0;

  std::string next() {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(line_no, "checkpoint header truncated");
    ++line_no;
    return line;
  }

  template <class... T>
  void scan(const std::string& keyword, T&... values) {
    std::istringstream ss(next());
    std::string kw;
    ss >> kw;
    if (kw != keyword) throw ParseError(line_no, "expected '" + keyword + "', found '" + kw + "'");
    (ss >> ... >> values);
    if (!ss) throw ParseError(line_no, "malformed '" + keyword + "' line");
  }
};

}  // namespace

void save_checkpoint(const Vocab& vocab, const PolicyModel& model, std::ostream& out) {
  const auto& s = model.shape();
  out << kMagic << ' ' << kCheckpointFormatVersion << '\n';
  out << "shape " << s.vocab << ' ' << s.dim << ' ' << s.hidden << ' ' << s.window << ' ' << s.positions << '\n';
  out << "vocab " << vocab.size() << '\n';
  for (const auto& t : vocab.tokens()) out << t << '\n';
  out << "blocks " << model.blocks().size() << '\n';
  for (const auto& b : model.blocks()) out << b.name << ' ' << b.rows << ' ' << b.cols << ' ' << b.offset << '\n';
  out << "params " << model.num_params() << '\n';
  for (double p : model.params()) put_le(out, p);
  if (!out) throw IoFailure("failed writing checkpoint");
}

void save_checkpoint(const Vocab& vocab, const PolicyModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  save_checkpoint(vocab, model, out);
}

Checkpoint load_checkpoint(std::istream& in) {
  HeaderReader r{in};
  std::string magic;
  int version = 0;
  {
    std::istringstream ss(r.next());
    ss >> magic >> version;
    if (magic != kMagic) throw ParseError(r.line_no, "not an emoarc policy checkpoint");
    if (version != kCheckpointFormatVersion) {
      throw ParseError(r.line_no, "unsupported checkpoint format version " + std::to_string(version));
    }
  }
  PolicyShape shape;
  r.scan("shape", shape.vocab, shape.dim, shape.hidden, shape.window, shape.positions);
  std::size_t n_tokens = 0;
  r.scan("vocab", n_tokens);
  if (n_tokens != shape.vocab) throw ParseError(r.line_no, "vocab listing does not match the shape table");
  std::vector<std::string> tokens;
  tokens.reserve(n_tokens);
  for (std::size_t i = 0; i < n_tokens; ++i) tokens.push_back(r.next());
  Vocab vocab = Vocab::from_tokens(tokens);

  std::size_t n_blocks = 0;
  r.scan("blocks", n_blocks);
  const auto expected = param_layout(shape);
  if (n_blocks != expected.size()) throw ParseError(r.line_no, "unexpected block count");
  for (const auto& b : expected) {
    std::istringstream ss(r.next());
    std::string name;
    std::size_t rows = 0, cols = 0, offset = 0;
    ss >> name >> rows >> cols >> offset;
    if (!ss || name != b.name || rows != b.rows || cols != b.cols || offset != b.offset) {
      throw ParseError(r.line_no, "block table does not match the declared shape");
    }
  }
  std::size_t n_params = 0;
  r.scan("params", n_params);
  const std::size_t want = expected.back().offset + expected.back().size();
  if (n_params != want) throw ParseError(r.line_no, "parameter count does not match the shape");
  std::vector<double> params(n_params);
  for (auto& p : params) {
    p = get_le(in);
    if (!std::isfinite(p)) throw ParseError(r.line_no, "non-finite parameter");
  }
  return {std::move(vocab), PolicyModel(shape, std::move(params))};
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return load_checkpoint(in);
}

}  // namespace emoarc::policy

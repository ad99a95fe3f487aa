#include "wartem/serialize.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace wartem {

namespace {

constexpr char kMagic[7] = {'W', 'A', 'R', 'T', 'E', 'M', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  void raw(char* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw std::runtime_error(path_ + ": truncated checkpoint");
    }
  }

  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

void append_params(std::string& out, const Network& net) {
  for (const double p : net.params()) put_f64(out, p);
}

void read_params(Reader& in, Network& net) {
  for (double& p : net.params()) p = in.f64();
}

}  // namespace

void save_twin(const TwinAE& twin, const std::string& path) {
  const AEConfig& config = twin.config();
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(config.input_length));
  put_u32(out, static_cast<std::uint32_t>(config.resolved_code_length()));
  put_u32(out, static_cast<std::uint32_t>(config.conv_blocks.size()));
  for (const auto& block : config.conv_blocks) {
    put_u32(out, static_cast<std::uint32_t>(block.filters));
    put_u32(out, static_cast<std::uint32_t>(block.kernel));
  }
  put_u32(out, static_cast<std::uint32_t>(config.pool_size));
  put_u32(out, config.activation == Activation::Relu ? 0u : 1u);
  put_f64(out, config.loss_weight_lambda);

  append_params(out, twin.encoder(Side::Left));
  append_params(out, twin.decoder(Side::Left));
  append_params(out, twin.encoder(Side::Right));
  append_params(out, twin.decoder(Side::Right));

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error("write failed for " + path);
}

TwinAE load_twin(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

  Reader in(std::move(bytes), path);
  char magic[sizeof(kMagic)];
  in.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + ": not a WARTEM1 checkpoint");
  }

  AEConfig config;
  config.input_length = static_cast<int>(in.u32());
  config.code_length = static_cast<int>(in.u32());
  const std::uint32_t block_count = in.u32();
  config.conv_blocks.clear();
  for (std::uint32_t i = 0; i < block_count; ++i) {
    ConvBlock block;
    block.filters = static_cast<int>(in.u32());
    block.kernel = static_cast<int>(in.u32());
    config.conv_blocks.push_back(block);
  }
  config.pool_size = static_cast<int>(in.u32());
  const std::uint32_t activation = in.u32();
  if (activation > 1) throw std::runtime_error(path + ": unknown activation code");
  config.activation = activation == 0 ? Activation::Relu : Activation::Identity;
  config.loss_weight_lambda = in.f64();

  TwinAE twin(config, 0);
  read_params(in, twin.encoder(Side::Left));
  read_params(in, twin.decoder(Side::Left));
  read_params(in, twin.encoder(Side::Right));
  read_params(in, twin.decoder(Side::Right));
  if (in.remaining() != 0) {
    throw std::runtime_error(path + ": trailing bytes after parameters");
  }
  return twin;
}

}  // namespace wartem

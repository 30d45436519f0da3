#include <limits>

#include "admire/error.hpp"
#include "admire/grid.hpp"

namespace admire::grid {

std::string_view msg_type_name(MsgType t) noexcept {
  switch (t) {
    case MsgType::discover: return "DISCOVER";
    case MsgType::discover_hit: return "DISCOVER_HIT";
    case MsgType::task_submit: return "TASK_SUBMIT";
    case MsgType::task_result: return "TASK_RESULT";
    case MsgType::data_transfer: return "DATA_TRANSFER";
  }
  return "?";
}

namespace {

constexpr std::uint8_t kMagic[4] = {'A', 'D', 'M', 'R'};

void put_be(Bytes& out, std::uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_string16(Bytes& out, const std::string& s, const char* field) {
  if (s.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(Errc::invalid_argument, std::string(field) + " longer than 65535 bytes");
  }
  put_be(out, s.size(), 2);
  out.insert(out.end(), s.begin(), s.end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t offset() const { return pos_; }

  std::uint64_t be(int width, const char* field) {
    need(static_cast<std::size_t>(width), field);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }

  std::span<const std::uint8_t> bytes(std::size_t n, const char* field) {
    need(n, field);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n, const char* field) const {
    if (data_.size() - pos_ < n) {
      throw Error(Errc::malformed_frame, "offset " + std::to_string(pos_) + ": truncated " + field + " (need " +
                                             std::to_string(n) + " bytes, have " +
                                             std::to_string(data_.size() - pos_) + ")");
    }
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes encode_message(const Message& m) {
  if (m.payload.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(Errc::invalid_argument, "payload longer than 2^32-1 bytes");
  }
  Bytes out(std::begin(kMagic), std::end(kMagic));
  out.reserve(4 + 1 + 1 + 8 + 2 + 2 + m.src.size() + 2 + m.dst.size() + 4 + m.payload.size());
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(m.type));
  put_be(out, m.correlation_id, 8);
  put_be(out, m.ttl, 2);
  put_string16(out, m.src, "src");
  put_string16(out, m.dst, "dst");
  put_be(out, m.payload.size(), 4);
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  return out;
}

Message decode_message(std::span<const std::uint8_t> frame) {
  for (std::size_t i = 0; i < 4 && i < frame.size(); ++i) {
    if (frame[i] != kMagic[i]) throw Error(Errc::bad_magic, "offset " + std::to_string(i));
  }
  Reader r(frame);
  r.bytes(4, "magic");
  const auto version = r.be(1, "version");
  if (version != kWireVersion) throw Error(Errc::unsupported_version, "version " + std::to_string(version));
  const auto type_offset = r.offset();
  const auto type = r.be(1, "msg_type");
  if (type < 1 || type > 5) {
    throw Error(Errc::malformed_frame, "offset " + std::to_string(type_offset) + ": unknown msg_type " +
                                           std::to_string(type));
  }
  Message m;
  m.type = static_cast<MsgType>(type);
  m.correlation_id = r.be(8, "correlation_id");
  m.ttl = static_cast<std::uint16_t>(r.be(2, "ttl"));
  auto src = r.bytes(r.be(2, "src length"), "src");
  m.src.assign(src.begin(), src.end());
  auto dst = r.bytes(r.be(2, "dst length"), "dst");
  m.dst.assign(dst.begin(), dst.end());
  auto payload = r.bytes(r.be(4, "payload length"), "payload");
  m.payload.assign(payload.begin(), payload.end());
  if (!r.at_end()) {
    throw Error(Errc::malformed_frame, "offset " + std::to_string(r.offset()) + ": trailing bytes after payload");
  }
  return m;
}

}  // namespace admire::grid

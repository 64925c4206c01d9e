#include "dtwin/io/binary.hpp"

#include "dtwin/error.hpp"

namespace dtwin::io {

std::uint64_t ByteReader::get(int n) {
  if (pos_ + static_cast<std::size_t>(n) > data_.size())
    fail(ErrorKind::io, "truncated binary data");
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
         << (8 * i);
  pos_ += static_cast<std::size_t>(n);
  return v;
}

std::string ByteReader::raw(std::size_t n) {
  if (n > data_.size() - pos_) fail(ErrorKind::io, "truncated binary data");
  std::string out(data_.substr(pos_, n));
  pos_ += n;
  return out;
}

std::string ByteReader::str() { return raw(u64()); }

}  // namespace dtwin::io

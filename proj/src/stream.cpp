#include "sdps/stream.hpp"

#include <cstring>
#include <filesystem>

#include "sdps/linalg.hpp"

namespace sdps {

namespace {

void get_bytes(std::ifstream& in, void* p, std::size_t bytes,
               const std::string& what) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
  if (in.gcount() != static_cast<std::streamsize>(bytes))
    throw io_error("truncated file while reading " + what);
}

std::uint32_t get_u32(std::ifstream& in, const std::string& what) {
  std::uint32_t v;
  get_bytes(in, &v, 4, what);
  return v;
}

std::uint64_t get_u64(std::ifstream& in, const std::string& what) {
  std::uint64_t v;
  get_bytes(in, &v, 8, what);
  return v;
}

// Reads an n x n row-major block into a column-major matrix bit-exactly.
void get_matrix_row_major(std::ifstream& in, Matrix& m,
                          const std::string& what) {
  get_bytes(in, m.data(), static_cast<std::size_t>(m.size()) * sizeof(double),
            what);
  m.transposeInPlace();
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw invalid_input("non-finite value in " + what);
}

}  // namespace

ConstraintStream::ConstraintStream(std::string path, SdpHeader header,
                                   std::uint64_t constraint_offset,
                                   SpaceLedger* ledger)
    : path_(std::move(path)),
      header_(header),
      constraint_offset_(constraint_offset),
      file_(path_, std::ios::binary),
      buffer_(header.n, header.n) {
  if (!file_) throw io_error("cannot open " + path_);
  file_.seekg(static_cast<std::streamoff>(constraint_offset_));
  if (!file_) throw io_error("seek failed in " + path_);
  if (ledger != nullptr)
    buffer_words_ = ledger->track("stream.buffer", buffer_.size(),
                                  Category::streaming_core,
                                  SizeClass::n_quadratic);
}

std::optional<ConstraintView> ConstraintStream::next() {
  if (cursor_ > header_.m) return std::nullopt;
  try {
    get_matrix_row_major(file_, buffer_,
                         "constraint block (A_" + std::to_string(cursor_) + ")");
  } catch (const SdpsError&) {
    throw io_error("truncated constraint block at A_" + std::to_string(cursor_));
  }
  bytes_read_ += static_cast<std::uint64_t>(buffer_.size()) * 8;
  if (!buffer_.allFinite())
    throw invalid_input("non-finite value in A_" + std::to_string(cursor_));
  if (!is_symmetric(buffer_))
    throw invalid_input("constraint A_" + std::to_string(cursor_) +
                        " is asymmetric");
  const Index delivered = cursor_;
  ++cursor_;
  return ConstraintView{delivered, buffer_};
}

void ConstraintStream::rewind() {
  file_.clear();
  file_.seekg(static_cast<std::streamoff>(constraint_offset_));
  if (!file_) throw io_error("seek failed in " + path_);
  cursor_ = 1;
  ++pass_count_;
}

OpenedInstance open_stream(const std::string& path, SpaceLedger* ledger) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);

  char magic[4];
  get_bytes(in, magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw invalid_input("bad magic bytes (not an SDPS instance file)");
  const std::uint32_t version = get_u32(in, "version");
  if (version != kFormatVersion)
    throw invalid_input("unsupported format version " + std::to_string(version));

  SdpHeader header;
  const std::uint64_t n64 = get_u64(in, "n");
  const std::uint64_t m64 = get_u64(in, "m");
  std::uint8_t has_y0;
  get_bytes(in, &has_y0, 1, "flags");
  if (n64 == 0 || m64 == 0) throw invalid_input("header requires n, m >= 1");
  if (has_y0 > 1) throw invalid_input("invalid has_initial_dual flag");
  header.n = static_cast<Index>(n64);
  header.m = static_cast<Index>(m64);
  header.has_initial_dual = has_y0 == 1;

  const std::uint64_t expected = expected_file_bytes(header);
  const std::uint64_t actual = std::filesystem::file_size(path);
  if (actual < expected) {
    const std::uint64_t constraint_offset =
        expected - 8ull * static_cast<std::uint64_t>(header.m) *
                       static_cast<std::uint64_t>(header.n) *
                       static_cast<std::uint64_t>(header.n);
    if (actual >= constraint_offset)
      throw io_error("truncated constraint block");
    throw io_error("truncated file");
  }
  if (actual > expected) throw invalid_input("trailing bytes after constraints");

  SdpInstance instance;
  instance.header = header;
  instance.C.resize(header.n, header.n);
  get_matrix_row_major(in, instance.C, "objective matrix");
  require_finite(instance.C, "objective matrix");
  if (!is_symmetric(instance.C))
    throw invalid_input("objective matrix is asymmetric");

  instance.b.resize(header.m);
  get_bytes(in, instance.b.data(),
            static_cast<std::size_t>(header.m) * sizeof(double), "b");
  if (!instance.b.allFinite()) throw invalid_input("non-finite value in b");

  if (header.has_initial_dual) {
    Vector y0(header.m);
    get_bytes(in, y0.data(), static_cast<std::size_t>(header.m) * sizeof(double),
              "y0");
    if (!y0.allFinite()) throw invalid_input("non-finite value in y0");
    instance.y0 = std::move(y0);
  }

  const std::uint64_t constraint_offset =
      kHeaderBytes +
      8ull * (static_cast<std::uint64_t>(header.n) * header.n + header.m +
              (header.has_initial_dual ? header.m : 0));
  return OpenedInstance{std::move(instance),
                        ConstraintStream(path, header, constraint_offset,
                                         ledger)};
}

}  // namespace sdps

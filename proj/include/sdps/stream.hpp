#pragma once

#include <fstream>
#include <optional>
#include <string>

#include "sdps/instance.hpp"
#include "sdps/space_ledger.hpp"

namespace sdps {

struct ConstraintView {
  Index index;  // 1-based position in the stream
  const Matrix& matrix;
};

// Replayable sequential source of A_1..A_m with pass accounting. A pass is
// one full scan of the constraint block; reading the header, C, b, y0 at
// open time does not count. Matrices are delivered in order into a single
// reused buffer, so callers that need to retain one must copy it. Not
// shareable across concurrent readers; open several streams on the same file
// instead.
class ConstraintStream {
 public:
  ConstraintStream(std::string path, SdpHeader header,
                   std::uint64_t constraint_offset,
                   SpaceLedger* ledger = nullptr);

  ConstraintStream(ConstraintStream&&) = default;

  // Delivers the next constraint and advances; nullopt signals end-of-pass
  // (a normal condition, not a failure). Validates finiteness and symmetry
  // of every delivered matrix.
  std::optional<ConstraintView> next();

  // Repositions at A_1 and counts a new pass. Every scan is expected to be
  // preceded by a rewind; pass_count equals the number of scans started.
  void rewind();

  Index n() const { return header_.n; }
  Index m() const { return header_.m; }
  Index cursor() const { return cursor_; }
  Index pass_count() const { return pass_count_; }
  std::uint64_t bytes_read() const { return bytes_read_; }

 private:
  std::string path_;
  SdpHeader header_;
  std::uint64_t constraint_offset_;
  std::ifstream file_;
  Index cursor_ = 1;  // next constraint index, in [1, m+1]
  Index pass_count_ = 0;
  std::uint64_t bytes_read_ = 0;
  Matrix buffer_;
  Allocation buffer_words_;
};

struct OpenedInstance {
  SdpInstance instance;
  ConstraintStream stream;
};

// Validates magic/version/size, loads header, C, b, y0 into memory
// (O(n^2 + m) words), and returns a stream positioned at A_1 with
// pass_count = 0.
OpenedInstance open_stream(const std::string& path,
                           SpaceLedger* ledger = nullptr);

}  // namespace sdps
